#include "bilap/sweeps.hpp"

#include "bilap/errors.hpp"

#include <sstream>

namespace bilap {

std::vector<Rational> interior_s_grid(int n, int count)
{
    if (count < 1) throw DomainError("grid needs at least one point");
    const auto e = special_exponents(n);
    std::vector<Rational> out;
    for (int k = 1; k <= count; ++k) out.push_back(e.lower + (e.critical() - e.lower) * Rational(k, count + 1));
    return out;
}

namespace {

template <class Item, class Out, class F>
std::vector<Out> map_items(const std::vector<Item>& items, F&& f, bool parallel)
{
    const long m = static_cast<long>(items.size());
    std::vector<Out> out(m);
    if (parallel) {
#pragma omp parallel for schedule(dynamic)
        for (long i = 0; i < m; ++i) out[i] = f(items[i]);
    } else {
        for (long i = 0; i < m; ++i) out[i] = f(items[i]);
    }
    return out;
}

std::vector<SignChartRow> chart(int n_lo, int n_hi, int count, int sigma, bool parallel)
{
    if (n_lo < 5 || n_hi < n_lo) throw DomainError("need 5 <= n_lo <= n_hi");
    std::vector<Params> points;
    for (int n = n_lo; n <= n_hi; ++n)
        for (const auto& s : interior_s_grid(n, count)) points.emplace_back(n, s);
    return map_items<Params, SignChartRow>(
        points,
        [sigma](const Params& p) {
            return SignChartRow{p.n, p.s, sign_report(p, sigma), classify_regime(p).regime};
        },
        parallel);
}

std::vector<CoefficientRow> grid(const std::vector<Params>& points, int sigma, bool parallel)
{
    for (const auto& p : points) p.validate();
    return map_items<Params, CoefficientRow>(
        points,
        [sigma](const Params& p) {
            return CoefficientRow{p, autonomous_coeffs(p), oracle_coeffs(p, sigma), printed_J40(p)};
        },
        parallel);
}

std::vector<MonotonicityTrial> trials(const Params& params, int sigma, int count, std::uint64_t seed, double span,
                                      const IntegratorOptions& opts, bool parallel)
{
    const auto states = random_initial_states(params, count, seed);
    return map_items<std::vector<double>, MonotonicityTrial>(
        states, [&](const std::vector<double>& y0) { return monotonicity_trial(params, sigma, y0, span, opts); },
        parallel);
}

}  // namespace

std::vector<SignChartRow> sign_chart(int n_lo, int n_hi, int count, int sigma)
{
    return chart(n_lo, n_hi, count, sigma, true);
}

std::vector<SignChartRow> sign_chart_serial(int n_lo, int n_hi, int count, int sigma)
{
    return chart(n_lo, n_hi, count, sigma, false);
}

std::string sign_chart_csv(const std::vector<SignChartRow>& rows, const std::string& header_json)
{
    std::ostringstream os;
    os << "# " << header_json << "\n";
    os << "n,s,regime,sign_K0,sign_K1,sign_K2,sign_K3,sign_J0,claims_hold\n";
    for (const auto& r : rows)
        os << r.n << ',' << to_string(r.s) << ',' << to_string(r.regime) << ',' << r.report.K0 << ',' << r.report.K1
           << ',' << r.report.K2 << ',' << r.report.K3 << ',' << r.report.J0 << ','
           << (r.report.remark_claims_hold ? 1 : 0) << "\n";
    return os.str();
}

std::vector<CoefficientRow> coefficient_grid(const std::vector<Params>& points, int sigma)
{
    return grid(points, sigma, true);
}

std::vector<CoefficientRow> coefficient_grid_serial(const std::vector<Params>& points, int sigma)
{
    return grid(points, sigma, false);
}

std::string coefficient_grid_csv(const std::vector<CoefficientRow>& rows, const std::string& header_json)
{
    std::ostringstream os;
    os << "# " << header_json << "\n";
    os << "n,s,route,K0,K1,K2,K3,J0,J1,J40\n";
    for (const auto& r : rows) {
        auto line = [&](const char* route, const AutonomousCoefficients& c, const std::string& j40) {
            os << r.params.n << ',' << to_string(r.params.s) << ',' << route << ',' << to_string(c.K0) << ','
               << to_string(c.K1) << ',' << to_string(c.K2) << ',' << to_string(c.K3) << ',' << to_string(c.J0)
               << ',' << to_string(c.J1) << ',' << j40 << "\n";
        };
        line("printed", r.printed, to_string(r.J40_printed));
        line("oracle", r.oracle, to_string(r.oracle.J0));
    }
    return os.str();
}

std::vector<MonotonicityTrial> monotonicity_trials(const Params& params, int sigma, int count, std::uint64_t seed,
                                                   double span, const IntegratorOptions& opts)
{
    return trials(params, sigma, count, seed, span, opts, true);
}

std::vector<MonotonicityTrial> monotonicity_trials_serial(const Params& params, int sigma, int count,
                                                          std::uint64_t seed, double span,
                                                          const IntegratorOptions& opts)
{
    return trials(params, sigma, count, seed, span, opts, false);
}

}  // namespace bilap
