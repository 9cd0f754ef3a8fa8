#include "bilap/pohozaev.hpp"

#include "bilap/closed_forms.hpp"
#include "bilap/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace bilap {

namespace {

struct Norms {
    double vv = 0, v1v1 = 0, v2v2 = 0, v3v1 = 0, v2v1 = 0;
};

Norms norms(const double* y, std::size_t dim)
{
    Norms s;
    for (std::size_t i = 0; i + 3 < dim; i += 4) {
        s.vv += y[i] * y[i];
        s.v1v1 += y[i + 1] * y[i + 1];
        s.v2v2 += y[i + 2] * y[i + 2];
        s.v3v1 += y[i + 3] * y[i + 1];
        s.v2v1 += y[i + 2] * y[i + 1];
    }
    return s;
}

double centred(const std::function<double(double)>& f, double t, double h)
{
    return (f(t - 2 * h) - 8 * f(t - h) + 8 * f(t + h) - f(t + 2 * h)) / (12 * h);
}

Laurent constant(const Rational& c)
{
    Laurent l;
    l.set(0, c);
    return l;
}

Laurent series(std::initializer_list<std::pair<int, Rational>> terms)
{
    Laurent l;
    for (auto& [k, c] : terms) l.set(k, c);
    return l;
}

}  // namespace

double system_hamiltonian(const AutonomousSystem& sys, const double* y)
{
    const auto s = norms(y, 4 * static_cast<std::size_t>(sys.p));
    const auto& c = sys.c;
    double pot = s.vv > 0 ? sys.coupling * std::pow(std::sqrt(s.vv), sys.s + 1) / (sys.s + 1) : 0.0;
    return -(s.v3v1 + c.K3 * s.v2v1) + 0.5 * (s.v2v2 - c.K2 * s.v1v1 - c.K0 * s.vv) + pot;
}

double system_dH(const AutonomousSystem& sys, const double* y)
{
    const auto s = norms(y, 4 * static_cast<std::size_t>(sys.p));
    return sys.c.K1 * s.v1v1 - sys.c.K3 * s.v2v2;
}

double hamiltonian_radial(const Params& params, int sigma, const CylState& state)
{
    if (state.y.size() != static_cast<std::size_t>(4 * params.p)) throw DomainError("state size does not match p");
    return system_hamiltonian(autonomous_system(params, sigma), state.y.data());
}

PowerTerm equilibrium_hamiltonian_exact(const Params& params)
{
    params.validate();
    const Rational K0 = oracle_coeffs(params, 1).K0;
    if (K0 <= 0) throw DomainError("no nontrivial equilibrium for K0 <= 0");
    const Rational& s = params.s;
    // -K0/2 v*^2 = -1/2 K0^((s+1)/(s-1)) and v*^(s+1)/(s+1) = K0^((s+1)/(s-1))/(s+1)
    PowerTerm quadratic{Rational(-1, 2), K0, (s + 1) / (s - 1)};
    PowerTerm potential{1 / (s + 1), K0, (s + 1) / (s - 1)};
    return combine_like(quadratic, potential);
}

PowerTerm limiting_level_exact(const Params& params)
{
    params.validate();
    const Rational K0 = oracle_coeffs(params, 1).K0;
    if (K0 <= 0) throw DomainError("limiting level needs K0 > 0");
    const Rational& s = params.s;
    return {(s - 1) / (2 * (s + 1)), K0, (s + 1) / (s - 1)};
}

PohozaevValues pohozaev_values(int n, double H)
{
    const double w = sphere_area(n);
    return {H, w * H, w * w * H};
}

std::vector<EnergySample> pohozaev_series(const AutonomousSystem& sys, const Trajectory& traj, double h)
{
    if (traj.size() < 5) throw DomainError("energy series needs at least 5 trajectory samples");
    if (traj.dim != 4 * static_cast<std::size_t>(sys.p)) throw DomainError("trajectory dimension does not match p");
    auto H = [&](double t) {
        auto y = traj.eval(t);
        return system_hamiltonian(sys, y.data());
    };
    std::vector<EnergySample> out;
    for (std::size_t k = 0; k < traj.size(); ++k) {
        const double t = traj.t[k];
        // the stencil never spans more than the local steps
        double hk = h;
        if (k > 0) hk = std::min(hk, 0.5 * traj.step[k]);
        if (k + 1 < traj.size()) hk = std::min(hk, 0.5 * traj.step[k + 1]);
        if (t - 2 * hk < traj.t_front() || t + 2 * hk > traj.t_back()) continue;
        EnergySample e;
        e.t = t;
        e.H = system_hamiltonian(sys, traj.y[k].data());
        e.dH_formula = system_dH(sys, traj.y[k].data());
        e.dH_numeric = centred(H, t, hk);
        out.push_back(e);
    }
    return out;
}

std::vector<EnergySample> pohozaev_series(const Params& params, int sigma, const Trajectory& traj)
{
    return pohozaev_series(autonomous_system(params, sigma), traj);
}

std::string energy_csv(const std::vector<EnergySample>& series, const std::string& header_json)
{
    std::ostringstream os;
    os << "# " << header_json << "\n";
    os << "t,H,dH_formula,dH_numeric\n";
    for (const auto& e : series)
        os << format_double(e.t) << "," << format_double(e.H) << "," << format_double(e.dH_formula) << ","
           << format_double(e.dH_numeric) << "\n";
    return os.str();
}

double aviles_level_printed(int n)
{
    if (n < 5) throw DomainError("n must be at least 5");
    const double a = (n - 2.0) * (n * n - 16.0);
    const double first = std::pow(2.0, (n - 8.0) / (n - 4.0)) * (n - 4) * std::pow(a, 2.0 * (n - 2) / (n - 4));
    const double second = std::pow(n - 2.0, 5) * std::pow(n * n - 16.0, 4);
    return (first + second) / (16.0 * (n - 2));
}

double aviles_level_derived(int n, HatVariant variant)
{
    const double K = hat_K0(n, variant);
    const double lam = std::pow(K, (n - 4) / 4.0);
    const double q = 2.0 * (n - 2) / (n - 4);  // 2_** + 1
    return std::pow(lam, q) / q + K * lam * lam;
}

double aviles_hamiltonian_limit(int n, HatVariant variant)
{
    // t K~0 tends to the formula limit whatever constant the state sits at
    const double K = hat_K0(n, HatVariant::FormulaLimit);
    const double lam = std::pow(hat_K0(n, variant), (n - 4) / 4.0);
    const double q = 2.0 * (n - 2) / (n - 4);
    return -0.5 * K * lam * lam + std::pow(lam, q) / q;
}

PohozaevLevels limiting_levels(const Params& params)
{
    params.validate();
    PohozaevLevels L;
    if (oracle_coeffs(params, 1).K0 > 0) {
        L.autonomous_defined = true;
        L.l_star_exact = limiting_level_exact(params);
        L.l_star = L.l_star_exact.value();
    }
    const int n = params.n;
    L.aviles_printed = aviles_level_printed(n);
    L.aviles_derived_theorem = aviles_level_derived(n, HatVariant::Theorem);
    L.aviles_derived_formula = aviles_level_derived(n, HatVariant::FormulaLimit);
    L.aviles_hamiltonian_limit = aviles_hamiltonian_limit(n, HatVariant::Theorem);
    L.aviles_verdict = std::abs(L.aviles_printed - L.aviles_derived_theorem) <= 1e-10 * std::abs(L.aviles_printed)
                           ? Verdict::Match
                           : Verdict::Mismatch;
    return L;
}

double aviles_hamiltonian(int n, const CylState& state)
{
    if (!(state.t > 0)) throw DomainError("nonautonomous Hamiltonian needs t > 0");
    if (state.y.empty() || state.y.size() % 4) throw DomainError("state size must be a multiple of 4");
    NonautonomousCoefficients c(n);
    const double t = state.t;
    const auto s = norms(state.y.data(), state.y.size());
    const double q = 2.0 * (n - 2) / (n - 4);
    const double quad = -(s.v3v1 + c.K(3, t) * s.v2v1) + 0.5 * (s.v2v2 - c.K(2, t) * s.v1v1 - c.K(0, t) * s.vv);
    return t * quad + (s.vv > 0 ? std::pow(std::sqrt(s.vv), q) / q : 0.0);
}

double aviles_dH(int n, const CylState& state)
{
    if (!(state.t > 0)) throw DomainError("nonautonomous Hamiltonian needs t > 0");
    auto p = aviles_p_values(n, state.t, PRoute::Derived);
    const auto s = norms(state.y.data(), state.y.size());
    return -s.v3v1 + p[3] * s.v2v1 + p[2] * s.v2v2 + p[1] * s.v1v1 + p[0] * s.vv;
}

PCoefficients aviles_p_coeffs(int n)
{
    if (n < 5) throw DomainError("n must be at least 5");
    const Rational N(n), m = N - 4, q = N * N - 10 * N + 20;
    NonautonomousCoefficients c(n);
    const Laurent &K0 = c.K_series(0), &K1 = c.K_series(1), &K2 = c.K_series(2), &K3 = c.K_series(3);
    const Rational h(-1, 2);
    PCoefficients P;
    P.printed[3] = series({{-2, -m}, {-1, -m}, {0, -2 * m}});
    P.printed[2] = series({{-1, -m}, {0, -(4 * N - 17) / 2}});
    P.printed[1] = series({{-2, N * (N + 7) * m / 16}, {-1, 3 * N * m * m / 8}, {0, 5 * (7 * N - 10)},
                           {1, -2 * (N - 2) * m}});
    P.printed[0] =
        series({{-4, 3 * m * N * (N + 4) * (N + 8) / 512}, {-3, m * m * N * (N + 4) / 32}, {-2, m * N * q / 32}});

    P.definitional[3] = Rational(-1) * (K3 + K3.derivative());
    P.definitional[2] = h * (Rational(2) * K3.shifted(1) - constant(1));
    P.definitional[1] = h * (K2 + K2.derivative().shifted(1) - Rational(2) * K1.shifted(1));
    P.definitional[0] = h * (K0 + K0.derivative().shifted(1));

    P.derived = P.definitional;
    P.derived[3] = Rational(-1) * (K3 + K3.derivative().shifted(1));
    return P;
}

std::array<double, 4> aviles_p_values(int n, double t, PRoute route)
{
    if (!(t > 0)) throw DomainError("Pohozaev weights need t > 0");
    static thread_local int cached_n = -1;
    static thread_local PCoefficients cached;
    if (cached_n != n) {
        cached = aviles_p_coeffs(n);
        cached_n = n;
    }
    const auto& src = route == PRoute::Printed ? cached.printed
                      : route == PRoute::Definitional ? cached.definitional
                                                       : cached.derived;
    return {src[0](t), src[1](t), src[2](t), src[3](t)};
}

const char* to_string(Monotonicity m)
{
    switch (m) {
    case Monotonicity::Nonincreasing: return "NONINCREASING";
    case Monotonicity::Nondecreasing: return "NONDECREASING";
    case Monotonicity::Constant: return "CONSTANT";
    case Monotonicity::Inconclusive: return "INCONCLUSIVE";
    case Monotonicity::Mixed: return "MIXED";
    }
    return "?";
}

MonotonicityReport monotonicity_check_aviles(int n, const Trajectory& traj, double margin)
{
    MonotonicityReport R;
    const int q = n * n - 10 * n + 20;
    R.expected = q > 0 ? Monotonicity::Nondecreasing : Monotonicity::Nonincreasing;
    if (traj.size() < 5 || traj.dim == 0 || traj.dim % 4) {
        R.reason = "trajectory too short";
        return R;
    }
    if (traj.t_front() < 50) {
        R.reason = "trajectory starts before t = 50";
        return R;
    }
    const double a = traj.t_front() + margin, b = traj.t_back() - margin;
    if (!(b - a > 10)) {
        R.reason = "trajectory too short";
        return R;
    }
    bool zero = true;
    for (const auto& y : traj.y)
        for (double v : y) zero = zero && v == 0;

    auto end = traj.eval(b);
    if (!zero) {
        double vv = 0, v1 = 0;
        for (std::size_t i = 0; i < traj.dim; i += 4) {
            vv += end[i] * end[i];
            v1 += end[i + 1] * end[i + 1];
        }
        if (!(vv > 0) || std::sqrt(v1) > 1e-3 * std::sqrt(vv)) {
            R.reason = "trajectory has not settled";
            return R;
        }
    }

    const double omega = sphere_area(n);
    const double h = std::min(0.5, margin / 4);
    auto P = [&](double t) { return omega * aviles_hamiltonian(n, {t, traj.eval(t)}); };
    const int N = 400;
    double scale = 0;
    for (int i = 0; i < N; ++i) {
        double t = a + (b - a) * i / (N - 1);
        R.t.push_back(t);
        R.dP_numeric.push_back(centred(P, t, h));
        R.dP_formula.push_back(omega * aviles_dH(n, {t, traj.eval(t)}));
        scale = std::max(scale, std::abs(P(t)));
    }
    const double floor = 64 * std::numeric_limits<double>::epsilon() * scale / h;
    auto sgn = [&](double v) { return std::abs(v) <= floor ? 0 : (v > 0 ? 1 : -1); };
    int final_sign = 0;
    int last = N - 1;
    for (; last >= 0 && final_sign == 0; --last) final_sign = sgn(R.dP_numeric[last]);
    if (final_sign == 0) {
        R.verdict = Monotonicity::Constant;
        R.t_detected = a;
        R.reason = "derivative vanishes to rounding";
        return R;
    }
    int first = N - 1;
    for (int i = N - 1; i >= 0; --i) {
        int s = sgn(R.dP_numeric[i]);
        if (s != 0 && s != final_sign) break;
        first = i;
    }
    R.t_detected = R.t[first];
    if (first > N / 2) {
        R.verdict = Monotonicity::Mixed;
        R.reason = "single-sign tail covers less than half of the analysed span";
        return R;
    }
    R.verdict = final_sign > 0 ? Monotonicity::Nondecreasing : Monotonicity::Nonincreasing;
    R.reason = "single sign for t >= " + format_double(R.t_detected);
    return R;
}

std::vector<std::vector<double>> random_initial_states(const Params& params, int count, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> amp(0.2, 1.0), der(-0.5, 0.5);
    std::vector<std::vector<double>> out;
    for (int k = 0; k < count; ++k) {
        std::vector<double> y;
        for (int i = 0; i < params.p; ++i) {
            y.push_back(amp(rng));
            for (int j = 0; j < 3; ++j) y.push_back(der(rng));
        }
        out.push_back(std::move(y));
    }
    return out;
}

MonotonicityTrial monotonicity_trial(const Params& params, int sigma, const std::vector<double>& y0, double span,
                                     const IntegratorOptions& opts)
{
    MonotonicityTrial T;
    T.y0 = y0;
    auto sys = autonomous_system(params, sigma);
    auto traj = integrate(sys, 0, y0, span, opts);
    T.blow_up = traj.blow_up;
    auto series = pohozaev_series(sys, traj);
    T.min_dH = std::numeric_limits<double>::infinity();
    for (const auto& e : series) {
        double tol = std::max(1e-6, 1e-3 * std::abs(e.dH_formula));
        T.worst_mismatch = std::max(T.worst_mismatch, std::abs(e.dH_numeric - e.dH_formula) / tol);
        T.min_dH = std::min(T.min_dH, e.dH_numeric);
    }
    T.agree = !series.empty() && T.worst_mismatch <= 1.0;
    T.nonnegative = !series.empty() && T.min_dH >= -1e-8;
    return T;
}

Ledger pohozaev_ledger()
{
    Ledger out;
    const char* names[4] = {"p0(n,t)", "p1(n,t)", "p2(n,t)", "p3(n,t)"};
    auto describe = [](const Laurent& l) {
        std::ostringstream os;
        bool first = true;
        for (auto it = l.terms().rbegin(); it != l.terms().rend(); ++it) {
            if (!first) os << " + ";
            os << "(" << to_string(it->second) << ")t^" << it->first;
            first = false;
        }
        return first ? std::string("0") : os.str();
    };
    for (int j = 3; j >= 0; --j) {
        std::vector<int> bad;
        std::string printed, oracle;
        for (int n = 5; n <= 12; ++n) {
            auto P = aviles_p_coeffs(n);
            Laurent diff = P.printed[j] - P.definitional[j];
            if (!diff.is_zero()) bad.push_back(n);
            if (n == 5) {
                printed = describe(P.printed[j]);
                oracle = describe(P.definitional[j]);
            }
        }
        LedgerEntry e;
        e.symbol = names[j];
        e.location = "nonautonomous Pohozaev weights";
        e.printed = "n=5: " + printed;
        e.oracle = "bracket definition on the printed K~j, n=5: " + oracle;
        e.verdict = bad.empty() ? Verdict::Match : Verdict::Mismatch;
        if (!bad.empty()) {
            std::string ns;
            for (int n : bad) ns += (ns.empty() ? "" : ",") + std::to_string(n);
            e.note = "explicit list differs from the bracket definition for n in {" + ns + "}";
        }
        out.push_back(e);
    }
    {
        // the bracket definition of p3 drops the factor t in front of K~3'
        std::vector<int> bad;
        for (int n = 5; n <= 12; ++n) {
            auto P = aviles_p_coeffs(n);
            if (!(P.definitional[3] - P.derived[3]).is_zero()) bad.push_back(n);
        }
        auto P5 = aviles_p_coeffs(5);
        LedgerEntry e;
        e.symbol = "p3 definition";
        e.location = "nonautonomous Pohozaev weights";
        e.printed = "-[K~3 + K~3'], n=5: " + describe(P5.definitional[3]);
        e.oracle = "derivative of the Hamiltonian gives -[K~3 + t K~3'], n=5: " + describe(P5.derived[3]);
        e.verdict = bad.empty() ? Verdict::Match : Verdict::Mismatch;
        out.push_back(e);
    }
    {
        // leading large-t sign of p0 versus the dimension split
        bool ok = true;
        for (int n = 5; n <= 16; ++n) {
            auto P = aviles_p_coeffs(n);
            Rational lead = P.printed[0].coeff(-2);
            int q = n * n - 10 * n + 20;
            ok = ok && sign(lead) == (q > 0 ? 1 : -1);
        }
        LedgerEntry e;
        e.symbol = "sign p0 (large t)";
        e.location = "nonautonomous monotonicity split";
        e.printed = "nonincreasing for 5<=n<=7, nondecreasing for n>=8";
        e.oracle = "sign of (n-4)n(n^2-10n+20)/(32t^2), n = 5..16";
        e.verdict = ok ? Verdict::Match : Verdict::Mismatch;
        out.push_back(e);
    }
    {
        std::ostringstream pr, orc;
        bool same = true;
        for (int n = 5; n <= 10; ++n) {
            double a = aviles_level_printed(n), b = aviles_level_derived(n, HatVariant::Theorem);
            same = same && std::abs(a - b) <= 1e-10 * std::abs(a);
            if (n == 5) {
                pr << "l*(5) = " << format_double(a);
                orc << "(2_**+1)^-1 K^((n-2)/2) + K^((n-2)/2) with K = Khat0 (theorem), n=5: " << format_double(b);
            }
        }
        LedgerEntry e;
        e.symbol = "l*(n)";
        e.location = "lower-critical limiting level";
        e.printed = pr.str();
        e.oracle = orc.str();
        e.verdict = same ? Verdict::Match : Verdict::Mismatch;
        e.note = "formula-limit variant at n=5: " + format_double(aviles_level_derived(5, HatVariant::FormulaLimit));
        out.push_back(e);
    }
    {
        const double lim = aviles_hamiltonian_limit(5, HatVariant::Theorem);
        const double lvl = aviles_level_derived(5, HatVariant::Theorem);
        LedgerEntry e;
        e.symbol = "P~cyl(infinity)";
        e.location = "lower-critical limiting level";
        e.printed = "limit in {-l*(n), 0} and also = l*(n); derived level at n=5: " + format_double(lvl);
        e.oracle = "Hamiltonian along the constant state, n=5: " + format_double(lim);
        e.verdict = std::abs(lim + lvl) <= 1e-12 * std::abs(lvl) ? Verdict::Match : Verdict::Mismatch;
        e.note = "the limit of the Hamiltonian is negative while the derived level expression is positive";
        out.push_back(e);
    }
    {
        bool ok = true;
        for (int n = 5; n <= 8; ++n)
            for (const auto& s : standard_s_grid(n)) {
                Params prm(n, s);
                if (oracle_coeffs(prm, 1).K0 <= 0) continue;
                PowerTerm H = equilibrium_hamiltonian_exact(prm);
                PowerTerm l = limiting_level_exact(prm);
                ok = ok && exactly_equal(H, PowerTerm{-l.coeff, l.base, l.exponent});
            }
        LedgerEntry e;
        e.symbol = "l*(n,s)";
        e.location = "autonomous limiting level";
        e.printed = "(s-1)/(2(s+1)) K0^((s+1)/(s-1))";
        e.oracle = "minus the Hamiltonian at the nontrivial equilibrium, exact, n = 5..8";
        e.verdict = ok ? Verdict::Match : Verdict::Mismatch;
        out.push_back(e);
    }
    return out;
}

}  // namespace bilap
