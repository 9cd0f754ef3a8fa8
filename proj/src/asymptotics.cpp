#include "bilap/asymptotics.hpp"

#include "bilap/closed_forms.hpp"
#include "bilap/errors.hpp"

#include <cmath>
#include <sstream>

namespace bilap {

const char* to_string(Regime r)
{
    switch (r) {
    case Regime::SerrinLions: return "SERRIN_LIONS";
    case Regime::Aviles: return "AVILES";
    case Regime::GidasSpruck: return "GIDAS_SPRUCK";
    case Regime::Critical: return "CRITICAL";
    case Regime::Supercritical: return "SUPERCRITICAL";
    }
    return "?";
}

namespace {

RegimeInfo describe(Regime regime, int n, double s, const Params* exact)
{
    RegimeInfo info;
    info.regime = regime;
    const std::string m = std::to_string(n - 4);
    switch (regime) {
    case Regime::SerrinLions:
        info.exponent = n - 4;
        info.profile = "|x|^(-" + m + ")";
        break;
    case Regime::Aviles:
        info.exponent = n - 4;
        info.log_exponent = (4.0 - n) / 4;
        info.amplitude = AvilesProfile{n, HatVariant::Theorem}.amplitude();
        info.profile = "Khat0^(" + m + "/4) |x|^(-" + m + ") (-ln|x|)^(-" + m + "/4)";
        break;
    case Regime::GidasSpruck: {
        info.exponent = fowler_gamma(s);
        const Params prm = exact ? *exact : Params(n, parse_rational(format_double(s)));
        info.amplitude = SingularPower({1.0}, prm).amplitude();
        const std::string g = exact ? to_string(fowler_gamma(exact->s)) : format_double(info.exponent);
        info.profile = "K0^(1/(s-1)) |x|^(-" + g + ")";
        break;
    }
    case Regime::Critical:
        info.exponent = (n - 4) / 2.0;
        info.profile = "|x|^(-" + m + "/2) v(-ln|x|) with v a Delaunay orbit";
        break;
    case Regime::Supercritical:
        info.profile = "not covered";
        break;
    }
    return info;
}

}  // namespace

RegimeInfo classify_regime(const Params& params)
{
    params.validate();
    const auto ex = special_exponents(params.n);
    const Rational& s = params.s;
    Regime r;
    if (s < ex.lower)
        r = Regime::SerrinLions;
    else if (s == ex.lower)
        r = Regime::Aviles;
    else if (s < ex.critical())
        r = Regime::GidasSpruck;
    else if (s == ex.critical())
        r = Regime::Critical;
    else
        r = Regime::Supercritical;
    return describe(r, params.n, params.s_value(), &params);
}

RegimeInfo classify_regime(int n, double s)
{
    if (n < 5) throw DomainError("n must be at least 5");
    if (!(s > 1)) throw DomainError("s must exceed 1");
    const double lower = n / (n - 4.0), crit = (n + 4.0) / (n - 4.0);
    Regime r;
    if (std::abs(s - lower) <= 1e-12 * lower)
        r = Regime::Aviles;
    else if (std::abs(s - crit) <= 1e-12 * crit)
        r = Regime::Critical;
    else if (s < lower)
        r = Regime::SerrinLions;
    else if (s < crit)
        r = Regime::GidasSpruck;
    else
        r = Regime::Supercritical;
    return describe(r, n, s, nullptr);
}

namespace {

struct Line {
    double slope = 0, intercept = 0, rms = 0;
};

Line least_squares(const std::vector<double>& x, const std::vector<double>& y)
{
    const double m = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= m;
    my /= m;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (!(sxx > 0)) throw DomainError("fit needs distinct abscissae");
    Line l;
    l.slope = sxy / sxx;
    l.intercept = my - l.slope * mx;
    double ss = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = y[i] - (l.intercept + l.slope * x[i]);
        ss += d * d;
    }
    l.rms = std::sqrt(ss / m);
    return l;
}

}  // namespace

FitReport fit_power_law(const std::vector<Sample>& samples)
{
    if (samples.size() < 8) throw DomainError("power-law fit needs at least 8 samples");
    std::vector<double> x, y;
    double rmin = INFINITY, rmax = 0;
    for (const auto& [r, v] : samples) {
        if (!(r > 0)) throw DomainError("radii must be positive");
        if (!(v > 0)) throw DomainError("power-law fit needs positive values, got " + format_double(v));
        rmin = std::min(rmin, r);
        rmax = std::max(rmax, r);
        x.push_back(std::log(r));
        y.push_back(std::log(v));
    }
    if (rmax < 100 * rmin) throw DomainError("radii must span at least two decades");
    const Line l = least_squares(x, y);
    FitReport f;
    f.exponent = -l.slope;
    f.amplitude = std::exp(l.intercept);
    f.residual = l.rms;
    f.samples = samples.size();
    return f;
}

FitReport fit_power_law(const std::vector<Sample>& samples, const Params& params)
{
    FitReport f = fit_power_law(samples);
    const RegimeInfo info = classify_regime(params);
    f.regime = info.regime;
    if (info.amplitude > 0) f.predicted_amplitude = info.amplitude;
    return f;
}

FitReport fit_log_corrected(const std::vector<LogSample>& samples, int n)
{
    if (n < 5) throw DomainError("n must be at least 5");
    if (samples.size() < 12) throw DomainError("log-corrected fit needs at least 12 samples");
    std::vector<double> x, y;
    for (const auto& s : samples) {
        if (!(s.log_r < -2)) throw DomainError("log-corrected fit needs r < e^-2, got ln r = " + format_double(s.log_r));
        if (!std::isfinite(s.log_value)) throw DomainError("log-corrected fit needs positive finite values");
        x.push_back(std::log(-s.log_r));
        y.push_back(s.log_value + (n - 4) * s.log_r);
    }
    const Line l = least_squares(x, y);
    FitReport f;
    f.exponent = n - 4;
    f.amplitude = std::exp(l.intercept);
    f.log_exponent = l.slope;
    f.residual = l.rms;
    f.samples = samples.size();
    f.regime = Regime::Aviles;
    const double at = AvilesProfile{n, HatVariant::Theorem}.amplitude();
    const double af = AvilesProfile{n, HatVariant::FormulaLimit}.amplitude();
    f.predicted_amplitude = at;
    f.distance_theorem = std::abs(f.amplitude - at) / at;
    f.distance_formula = std::abs(f.amplitude - af) / af;
    return f;
}

FitReport fit_log_corrected(const std::vector<Sample>& samples, int n)
{
    std::vector<LogSample> ls;
    ls.reserve(samples.size());
    for (const auto& [r, v] : samples) {
        if (!(r > 0)) throw DomainError("radii must be positive");
        if (!(v > 0)) throw DomainError("log-corrected fit needs positive values, got " + format_double(v));
        ls.push_back({std::log(r), std::log(v)});
    }
    return fit_log_corrected(ls, n);
}

std::vector<LogSample> nonautonomous_to_radial(int n, const Trajectory& traj, double t_lo, double t_hi, int count)
{
    if (!(t_lo > 0) || !(t_hi > t_lo) || count < 2) throw DomainError("need 0 < t_lo < t_hi and count >= 2");
    if (t_lo < traj.t_front() || t_hi > traj.t_back()) throw DomainError("requested times leave the trajectory");
    std::vector<LogSample> out;
    for (int i = 0; i < count; ++i) {
        const double t = t_lo * std::pow(t_hi / t_lo, static_cast<double>(i) / (count - 1));
        const double w = traj.eval(t, 0);
        if (!(w > 0)) throw DomainError("trajectory is not positive at t = " + format_double(t));
        // r = e^-t
        out.push_back({-t, (n - 4) * t + (4.0 - n) / 4 * std::log(t) + std::log(w)});
    }
    return out;
}

DecayReport residual_decay(int n, double amplitude)
{
    if (n < 5) throw DomainError("n must be at least 5");
    DecayReport d;
    const int count = 61;
    std::vector<double> x, y;
    for (int i = 0; i < count; ++i) {
        const double t = 10 * std::pow(1e3, static_cast<double>(i) / (count - 1));
        const auto rhs = nonautonomous_rhs(n, {t, {amplitude, 0, 0, 0}});
        double m = 0;
        for (double v : rhs) m = std::max(m, std::abs(v));
        d.t.push_back(t);
        d.residual.push_back(m);
        if (m > 0) {
            x.push_back(std::log(t));
            y.push_back(std::log(m));
        }
    }
    if (x.empty()) {
        d.exact = true;
        d.rate = NAN;
        return d;
    }
    if (x.size() < 2) throw DomainError("residual vanishes at all but one sample");
    const Line l = least_squares(x, y);
    d.rate = -l.slope;
    d.constant = std::exp(l.intercept);
    d.fit_residual = l.rms;
    return d;
}

DecayReport residual_decay_check(int n, HatVariant variant)
{
    return residual_decay(n, AvilesProfile{n, variant}.amplitude());
}

nlohmann::ordered_json to_json(const FitReport& f)
{
    nlohmann::ordered_json j;
    j["exponent"] = f.exponent;
    j["amplitude"] = f.amplitude;
    j["log_exponent"] = f.log_exponent ? nlohmann::ordered_json(*f.log_exponent) : nlohmann::ordered_json();
    j["residual"] = f.residual;
    j["samples"] = f.samples;
    j["regime"] = f.regime ? nlohmann::ordered_json(to_string(*f.regime)) : nlohmann::ordered_json();
    j["predicted_amplitude"] =
        f.predicted_amplitude ? nlohmann::ordered_json(*f.predicted_amplitude) : nlohmann::ordered_json();
    if (f.predicted_amplitude)
        j["amplitude_rel_error"] = std::abs(f.amplitude - *f.predicted_amplitude) / *f.predicted_amplitude;
    if (f.distance_theorem) j["distance_theorem"] = *f.distance_theorem;
    if (f.distance_formula) j["distance_formula"] = *f.distance_formula;
    return j;
}

nlohmann::ordered_json to_json(const RegimeInfo& r)
{
    nlohmann::ordered_json j;
    j["regime"] = to_string(r.regime);
    j["profile"] = r.profile;
    j["exponent"] = r.exponent;
    j["log_exponent"] = r.log_exponent;
    j["amplitude"] = r.amplitude > 0 ? nlohmann::ordered_json(r.amplitude) : nlohmann::ordered_json();
    return j;
}

std::string fit_csv(const std::vector<Sample>& samples, const FitReport& f, const std::string& header_json)
{
    std::ostringstream os;
    os << "# " << header_json << "\n";
    os << "r,value,model,rel_deviation\n";
    const int n = static_cast<int>(std::lround(f.exponent)) + 4;
    for (const auto& [r, v] : samples) {
        double model = f.amplitude * std::pow(r, -f.exponent);
        if (f.log_exponent) model = f.amplitude * std::pow(r, 4.0 - n) * std::pow(-std::log(r), *f.log_exponent);
        os << format_double(r) << ',' << format_double(v) << ',' << format_double(model) << ','
           << format_double((v - model) / model) << "\n";
    }
    return os.str();
}

}  // namespace bilap
