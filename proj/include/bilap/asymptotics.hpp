#pragma once

#include "bilap/coefficients.hpp"
#include "bilap/ode.hpp"
#include "bilap/params.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace bilap {

enum class Regime { SerrinLions, Aviles, GidasSpruck, Critical, Supercritical };
const char* to_string(Regime r);

struct RegimeInfo {
    Regime regime = Regime::SerrinLions;
    std::string profile;    // predicted leading behaviour as r -> 0
    double exponent = 0;    // u ~ r^-exponent, up to the log factor
    double amplitude = 0;   // 0 when the regime fixes no amplitude
    double log_exponent = 0;
};

// Exact rational comparison with 2_** and 2**-1.
RegimeInfo classify_regime(const Params& params);
// Same with a 1e-12 tolerance at the boundaries.
RegimeInfo classify_regime(int n, double s);

using Sample = std::pair<double, double>;  // (r, value)
struct LogSample {
    double log_r = 0;
    double log_value = 0;
};

struct FitReport {
    double exponent = 0;  // value ~ amplitude r^-exponent
    double amplitude = 0;
    std::optional<double> log_exponent;
    double residual = 0;  // RMS of the log deviations
    std::size_t samples = 0;
    std::optional<Regime> regime;
    std::optional<double> predicted_amplitude;
    // log-corrected fits: relative distance of A to Khat0^((n-4)/4) per variant
    std::optional<double> distance_theorem;
    std::optional<double> distance_formula;
};

// Least squares of ln value on ln r. Needs >= 8 samples spanning two decades
// with positive values.
FitReport fit_power_law(const std::vector<Sample>& samples);
// Also attaches the regime of params and its predicted amplitude.
FitReport fit_power_law(const std::vector<Sample>& samples, const Params& params);

// Regression of ln(value r^(n-4)) on ln(-ln r); needs >= 12 samples, all with
// r < e^-2. The log-space form accepts radii far below the double range.
FitReport fit_log_corrected(const std::vector<Sample>& samples, int n);
FitReport fit_log_corrected(const std::vector<LogSample>& samples, int n);

// Maps a nonautonomous trajectory back to u(r) = r^(4-n) (-ln r)^((4-n)/4) w(-ln r),
// sampled at `count` log-spaced times in [t_lo, t_hi], in log space.
std::vector<LogSample> nonautonomous_to_radial(int n, const Trajectory& traj, double t_lo, double t_hi, int count);

struct DecayReport {
    double rate = 0;  // |rhs| ~ C t^-rate
    double constant = 0;
    double fit_residual = 0;
    bool exact = false;  // residual identically zero
    std::vector<double> t;
    std::vector<double> residual;
};

// |nonautonomous rhs| along the constant state amplitude on log-spaced t in [10, 1e4].
DecayReport residual_decay(int n, double amplitude);
DecayReport residual_decay_check(int n, HatVariant variant = HatVariant::Theorem);

nlohmann::ordered_json to_json(const FitReport& f);
nlohmann::ordered_json to_json(const RegimeInfo& r);
// (r, value, model, relative deviation) rows for a power-law fit.
std::string fit_csv(const std::vector<Sample>& samples, const FitReport& f, const std::string& header_json);

}  // namespace bilap
