#pragma once

#include "bilap/asymptotics.hpp"
#include "bilap/coefficients.hpp"
#include "bilap/pohozaev.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace bilap {

// Work items are independent; every parallel sweep has a serial twin with
// identical output, in input order.

// count equally spaced rationals strictly inside (2_**, 2**-1).
std::vector<Rational> interior_s_grid(int n, int count);

struct SignChartRow {
    int n = 5;
    Rational s;
    SignReport report;
    Regime regime = Regime::GidasSpruck;
};

std::vector<SignChartRow> sign_chart(int n_lo, int n_hi, int count, int sigma);
std::vector<SignChartRow> sign_chart_serial(int n_lo, int n_hi, int count, int sigma);
std::string sign_chart_csv(const std::vector<SignChartRow>& rows, const std::string& header_json);

struct CoefficientRow {
    Params params;
    AutonomousCoefficients printed;
    AutonomousCoefficients oracle;
    Rational J40_printed;
};

std::vector<CoefficientRow> coefficient_grid(const std::vector<Params>& points, int sigma);
std::vector<CoefficientRow> coefficient_grid_serial(const std::vector<Params>& points, int sigma);
std::string coefficient_grid_csv(const std::vector<CoefficientRow>& rows, const std::string& header_json);

std::vector<MonotonicityTrial> monotonicity_trials(const Params& params, int sigma, int count, std::uint64_t seed,
                                                   double span, const IntegratorOptions& opts);
std::vector<MonotonicityTrial> monotonicity_trials_serial(const Params& params, int sigma, int count,
                                                          std::uint64_t seed, double span,
                                                          const IntegratorOptions& opts);

}  // namespace bilap
