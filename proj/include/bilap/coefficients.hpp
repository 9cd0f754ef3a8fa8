#pragma once

#include "bilap/ledger.hpp"
#include "bilap/params.hpp"
#include "bilap/rational.hpp"

#include <array>

namespace bilap {

struct AutonomousCoefficients {
    Rational K0, K1, K2, K3, J0, J1;
};

struct AutonomousCoefficientsD {
    double K0 = 0, K1 = 0, K2 = 0, K3 = 0, J0 = 0, J1 = 0;
};

AutonomousCoefficientsD to_double(const AutonomousCoefficients& c);

// Literal evaluation of the printed formulas (main-text J0).
AutonomousCoefficients autonomous_coeffs(const Params& params);

// The fourth-order assembly list prints its own zeroth angular coefficient;
// it is kept separate because it disagrees with the main-text J0.
Rational printed_J40(const Params& params);

// B(beta, nu) = (beta(beta+n-2) - nu)((beta-2)(beta+n-4) - nu): the action of
// the bi-Laplacian on r^beta Y with Y a spherical harmonic of eigenvalue nu.
Rational radial_symbol(int n, const Rational& beta, const Rational& nu);
double radial_symbol(int n, double beta, double nu);

// Separated-mode symbol S(lambda, nu) = B(-gamma - sigma lambda, nu), stored as
// S = radial(lambda) + nu^2 - angular(lambda) nu. sigma = +1 is t = -ln r.
class CharSymbol {
public:
    CharSymbol(const Params& params, int sigma);

    const Poly& radial() const { return radial_; }
    const Poly& angular() const { return angular_; }
    int sigma() const { return sigma_; }

    Rational operator()(const Rational& lambda, const Rational& nu) const;
    AutonomousCoefficients coefficients() const;

private:
    Poly radial_;
    Poly angular_;
    int sigma_;
};

CharSymbol char_symbol(const Params& params, int sigma);

// Oracle coefficients: the symbol's lambda/nu coefficients.
AutonomousCoefficients oracle_coeffs(const Params& params, int sigma);

// The special values quoted by the sign remark, transcribed verbatim.
struct RemarkValues {
    AutonomousCoefficients critical;  // s = 2** - 1
    AutonomousCoefficients lower;     // s = 2_**
};

RemarkValues critical_and_lower_values(int n);

// t-dependent coefficients for the lower-critical scaling, each a finite
// Laurent series in t.
class NonautonomousCoefficients {
public:
    explicit NonautonomousCoefficients(int n);

    int n() const { return n_; }
    double K(int j, double t) const;
    double dK(int j, double t) const;
    double J(int j, double t) const;
    const Laurent& K_series(int j) const { return K_.at(j); }
    const Laurent& J_series(int j) const { return J_.at(j); }

private:
    int n_;
    std::array<Laurent, 4> K_;
    std::array<Laurent, 2> J_;
};

NonautonomousCoefficients nonautonomous_coeffs(int n);

enum class HatVariant {
    Theorem,       // the asymptotic constant stated with the lower-critical theorem
    FormulaLimit,  // lim t K~0 read off the printed K~0
    ChainRule      // lim t K~0 from the chain-rule assembly
};

const char* to_string(HatVariant v);
HatVariant parse_hat_variant(const std::string& s);

struct HatLimits {
    Rational theorem;        // (n-4)(n-2)(n+4)/2
    Rational formula_limit;  // coefficient of 1/t in the printed K~0
    double chain_rule = 0;   // extrapolated t K~0 from the numeric assembly
    std::array<Rational, 4> printed_limits;  // lim t K~0, lim K~1, K~2, K~3
    Verdict verdict = Verdict::Match;
};

HatLimits hat_limits(int n);
double hat_K0(int n, HatVariant variant);

// c_{jl} with rows j = order of the r-derivative, columns l = order in t.
struct ChainRuleMatrix {
    std::array<std::array<double, 5>, 5> c{};
    double operator()(int j, int l) const { return c.at(j).at(l); }
};

// rho = (rho, rho', ..., rho''''), psi = (psi', ..., psi'''').
ChainRuleMatrix chain_rule_matrix(const std::array<double, 5>& rho, const std::array<double, 4>& psi);

// c42 exactly as printed in the fourth-order coefficient list, for the ledger.
double printed_c42(const std::array<double, 5>& rho, const std::array<double, 4>& psi);

// Weights of the spherical bi-Laplacian: radial[j] multiplies r^(j-4) d^j/dr^j;
// angular[j] multiplies r^(j-4) d^j/dr^j Delta_sigma (j = 0,1,2) and
// angular[4] multiplies r^-4 Delta_sigma^2.
struct SphericalWeights {
    std::array<double, 5> radial{};
    std::array<double, 5> angular{};
};

SphericalWeights fourth_order_weights(int n);
// The fourth-order N-list with each printed value attached to the power of r
// written next to it; the radial part then fails to reproduce B(beta, 0).
SphericalWeights printed_fourth_order_weights(int n);

// Applies the radial part of the weights to r^beta at radius r and divides by
// r^(beta-4).
double apply_radial_weights(const SphericalWeights& w, int n, double beta, double r);

// K[l] multiplies d^l/dt^l; J[0], J[1], J[2] multiply d^l/dt^l Delta_theta and
// J[4] multiplies Delta_theta^2.
struct CylCoeffEstimate {
    std::array<double, 5> K{};
    std::array<double, 5> J{};
};

enum class Scaling { Autonomous, Nonautonomous };

// Numeric chain-rule assembly at radius r. Autonomous: rho = r^-gamma and
// psi = -sigma ln r, divided by r^(-gamma-4). Nonautonomous: rho =
// r^(4-n) psi^((4-n)/4) with psi = -ln r, divided by r^-n psi^((4-n)/4).
CylCoeffEstimate derive_cyl_coeffs_numeric(Scaling scaling, int n, double r, double s = 0, int sigma = 1);

// Nonautonomous assembly at cylinder time t, evaluated at the unit radius of
// the rescaled problem so that large t does not underflow r = e^-t.
CylCoeffEstimate nonautonomous_chain_rule_at(int n, double t);

// Generic assembly from derivative data; `scale` is the common factor.
CylCoeffEstimate assemble_fourth_order(const SphericalWeights& w, const ChainRuleMatrix& c, double r, double scale);

struct SecondOrderCoefficients {
    Rational K20_printed, K21_printed;
    Rational K20_oracle, K21_oracle;       // from q(beta) = beta(beta+n-2)
    double K20_chain = 0, K21_chain = 0;   // numeric assembly at r
    Laurent Kt20_printed, Kt21_printed;    // nonautonomous list
};

SecondOrderCoefficients second_order_coeffs(int n, const Rational& s, int sigma, double r = 0.5);
// Second-order nonautonomous numeric assembly at time t (virtual unit radius).
std::array<double, 2> second_order_nonautonomous_chain_rule_at(int n, double t);
// The printed second-order matrix, whose c10 entry reads rho.
double printed_second_order_c10(const std::array<double, 5>& rho);

struct SignReport {
    int K0 = 0, K1 = 0, K2 = 0, K3 = 0, J0 = 0;
    bool in_range = false;    // s in (2_**, 2**-1)
    bool K0_positive = true;  // asserted only when in_range
    bool remark_claims_hold = true;
    int sigma = 1;
};

SignReport sign_report(const Params& params, int sigma);

struct SigmaVote {
    int sigma = -1;
    int votes_plus = 0;
    int votes_minus = 0;
};

// Counts exact agreements of the printed odd coefficients and quoted values
// with the oracle under each convention; the majority is the build sigma.
SigmaVote vote_sigma();
int build_sigma();

// Rational grid used by the exact comparisons: s in {3/2, 2, 3, 5, 2_**, 2**-1}.
std::vector<Rational> standard_s_grid(int n);

Ledger coefficient_ledger(int sigma);

}  // namespace bilap
