#pragma once

#include "bilap/coefficients.hpp"
#include "bilap/ledger.hpp"
#include "bilap/ode.hpp"
#include "bilap/params.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace bilap {

// Radial Hamiltonian of an autonomous system, with the potential scaled by
// the system's coupling:
//   -(<V''',V'> + K3<V'',V'>) + (|V''|^2 - K2|V'|^2 - K0|V|^2)/2 + coupling |V|^(s+1)/(s+1).
double system_hamiltonian(const AutonomousSystem& sys, const double* y);
// Its derivative along solutions, K1|V'|^2 - K3|V''|^2.
double system_dH(const AutonomousSystem& sys, const double* y);

double hamiltonian_radial(const Params& params, int sigma, const CylState& state);

// H at the nontrivial equilibrium, -l*(n,s), as one power of K0.
PowerTerm equilibrium_hamiltonian_exact(const Params& params);
// l*(n,s) = (s-1)/(2(s+1)) K0^((s+1)/(s-1)).
PowerTerm limiting_level_exact(const Params& params);

struct EnergySample {
    double t = 0;
    double H = 0;
    double dH_formula = 0;
    double dH_numeric = 0;
};

struct PohozaevValues {
    double H = 0;
    double P_cyl = 0;  // omega_{n-1} H on radial data
    double P_sph = 0;  // omega_{n-1} P_cyl
};

PohozaevValues pohozaev_values(int n, double H);

// Samples at the trajectory nodes at least 2h away from both ends; the
// numeric derivative is the 4th-order centred difference of H on the dense
// output.
std::vector<EnergySample> pohozaev_series(const AutonomousSystem& sys, const Trajectory& traj, double h = 2e-3);
std::vector<EnergySample> pohozaev_series(const Params& params, int sigma, const Trajectory& traj);

std::string energy_csv(const std::vector<EnergySample>& series, const std::string& header_json);

struct PohozaevLevels {
    bool autonomous_defined = false;
    PowerTerm l_star_exact;
    double l_star = 0;
    double aviles_printed = 0;
    double aviles_derived_theorem = 0;  // Khat0 from the theorem statement
    double aviles_derived_formula = 0;  // Khat0 = lim t K~0 of the printed series
    double aviles_hamiltonian_limit = 0;
    Verdict aviles_verdict = Verdict::Match;
};

PohozaevLevels limiting_levels(const Params& params);
double aviles_level_printed(int n);
// (2_**+1)^-1 |L|^(2_**+1) + Khat0 |L|^2 at |L| = Khat0^((n-4)/4).
double aviles_level_derived(int n, HatVariant variant);
// Limit of the nonautonomous Hamiltonian along the constant state
// Khat0(variant)^((n-4)/4); t K~0 itself tends to the formula limit.
double aviles_hamiltonian_limit(int n, HatVariant variant);

// t[-(w'''w' + K~3 w''w') + (w''^2 - K~2 w'^2 - K~0 w^2)/2] + |w|^(2_**+1)/(2_**+1).
double aviles_hamiltonian(int n, const CylState& state);
// dH~/dt along solutions of the nonautonomous system, from the derived weights.
double aviles_dH(int n, const CylState& state);

enum class PRoute { Printed, Definitional, Derived };

// Weights of <-W''' + p3 W'', W'> + p2|W''|^2 + p1|W'|^2 + p0|W|^2 as Laurent
// series in t. Definitional: the bracket definitions evaluated on the printed
// K~j. Derived: the exact derivative of the Hamiltonian above, whose p3
// carries t K~3'.
struct PCoefficients {
    std::array<Laurent, 4> printed;
    std::array<Laurent, 4> definitional;
    std::array<Laurent, 4> derived;
};

PCoefficients aviles_p_coeffs(int n);
std::array<double, 4> aviles_p_values(int n, double t, PRoute route);

enum class Monotonicity { Nonincreasing, Nondecreasing, Constant, Inconclusive, Mixed };
const char* to_string(Monotonicity m);

struct MonotonicityReport {
    Monotonicity verdict = Monotonicity::Inconclusive;
    Monotonicity expected = Monotonicity::Inconclusive;  // from the sign of n^2 - 10n + 20
    double t_detected = 0;
    std::vector<double> t;
    std::vector<double> dP_numeric;
    std::vector<double> dP_formula;
    std::string reason;
};

// Sign analysis of the numerically differentiated nonautonomous Hamiltonian
// on [t_front + margin, t_back - margin].
MonotonicityReport monotonicity_check_aviles(int n, const Trajectory& traj, double margin = 10.0);

struct MonotonicityTrial {
    std::vector<double> y0;
    double worst_mismatch = 0;  // max |numeric - formula| / max(1e-6, 1e-3 |formula|)
    double min_dH = 0;
    bool blow_up = false;
    bool agree = false;
    bool nonnegative = false;
};

// Random bounded initial states (seeded) integrated over [0, span].
std::vector<std::vector<double>> random_initial_states(const Params& params, int count, std::uint64_t seed);
MonotonicityTrial monotonicity_trial(const Params& params, int sigma, const std::vector<double>& y0, double span,
                                     const IntegratorOptions& opts);

Ledger pohozaev_ledger();

}  // namespace bilap
