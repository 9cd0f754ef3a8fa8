#pragma once

#include "bilap/ledger.hpp"
#include "bilap/ode.hpp"

#include <string>
#include <vector>

namespace bilap {

// Measured: c is the bubble constant measured by differencing. Unit: c = 1,
// which rescales a0 by the same identity.
enum class CMode { Measured, Unit };
const char* to_string(CMode m);
CMode parse_c_mode(const std::string& s);

struct CriticalConstants {
    int n = 5;
    double a0 = 0;  // (K0/c)^((n-4)/8), the constant orbit
    double c = 1;
    double K0 = 0;
    double K2 = 0;
    double power = 0;  // 2** - 1
    CMode mode = CMode::Measured;
};

CriticalConstants critical_constants(int n, CMode mode = CMode::Measured);

// v'''' = c v^(2**-1) - K2 v'' - K0 v, odd-extended to v < 0.
AutonomousSystem critical_system(const CriticalConstants& cc);

struct CriticalDerivatives {
    std::vector<double> d;
    bool left_cone = false;  // v < 0
};

CriticalDerivatives critical_rhs(const CriticalConstants& cc, const std::vector<double>& state);

// 2 pi / omega for the oscillatory root of the linearization at a0.
double linearized_period(int n);

// The search and the orbit diagnostics run in extended precision; rel_tol
// applies there, with abs_tol = 1e-3 rel_tol. The stored orbit is a double
// trajectory at rel_tol 1e-13.
struct ShootingOptions {
    double rel_tol = 1e-16;
    double tol = 1e-10;        // accepted |v'''(t1)|
    int grid = 200;            // geometric b-samples
    double b_min = 1e-6;
    double b_max_factor = 10;  // b_max = factor * K0 * a0
    double guard = 1e6;
    CMode c_mode = CMode::Measured;
};

struct ShootingResult {
    int n = 5;
    double a = 0;
    double b = 0;
    double T = 0;
    double energy = 0;
    double residual = 0;
    Trajectory orbit;  // one period, [0, T]
    double periodicity_defect = 0;
    double energy_drift = 0;  // max |H - H(0)| / (1 + |H(0)|) over the period
    double min_v = 0;
    double symmetry_defect = 0;
    bool converged = false;
    std::string error;
};

// Value of the shooting function at b, with its side of the bracket:
// side = +1 when v' never returns to zero (escape) or v'''(t1) >= 0.
struct ShootingSample {
    double b = 0;
    double F = 0;
    double t1 = 0;
    int side = 0;
    bool event = false;
    bool left_cone = false;
};

ShootingSample shooting_function(const CriticalConstants& cc, double a, double b, const ShootingOptions& opts = {});

// Throws DomainError outside 0 < a <= a0; convergence failures are reported
// in the result.
ShootingResult find_b(int n, double a, const ShootingOptions& opts = {});

std::vector<ShootingResult> orbit_table(int n, const std::vector<double>& a_grid, const ShootingOptions& opts = {});
std::vector<ShootingResult> orbit_table_serial(int n, const std::vector<double>& a_grid,
                                               const ShootingOptions& opts = {});

std::string orbit_table_csv(const std::vector<ShootingResult>& rows, const std::string& header_json);

Ledger delaunay_ledger();

}  // namespace bilap
