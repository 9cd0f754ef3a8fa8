#pragma once

#include "bilap/coefficients.hpp"
#include "bilap/params.hpp"

#include <complex>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace bilap {

// dy = f(t, y); the dimension is taken from the initial state.
using Rhs = std::function<void(double t, const double* y, double* dy)>;

struct CylState {
    double t = 0;
    std::vector<double> y;  // (v1, v1', v1'', v1''', v2, ...)
};

struct IntegratorOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double guard = 1e8;  // blow-up threshold on any |y_i|
    double h_init = 0;   // 0 selects automatically
    double h_max = std::numeric_limits<double>::infinity();
    long max_steps = 5'000'000;
};

// One accepted step: Hermite-type continuous extension of degree 4.
struct DenseStep {
    double t0 = 0;
    double h = 0;
    std::vector<double> r;  // 5 * dim coefficients

    double t_lo() const { return h > 0 ? t0 : t0 + h; }
    double t_hi() const { return h > 0 ? t0 + h : t0; }
    void eval(double t, double* out, std::size_t dim) const;
};

class Trajectory {
public:
    std::size_t dim = 0;
    std::vector<double> t;               // strictly increasing
    std::vector<std::vector<double>> y;  // state at each node
    std::vector<double> step;            // size of the step ending at the node (0 at the start)
    std::vector<DenseStep> dense;        // ordered by time

    long steps = 0, rejected = 0, rhs_evals = 0;
    double rel_tol = 0, abs_tol = 0;
    bool blow_up = false;
    bool event_hit = false;
    double event_t = 0;

    double t_front() const { return t.front(); }
    double t_back() const { return t.back(); }
    std::size_t size() const { return t.size(); }
    std::vector<double> eval(double tq) const;
    double eval(double tq, std::size_t component) const;
};

class StepUnderflowError : public std::runtime_error {
public:
    StepUnderflowError(const std::string& what, Trajectory partial)
        : std::runtime_error(what), partial_(std::move(partial))
    {
    }
    const Trajectory& partial() const { return partial_; }

private:
    Trajectory partial_;
};

// Stops the integration at the first crossing of g through zero in the given
// direction (+1 rising, -1 falling, 0 either). The crossing is refined with
// exact Runge-Kutta sub-steps, not with the interpolant.
struct EventSpec {
    std::function<double(double t, const double* y)> g;
    int direction = 0;
};

// Dormand-Prince 5(4) with PI step control; t1 < t0 integrates backward.
Trajectory integrate(const Rhs& f, double t0, const std::vector<double>& y0, double t1,
                     const IntegratorOptions& opts = {}, const EventSpec* event = nullptr);

// Constant-coefficient cylinder system
//   v'''' + K3 v''' + K2 v'' + K1 v' + K0 v = coupling |V|^(s-1) v.
struct AutonomousSystem {
    AutonomousCoefficientsD c;
    double s = 2;
    int p = 1;
    double coupling = 1;

    void operator()(double t, const double* y, double* dy) const;
};

AutonomousSystem autonomous_system(const Params& params, int sigma);
std::vector<double> autonomous_rhs(const Params& params, int sigma, const CylState& state);

// Lower-critical system with the printed t-dependent coefficients:
//   w'''' + K~3 w''' + K~2 w'' + K~1 w' + K~0 w = t^-1 |W|^(2_**-1) w.
struct NonautonomousSystem {
    NonautonomousCoefficients coeffs;
    int p = 1;
    double power = 0;  // 2_** - 1

    explicit NonautonomousSystem(int n, int p_ = 1);
    void operator()(double t, const double* y, double* dy) const;
};

std::vector<double> nonautonomous_rhs(int n, const CylState& state);

struct Equilibrium {
    bool nontrivial = false;
    double value = 0;  // K0^(1/(s-1)) or 0
    PowerTerm exact;   // 1 * K0^(1/(s-1))
};

Equilibrium equilibrium(const Params& params);

struct Spectrum {
    std::vector<std::complex<double>> roots;
    std::vector<double> poly;  // monic coefficients, lowest degree first
    double max_real() const;
    double backward_error() const;  // max |p(root)| / scale
};

// Roots of a real polynomial (lowest degree first) via companion-matrix
// eigenvalues refined by Newton steps.
Spectrum polynomial_roots(const std::vector<double>& coeffs);

// Roots of P(lambda) - s K0 (the linearisation at the nontrivial equilibrium),
// or of P(lambda) at the zero state when K0 <= 0.
Spectrum linearized_spectrum(const Params& params, int sigma);

std::string trajectory_csv(const Trajectory& traj, const std::string& header_json);

}  // namespace bilap
