#pragma once

#include "bilap/ode.hpp"

#include <string>
#include <vector>

namespace bilap {

// (t K~0(t))^((n-4)/4): the constant state balancing the linear zeroth-order
// term against the nonlinearity at time t.
double quasi_equilibrium(int n, double t);

// Bounded solution of the scalar nonautonomous system on [t0, t1] with
// w(t0) = w0, w'(t0) = w''(t0) = 0 and w''(t1) = 0. The last condition
// suppresses the growing mode, which makes a forward initial-value solve
// useless over long spans.
struct AvilesBvpOptions {
    double t0 = 50;
    double t1 = 2000;
    double segment = 2.5;  // multiple-shooting segment length
    double w0 = 0;         // 0 selects quasi_equilibrium(n, t0)
    double rel_tol = 1e-11;
    double abs_tol = 1e-13;
    int max_newton = 20;
    double newton_tol = 1e-10;  // max-norm of the matching residual
    bool parallel = true;
};

struct AvilesBvpResult {
    Trajectory traj;
    std::vector<double> residual_history;
    int iterations = 0;
    double residual = 0;
    bool converged = false;
    std::string error;
};

AvilesBvpResult solve_aviles_bvp(int n, const AvilesBvpOptions& opts = {});

}  // namespace bilap
