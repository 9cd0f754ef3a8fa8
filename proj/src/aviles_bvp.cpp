#include "bilap/aviles_bvp.hpp"

#include "bilap/errors.hpp"

#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>

namespace bilap {

double quasi_equilibrium(int n, double t)
{
    if (n < 5) throw DomainError("n must be at least 5");
    if (!(t > 0)) throw DomainError("quasi-equilibrium needs t > 0");
    const double k = t * NonautonomousCoefficients(n).K(0, t);
    if (!(k > 0)) throw DomainError("t K~0(t) is not positive at t = " + format_double(t));
    return std::pow(k, (n - 4) / 4.0);
}

namespace {

struct Segment {
    Trajectory traj;
    std::array<double, 4> end{};
    std::array<std::array<double, 4>, 4> jac{};  // d end / d start, row-major
    bool ok = true;
    std::string error;
};

// State plus the 4x4 fundamental matrix, stored column by column after it.
class Variational {
public:
    explicit Variational(int n) : sys_(n) {}

    void operator()(double t, const double* y, double* dy) const
    {
        sys_(t, y, dy);
        const auto& c = sys_.coeffs;
        const double w = y[0];
        const double dnl = w != 0 ? (sys_.power + 1) * std::pow(std::abs(w), sys_.power) / t : 0.0;
        const double row[4] = {dnl - c.K(0, t), -c.K(1, t), -c.K(2, t), -c.K(3, t)};
        for (int j = 0; j < 4; ++j) {
            const double* col = y + 4 + 4 * j;
            double* dcol = dy + 4 + 4 * j;
            dcol[0] = col[1];
            dcol[1] = col[2];
            dcol[2] = col[3];
            dcol[3] = row[0] * col[0] + row[1] * col[1] + row[2] * col[2] + row[3] * col[3];
        }
    }

private:
    NonautonomousSystem sys_;
};

// State-only runs keep the trajectory; Jacobian runs integrate the
// variational system and keep only the end map.
Segment run_segment(int n, double a, double b, const std::array<double, 4>& start, const IntegratorOptions& io,
                    bool jacobian)
{
    Segment s;
    try {
        if (jacobian) {
            std::vector<double> y0(20, 0.0);
            for (int i = 0; i < 4; ++i) {
                y0[i] = start[i];
                y0[4 + 5 * i] = 1.0;
            }
            auto tr = integrate(Variational(n), a, y0, b, io);
            if (tr.blow_up || tr.t_back() != b) throw DomainError("escaped");
            const auto& y = tr.y.back();
            for (int i = 0; i < 4; ++i) {
                s.end[i] = y[i];
                for (int j = 0; j < 4; ++j) s.jac[i][j] = y[4 + 4 * j + i];
            }
        } else {
            auto tr = integrate(NonautonomousSystem(n), a, std::vector<double>(start.begin(), start.end()), b, io);
            if (tr.blow_up || tr.t_back() != b) throw DomainError("escaped");
            for (int i = 0; i < 4; ++i) s.end[i] = tr.y.back()[i];
            s.traj = std::move(tr);
        }
    } catch (const std::exception& e) {
        s.ok = false;
        s.error = "segment [" + format_double(a) + ", " + format_double(b) + "]: " + e.what();
    }
    return s;
}

std::vector<Segment> run_all(int n, const std::vector<double>& grid, const std::vector<std::array<double, 4>>& x,
                             const IntegratorOptions& io, bool jacobian, bool parallel)
{
    const long m = static_cast<long>(x.size());
    std::vector<Segment> segs(m);
    if (parallel) {
#pragma omp parallel for schedule(static)
        for (long k = 0; k < m; ++k) segs[k] = run_segment(n, grid[k], grid[k + 1], x[k], io, jacobian);
    } else {
        for (long k = 0; k < m; ++k) segs[k] = run_segment(n, grid[k], grid[k + 1], x[k], io, jacobian);
    }
    return segs;
}

Eigen::VectorXd residual(const std::vector<Segment>& segs, const std::vector<std::array<double, 4>>& x, double w0)
{
    const long m = static_cast<long>(x.size());
    Eigen::VectorXd r(4 * m);
    r[0] = x[0][0] - w0;
    r[1] = x[0][1];
    r[2] = x[0][2];
    for (long k = 0; k + 1 < m; ++k)
        for (int i = 0; i < 4; ++i) r[3 + 4 * k + i] = segs[k].end[i] - x[k + 1][i];
    r[4 * m - 1] = segs[m - 1].end[2];
    return r;
}

}  // namespace

AvilesBvpResult solve_aviles_bvp(int n, const AvilesBvpOptions& opts)
{
    if (n < 5) throw DomainError("n must be at least 5");
    if (!(opts.t0 > 0) || !(opts.t1 > opts.t0)) throw DomainError("need 0 < t0 < t1");
    if (!(opts.segment > 0)) throw DomainError("segment length must be positive");
    const double w0 = opts.w0 != 0 ? opts.w0 : quasi_equilibrium(n, opts.t0);

    const long m = std::max<long>(1, std::lround(std::ceil((opts.t1 - opts.t0) / opts.segment)));
    std::vector<double> grid(m + 1);
    for (long k = 0; k <= m; ++k) grid[k] = opts.t0 + (opts.t1 - opts.t0) * k / m;
    grid[m] = opts.t1;

    std::vector<std::array<double, 4>> x(m);
    for (long k = 0; k < m; ++k) x[k] = {k == 0 ? w0 : quasi_equilibrium(n, grid[k]), 0, 0, 0};

    IntegratorOptions io;
    io.rel_tol = opts.rel_tol;
    io.abs_tol = opts.abs_tol;
    // the Jacobian only steers the chord iteration, so it can be coarse
    IntegratorOptions jo;
    jo.rel_tol = std::max(opts.rel_tol, 1e-7);
    jo.abs_tol = std::max(opts.abs_tol, 1e-9);

    AvilesBvpResult R;
    auto failed = [&](const std::vector<Segment>& segs) {
        for (const auto& s : segs)
            if (!s.ok) {
                R.error = s.error;
                return true;
            }
        return false;
    };
    auto segs = run_all(n, grid, x, io, false, opts.parallel);
    if (failed(segs)) return R;
    Eigen::VectorXd r = residual(segs, x, w0);
    double norm = r.lpNorm<Eigen::Infinity>();
    R.residual_history.push_back(norm);

    const long N = 4 * m;
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    bool fresh = false;
    auto factor = [&]() {
        auto jsegs = run_all(n, grid, x, jo, true, opts.parallel);
        if (failed(jsegs)) return false;
        std::vector<Eigen::Triplet<double>> trip;
        trip.reserve(20 * m);
        trip.emplace_back(0, 0, 1.0);
        trip.emplace_back(1, 1, 1.0);
        trip.emplace_back(2, 2, 1.0);
        for (long k = 0; k + 1 < m; ++k)
            for (int i = 0; i < 4; ++i) {
                const long row = 3 + 4 * k + i;
                for (int j = 0; j < 4; ++j) trip.emplace_back(row, 4 * k + j, jsegs[k].jac[i][j]);
                trip.emplace_back(row, 4 * (k + 1) + i, -1.0);
            }
        for (int j = 0; j < 4; ++j) trip.emplace_back(N - 1, 4 * (m - 1) + j, jsegs[m - 1].jac[2][j]);
        Eigen::SparseMatrix<double> J(N, N);
        J.setFromTriplets(trip.begin(), trip.end());
        lu.compute(J);
        if (lu.info() != Eigen::Success) {
            R.error = "singular shooting Jacobian";
            return false;
        }
        fresh = true;
        return true;
    };
    if (norm > opts.newton_tol && !factor()) return R;

    for (int it = 0; it < opts.max_newton && norm > opts.newton_tol; ++it) {
        Eigen::VectorXd dx = lu.solve(-r);
        double lambda = 1.0;
        bool improved = false;
        for (int half = 0; half < 8; ++half, lambda *= 0.5) {
            auto trial = x;
            for (long k = 0; k < m; ++k)
                for (int i = 0; i < 4; ++i) trial[k][i] += lambda * dx[4 * k + i];
            auto tsegs = run_all(n, grid, trial, io, false, opts.parallel);
            bool ok = std::all_of(tsegs.begin(), tsegs.end(), [](const Segment& s) { return s.ok; });
            if (!ok) continue;
            Eigen::VectorXd tr = residual(tsegs, trial, w0);
            double tn = tr.lpNorm<Eigen::Infinity>();
            if (tn < norm) {
                // a slow contraction means the frozen Jacobian has gone stale
                bool stale = tn > 0.25 * norm;
                x = std::move(trial);
                segs = std::move(tsegs);
                r = tr;
                norm = tn;
                improved = true;
                fresh = false;
                if (stale && norm > opts.newton_tol && !factor()) return R;
                break;
            }
        }
        ++R.iterations;
        R.residual_history.push_back(norm);
        if (!improved) {
            if (fresh) {
                R.error = "Newton stalled at residual " + format_double(norm);
                break;
            }
            if (!factor()) return R;
        }
    }
    R.residual = norm;
    R.converged = norm <= opts.newton_tol;
    if (!R.converged && R.error.empty()) R.error = "Newton did not reach tolerance";

    Trajectory& out = R.traj;
    out = std::move(segs[0].traj);
    for (long k = 1; k < m; ++k) {
        const Trajectory& s = segs[k].traj;
        // the segment start replaces the previous segment's end node
        out.y.back() = s.y.front();
        out.t.insert(out.t.end(), s.t.begin() + 1, s.t.end());
        out.y.insert(out.y.end(), s.y.begin() + 1, s.y.end());
        out.step.insert(out.step.end(), s.step.begin() + 1, s.step.end());
        out.dense.insert(out.dense.end(), s.dense.begin(), s.dense.end());
        out.steps += s.steps;
        out.rejected += s.rejected;
        out.rhs_evals += s.rhs_evals;
    }
    return R;
}

}  // namespace bilap
