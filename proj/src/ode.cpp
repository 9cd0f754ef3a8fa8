#include "bilap/ode.hpp"

#include "bilap/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace bilap {

namespace {

constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784, a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200, e6 = 22.0 / 525,
                 e7 = -1.0 / 40;
constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                 d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                 d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

bool all_finite(const std::vector<double>& v)
{
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

class Stepper {
public:
    Stepper(const Rhs& f, std::size_t dim) : f_(f), n_(dim)
    {
        for (auto* v : {&k2, &k3, &k4, &k5, &k6, &k7, &ytmp, &y1, &err}) v->assign(dim, 0.0);
    }

    // One trial step from (t, y) with k1 = f(t, y). Returns false when a stage
    // leaves the finite range.
    bool step(double t, const std::vector<double>& y, const std::vector<double>& k1, double h)
    {
        auto stage = [&](std::vector<double>& out, double tc, auto&& combo) {
            for (std::size_t i = 0; i < n_; ++i) ytmp[i] = y[i] + h * combo(i);
            if (!all_finite(ytmp)) return false;
            f_(t + tc * h, ytmp.data(), out.data());
            ++evals;
            return all_finite(out);
        };
        if (!stage(k2, c2, [&](std::size_t i) { return a21 * k1[i]; })) return false;
        if (!stage(k3, c3, [&](std::size_t i) { return a31 * k1[i] + a32 * k2[i]; })) return false;
        if (!stage(k4, c4, [&](std::size_t i) { return a41 * k1[i] + a42 * k2[i] + a43 * k3[i]; })) return false;
        if (!stage(k5, c5, [&](std::size_t i) { return a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]; }))
            return false;
        if (!stage(k6, 1.0, [&](std::size_t i) {
                return a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i];
            }))
            return false;
        for (std::size_t i = 0; i < n_; ++i)
            y1[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
        if (!all_finite(y1)) return false;
        f_(t + h, y1.data(), k7.data());
        ++evals;
        if (!all_finite(k7)) return false;
        for (std::size_t i = 0; i < n_; ++i)
            err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
        return true;
    }

    double error_norm(const std::vector<double>& y, double rtol, double atol) const
    {
        double acc = 0;
        for (std::size_t i = 0; i < n_; ++i) {
            double sk = atol + rtol * std::max(std::abs(y[i]), std::abs(y1[i]));
            double q = err[i] / sk;
            acc += q * q;
        }
        return std::sqrt(acc / static_cast<double>(n_));
    }

    DenseStep dense(double t, const std::vector<double>& y, const std::vector<double>& k1, double h) const
    {
        DenseStep d;
        d.t0 = t;
        d.h = h;
        d.r.resize(5 * n_);
        for (std::size_t i = 0; i < n_; ++i) {
            double ydiff = y1[i] - y[i];
            double bspl = h * k1[i] - ydiff;
            d.r[i] = y[i];
            d.r[n_ + i] = ydiff;
            d.r[2 * n_ + i] = bspl;
            d.r[3 * n_ + i] = ydiff - h * k7[i] - bspl;
            d.r[4 * n_ + i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
        }
        return d;
    }

    std::vector<double> k2, k3, k4, k5, k6, k7, ytmp, y1, err;
    long evals = 0;

private:
    const Rhs& f_;
    std::size_t n_;
};

double rms_scaled(const std::vector<double>& v, const std::vector<double>& y, double rtol, double atol)
{
    double acc = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        double q = v[i] / (atol + rtol * std::abs(y[i]));
        acc += q * q;
    }
    return std::sqrt(acc / static_cast<double>(v.size()));
}

bool crossed(double ga, double gb, int direction)
{
    if (direction > 0) return ga < 0 && gb >= 0;
    if (direction < 0) return ga > 0 && gb <= 0;
    return (ga < 0 && gb >= 0) || (ga > 0 && gb <= 0);
}

}  // namespace

void DenseStep::eval(double t, double* out, std::size_t dim) const
{
    const double th = (t - t0) / h, th1 = 1.0 - th;
    for (std::size_t i = 0; i < dim; ++i)
        out[i] = r[i] + th * (r[dim + i] + th1 * (r[2 * dim + i] + th * (r[3 * dim + i] + th1 * r[4 * dim + i])));
}

std::vector<double> Trajectory::eval(double tq) const
{
    if (t.empty()) throw DomainError("empty trajectory");
    const double span = std::max(std::abs(t.back() - t.front()), 1e-300);
    if (tq < t.front() - 1e-12 * span || tq > t.back() + 1e-12 * span)
        throw DomainError("time " + format_double(tq) + " outside trajectory span");
    auto it = std::lower_bound(t.begin(), t.end(), tq);
    if (it != t.end() && *it == tq) return y[static_cast<std::size_t>(it - t.begin())];
    if (dense.empty()) return y.front();
    auto d = std::upper_bound(dense.begin(), dense.end(), tq,
                              [](double v, const DenseStep& s) { return v < s.t_lo(); });
    if (d != dense.begin()) --d;
    std::vector<double> out(dim);
    d->eval(tq, out.data(), dim);
    return out;
}

double Trajectory::eval(double tq, std::size_t component) const { return eval(tq).at(component); }

Trajectory integrate(const Rhs& f, double t0, const std::vector<double>& y0, double t1, const IntegratorOptions& opts,
                     const EventSpec* event)
{
    if (!(opts.rel_tol > 0) || !(opts.abs_tol > 0)) throw DomainError("tolerances must be positive");
    if (t1 == t0) throw DomainError("integration span is empty");
    if (!all_finite(y0)) throw DomainError("initial state is not finite");
    const std::size_t n = y0.size();
    const double dir = t1 > t0 ? 1.0 : -1.0;
    const double span = std::abs(t1 - t0);

    Trajectory tr;
    tr.dim = n;
    tr.rel_tol = opts.rel_tol;
    tr.abs_tol = opts.abs_tol;
    tr.t.push_back(t0);
    tr.y.push_back(y0);
    tr.step.push_back(0.0);

    Stepper st(f, n);
    std::vector<double> y = y0, k1(n);
    f(t0, y.data(), k1.data());
    long evals = 1;
    if (!all_finite(k1)) throw DomainError("right-hand side is not finite at the initial state");

    auto finish = [&]() {
        tr.rhs_evals = evals + st.evals;
        if (dir < 0) {
            std::reverse(tr.t.begin(), tr.t.end());
            std::reverse(tr.y.begin(), tr.y.end());
            std::reverse(tr.step.begin(), tr.step.end());
            std::reverse(tr.dense.begin(), tr.dense.end());
        }
    };

    double h;
    if (opts.h_init > 0) {
        h = opts.h_init;
    } else {
        double dn0 = rms_scaled(y, y, opts.rel_tol, opts.abs_tol);
        double dn1 = rms_scaled(k1, y, opts.rel_tol, opts.abs_tol);
        double h0 = (dn0 < 1e-5 || dn1 < 1e-5) ? 1e-6 : 0.01 * dn0 / dn1;
        h0 = std::min(h0, span);
        std::vector<double> ye(n), fe(n), diff(n);
        for (std::size_t i = 0; i < n; ++i) ye[i] = y[i] + dir * h0 * k1[i];
        f(t0 + dir * h0, ye.data(), fe.data());
        ++evals;
        for (std::size_t i = 0; i < n; ++i) diff[i] = fe[i] - k1[i];
        double dn2 = all_finite(fe) ? rms_scaled(diff, y, opts.rel_tol, opts.abs_tol) / h0 : 1e10;
        double m = std::max(dn1, dn2);
        double h1 = m <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / m, 0.2);
        h = std::min({100 * h0, h1, span});
    }
    h = std::min(h, opts.h_max) * dir;

    const double safe = 0.9, facc1 = 1.0 / 0.2, facc2 = 1.0 / 10.0, beta = 0.04;
    const double expo1 = 0.2 - beta * 0.75;
    double facold = 1e-4;
    bool last_rejected = false;
    double t = t0;
    double g_prev = event ? event->g(t0, y0.data()) : 0.0;

    for (;;) {
        if (tr.steps + tr.rejected >= opts.max_steps) {
            finish();
            throw StepUnderflowError("step budget exhausted at t = " + format_double(t), tr);
        }
        bool last = false;
        if (dir * (t + h - t1) >= 0) {
            h = t1 - t;
            last = true;
        }
        if (std::abs(h) < 1e-14 * span) {
            finish();
            throw StepUnderflowError("step size underflow at t = " + format_double(t), tr);
        }
        bool ok = st.step(t, y, k1, h);
        double err = ok ? st.error_norm(y, opts.rel_tol, opts.abs_tol) : INFINITY;
        if (!ok || !std::isfinite(err)) {
            ++tr.rejected;
            h *= 0.25;
            last_rejected = true;
            continue;
        }
        double fac11 = std::pow(err, expo1);
        if (err > 1.0) {
            ++tr.rejected;
            h /= std::min(facc1, fac11 / safe);
            last_rejected = true;
            continue;
        }

        // accepted
        double fac = fac11 / std::pow(facold, beta);
        fac = std::max(facc2, std::min(facc1, fac / safe));
        double hnew = h / fac;
        facold = std::max(err, 1e-4);
        if (last_rejected) hnew = dir * std::min(std::abs(hnew), std::abs(h));
        last_rejected = false;
        ++tr.steps;

        double t_new = last ? t1 : t + h;
        DenseStep d = st.dense(t, y, k1, h);
        std::vector<double> y_new = st.y1;
        std::vector<double> k_new = st.k7;

        if (event) {
            double g_new = event->g(t_new, y_new.data());
            if (crossed(g_prev, g_new, event->direction)) {
                // Illinois iteration on theta with exact sub-steps from (t, y).
                double ta = 0, tb = 1, ga = g_prev, gb = g_new;
                int side = 0;
                double theta = 1;
                for (int it = 0; it < 100 && (tb - ta) * std::abs(h) > 1e-15 * (1 + std::abs(t)); ++it) {
                    theta = (ta * gb - tb * ga) / (gb - ga);
                    if (!(theta > ta && theta < tb)) theta = 0.5 * (ta + tb);
                    st.step(t, y, k1, theta * h);
                    double gm = event->g(t + theta * h, st.y1.data());
                    if (gm == 0) {
                        ta = tb = theta;
                        break;
                    }
                    if ((gm > 0) == (gb > 0)) {
                        tb = theta;
                        gb = gm;
                        if (side == -1) ga *= 0.5;
                        side = -1;
                    } else {
                        ta = theta;
                        ga = gm;
                        if (side == 1) gb *= 0.5;
                        side = 1;
                    }
                }
                theta = tb;
                st.step(t, y, k1, theta * h);
                t_new = t + theta * h;
                d = st.dense(t, y, k1, theta * h);
                y_new = st.y1;
                k_new = st.k7;
                tr.event_hit = true;
                tr.event_t = t_new;
                last = true;
            }
            g_prev = g_new;
        }

        tr.dense.push_back(std::move(d));
        tr.t.push_back(t_new);
        tr.y.push_back(y_new);
        tr.step.push_back(std::abs(t_new - t));
        t = t_new;
        y = std::move(y_new);
        k1 = std::move(k_new);

        bool blew = false;
        for (double v : y)
            if (std::abs(v) > opts.guard) blew = true;
        if (blew) {
            tr.blow_up = true;
            break;
        }
        if (last) break;
        h = dir * std::min(std::abs(hnew), opts.h_max);
    }
    finish();
    return tr;
}

void AutonomousSystem::operator()(double /*t*/, const double* y, double* dy) const
{
    double norm2 = 0;
    for (int i = 0; i < p; ++i) norm2 += y[4 * i] * y[4 * i];
    // the zeroth-order terms are grouped so that a floating equilibrium is an exact fixed point
    const double factor = norm2 > 0 ? coupling * std::pow(std::sqrt(norm2), s - 1) : 0.0;
    for (int i = 0; i < p; ++i) {
        const double* v = y + 4 * i;
        double* d = dy + 4 * i;
        d[0] = v[1];
        d[1] = v[2];
        d[2] = v[3];
        d[3] = (factor - c.K0) * v[0] - c.K3 * v[3] - c.K2 * v[2] - c.K1 * v[1];
    }
}

AutonomousSystem autonomous_system(const Params& params, int sigma)
{
    params.validate();
    AutonomousSystem sys;
    sys.c = to_double(oracle_coeffs(params, sigma));
    sys.s = params.s_value();
    sys.p = params.p;
    return sys;
}

namespace {
void check_state(const CylState& state, int p)
{
    if (state.y.size() != static_cast<std::size_t>(4 * p))
        throw DomainError("state has " + std::to_string(state.y.size()) + " entries, expected " +
                          std::to_string(4 * p));
    if (!all_finite(state.y)) throw DomainError("state is not finite");
}
}  // namespace

std::vector<double> autonomous_rhs(const Params& params, int sigma, const CylState& state)
{
    check_state(state, params.p);
    auto sys = autonomous_system(params, sigma);
    std::vector<double> dy(state.y.size());
    sys(state.t, state.y.data(), dy.data());
    return dy;
}

NonautonomousSystem::NonautonomousSystem(int n, int p_) : coeffs(n), p(p_), power(4.0 / (n - 4)) {}

void NonautonomousSystem::operator()(double t, const double* y, double* dy) const
{
    if (!(t > 0)) throw DomainError("nonautonomous system needs t > 0, got " + format_double(t));
    const double K0 = coeffs.K(0, t), K1 = coeffs.K(1, t), K2 = coeffs.K(2, t), K3 = coeffs.K(3, t);
    double norm2 = 0;
    for (int i = 0; i < p; ++i) norm2 += y[4 * i] * y[4 * i];
    const double factor = norm2 > 0 ? std::pow(norm2, 0.5 * power) / t : 0.0;
    for (int i = 0; i < p; ++i) {
        const double* w = y + 4 * i;
        double* d = dy + 4 * i;
        d[0] = w[1];
        d[1] = w[2];
        d[2] = w[3];
        d[3] = factor * w[0] - K3 * w[3] - K2 * w[2] - K1 * w[1] - K0 * w[0];
    }
}

std::vector<double> nonautonomous_rhs(int n, const CylState& state)
{
    int p = static_cast<int>(state.y.size() / 4);
    if (p < 1) throw DomainError("empty state");
    check_state(state, p);
    NonautonomousSystem sys(n, p);
    std::vector<double> dy(state.y.size());
    sys(state.t, state.y.data(), dy.data());
    return dy;
}

Equilibrium equilibrium(const Params& params)
{
    params.validate();
    Rational K0 = oracle_coeffs(params, 1).K0;
    Equilibrium e;
    if (K0 <= 0) return e;
    e.nontrivial = true;
    e.exact = {1, K0, 1 / (params.s - 1)};
    e.value = e.exact.value();
    // pick the neighbouring double whose power reproduces K0 best
    const double k0 = to_double(K0), sm1 = params.s_value() - 1;
    double best = e.value, best_err = std::abs(std::pow(best, sm1) - k0);
    double lo = e.value, hi = e.value;
    for (int k = 0; k < 8 && best_err > 0; ++k) {
        lo = std::nextafter(lo, 0.0);
        hi = std::nextafter(hi, INFINITY);
        for (double c : {lo, hi}) {
            double err = std::abs(std::pow(c, sm1) - k0);
            if (err < best_err) {
                best = c;
                best_err = err;
            }
        }
    }
    e.value = best;
    return e;
}

double Spectrum::max_real() const
{
    double m = -INFINITY;
    for (auto z : roots) m = std::max(m, z.real());
    return m;
}

namespace {
std::complex<double> horner(const std::vector<double>& c, std::complex<double> z, std::complex<double>* deriv)
{
    std::complex<double> p = 0, dp = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
        dp = dp * z + p;
        p = p * z + *it;
    }
    if (deriv) *deriv = dp;
    return p;
}
}  // namespace

double Spectrum::backward_error() const
{
    double worst = 0;
    for (auto z : roots) {
        double scale = 0, zk = 1;
        for (double a : poly) {
            scale += std::abs(a) * zk;
            zk *= std::abs(z);
        }
        worst = std::max(worst, std::abs(horner(poly, z, nullptr)) / scale);
    }
    return worst;
}

Spectrum polynomial_roots(const std::vector<double>& coeffs)
{
    std::vector<double> c = coeffs;
    while (!c.empty() && c.back() == 0) c.pop_back();
    if (c.size() < 2) throw DomainError("polynomial has no roots");
    const double lead = c.back();
    for (auto& x : c) x /= lead;
    const int d = static_cast<int>(c.size()) - 1;
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(d, d);
    for (int i = 1; i < d; ++i) C(i, i - 1) = 1.0;
    for (int i = 0; i < d; ++i) C(i, d - 1) = -c[i];
    Eigen::EigenSolver<Eigen::MatrixXd> es(C, false);
    Spectrum sp;
    sp.poly = c;
    for (int i = 0; i < d; ++i) {
        std::complex<double> z = es.eigenvalues()[i];
        for (int it = 0; it < 5; ++it) {
            std::complex<double> dp;
            std::complex<double> p = horner(c, z, &dp);
            if (std::abs(dp) == 0) break;
            std::complex<double> znew = z - p / dp;
            if (std::abs(horner(c, znew, nullptr)) >= std::abs(p)) break;
            z = znew;
        }
        if (std::abs(z.imag()) < 1e-14 * std::max(1.0, std::abs(z))) z = {z.real(), 0.0};
        sp.roots.push_back(z);
    }
    std::sort(sp.roots.begin(), sp.roots.end(), [](auto a, auto b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    return sp;
}

Spectrum linearized_spectrum(const Params& params, int sigma)
{
    auto c = to_double(oracle_coeffs(params, sigma));
    double k0 = c.K0 > 0 ? c.K0 - params.s_value() * c.K0 : c.K0;
    return polynomial_roots({k0, c.K1, c.K2, c.K3, 1.0});
}

std::string trajectory_csv(const Trajectory& traj, const std::string& header_json)
{
    std::ostringstream os;
    os << "# " << header_json << "\n";
    os << "t";
    for (std::size_t i = 0; i < traj.dim; ++i) {
        os << ",v" << (i / 4 + 1);
        if (i % 4) os << "_" << (i % 4);
    }
    os << ",h\n";
    for (std::size_t k = 0; k < traj.size(); ++k) {
        os << format_double(traj.t[k]);
        for (double v : traj.y[k]) os << "," << format_double(v);
        os << "," << format_double(traj.step[k]) << "\n";
    }
    return os.str();
}

}  // namespace bilap
