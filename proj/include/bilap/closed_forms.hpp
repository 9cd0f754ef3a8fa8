#pragma once

#include "bilap/coefficients.hpp"
#include "bilap/ledger.hpp"
#include "bilap/ode.hpp"
#include "bilap/params.hpp"

#include <array>
#include <functional>
#include <string>
#include <vector>

namespace bilap {

using Point = std::vector<double>;
using Derivs = std::array<double, 5>;  // u, u', u'', u''', u''''

// Radial part of the bi-Laplacian in R^n applied to derivative data at r.
double radial_bilaplacian(int n, double r, const Derivs& d);

// Derivatives up to order four by 8th-order central stencils with one
// Richardson step; the base step is r * eps^(1/9) for the first derivative and
// grows with the order.
Derivs richardson_derivatives(const std::function<double(double)>& f, double r);

struct RadialProfile {
    std::function<double(double)> value;
    std::function<Derivs(double)> exact;  // empty when only differencing is available
    std::string tag;

    bool has_exact() const { return static_cast<bool>(exact); }
    Derivs derivatives(double r) const;
};

// Surface area of the unit sphere in R^n.
double sphere_area(int n);

struct Bubble {
    Point x0;
    double mu = 1;
    int n = 5;
};

double bubble_eval(const Bubble& b, const Point& x);
Derivs bubble_radial_derivs(int n, double mu, double r);
RadialProfile bubble_profile(int n, double mu);

struct BubbleConstant {
    double c = 0;
    std::array<double, 3> samples{};  // ratios at the three radii
    double spread = 0;                // max relative disagreement
};

// Ratio of the bi-Laplacian of the unit bubble to bubble^(2**-1) at three radii.
BubbleConstant measure_bubble_constant(int n);
double bubble_constant(int n);
Rational bubble_constant_closed_form(int n);  // n(n-4)(n^2-4)/16

struct SingularPower {
    std::vector<double> direction;  // unit, nonnegative
    Params params;

    SingularPower(std::vector<double> dir, Params prm);
    double amplitude() const;  // K0^(1/(s-1))
};

std::vector<double> singular_power_eval(const SingularPower& sp, const Point& x);
RadialProfile singular_power_profile(const Params& params);
// |Delta^2 r^-gamma - B(-gamma, 0) r^(-gamma-4)| relative to the largest term.
double power_law_identity_residual(int n, double gamma, double r);
// |Delta^2 u_i - |U|^(s-1) u_i| / ||U|^(s-1) u_i| per nonzero component at radius r.
std::vector<double> singular_power_residuals(const SingularPower& sp, double r);

struct AvilesProfile {
    int n = 5;
    HatVariant variant = HatVariant::Theorem;

    double amplitude() const;  // Khat0^((n-4)/4)
};

double aviles_profile_eval(const AvilesProfile& ap, double r);
RadialProfile aviles_profile(const AvilesProfile& ap);

// u(r) = r^((4-n)/2) v(ln r + T) for a periodic orbit of the critical system
// stored over one period; times outside the stored span are folded back.
// Derivatives come from the interpolated state and the system itself.
RadialProfile emden_fowler_wrapper(const Trajectory& orbit, double T, int n, const Rhs& rhs);

Point inversion_map(const Point& x0, double mu, const Point& x);
std::function<double(const Point&)> kelvin_transform(std::function<double(const Point&)> f, const Point& x0,
                                                     double mu);

// Green function of the Laplacian in the unit ball and its Poisson kernel.
double green_G1(int n, const Point& x, const Point& y);
double green_G1_printed(int n, const Point& x, const Point& y);  // x scaled by |y| in the image term
double poisson_H1(int n, const Point& x, const Point& y);

struct GreenValues {
    double G1 = 0;
    double H1 = 0;
};

// G1(x, y) for interior y and H1(x, z) for z on the unit sphere.
GreenValues green_ball(int n, const Point& x, const Point& y, const Point& z);

// Residual of the radial equation Delta^2 u = rhs(u) at r, relative to |rhs|.
double profile_residual(int n, const RadialProfile& p, double r, const std::function<double(double)>& rhs);

// Log-spaced (r, u, u', u'', u''', u'''') table.
std::string profile_csv(const RadialProfile& p, double r_min, double r_max, int points_per_decade,
                        const std::string& header_json);

Ledger closed_forms_ledger();

}  // namespace bilap
