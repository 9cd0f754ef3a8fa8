#include "bilap/closed_forms.hpp"
#include "bilap/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace bilap;

namespace {

Point random_point(std::mt19937& rng, int n, double radius)
{
    std::normal_distribution<double> g;
    std::uniform_real_distribution<double> u(0.05, 1.0);
    Point x(n);
    double s = 0;
    for (auto& v : x) {
        v = g(rng);
        s += v * v;
    }
    double scale = radius * u(rng) / std::sqrt(s);
    for (auto& v : x) v *= scale;
    return x;
}

double max_rel(const Derivs& a, const Derivs& b)
{
    double scale = 0, worst = 0;
    for (int k = 0; k < 5; ++k) scale = std::max(scale, std::abs(b[k]));
    for (int k = 0; k < 5; ++k) worst = std::max(worst, std::abs(a[k] - b[k]) / scale);
    return worst;
}

}  // namespace

TEST_CASE("sphere areas")
{
    CHECK(sphere_area(2) == doctest::Approx(2 * M_PI).epsilon(1e-15));
    CHECK(sphere_area(3) == doctest::Approx(4 * M_PI).epsilon(1e-15));
    CHECK(sphere_area(5) == doctest::Approx(8 * M_PI * M_PI / 3).epsilon(1e-15));
    CHECK_THROWS_AS(sphere_area(0), DomainError);
}

TEST_CASE("bubble values and constant")
{
    Bubble b{{0.1, 0.2, 0.3, 0.4, 0.5}, 1.7, 5};
    CHECK(bubble_eval(b, b.x0) == doctest::Approx(std::pow(2 * 1.7, 0.5)).epsilon(1e-15));
    Bubble unit{{0, 0, 0, 0, 0}, 1.0, 5};
    CHECK(bubble_eval(unit, {1, 0, 0, 0, 0}) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(bubble_eval(unit, {0.5, 0, 0, 0, 0}) > bubble_eval(unit, {0.6, 0, 0, 0, 0}));

    for (int n = 5; n <= 10; ++n) {
        auto m = measure_bubble_constant(n);
        CHECK(m.spread <= 1e-9);
        double c = bubble_constant(n);
        double closed = to_double(bubble_constant_closed_form(n));
        CHECK(std::abs(c - closed) <= 1e-9 * closed);
        double K0 = to_double(critical_and_lower_values(n).critical.K0);
        double a0 = std::pow(n * (n - 4.0) / (n * n - 4.0), (n - 4) / 8.0);
        CHECK(std::abs(std::pow(K0 / c, (n - 4) / 8.0) - a0) <= 1e-9);

        auto p = bubble_profile(n, 1.0);
        for (double r : {0.3, 1.0, 3.0}) {
            double rhs_power = (n + 4.0) / (n - 4.0);
            CHECK(profile_residual(n, p, r, [&](double u) { return c * std::pow(u, rhs_power); }) <= 1e-9);
        }
    }
    CHECK(bubble_constant_closed_form(5) == Rational(105, 16));
}

TEST_CASE("differencing agrees with exact derivatives")
{
    auto p = bubble_profile(6, 1.3);
    auto fd = richardson_derivatives(p.value, 0.8);
    CHECK(max_rel(fd, p.exact(0.8)) <= 1e-7);
    auto sp = singular_power_profile(Params(5, 7));
    for (double r : {0.1, 1.0, 10.0}) CHECK(max_rel(richardson_derivatives(sp.value, r), sp.exact(r)) <= 1e-7);
}

TEST_CASE("singular power solutions")
{
    SingularPower sp({1.0}, Params(5, 7));
    CHECK(sp.amplitude() == doctest::Approx(std::pow(112.0 / 81, 1.0 / 6)).epsilon(1e-15));
    auto u = singular_power_eval(sp, {1, 0, 0, 0, 0});
    CHECK(u[0] == doctest::Approx(std::pow(112.0 / 81, 1.0 / 6)).epsilon(1e-15));
    for (auto prm : {Params(5, 7), Params(6, Rational(7, 2))}) {
        SingularPower one({1.0}, prm);
        for (double r : {0.1, 1.0, 10.0})
            for (double res : singular_power_residuals(one, r)) CHECK(res <= 1e-10);
        Params two(prm.n, prm.s, 2);
        SingularPower ray({0.6, 0.8}, two);
        auto v = singular_power_eval(ray, {0, 2, 0, 0, 0, 0});
        CHECK(v[1] / v[0] == doctest::Approx(0.8 / 0.6).epsilon(1e-14));
        for (double r : {0.1, 1.0, 10.0}) {
            auto res = singular_power_residuals(ray, r);
            CHECK(res.size() == 2);
            for (double x : res) CHECK(x <= 1e-10);
        }
    }
    CHECK_THROWS_AS(SingularPower({1.0}, Params(5, 3)), DomainError);
    CHECK_THROWS_AS(SingularPower({1.0}, Params(5, 5)), DomainError);
    // K0(6, 2) = 0: the power solution degenerates, while the power-law identity still holds
    CHECK_THROWS_AS(SingularPower({1.0}, Params(6, 2)), DomainError);
    for (double r : {0.1, 1.0, 10.0}) CHECK(power_law_identity_residual(6, 4.0, r) <= 1e-12);
    CHECK_THROWS_AS(SingularPower({0.6, 0.6}, Params(5, 7, 2)), DomainError);
    CHECK_THROWS_AS(SingularPower({-0.6, 0.8}, Params(5, 7, 2)), DomainError);
    CHECK_THROWS_AS(singular_power_residuals(sp, 1e9), DomainError);
}

TEST_CASE("logarithmic profile")
{
    AvilesProfile ap{5, HatVariant::Theorem};
    CHECK(ap.amplitude() == doctest::Approx(std::pow(13.5, 0.25)).epsilon(1e-15));
    CHECK(aviles_profile_eval(ap, std::exp(-1.0)) == doctest::Approx(ap.amplitude() * std::exp(1.0)).epsilon(1e-14));
    CHECK_THROWS_AS(aviles_profile_eval(ap, 1.0), DomainError);
    CHECK_THROWS_AS(aviles_profile_eval(ap, 2.0), DomainError);
    AvilesProfile fl{5, HatVariant::FormulaLimit};
    CHECK(fl.amplitude() == doctest::Approx(std::pow(27.0, 0.25)).epsilon(1e-15));
    // o(r^(4-n)) as r -> 0
    CHECK(aviles_profile_eval(ap, 1e-8) * 1e-8 < aviles_profile_eval(ap, 1e-3) * 1e-3);
}

TEST_CASE("inversion and Kelvin transform")
{
    std::mt19937 rng(7);
    for (int i = 0; i < 100; ++i) {
        int n = 5 + i % 4;
        Point x0 = random_point(rng, n, 2.0), x = random_point(rng, n, 3.0);
        double mu = 0.5 + (i % 5) * 0.3;
        auto y = inversion_map(x0, mu, x);
        auto back = inversion_map(x0, mu, y);
        double d = 0, a = 0, b = 0;
        for (int k = 0; k < n; ++k) {
            d = std::max(d, std::abs(back[k] - x[k]));
            a += (y[k] - x0[k]) * (y[k] - x0[k]);
            b += (x[k] - x0[k]) * (x[k] - x0[k]);
        }
        CHECK(d <= 1e-12 * (1 + std::sqrt(b)));
        CHECK(std::sqrt(a) * std::sqrt(b) == doctest::Approx(mu * mu).epsilon(1e-12));
    }
    CHECK_THROWS_AS(inversion_map({0, 0, 0, 0, 0}, 1.0, {0, 0, 0, 0, 0}), DomainError);

    const int n = 7;
    auto power = [](const Point& x) {
        double s = 0;
        for (double v : x) s += v * v;
        return std::pow(std::sqrt(s), -(n - 4) / 2.0);
    };
    auto k = kelvin_transform(power, Point(n, 0.0), 1.7);
    for (int i = 0; i < 10; ++i) {
        Point x = random_point(rng, n, 4.0);
        CHECK(k(x) == doctest::Approx(power(x)).epsilon(1e-12));
    }
}

TEST_CASE("ball Green function and Poisson kernel")
{
    std::mt19937 rng(11);
    const int n = 5;
    for (int i = 0; i < 50; ++i) {
        Point x = random_point(rng, n, 0.95), y = random_point(rng, n, 0.95);
        double g = green_G1(n, x, y);
        CHECK(g >= 0);
        CHECK(std::abs(g - green_G1(n, y, x)) <= 1e-12 * std::max(1.0, g));
    }
    Point x{0.2, -0.1, 0.3, 0.0, 0.1};
    Point y{0.5, 0.5, 0.5, 0.5, 0.0};
    double ny = 1.0;  // |y| = 1
    Point yin = y;
    for (auto& v : yin) v *= (1 - 1e-10) / ny;
    CHECK(std::abs(green_G1(n, x, yin)) < 1e-7);

    Point zero(n, 0.0);
    CHECK(poisson_H1(n, zero, y) == doctest::Approx(1 / sphere_area(n)).epsilon(1e-15));
    auto gv = green_ball(n, x, {0.1, 0.1, 0.1, 0.1, 0.1}, y);
    CHECK(gv.G1 > 0);
    CHECK(gv.H1 > 0);
    CHECK(std::isfinite(green_G1(n, zero, {0.3, 0, 0, 0, 0})));
    CHECK_THROWS_AS(green_G1(n, x, x), DomainError);
    CHECK_THROWS_AS(poisson_H1(n, x, {0.5, 0, 0, 0, 0}), DomainError);
    CHECK_THROWS_AS(green_G1(n, x, {1.5, 0, 0, 0, 0}), DomainError);

    // the printed image term does not vanish on the boundary
    CHECK(std::abs(green_G1_printed(n, x, yin)) > 1e-3);
}

TEST_CASE("cylinder wrapper of a constant orbit")
{
    const int n = 6;
    auto crit = critical_and_lower_values(n).critical;
    const double c = bubble_constant(n);
    AutonomousSystem sys;
    sys.c.K0 = to_double(crit.K0);
    sys.c.K2 = to_double(crit.K2);
    sys.s = (n + 4.0) / (n - 4.0);
    sys.coupling = c;
    const double a0 = std::pow(n * (n - 4.0) / (n * n - 4.0), (n - 4) / 8.0);
    auto orbit = integrate(sys, 0, {a0, 0, 0, 0}, 5.0);
    auto u = emden_fowler_wrapper(orbit, 0.7, n, sys);
    for (double r : {0.05, 0.5, 3.0, 40.0}) {
        CHECK(u.value(r) == doctest::Approx(a0 * std::pow(r, (4.0 - n) / 2)).epsilon(1e-10));
        auto rhs = [&](double v) { return c * std::pow(v, sys.s); };
        CHECK(profile_residual(n, u, r, rhs) <= 1e-6);
        CHECK(profile_residual(n, RadialProfile{u.value, {}, "fd"}, r, rhs) <= 1e-6);
    }
}

TEST_CASE("profile csv and ledger")
{
    auto csv = profile_csv(bubble_profile(5, 1.0), 0.1, 10, 2, "{}");
    CHECK(csv.rfind("# {}\nr,u,u1,u2,u3,u4\n0.10000000000000001,", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 2 + 5);
    CHECK_THROWS_AS(profile_csv(bubble_profile(5, 1.0), 1, 0.1, 2, "{}"), UsageError);

    auto l = closed_forms_ledger();
    REQUIRE(l.size() == 2);
    CHECK(l[0].verdict == Verdict::Mismatch);
    CHECK(l[1].verdict == Verdict::Mismatch);
}
