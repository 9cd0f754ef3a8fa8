#include "bilap/asymptotics.hpp"
#include "bilap/aviles_bvp.hpp"
#include "bilap/closed_forms.hpp"
#include "bilap/errors.hpp"

#include <doctest.h>

#include <cmath>

using namespace bilap;

namespace {

std::vector<Sample> log_grid(double lo, double hi, int count, const std::function<double(double)>& f)
{
    std::vector<Sample> out;
    for (int i = 0; i < count; ++i) {
        double r = lo * std::pow(hi / lo, static_cast<double>(i) / (count - 1));
        out.emplace_back(r, f(r));
    }
    return out;
}

}  // namespace

TEST_CASE("regime boundaries are exact")
{
    CHECK(classify_regime(Params(5, 3)).regime == Regime::SerrinLions);
    CHECK(classify_regime(Params(5, 5)).regime == Regime::Aviles);
    CHECK(classify_regime(Params(5, 7)).regime == Regime::GidasSpruck);
    CHECK(classify_regime(Params(5, 9)).regime == Regime::Critical);
    CHECK(classify_regime(Params(5, 11)).regime == Regime::Supercritical);
    for (int n = 5; n <= 16; ++n) {
        auto ex = special_exponents(n);
        CHECK(classify_regime(Params(n, ex.lower)).regime == Regime::Aviles);
        CHECK(classify_regime(Params(n, ex.critical())).regime == Regime::Critical);
        Rational tiny(1, 1000000000);
        CHECK(classify_regime(Params(n, ex.lower - tiny)).regime == Regime::SerrinLions);
        CHECK(classify_regime(Params(n, ex.lower + tiny)).regime == Regime::GidasSpruck);
        CHECK(classify_regime(Params(n, ex.critical() - tiny)).regime == Regime::GidasSpruck);
        CHECK(classify_regime(Params(n, ex.critical() + tiny)).regime == Regime::Supercritical);
        CHECK(classify_regime(n, to_double(ex.lower)).regime == Regime::Aviles);
        CHECK(classify_regime(n, to_double(ex.critical())).regime == Regime::Critical);
    }
    auto g = classify_regime(Params(5, 7));
    CHECK(g.exponent == doctest::Approx(2.0 / 3).epsilon(1e-15));
    CHECK(g.amplitude == doctest::Approx(std::pow(112.0 / 81, 1.0 / 6)).epsilon(1e-14));
    CHECK(g.profile == "K0^(1/(s-1)) |x|^(-2/3)");
    auto a = classify_regime(Params(8, 2));
    CHECK(a.log_exponent == -1.0);
    CHECK(a.amplitude == doctest::Approx(144.0).epsilon(1e-14));
    CHECK(classify_regime(6, 4.0).regime == Regime::GidasSpruck);
    CHECK_THROWS_AS(classify_regime(5, 1.0), DomainError);
}

TEST_CASE("power-law fits recover generated profiles")
{
    auto prof = singular_power_profile(Params(5, 7));
    auto f = fit_power_law(log_grid(1e-4, 1, 20, prof.value), Params(5, 7));
    CHECK(std::abs(f.exponent - 2.0 / 3) <= 1e-10);
    REQUIRE(f.predicted_amplitude);
    CHECK(std::abs(f.amplitude - *f.predicted_amplitude) <= 1e-10 * *f.predicted_amplitude);
    CHECK(f.regime == Regime::GidasSpruck);
    CHECK(f.residual >= 0);

    for (int n : {5, 6, 8}) {
        Bubble b{Point(n, 0.0), 1.0, n};
        auto bf = fit_power_law(log_grid(1e2, 1e4, 30, [&](double r) {
                                    Point x(n, 0.0);
                                    x[0] = r;
                                    return bubble_eval(b, x);
                                }));
        CHECK(std::abs(bf.exponent - (n - 4)) <= 0.01 * (n - 4));
    }

    auto c = fit_power_law(log_grid(1e-3, 1, 10, [](double) { return 3.5; }));
    CHECK(std::abs(c.exponent) <= 1e-12);
    CHECK(c.amplitude == doctest::Approx(3.5).epsilon(1e-12));

    CHECK_THROWS_AS(fit_power_law(log_grid(1e-3, 1, 7, [](double) { return 1.0; })), DomainError);
    CHECK_THROWS_AS(fit_power_law(log_grid(1e-1, 1, 10, [](double) { return 1.0; })), DomainError);
    CHECK_THROWS_AS(fit_power_law(log_grid(1e-3, 1, 10, [](double r) { return r - 0.5; })), DomainError);
}

TEST_CASE("log-corrected fit separates the logarithmic law from a pure power")
{
    for (int n : {5, 6, 8}) {
        for (auto v : {HatVariant::Theorem, HatVariant::FormulaLimit}) {
            AvilesProfile ap{n, v};
            auto s = log_grid(1e-12, 1e-3, 24, [&](double r) { return aviles_profile_eval(ap, r); });
            auto f = fit_log_corrected(s, n);
            REQUIRE(f.log_exponent);
            CHECK(std::abs(*f.log_exponent - (4.0 - n) / 4) <= 1e-8);
            CHECK(std::abs(f.amplitude - ap.amplitude()) <= 1e-8 * ap.amplitude());
            CHECK((v == HatVariant::Theorem ? *f.distance_theorem : *f.distance_formula) <= 1e-8);
        }
        auto pure = fit_log_corrected(log_grid(1e-12, 1e-3, 24, [&](double r) { return std::pow(r, 4.0 - n); }), n);
        CHECK(std::abs(*pure.log_exponent) <= 1e-10);
    }

    AvilesProfile ap{5, HatVariant::Theorem};
    auto s = log_grid(1e-8, 1e-3, 30, [&](double r) { return aviles_profile_eval(ap, r); });
    auto power = fit_power_law(s);
    auto logc = fit_log_corrected(s, 5);
    CHECK(std::abs(power.exponent - 1) <= 0.05);
    CHECK(power.residual > 1e4 * logc.residual);

    std::vector<LogSample> deep;
    for (int i = 0; i < 12; ++i) {
        double lr = -100.0 * (i + 1);
        deep.push_back({lr, std::log(ap.amplitude()) - lr - 0.25 * std::log(-lr)});
    }
    auto fd = fit_log_corrected(deep, 5);
    CHECK(*fd.log_exponent == doctest::Approx(-0.25).epsilon(1e-10));

    CHECK_THROWS_AS(fit_log_corrected(log_grid(1e-3, 0.5, 12, [](double) { return 1.0; }), 5), DomainError);
    CHECK_THROWS_AS(fit_log_corrected(log_grid(1e-9, 1e-3, 11, [](double) { return 1.0; }), 5), DomainError);
}

TEST_CASE("nonautonomous trajectory mapped back follows the logarithmic law")
{
    AvilesBvpOptions o;
    o.t0 = 50;
    o.t1 = 5000;
    auto bvp = solve_aviles_bvp(8, o);
    INFO(bvp.error);
    REQUIRE(bvp.converged);
    auto s = nonautonomous_to_radial(8, bvp.traj, 50, 5000, 40);
    auto f = fit_log_corrected(s, 8);
    CHECK(std::abs(*f.log_exponent + 1) <= 0.05);
    // t K~0 tends to the formula limit, so the amplitude lands on that variant
    CHECK(*f.distance_formula <= 0.05);
    CHECK(*f.distance_theorem > 0.5);
    CHECK_THROWS_AS(nonautonomous_to_radial(8, bvp.traj, 10, 100, 5), DomainError);
}

TEST_CASE("residual decay along the constant state")
{
    for (int n : {5, 6, 8}) {
        auto d = residual_decay_check(n);
        CHECK_FALSE(d.exact);
        CHECK(d.rate >= 0.9);
        CHECK(d.rate <= 1.1);
        auto df = residual_decay_check(n, HatVariant::FormulaLimit);
        CHECK(df.rate > 1.5);
    }
    auto z = residual_decay(5, 0.0);
    CHECK(z.exact);
    CHECK(std::isnan(z.rate));
}

TEST_CASE("fit output formats")
{
    auto prof = singular_power_profile(Params(5, 7));
    auto s = log_grid(1e-4, 1, 10, prof.value);
    auto f = fit_power_law(s, Params(5, 7));
    auto j = to_json(f);
    CHECK(j["regime"] == "GIDAS_SPRUCK");
    CHECK(j["log_exponent"].is_null());
    auto csv = fit_csv(s, f, "{}");
    CHECK(csv.rfind("# {}\nr,value,model,rel_deviation\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 12);
    CHECK(to_json(classify_regime(Params(5, 5)))["regime"] == "AVILES");
}
