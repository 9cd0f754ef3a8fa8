#include "bilap/closed_forms.hpp"
#include "bilap/delaunay.hpp"
#include "bilap/errors.hpp"
#include "bilap/pohozaev.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <fstream>

using namespace bilap;

TEST_CASE("critical constants")
{
    for (int n = 5; n <= 10; ++n) {
        auto cc = critical_constants(n);
        double closed = std::pow(n * (n - 4.0) / (n * n - 4.0), (n - 4) / 8.0);
        CHECK(std::abs(cc.a0 - closed) <= 1e-10);
        auto d = critical_rhs(cc, {cc.a0, 0, 0, 0});
        for (double x : d.d) CHECK(std::abs(x) <= 1e-13 * cc.K0 * cc.a0);
        CHECK_FALSE(d.left_cone);

        auto u = critical_constants(n, CMode::Unit);
        CHECK(u.c == 1.0);
        CHECK(u.a0 == doctest::Approx(std::pow(u.K0, (n - 4) / 8.0)).epsilon(1e-15));
    }
    auto cc = critical_constants(5);
    // zero state: linear part only, no odd-order terms
    auto z = critical_rhs(cc, {0, 0.5, 0.25, 1.0});
    CHECK(z.d[0] == 0.5);
    CHECK(z.d[1] == 0.25);
    CHECK(z.d[2] == 1.0);
    CHECK(z.d[3] == doctest::Approx(-cc.K2 * 0.25).epsilon(1e-15));
    CHECK(critical_rhs(cc, {-0.1, 0, 0, 0}).left_cone);
    CHECK_THROWS_AS(critical_constants(4), DomainError);
    CHECK(parse_c_mode("unit") == CMode::Unit);
    CHECK_THROWS_AS(parse_c_mode("other"), UsageError);
}

TEST_CASE("linearized period")
{
    // lambda^4 + K2 lambda^2 + K0 (1 - p) at n = 5: K2 = -13/2, K0 = 25/16, p = 9
    double K2 = -6.5, c0 = 25.0 / 16 * (1 - 9);
    double mu2 = (-K2 - std::sqrt(K2 * K2 - 4 * c0)) / 2;
    CHECK(linearized_period(5) == doctest::Approx(2 * M_PI / std::sqrt(-mu2)).epsilon(1e-12));
}

TEST_CASE("shooting converges on Delaunay orbits")
{
    for (int n : {5, 6}) {
        auto cc = critical_constants(n);
        for (double f : {0.3, 0.9}) {
            auto r = find_b(n, f * cc.a0);
            INFO("n = " << n << ", a/a0 = " << f << ": " << r.error);
            REQUIRE(r.converged);
            CHECK(r.residual <= 1e-9);
            CHECK(r.periodicity_defect <= 1e-6);
            CHECK(r.energy_drift <= 1e-8);
            CHECK(std::abs(r.min_v - r.a) <= 1e-6);
            CHECK(r.symmetry_defect <= 1e-7);
            CHECK(r.b > 0);
            CHECK(r.orbit.t_front() == 0.0);
            CHECK(r.orbit.t_back() == doctest::Approx(r.T).epsilon(1e-15));
            // the stored orbit closes up and keeps the energy level
            auto sys = critical_system(cc);
            auto yT = r.orbit.y.back();
            CHECK(std::abs(yT[0] - r.a) <= 1e-6);
            CHECK(std::abs(yT[2] - r.b) <= 1e-6);
            CHECK(std::abs(system_hamiltonian(sys, yT.data()) - r.energy) <= 1e-8 * (1 + std::abs(r.energy)));
        }
        auto near = find_b(n, 0.999 * cc.a0);
        REQUIRE(near.converged);
        CHECK(std::abs(near.T - linearized_period(n)) <= 0.02 * linearized_period(n));
        auto eq = find_b(n, cc.a0);
        CHECK(eq.converged);
        CHECK(eq.b == 0.0);
        CHECK(eq.residual == 0.0);
        CHECK(eq.T == linearized_period(n));
    }
    CHECK_THROWS_AS(find_b(5, 1.1 * critical_constants(5).a0), DomainError);
    CHECK_THROWS_AS(find_b(5, 0.0), DomainError);
}

TEST_CASE("shooting function sides")
{
    auto cc = critical_constants(5);
    const double a = 0.5 * cc.a0;
    auto small = shooting_function(cc, a, 1e-4);
    CHECK(small.event);
    CHECK(small.side == -1);
    auto large = shooting_function(cc, a, 10 * cc.K0 * cc.a0);
    CHECK(large.side == 1);
}

TEST_CASE("orbit wrapper solves the critical equation")
{
    const int n = 5;
    auto cc = critical_constants(n);
    auto r = find_b(n, 0.5 * cc.a0);
    REQUIRE(r.converged);
    auto u = emden_fowler_wrapper(r.orbit, 0.3, n, critical_system(cc));
    auto rhs = [&](double v) { return cc.c * std::pow(v, cc.power); };
    for (double rr : {0.01, 0.2, 1.0, 7.0, 300.0}) CHECK(profile_residual(n, u, rr, rhs) <= 1e-6);
}

TEST_CASE("orbit table and fixtures")
{
    const int n = 5;
    auto cc = critical_constants(n);
    std::vector<double> grid{0.2 * cc.a0, 0.5 * cc.a0, 0.8 * cc.a0, 0.5 * cc.a0};
    auto par = orbit_table(n, grid);
    auto ser = orbit_table_serial(n, grid);
    REQUIRE(par.size() == 4);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(par[i].converged);
        CHECK(par[i].residual <= 1e-9);
        CHECK(par[i].b == ser[i].b);
        CHECK(par[i].T == ser[i].T);
    }
    CHECK(par[1].b == par[3].b);
    CHECK(par[0].T > par[1].T);
    CHECK(par[1].T > par[2].T);
    CHECK_THROWS_AS(orbit_table(n, {2 * cc.a0}), DomainError);

    std::ifstream in(std::string(BILAP_FIXTURE_DIR) + "/delaunay_orbits.json");
    REQUIRE(in);
    auto j = nlohmann::json::parse(in);
    for (const auto& o : j["orbits"]) {
        if (o["n"] != n) continue;
        double f = o["a_over_a0"];
        int k = f < 0.3 ? 0 : (f < 0.6 ? 1 : 2);
        CHECK(std::abs(par[k].b - o["b"].get<double>()) <= 1e-9 * o["b"].get<double>());
        CHECK(std::abs(par[k].T - o["T"].get<double>()) <= 1e-9 * o["T"].get<double>());
    }

    auto csv = orbit_table_csv(par, "{}");
    CHECK(csv.rfind("# {}\nn,a,b,T,energy,residual,", 0) == 0);

    auto l = delaunay_ledger();
    REQUIRE(l.size() == 1);
    CHECK(l[0].verdict == Verdict::Match);
}
