#include "bilap/aviles_bvp.hpp"
#include "bilap/coefficients.hpp"
#include "bilap/errors.hpp"
#include "bilap/pohozaev.hpp"

#include <doctest.h>

#include <cmath>

using namespace bilap;

TEST_CASE("quasi-equilibrium")
{
    // t K~0 -> formula limit, 27 at n = 5 and 288 at n = 8
    CHECK(quasi_equilibrium(5, 1e7) == doctest::Approx(std::pow(27.0, 0.25)).epsilon(1e-5));
    CHECK(quasi_equilibrium(8, 1e7) == doctest::Approx(288.0).epsilon(1e-5));
    CHECK_THROWS_AS(quasi_equilibrium(4, 10), DomainError);
    CHECK_THROWS_AS(quasi_equilibrium(5, 0), DomainError);
}

TEST_CASE("lower-critical boundary value problem")
{
    for (int n : {5, 8}) {
        AvilesBvpOptions o;
        o.t1 = 600;
        auto r = solve_aviles_bvp(n, o);
        INFO("n = " << n << ": " << r.error);
        REQUIRE(r.converged);
        CHECK(r.residual <= o.newton_tol);
        CHECK(r.traj.t_front() == o.t0);
        CHECK(r.traj.t_back() == o.t1);
        auto y0 = r.traj.y.front();
        CHECK(y0[0] == doctest::Approx(quasi_equilibrium(n, o.t0)).epsilon(1e-12));
        CHECK(std::abs(y0[1]) <= 1e-10);
        CHECK(std::abs(y0[2]) <= 1e-10);
        CHECK(std::abs(r.traj.y.back()[2]) <= 1e-8);
        // the solution hugs the quasi-equilibrium away from the ends
        for (double t : {100.0, 300.0, 500.0})
            CHECK(std::abs(r.traj.eval(t, 0) / quasi_equilibrium(n, t) - 1) <= 1e-3);

        auto m = monotonicity_check_aviles(n, r.traj);
        CHECK(m.verdict == m.expected);
        CHECK(m.verdict == (n < 8 ? Monotonicity::Nonincreasing : Monotonicity::Nondecreasing));
    }
}

TEST_CASE("boundary value solve is identical serial and parallel")
{
    AvilesBvpOptions o;
    o.t1 = 150;
    auto par = solve_aviles_bvp(6, o);
    o.parallel = false;
    auto ser = solve_aviles_bvp(6, o);
    REQUIRE(par.converged);
    REQUIRE(ser.converged);
    REQUIRE(par.traj.size() == ser.traj.size());
    CHECK(par.traj.y.back() == ser.traj.y.back());
    CHECK(par.residual_history == ser.residual_history);

    o.t1 = 40;
    CHECK_THROWS_AS(solve_aviles_bvp(6, o), DomainError);
}
