#include "bilap/verify.hpp"

#include "bilap/asymptotics.hpp"
#include "bilap/aviles_bvp.hpp"
#include "bilap/closed_forms.hpp"
#include "bilap/coefficients.hpp"
#include "bilap/errors.hpp"
#include "bilap/pohozaev.hpp"
#include "bilap/sweeps.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace bilap {

const char* to_string(CheckStatus s)
{
    switch (s) {
    case CheckStatus::Pass: return "PASS";
    case CheckStatus::Fail: return "FAIL";
    case CheckStatus::Documented: return "DOCUMENTED_MISMATCH";
    }
    return "?";
}

bool VerifyReport::ok() const
{
    return std::none_of(checks.begin(), checks.end(), [](const Check& c) { return c.status == CheckStatus::Fail; });
}

nlohmann::ordered_json VerifyReport::results_json() const
{
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for (const auto& c : checks)
        j.push_back({{"suite", c.suite}, {"check", c.name}, {"status", to_string(c.status)}, {"detail", c.detail}});
    return j;
}

const char* build_id() { return BILAP_BUILD_ID; }

const std::vector<std::string>& verify_suites()
{
    static const std::vector<std::string> names{"coefficients", "closed_forms", "pohozaev", "shooting", "asymptotics",
                                                "ledger"};
    return names;
}

const std::vector<KnownDiscrepancy>& documented_discrepancies()
{
    static const std::vector<KnownDiscrepancy> known{
        {"J1(n,s)", "printed J1 is not the symbol coefficient under either orientation"},
        {"J40(n,s)", "assembly-list J40 disagrees with the main-text J0"},
        {"K1_*", "quoted lower-critical K1 value differs from the symbol"},
        {"K3_*", "quoted lower-critical K3 carries the opposite orientation"},
        {"J1_*", "quoted lower-critical J1 carries the opposite orientation"},
        {"Khat0(n)", "factor 2 between the asymptotic constant and lim t K~0"},
        {"Ktilde0(n,t)", "printed K~0 differs from the chain-rule assembly"},
        {"Ktilde1(n,t)", "printed K~1 differs from the chain-rule assembly"},
        {"Ktilde3(n,t)", "printed K~3 differs from the chain-rule assembly"},
        {"K20(n,s)", "second-order list entry has the wrong sign"},
        {"K21(n,s)", "second-order list entry is not the symbol coefficient"},
        {"K21_*", "quoted second-order lower-critical value carries the opposite orientation"},
        {"N41,N43", "weights attached to swapped powers of r"},
        {"c42", "printed chain-rule entry differs from the derivative decomposition"},
        {"c10 (second order)", "entry reads rho where rho' is needed"},
        {"G1(x,y)", "image term scales the wrong point, so G1 does not vanish on the sphere"},
        {"W(r)", "change of variables written with the weight on the wrong side"},
        {"p3(n,t)", "printed weight differs from its bracket definition"},
        {"p2(n,t)", "printed weight differs from its bracket definition"},
        {"p1(n,t)", "printed weight carries a spurious t^0 term"},
        {"p0(n,t)", "printed weight has the wrong sign on the t^-3 term"},
        {"p3 definition", "bracket definition drops the factor t on K~3'"},
        {"l*(n)", "printed lower-critical level does not follow from Khat0"},
        {"P~cyl(infinity)", "limiting level has the opposite sign to the Hamiltonian limit"},
    };
    return known;
}

Ledger full_ledger(int sigma)
{
    Ledger all = coefficient_ledger(sigma);
    for (auto part : {closed_forms_ledger(), pohozaev_ledger(), delaunay_ledger()})
        all.insert(all.end(), part.begin(), part.end());
    return all;
}

namespace {

struct Suite {
    const VerifyConfig& cfg;
    int sigma;
    std::string name;
    std::vector<Check>& out;

    void add(const std::string& check, bool ok, const std::string& detail = {})
    {
        out.push_back({name, check, ok ? CheckStatus::Pass : CheckStatus::Fail, detail});
    }

    // Runs body and turns an exception into a failed check.
    template <class F>
    void guarded(const std::string& check, F&& body)
    {
        try {
            body();
        } catch (const std::exception& e) {
            add(check, false, std::string("exception: ") + e.what());
        }
    }

    std::vector<int> dims(int lo, int hi) const
    {
        if (cfg.n) return {*cfg.n};
        std::vector<int> v;
        for (int n = lo; n <= hi; ++n) v.push_back(n);
        return v;
    }
};

std::string rel(double got, double want)
{
    std::ostringstream os;
    os << "got " << format_double(got) << ", want " << format_double(want);
    return os.str();
}

void coefficients_suite(Suite& S)
{
    for (int n : S.dims(5, 12)) {
        S.guarded("exact constants n=" + std::to_string(n), [&] {
            const auto e = special_exponents(n);
            const auto crit = oracle_coeffs(Params(n, e.critical()), S.sigma);
            const auto low = oracle_coeffs(Params(n, e.lower), S.sigma);
            const Rational m(n - 4);
            bool ok = crit.K0 == Rational(n * n) * m * m / 16 && crit.K2 == -Rational(n * n - 4 * n + 8) / 2 &&
                      crit.J0 == -Rational(n) * m / 2 && low.K0 == 0 && crit.K1 == 0 && crit.K3 == 0 && crit.J1 == 0;
            S.add("exact constants n=" + std::to_string(n), ok, "K*0 = " + to_string(crit.K0));
        });
        S.guarded("printed vs symbol n=" + std::to_string(n), [&] {
            bool ok = true;
            std::string bad;
            for (const auto& s : standard_s_grid(n)) {
                const Params P(n, s);
                const auto pr = autonomous_coeffs(P);
                const auto oc = oracle_coeffs(P, S.sigma);
                if (pr.K0 != oc.K0 || pr.K2 != oc.K2 || pr.K1 != oc.K1 || pr.K3 != oc.K3 || pr.J0 != oc.J0) {
                    ok = false;
                    bad += " s=" + to_string(s);
                }
            }
            S.add("printed vs symbol n=" + std::to_string(n), ok, ok ? "K0,K1,K2,K3,J0 exact" : "differs at" + bad);
        });
    }
    for (int n : S.cfg.n ? std::vector<int>{*S.cfg.n} : std::vector<int>{5, 6, 8}) {
        S.guarded("chain rule n=" + std::to_string(n), [&] {
            const auto e = special_exponents(n);
            double worst = 0;
            for (const Rational& s : {Rational(3, 2), Rational(3), e.lower, e.critical()}) {
                const auto orc = to_double(oracle_coeffs(Params(n, s), S.sigma));
                const double want[4] = {orc.K0, orc.K1, orc.K2, orc.K3};
                for (double r : {0.2, 0.7}) {
                    auto est = derive_cyl_coeffs_numeric(Scaling::Autonomous, n, r, to_double(s), S.sigma);
                    for (int j = 0; j < 4; ++j)
                        worst = std::max(worst, std::abs(est.K[j] - want[j]) / std::max(1.0, std::abs(want[j])));
                }
            }
            S.add("chain rule n=" + std::to_string(n), worst <= 1e-10, "worst relative error " + format_double(worst));
        });
    }
    S.guarded("orientation vote", [&] {
        auto v = vote_sigma();
        S.add("orientation vote", v.sigma == S.sigma || S.cfg.sigma != 0,
              std::to_string(v.votes_plus) + " for +1, " + std::to_string(v.votes_minus) + " for -1");
    });
}

void closed_forms_suite(Suite& S)
{
    for (const Params& P : {Params(5, 7), Params(6, Rational(7, 2))}) {
        const std::string tag = "power solution (" + std::to_string(P.n) + "," + to_string(P.s) + ")";
        S.guarded(tag, [&] {
            SingularPower sp({1.0}, P);
            double worst = 0;
            for (double r : {0.1, 1.0, 10.0})
                for (double x : singular_power_residuals(sp, r)) worst = std::max(worst, x);
            S.add(tag, worst <= 1e-10, "relative residual " + format_double(worst));
        });
    }
    for (int n : S.dims(5, 10)) {
        const std::string tag = "bubble n=" + std::to_string(n);
        S.guarded(tag, [&] {
            const double c = bubble_constant(n);
            const double closed = to_double(bubble_constant_closed_form(n));
            const auto cc = critical_constants(n, S.cfg.c_mode);
            const double a0 = std::pow(n * (n - 4.0) / (n * n - 4.0), (n - 4) / 8.0);
            double worst = 0;
            auto p = bubble_profile(n, 1.0);
            for (double r : {0.3, 1.0, 3.0})
                worst = std::max(worst, profile_residual(n, p, r, [&](double u) {
                                     return c * std::pow(u, (n + 4.0) / (n - 4.0));
                                 }));
            bool ok = std::abs(c - closed) <= 1e-9 * closed && worst <= 1e-9;
            if (S.cfg.c_mode == CMode::Measured) ok = ok && std::abs(cc.a0 - a0) <= 1e-9;
            S.add(tag, ok, "c = " + format_double(c) + ", residual " + format_double(worst));
        });
    }
}

void pohozaev_suite(Suite& S)
{
    const bool subset = S.cfg.n && S.cfg.s;
    if (!subset) {
        for (int n : S.dims(5, 8)) {
            const std::string tag = "level identity n=" + std::to_string(n);
            S.guarded(tag, [&] {
                bool ok = true;
                for (const auto& s : interior_s_grid(n, 5)) {
                    const Params P(n, s);
                    PowerTerm lhs = equilibrium_hamiltonian_exact(P);
                    PowerTerm l = limiting_level_exact(P);
                    ok = ok && exactly_equal(lhs, PowerTerm{-l.coeff, l.base, l.exponent});
                }
                S.add(tag, ok, "H(equilibrium) = -l*(n,s) on five interior s");
            });
        }
    }
    std::vector<Params> points;
    if (subset)
        points.emplace_back(*S.cfg.n, *S.cfg.s);
    else
        points = {Params(5, 7), Params(6, 2), Params(8, Rational(5, 3))};
    IntegratorOptions io;
    io.rel_tol = 1e-12;
    io.abs_tol = 1e-14;
    for (const auto& P : points) {
        const std::string tag = "monotonicity (" + std::to_string(P.n) + "," + to_string(P.s) + ")";
        S.guarded(tag, [&] {
            P.validate();
            const auto c = oracle_coeffs(P, S.sigma);
            const bool definite = c.K1 >= 0 && c.K3 <= 0;
            auto trials = monotonicity_trials(P, S.sigma, 20, S.cfg.seed, 2.0, io);
            int agree = 0, nonneg = 0;
            double worst = 0, min_dH = INFINITY;
            for (const auto& t : trials) {
                agree += t.agree;
                nonneg += t.nonnegative;
                worst = std::max(worst, t.worst_mismatch);
                min_dH = std::min(min_dH, t.min_dH);
            }
            S.add(tag + " derivative", agree == 20,
                  std::to_string(agree) + "/20 agree, worst mismatch " + format_double(worst) + " of tolerance");
            // the sign follows from K1 >= 0 >= K3 and is not claimed elsewhere
            if (definite)
                S.add(tag + " sign", nonneg == 20,
                      std::to_string(nonneg) + "/20 nonnegative, min dH " + format_double(min_dH));
            else
                S.add(tag + " sign", true,
                      "not asserted: K1 = " + to_string(c.K1) + ", K3 = " + to_string(c.K3) + ", min dH " +
                          format_double(min_dH));
        });
    }
    if (subset) return;
    for (int n : S.dims(5, 9)) {
        const std::string tag = "lower-critical monotonicity n=" + std::to_string(n);
        S.guarded(tag, [&] {
            AvilesBvpOptions o;
            o.t1 = 600;
            auto bvp = solve_aviles_bvp(n, o);
            if (!bvp.converged) {
                S.add(tag, false, bvp.error);
                return;
            }
            auto m = monotonicity_check_aviles(n, bvp.traj);
            S.add(tag, m.verdict == m.expected,
                  std::string(to_string(m.verdict)) + ", expected " + to_string(m.expected));
        });
    }
    S.guarded("p0 large-t sign", [&] {
        bool ok = true;
        for (int n = 5; n <= 16; ++n) {
            const int want = (n * n - 10 * n + 20 > 0) - (n * n - 10 * n + 20 < 0);
            const double v = aviles_p_values(n, 1e6, PRoute::Derived)[0];
            ok = ok && ((v > 0) - (v < 0)) == want;
        }
        S.add("p0 large-t sign", ok, "sign(n^2 - 10n + 20), n = 5..16");
    });
}

void shooting_suite(Suite& S)
{
    const std::string dir = S.cfg.fixture_dir.empty() ? std::string(BILAP_FIXTURE_DIR) : S.cfg.fixture_dir;
    std::ifstream in(dir + "/delaunay_orbits.json");
    if (!in) {
        S.add("orbit fixtures", false, "cannot open " + dir + "/delaunay_orbits.json");
        return;
    }
    const auto j = nlohmann::json::parse(in);
    ShootingOptions so;
    so.c_mode = S.cfg.c_mode;
    if (S.cfg.c_mode != CMode::Measured) {
        S.add("orbit fixtures", true, "fixtures are recorded with the measured constant; skipped");
        return;
    }
    for (const auto& o : j.at("orbits")) {
        const int n = o.at("n");
        if (S.cfg.n && n != *S.cfg.n) continue;
        const double f = o.at("a_over_a0");
        const std::string tag = "orbit n=" + std::to_string(n) + " a/a0=" + format_double(f);
        S.guarded(tag, [&] {
            auto r = find_b(n, o.at("a").get<double>(), so);
            const double b = o.at("b"), T = o.at("T");
            const bool ok = r.converged && r.residual <= 1e-9 && r.periodicity_defect <= 1e-6 &&
                            r.energy_drift <= 1e-8 && std::abs(r.min_v - r.a) <= 1e-6 &&
                            std::abs(r.b - b) <= 1e-9 * b && std::abs(r.T - T) <= 1e-9 * T;
            S.add(tag, ok, "b " + rel(r.b, b) + "; T " + rel(r.T, T) + (r.error.empty() ? "" : "; " + r.error));
        });
    }
}

void asymptotics_suite(Suite& S)
{
    S.guarded("regime boundaries", [&] {
        bool ok = true;
        for (int n : S.dims(5, 16)) {
            const auto e = special_exponents(n);
            ok = ok && classify_regime(Params(n, e.lower)).regime == Regime::Aviles &&
                 classify_regime(Params(n, e.critical())).regime == Regime::Critical;
        }
        S.add("regime boundaries", ok);
    });
    S.guarded("power-law round trip", [&] {
        const Params P = S.cfg.n && S.cfg.s ? Params(*S.cfg.n, *S.cfg.s) : Params(5, 7);
        auto prof = singular_power_profile(P);
        std::vector<Sample> s;
        for (int i = 0; i < 20; ++i) {
            const double r = std::pow(10.0, -4 + 4.0 * i / 19);
            s.emplace_back(r, prof.value(r));
        }
        auto f = fit_power_law(s, P);
        const double g = fowler_gamma(P.s_value());
        const bool ok = std::abs(f.exponent - g) <= 1e-10 &&
                        std::abs(f.amplitude - *f.predicted_amplitude) <= 1e-10 * *f.predicted_amplitude;
        S.add("power-law round trip", ok, "exponent " + rel(f.exponent, g));
    });
    for (int n : S.dims(5, 8)) {
        const std::string tag = "logarithmic law n=" + std::to_string(n);
        S.guarded(tag, [&] {
            AvilesProfile ap{n, HatVariant::Theorem};
            std::vector<Sample> s;
            for (int i = 0; i < 30; ++i) {
                const double r = std::pow(10.0, -8 + 5.0 * i / 29);
                s.emplace_back(r, aviles_profile_eval(ap, r));
            }
            auto lf = fit_log_corrected(s, n);
            std::vector<Sample> pure;
            for (const auto& [r, v] : s) pure.emplace_back(r, std::pow(r, 4.0 - n));
            auto pf = fit_log_corrected(pure, n);
            auto power = fit_power_law(s);
            const bool ok = std::abs(*lf.log_exponent - (4.0 - n) / 4) <= 1e-8 &&
                            std::abs(lf.amplitude - ap.amplitude()) <= 1e-8 * ap.amplitude() &&
                            std::abs(*pf.log_exponent) <= 1e-10 && power.residual > lf.residual;
            S.add(tag, ok,
                  "log exponent " + format_double(*lf.log_exponent) + ", power-law residual " +
                      format_double(power.residual));
        });
        const std::string dtag = "residual decay n=" + std::to_string(n);
        S.guarded(dtag, [&] {
            auto d = residual_decay_check(n);
            S.add(dtag, d.rate >= 0.9 && d.rate <= 1.1, "rate " + format_double(d.rate));
        });
    }
}

void ledger_suite(Suite& S, Ledger& ledger)
{
    ledger = full_ledger(S.sigma);
    std::set<std::string> seen;
    for (const auto& e : ledger) {
        seen.insert(e.symbol);
        const auto& known = documented_discrepancies();
        auto it = std::find_if(known.begin(), known.end(), [&](const KnownDiscrepancy& k) { return k.symbol == e.symbol; });
        const bool registered = it != known.end();
        if (e.verdict == Verdict::Match) {
            S.add(e.symbol, !registered, registered ? "registered discrepancy now matches" : e.location);
        } else if (registered) {
            S.out.push_back({S.name, e.symbol, CheckStatus::Documented, std::string(to_string(e.verdict)) + ": " + it->reason});
        } else {
            S.add(e.symbol, false, std::string("undocumented ") + to_string(e.verdict) + ": " + e.printed + " vs " + e.oracle);
        }
    }
    for (const auto& k : documented_discrepancies())
        if (!seen.count(k.symbol)) S.add(k.symbol, false, "registered discrepancy missing from the ledger");
}

}  // namespace

VerifyReport run_verify(const VerifyConfig& cfg)
{
    const auto& names = verify_suites();
    if (cfg.suite != "all" && std::find(names.begin(), names.end(), cfg.suite) == names.end())
        throw UsageError("unknown suite '" + cfg.suite + "'");
    if (cfg.n && *cfg.n < 5) throw UsageError("n must be at least 5");
    if (cfg.s) Params(cfg.n.value_or(5), *cfg.s).validate();
    const int sigma = cfg.sigma != 0 ? cfg.sigma : build_sigma();

    VerifyReport R;
    for (const auto& name : names) {
        if (cfg.suite != "all" && cfg.suite != name) continue;
        Suite S{cfg, sigma, name, R.checks};
        if (name == "coefficients") coefficients_suite(S);
        if (name == "closed_forms") closed_forms_suite(S);
        if (name == "pohozaev") pohozaev_suite(S);
        if (name == "shooting") shooting_suite(S);
        if (name == "asymptotics") asymptotics_suite(S);
        if (name == "ledger") ledger_suite(S, R.ledger);
    }
    return R;
}

}  // namespace bilap
