#include "bilap/asymptotics.hpp"
#include "bilap/aviles_bvp.hpp"
#include "bilap/closed_forms.hpp"
#include "bilap/coefficients.hpp"
#include "bilap/delaunay.hpp"
#include "bilap/errors.hpp"
#include "bilap/pohozaev.hpp"
#include "bilap/sweeps.hpp"
#include "bilap/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#include <omp.h>

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace bilap;
using json = nlohmann::ordered_json;

namespace {

struct RunConfig {
    std::string subcommand;
    std::string n;  // empty selects 5
    std::string s;
    int p = 1;
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    std::string format = "json";
    std::string out;
    std::string sigma;
    std::string c_mode = "measured";
    std::optional<std::uint64_t> seed;
    int workers = 0;
    bool gnuplot = false;

    // subcommand specific
    int s_grid = 16;
    std::string init = "1,0,0,0";
    double t_start = 0;
    double t_end = 40;
    int count = 20;
    double span = 2;
    std::string a_grid = "0.3,0.6,0.9";
    std::string input;
    std::string profile = "power";
    std::string model = "power";
    double r_min = 1e-8;
    double r_max = 1e-3;
    int samples = 40;
    std::string variant = "theorem";
    std::string suite = "all";
};

// Validated view of the config.
struct Resolved {
    int n_lo = 5, n_hi = 5;
    std::optional<Rational> s;
    int sigma = -1;
    CMode c_mode = CMode::Measured;

    int n() const { return n_lo; }
    Params params(int p) const { return Params(n_lo, *s, p); }
};

int parse_int(const std::string& text, const char* what)
{
    std::size_t used = 0;
    int v = 0;
    try {
        v = std::stoi(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != text.size()) throw UsageError(std::string("malformed ") + what + " '" + text + "'");
    return v;
}

std::vector<double> parse_list(const std::string& text, const char* what)
{
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(to_double(parse_rational(item)));
    if (out.empty()) throw UsageError(std::string("empty ") + what);
    return out;
}

Resolved resolve(const RunConfig& c, bool need_s, bool allow_range = false)
{
    Resolved r;
    const std::string n = c.n.empty() ? "5" : c.n;
    const auto colon = n.find(':');
    if (colon != std::string::npos) {
        if (!allow_range) throw UsageError("--n takes a single dimension here");
        r.n_lo = parse_int(n.substr(0, colon), "--n");
        r.n_hi = parse_int(n.substr(colon + 1), "--n");
    } else {
        r.n_lo = r.n_hi = parse_int(n, "--n");
    }
    if (r.n_lo < 5 || r.n_hi < r.n_lo) throw UsageError("--n must satisfy 5 <= n (and lo <= hi)");
    if (!c.s.empty()) r.s = parse_rational(c.s);
    if (need_s && !r.s) throw UsageError("--s is required");
    if (r.s) {
        try {
            Params(r.n_lo, *r.s, c.p).validate();
        } catch (const DomainError& e) {
            throw UsageError(e.what());
        }
    }
    if (c.sigma.empty())
        r.sigma = build_sigma();
    else if (c.sigma == "1" || c.sigma == "+1")
        r.sigma = 1;
    else if (c.sigma == "-1")
        r.sigma = -1;
    else
        throw UsageError("--sigma must be +1 or -1");
    r.c_mode = parse_c_mode(c.c_mode);
    if (c.format != "csv" && c.format != "json") throw UsageError("--format must be csv or json");
    if (!(c.rel_tol > 0) || !(c.abs_tol > 0)) throw UsageError("tolerances must be positive");
    return r;
}

json config_json(const RunConfig& c, const Resolved& r)
{
    json j;
    j["subcommand"] = c.subcommand;
    j["n"] = c.n.empty() ? json() : json(c.n);
    j["s"] = r.s ? json(to_string(*r.s)) : json();
    j["p"] = c.p;
    j["rel_tol"] = c.rel_tol;
    j["abs_tol"] = c.abs_tol;
    j["format"] = c.format;
    j["out"] = c.out;
    j["sigma"] = r.sigma;
    j["c_mode"] = to_string(r.c_mode);
    j["seed"] = c.seed ? json(*c.seed) : json();
    j["build"] = build_id();
    return j;
}

json coeffs_json(const AutonomousCoefficients& c)
{
    return {{"K0", to_string(c.K0)}, {"K1", to_string(c.K1)}, {"K2", to_string(c.K2)},
            {"K3", to_string(c.K3)}, {"J0", to_string(c.J0)}, {"J1", to_string(c.J1)}};
}

class Output {
public:
    explicit Output(const RunConfig& c) : cfg_(c) {}

    void write(const std::string& text, const std::string& suffix = "") const
    {
        if (cfg_.out.empty()) {
            std::cout << text;
            return;
        }
        const std::string path = cfg_.out + suffix;
        std::ofstream f(path);
        if (!f) throw std::runtime_error("cannot write " + path);
        f << text;
    }

    void emit(const json& config, const json& results, const json& ledger) const
    {
        json j;
        j["config"] = config;
        j["results"] = results;
        j["ledger"] = ledger;
        write(j.dump(2) + "\n");
    }

    // Companion gnuplot script; written only with --gnuplot and --out.
    void plot(const std::string& using_clause, bool logscale) const
    {
        if (!cfg_.gnuplot || cfg_.out.empty()) return;
        std::ostringstream os;
        os << "set datafile separator ','\nset datafile commentschars '#'\nset key autotitle columnhead\n";
        if (logscale) os << "set logscale xy\n";
        os << "plot '" << cfg_.out << "' using " << using_clause << " with lines\n";
        write(os.str(), ".gp");
    }

private:
    const RunConfig& cfg_;
};

std::string verdict_of(const Rational& printed, const Rational& oracle, const Rational& opposite)
{
    if (printed == oracle) return to_string(Verdict::Match);
    if (printed == opposite) return to_string(Verdict::SignConvention);
    return to_string(Verdict::Mismatch);
}

int cmd_coeffs(const RunConfig& c)
{
    const Resolved r = resolve(c, true);
    const Params P = r.params(c.p);
    const auto printed = autonomous_coeffs(P);
    const auto oracle = oracle_coeffs(P, r.sigma);
    const auto opposite = oracle_coeffs(P, -r.sigma);
    const auto chain = derive_cyl_coeffs_numeric(Scaling::Autonomous, P.n, 0.5, P.s_value(), r.sigma);
    const Rational j40 = printed_J40(P);

    struct Row {
        const char* name;
        Rational printed, oracle, opposite;
        double chain;
    };
    const std::vector<Row> rows{{"K0", printed.K0, oracle.K0, opposite.K0, chain.K[0]},
                                {"K1", printed.K1, oracle.K1, opposite.K1, chain.K[1]},
                                {"K2", printed.K2, oracle.K2, opposite.K2, chain.K[2]},
                                {"K3", printed.K3, oracle.K3, opposite.K3, chain.K[3]},
                                {"J0", printed.J0, oracle.J0, opposite.J0, chain.J[0]},
                                {"J1", printed.J1, oracle.J1, opposite.J1, chain.J[1]},
                                {"J40", j40, oracle.J0, opposite.J0, chain.J[0]}};
    const json cfg = config_json(c, r);
    const Ledger ledger = coefficient_ledger(r.sigma);
    Output out(c);
    if (c.format == "csv") {
        std::ostringstream os;
        os << "# " << cfg.dump() << "\n";
        os << "constant,printed,oracle,oracle_opposite_orientation,chain_rule,verdict\n";
        for (const auto& row : rows)
            os << row.name << ',' << to_string(row.printed) << ',' << to_string(row.oracle) << ','
               << to_string(row.opposite) << ',' << format_double(row.chain) << ','
               << verdict_of(row.printed, row.oracle, row.opposite) << "\n";
        out.write(os.str());
        return 0;
    }
    json res;
    res["printed"] = coeffs_json(printed);
    res["printed"]["J40"] = to_string(j40);
    res["oracle"] = coeffs_json(oracle);
    res["oracle_opposite_orientation"] = coeffs_json(opposite);
    res["chain_rule"] = {{"K0", chain.K[0]}, {"K1", chain.K[1]}, {"K2", chain.K[2]},
                         {"K3", chain.K[3]}, {"J0", chain.J[0]}, {"J1", chain.J[1]}};
    json verdicts;
    for (const auto& row : rows) verdicts[row.name] = verdict_of(row.printed, row.oracle, row.opposite);
    res["verdicts"] = verdicts;
    out.emit(cfg, res, to_json(ledger));
    return 0;
}

int cmd_signs(const RunConfig& c)
{
    const Resolved r = resolve(c, false, true);
    if (c.s_grid < 1) throw UsageError("--s-grid must be positive");
    const auto rows = sign_chart(r.n_lo, r.n_hi, c.s_grid, r.sigma);
    json cfg = config_json(c, r);
    cfg["s_grid"] = c.s_grid;
    Output out(c);
    if (c.format == "csv") {
        out.write(sign_chart_csv(rows, cfg.dump()));
        out.plot("2:4", false);
        return 0;
    }
    json res = json::array();
    int confirmed = 0;
    for (const auto& row : rows) {
        confirmed += row.report.remark_claims_hold;
        res.push_back({{"n", row.n},
                       {"s", to_string(row.s)},
                       {"regime", to_string(row.regime)},
                       {"K0", row.report.K0},
                       {"K1", row.report.K1},
                       {"K2", row.report.K2},
                       {"K3", row.report.K3},
                       {"J0", row.report.J0},
                       {"claims_hold", row.report.remark_claims_hold}});
    }
    json results{{"rows", res}, {"confirmed", confirmed}, {"total", rows.size()}};
    out.emit(cfg, results, json::array());
    return 0;
}

int cmd_classify(const RunConfig& c)
{
    const Resolved r = resolve(c, true);
    const Params P = r.params(c.p);
    const auto info = classify_regime(P);
    const auto K0 = oracle_coeffs(P, r.sigma).K0;
    std::string summary = std::string(to_string(info.regime));
    if (info.regime != Regime::Supercritical) summary += ", predicted |U| ~ " + info.profile;
    if (info.regime == Regime::GidasSpruck) summary += " with K0 = " + to_string(K0);
    const json cfg = config_json(c, r);
    Output out(c);
    if (c.format == "csv") {
        std::ostringstream os;
        os << "# " << cfg.dump() << "\n# " << summary << "\n";
        os << "regime,exponent,log_exponent,amplitude,K0\n";
        os << to_string(info.regime) << ',' << format_double(info.exponent) << ',' << format_double(info.log_exponent)
           << ',' << format_double(info.amplitude) << ',' << to_string(K0) << "\n";
        out.write(os.str());
        return 0;
    }
    json res = to_json(info);
    res["K0"] = to_string(K0);
    res["summary"] = summary;
    out.emit(cfg, res, json::array());
    return 0;
}

int cmd_integrate(const RunConfig& c)
{
    const Resolved r = resolve(c, true);
    const Params P = r.params(c.p);
    const auto y0 = parse_list(c.init, "--init");
    if (y0.size() != static_cast<std::size_t>(4 * P.p)) throw UsageError("--init needs 4p values");
    if (!(c.t_end > c.t_start)) throw UsageError("--t-end must exceed --t-start");
    IntegratorOptions io;
    io.rel_tol = c.rel_tol;
    io.abs_tol = c.abs_tol;
    const bool lower = P.s == special_exponents(P.n).lower && P.p == 1 && c.t_start > 0;
    Trajectory traj;
    std::vector<EnergySample> energy;
    if (lower) {
        // lower-critical exponent with a positive start time: the t-dependent system
        traj = integrate(NonautonomousSystem(P.n), c.t_start, y0, c.t_end, io);
    } else {
        traj = integrate(autonomous_system(P, r.sigma), c.t_start, y0, c.t_end, io);
        energy = pohozaev_series(P, r.sigma, traj);
    }
    json cfg = config_json(c, r);
    cfg["init"] = c.init;
    cfg["t_start"] = c.t_start;
    cfg["t_end"] = c.t_end;
    cfg["system"] = lower ? "nonautonomous" : "autonomous";
    Output out(c);
    if (c.format == "csv") {
        out.write(trajectory_csv(traj, cfg.dump()));
        if (!energy.empty()) {
            if (c.out.empty())
                std::cout << "\n" << energy_csv(energy, cfg.dump());
            else
                out.write(energy_csv(energy, cfg.dump()), ".energy.csv");
        }
        out.plot("1:2", false);
        return traj.blow_up ? 1 : 0;
    }
    json tr = json::array();
    for (std::size_t k = 0; k < traj.size(); ++k) tr.push_back({{"t", traj.t[k]}, {"y", traj.y[k]}});
    json en = json::array();
    for (const auto& e : energy)
        en.push_back({{"t", e.t}, {"H", e.H}, {"dH_formula", e.dH_formula}, {"dH_numeric", e.dH_numeric}});
    json res{{"blow_up", traj.blow_up}, {"steps", traj.steps}, {"trajectory", tr}, {"energy", en}};
    out.emit(cfg, res, json::array());
    if (traj.blow_up) std::cerr << "error: solution left the guard region at t = " << traj.t_back() << "\n";
    return traj.blow_up ? 1 : 0;
}

int cmd_pohozaev(const RunConfig& c)
{
    const Resolved r = resolve(c, true);
    const Params P = r.params(c.p);
    const auto lv = limiting_levels(P);
    json cfg = config_json(c, r);
    json res;
    res["autonomous_defined"] = lv.autonomous_defined;
    if (lv.autonomous_defined) {
        res["l_star"] = lv.l_star;
        res["l_star_exact"] = to_string(lv.l_star_exact.coeff) + " * (" + to_string(lv.l_star_exact.base) + ")^(" +
                              to_string(lv.l_star_exact.exponent) + ")";
        res["equilibrium_H"] = equilibrium_hamiltonian_exact(P).value();
    }
    std::vector<MonotonicityTrial> trials;
    if (c.seed) {
        IntegratorOptions io;
        io.rel_tol = c.rel_tol;
        io.abs_tol = c.abs_tol;
        trials = monotonicity_trials(P, r.sigma, c.count, *c.seed, c.span, io);
        cfg["count"] = c.count;
        cfg["span"] = c.span;
    }
    const bool lower = P.s == special_exponents(P.n).lower;
    if (lower) {
        res["aviles_level_printed"] = lv.aviles_printed;
        res["aviles_level_theorem"] = lv.aviles_derived_theorem;
        res["aviles_level_formula"] = lv.aviles_derived_formula;
        res["aviles_hamiltonian_limit"] = lv.aviles_hamiltonian_limit;
        AvilesBvpOptions o;
        o.t1 = std::max(c.t_end, 100.0);
        cfg["t_end"] = o.t1;
        auto bvp = solve_aviles_bvp(P.n, o);
        if (!bvp.converged) throw DomainError("boundary value solve failed: " + bvp.error);
        auto m = monotonicity_check_aviles(P.n, bvp.traj);
        res["monotonicity"] = {{"verdict", to_string(m.verdict)},
                               {"expected", to_string(m.expected)},
                               {"t_detected", m.t_detected},
                               {"reason", m.reason}};
    }
    Output out(c);
    if (c.format == "csv") {
        std::ostringstream os;
        os << "# " << cfg.dump() << "\n# " << res.dump() << "\n";
        os << "trial,worst_mismatch,min_dH,blow_up,agree,nonnegative\n";
        for (std::size_t i = 0; i < trials.size(); ++i)
            os << i << ',' << format_double(trials[i].worst_mismatch) << ',' << format_double(trials[i].min_dH) << ','
               << trials[i].blow_up << ',' << trials[i].agree << ',' << trials[i].nonnegative << "\n";
        out.write(os.str());
        return 0;
    }
    json tj = json::array();
    for (const auto& t : trials)
        tj.push_back({{"y0", t.y0},
                      {"worst_mismatch", t.worst_mismatch},
                      {"min_dH", t.min_dH},
                      {"blow_up", t.blow_up},
                      {"agree", t.agree},
                      {"nonnegative", t.nonnegative}});
    res["trials"] = tj;
    out.emit(cfg, res, to_json(pohozaev_ledger()));
    return 0;
}

int cmd_shoot(const RunConfig& c)
{
    const Resolved r = resolve(c, false);
    const int n = r.n();
    const auto fractions = parse_list(c.a_grid, "--a-grid");
    ShootingOptions so;
    so.c_mode = r.c_mode;
    const auto cc = critical_constants(n, r.c_mode);
    std::vector<double> grid;
    for (double f : fractions) {
        if (!(f > 0 && f <= 1)) throw UsageError("--a-grid entries are fractions of a0 in (0, 1]");
        grid.push_back(f * cc.a0);
    }
    const auto rows = orbit_table(n, grid, so);
    json cfg = config_json(c, r);
    cfg["a_grid"] = c.a_grid;
    cfg["shooting_rel_tol"] = so.rel_tol;
    Output out(c);
    bool ok = true;
    for (const auto& row : rows) ok = ok && row.converged;
    if (c.format == "csv") {
        out.write(orbit_table_csv(rows, cfg.dump()));
        out.plot("2:4", false);
    } else {
        json res = json::array();
        for (const auto& row : rows)
            res.push_back({{"a", row.a},
                           {"b", row.b},
                           {"T", row.T},
                           {"energy", row.energy},
                           {"residual", row.residual},
                           {"periodicity_defect", row.periodicity_defect},
                           {"energy_drift", row.energy_drift},
                           {"min_v", row.min_v},
                           {"converged", row.converged},
                           {"error", row.error}});
        out.emit(cfg, json{{"a0", cc.a0}, {"c", cc.c}, {"orbits", res}}, to_json(delaunay_ledger()));
    }
    for (const auto& row : rows)
        if (!row.converged) std::cerr << "error: a = " << format_double(row.a) << ": " << row.error << "\n";
    return ok ? 0 : 1;
}

std::vector<Sample> read_samples(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read " + path);
    std::vector<Sample> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw UsageError("expected 'r,value' rows in " + path);
        try {
            out.emplace_back(std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1)));
        } catch (const std::exception&) {
            if (out.empty()) continue;  // column header
            throw UsageError("malformed row '" + line + "' in " + path);
        }
    }
    return out;
}

int cmd_fit(const RunConfig& c)
{
    const Resolved r = resolve(c, false);
    const int n = r.n();
    std::vector<Sample> samples;
    json cfg = config_json(c, r);
    if (!c.input.empty()) {
        samples = read_samples(c.input);
        cfg["input"] = c.input;
    } else {
        if (!(c.r_min > 0 && c.r_max > c.r_min) || c.samples < 2) throw UsageError("bad sample range");
        std::function<double(double)> f;
        if (c.profile == "power") {
            if (!r.s) throw UsageError("--profile power needs --s");
            f = singular_power_profile(r.params(1)).value;
        } else if (c.profile == "aviles") {
            AvilesProfile ap{n, parse_hat_variant(c.variant)};
            f = [ap](double x) { return aviles_profile_eval(ap, x); };
        } else if (c.profile == "bubble") {
            f = bubble_profile(n, 1.0).value;
        } else {
            throw UsageError("--profile must be power, aviles or bubble");
        }
        for (int i = 0; i < c.samples; ++i) {
            const double x = c.r_min * std::pow(c.r_max / c.r_min, static_cast<double>(i) / (c.samples - 1));
            samples.emplace_back(x, f(x));
        }
        cfg["profile"] = c.profile;
        cfg["r_min"] = c.r_min;
        cfg["r_max"] = c.r_max;
        cfg["samples"] = c.samples;
        if (c.profile == "aviles") cfg["variant"] = c.variant;
    }
    cfg["model"] = c.model;
    FitReport f;
    if (c.model == "power")
        f = r.s ? fit_power_law(samples, r.params(1)) : fit_power_law(samples);
    else if (c.model == "log")
        f = fit_log_corrected(samples, n);
    else
        throw UsageError("--model must be power or log");
    Output out(c);
    if (c.format == "csv") {
        out.write(fit_csv(samples, f, cfg.dump()));
        out.plot("1:2", true);
        return 0;
    }
    out.emit(cfg, to_json(f), json::array());
    return 0;
}

int cmd_verify(const RunConfig& c)
{
    const Resolved r = resolve(c, false);
    VerifyConfig vc;
    vc.suite = c.suite;
    if (!c.n.empty() || !c.s.empty()) vc.n = r.n();
    vc.s = r.s;
    vc.sigma = c.sigma.empty() ? 0 : r.sigma;
    vc.c_mode = r.c_mode;
    if (c.seed) vc.seed = *c.seed;
    const auto report = run_verify(vc);
    json cfg = config_json(c, r);
    cfg["suite"] = c.suite;
    Output out(c);
    if (c.format == "csv") {
        std::ostringstream os;
        os << "# " << cfg.dump() << "\n";
        os << "suite,check,status,detail\n";
        for (const auto& k : report.checks)
            os << k.suite << ',' << csv_field(k.name) << ',' << to_string(k.status) << ',' << csv_field(k.detail)
               << "\n";
        out.write(os.str());
    } else {
        out.emit(cfg, report.results_json(), to_json(report.ledger));
    }
    for (const auto& k : report.checks)
        if (k.status == CheckStatus::Fail) std::cerr << "FAIL " << k.suite << ": " << k.name << ": " << k.detail << "\n";
    return report.exit_code();
}

}  // namespace

int main(int argc, char** argv)
{
    RunConfig cfg;
    CLI::App app{"Cylinder-ODE toolkit for radial fourth-order Gross-Pitaevskii systems"};
    app.require_subcommand(1);

    auto common = [&](CLI::App* sub) {
        sub->add_option("--n", cfg.n, "dimension, or lo:hi for sweeps");
        sub->add_option("--s", cfg.s, "exponent as p/q, integer or exact decimal");
        sub->add_option("--p", cfg.p, "number of components");
        sub->add_option("--rel-tol", cfg.rel_tol);
        sub->add_option("--abs-tol", cfg.abs_tol);
        sub->add_option("--format", cfg.format)->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--out", cfg.out, "output file (stdout when omitted)");
        sub->add_option("--sigma", cfg.sigma, "orientation override, +1 or -1");
        sub->add_option("--c-mode", cfg.c_mode)->check(CLI::IsMember({"measured", "unit"}));
        sub->add_option("--seed", cfg.seed);
        sub->add_option("--workers", cfg.workers, "worker threads (0 = available parallelism)");
        sub->add_flag("--gnuplot", cfg.gnuplot, "write <out>.gp next to the data");
    };

    auto* coeffs = app.add_subcommand("coeffs", "coefficients from every route with verdicts");
    auto* signs = app.add_subcommand("signs", "sign chart over (2_**, 2**-1)");
    signs->add_option("--s-grid", cfg.s_grid, "interior exponents per dimension");
    auto* classify = app.add_subcommand("classify", "asymptotic regime of (n, s)");
    auto* integ = app.add_subcommand("integrate", "cylinder trajectory and energy series");
    integ->add_option("--init", cfg.init, "comma separated initial state");
    integ->add_option("--t-start", cfg.t_start);
    integ->add_option("--t-end", cfg.t_end);
    auto* poho = app.add_subcommand("pohozaev", "limiting levels and monotonicity trials");
    poho->add_option("--count", cfg.count, "random initial states (needs --seed)");
    poho->add_option("--span", cfg.span, "integration span per trial");
    poho->add_option("--t-end", cfg.t_end, "right end of the lower-critical solve");
    auto* shoot = app.add_subcommand("shoot", "Delaunay orbits of the critical system");
    shoot->add_option("--a-grid", cfg.a_grid, "minima as fractions of a0");
    auto* fit = app.add_subcommand("fit", "power-law or log-corrected fit");
    fit->add_option("--input", cfg.input, "CSV of r,value rows");
    fit->add_option("--profile", cfg.profile, "synthetic data: power, aviles or bubble");
    fit->add_option("--model", cfg.model, "power or log");
    fit->add_option("--r-min", cfg.r_min);
    fit->add_option("--r-max", cfg.r_max);
    fit->add_option("--samples", cfg.samples);
    fit->add_option("--variant", cfg.variant, "amplitude variant of the aviles profile");
    auto* ver = app.add_subcommand("verify", "run the invariant suites and the discrepancy ledger");
    ver->add_option("--suite", cfg.suite);
    for (auto* sub : {coeffs, signs, classify, integ, poho, shoot, fit, ver}) common(sub);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    cfg.subcommand = app.get_subcommands().front()->get_name();
    if (cfg.workers > 0) omp_set_num_threads(cfg.workers);
    try {
        if (cfg.subcommand == "coeffs") return cmd_coeffs(cfg);
        if (cfg.subcommand == "signs") return cmd_signs(cfg);
        if (cfg.subcommand == "classify") return cmd_classify(cfg);
        if (cfg.subcommand == "integrate") return cmd_integrate(cfg);
        if (cfg.subcommand == "pohozaev") return cmd_pohozaev(cfg);
        if (cfg.subcommand == "shoot") return cmd_shoot(cfg);
        if (cfg.subcommand == "fit") return cmd_fit(cfg);
        if (cfg.subcommand == "verify") return cmd_verify(cfg);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
