// Experiment runner: one subcommand per campaign, one config file per run.
// Exit codes: 0 all checks pass, 1 a bound check failed, 2 config or runtime error.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mhdlab/experiments.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace mhdlab;

namespace {

json report_to_json(const EstimateReport& r) {
    json j;
    j["tag"] = r.tag;
    j["name"] = r.name;
    j["lhs"] = r.lhs;
    j["rhs"] = r.rhs;
    j["constant"] = r.constant;
    j["margin"] = r.margin;
    j["pass"] = r.pass;
    if (!r.details.empty()) j["details"] = r.details;
    return j;
}

// report.json + summary.txt; every line carries the statement tag and margin.
void emit_reports(const fs::path& outdir, const std::string& kind, const json& params,
                  const std::vector<EstimateReport>& checks) {
    json j;
    j["experiment"] = kind;
    j["params"] = params;  // all effective values, defaults included
    j["checks"] = json::array();
    for (const auto& c : checks) j["checks"].push_back(report_to_json(c));
    j["all_pass"] = all_pass(checks);
    std::ofstream(outdir / "report.json") << j.dump(2) << "\n";

    std::ofstream sum(outdir / "summary.txt");
    for (const auto& c : checks) sum << c.summary_line() << "\n";
    sum << (all_pass(checks) ? "ALL CHECKS PASSED" : "CHECK FAILURES PRESENT") << "\n";
}

json load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open config " + path);
    return json::parse(is);
}

template <class T>
T get_or(const json& cfg, const std::string& key, T fallback) {
    if (cfg.contains(key)) return cfg.at(key).get<T>();
    return fallback;
}

struct Common {
    std::string config_path;
    int jobs = 1;
    std::int64_t seed = -1;  // -1: use the config's seed
};

fs::path prepare_outdir(const json& cfg) {
    fs::path out = get_or<std::string>(cfg, "output_dir", ".");
    fs::create_directories(out);
    return out;
}

int run_heat_verify(const Common& c) {
    json cfg = load_config(c.config_path);
    HeatVerifyParams p;
    p.d = get_or(cfg, "d", p.d);
    p.n = get_or(cfg, "n", p.n);
    p.kmax = get_or(cfg, "kmax", p.kmax);
    p.count = get_or(cfg, "count", p.count);
    p.L = get_or(cfg, "L", p.L);
    p.s = get_or(cfg, "s", p.s);
    p.T = get_or(cfg, "T", p.T);
    p.q = get_or(cfg, "q", p.q);
    p.seed = (c.seed >= 0) ? c.seed : get_or<std::uint64_t>(cfg, "seed", p.seed);
    fs::path out = prepare_outdir(cfg);

    auto res = heat_verify_experiment(p, c.jobs);

    CsvWriter w((out / "smoothing.csv").string());
    w.header({"sample", "s", "T", "q", "sup_Hs", "int_Hs1", "int_weighted", "int_Lq", "bound",
              "lq_bound", "margin_sup", "margin_int_Hs1", "margin_weighted", "margin_lq",
              "energy_residual", "weighted_margin2"});
    for (std::size_t i = 0; i < res.rows.size(); ++i) {
        const auto& r = res.rows[i];
        w.row({static_cast<double>(i), r.s, r.T, r.q, r.sup_Hs, r.int_Hs1, r.int_weighted,
               r.int_Lq, r.bound, r.lq_bound, r.margin_sup, r.margin_int_Hs1, r.margin_weighted,
               r.margin_lq, r.energy_residual, r.weighted_margin2});
    }

    json params{{"d", p.d},   {"n", p.n}, {"kmax", p.kmax}, {"count", p.count}, {"L", p.L},
                {"s", p.s},   {"T", p.T}, {"q", p.q},       {"seed", p.seed},
                {"jobs", c.jobs}};
    emit_reports(out, "heat-verify", params, res.checks);
    return res.pass ? 0 : 1;
}

int run_counterexample(const Common& c) {
    json cfg = load_config(c.config_path);
    CounterexampleParams p;
    p.d = get_or(cfg, "d", p.d);
    p.T = get_or(cfg, "T", p.T);
    p.t_min_list = get_or(cfg, "t_min_list", p.t_min_list);
    p.j_max = get_or<long>(cfg, "j_max", p.j_max);
    fs::path out = prepare_outdir(cfg);

    auto res = counterexample_experiment(p, c.jobs);

    CsvWriter w((out / "scan.csv").string());
    w.header({"t_min", "I", "N", "S", "ratio"});
    for (const auto& r : res.scan)
        w.row({r.t_min, r.I, static_cast<double>(r.N), r.S, r.ratio});

    CsvWriter wc((out / "chain.csv").string());
    wc.header({"j", "margin_restrict", "margin_kernel", "sharp_kernel", "margin_interval",
               "margin_shell"});
    for (const auto& r : res.chain)
        wc.row({static_cast<double>(r.j), r.margin_restrict, r.margin_kernel, r.sharp_kernel,
                r.margin_interval, r.margin_shell});

    json params{{"d", p.d}, {"T", p.T}, {"t_min_list", p.t_min_list}, {"j_max", p.j_max},
                {"jobs", c.jobs}};
    emit_reports(out, "counterexample", params, res.checks);
    return res.pass ? 0 : 1;
}

int run_maxreg(const Common& c) {
    json cfg = load_config(c.config_path);
    MaxRegParams p;
    p.d = get_or(cfg, "d", p.d);
    p.n = get_or(cfg, "n", p.n);
    p.kmax = get_or(cfg, "kmax", p.kmax);
    p.count = get_or(cfg, "count", p.count);
    p.ntimes = get_or(cfg, "ntimes", p.ntimes);
    p.L = get_or(cfg, "L", p.L);
    p.s = get_or(cfg, "s", p.s);
    p.T = get_or(cfg, "T", p.T);
    p.r_list = get_or(cfg, "r_list", p.r_list);
    p.seed = (c.seed >= 0) ? c.seed : get_or<std::uint64_t>(cfg, "seed", p.seed);
    fs::path out = prepare_outdir(cfg);

    auto res = maxreg_experiment(p, c.jobs);

    CsvWriter w((out / "ratios.csv").string());
    w.header({"sample", "r", "s", "T", "lhs", "rhs", "ratio", "l2_inhom"});
    for (const auto& row : res.rows)
        w.row({static_cast<double>(row.sample), row.rep.r, row.rep.s, row.rep.T, row.rep.lhs,
               row.rep.rhs, row.rep.ratio, row.rep.l2_inhom});

    json params{{"d", p.d},       {"n", p.n}, {"kmax", p.kmax}, {"count", p.count},
                {"ntimes", p.ntimes}, {"L", p.L}, {"s", p.s}, {"T", p.T},
                {"r_list", p.r_list}, {"seed", p.seed}, {"jobs", c.jobs}};
    emit_reports(out, "maxreg-verify", params, res.checks);
    return res.pass ? 0 : 1;
}

int run_stokes(const Common& c) {
    json cfg = load_config(c.config_path);
    StokesParams p;
    p.d = get_or(cfg, "d", p.d);
    p.n = get_or(cfg, "n", p.n);
    p.kmax = get_or(cfg, "kmax", p.kmax);
    p.count = get_or(cfg, "count", p.count);
    p.ntimes = get_or(cfg, "ntimes", p.ntimes);
    p.L = get_or(cfg, "L", p.L);
    p.s = get_or(cfg, "s", p.s);
    p.eps = get_or(cfg, "eps", p.eps);
    p.T = get_or(cfg, "T", p.T);
    p.r = get_or(cfg, "r", p.r);
    p.seed = (c.seed >= 0) ? c.seed : get_or<std::uint64_t>(cfg, "seed", p.seed);
    fs::path out = prepare_outdir(cfg);

    auto res = stokes_experiment(p, c.jobs);

    CsvWriter w((out / "stokes.csv").string());
    w.header({"sample", "s", "eps", "r", "T", "lhs", "term_ic", "term_forcing", "c_eps_fit",
              "c_r_fit", "int_v", "int_w", "holder_margin", "interp_margin"});
    for (std::size_t i = 0; i < res.rows.size(); ++i) {
        const auto& r = res.rows[i];
        w.row({static_cast<double>(i), r.s, r.eps, r.r, r.T, r.lhs, r.term_ic, r.term_forcing,
               r.c_eps_fit, r.c_r_fit, r.int_v, r.int_w, r.holder_margin, r.interp_margin});
    }

    json params{{"d", p.d},   {"n", p.n},     {"kmax", p.kmax}, {"count", p.count},
                {"ntimes", p.ntimes}, {"L", p.L}, {"s", p.s},  {"eps", p.eps},
                {"T", p.T},   {"r", p.r},     {"seed", p.seed}, {"jobs", c.jobs}};
    json extra{{"c_eps_max", res.c_eps_max}, {"c_r_max", res.c_r_max}};
    params["fitted"] = extra;
    emit_reports(out, "stokes-verify", params, res.checks);
    return res.pass ? 0 : 1;
}

MhdExperimentParams parse_mhd_params(const json& cfg, const Common& c) {
    MhdExperimentParams p;
    p.d = get_or(cfg, "d", p.d);
    p.n = get_or(cfg, "n", p.n);
    p.kmax = get_or(cfg, "kmax", p.kmax);
    p.L = get_or(cfg, "L", p.L);
    p.s = get_or(cfg, "s", p.s);
    p.eps = get_or(cfg, "eps", p.eps);
    p.T = get_or(cfg, "T", p.T);
    p.amplitude = get_or(cfg, "amplitude", p.amplitude);
    p.preset = get_or<std::string>(cfg, "preset", p.preset);
    p.dt.cfl = get_or(cfg, "cfl", p.dt.cfl);
    p.dt.dt_max = get_or(cfg, "dt_max", p.dt.dt_max);
    p.dt.dt_fixed = get_or(cfg, "dt_fixed", p.dt.dt_fixed);
    p.seed = (c.seed >= 0) ? c.seed : get_or<std::uint64_t>(cfg, "seed", p.seed);
    return p;
}

json mhd_params_json(const MhdExperimentParams& p, const Common& c) {
    return json{{"d", p.d},       {"n", p.n},           {"kmax", p.kmax},
                {"L", p.L},       {"s", p.s},           {"eps", p.eps},
                {"T", p.T},       {"amplitude", p.amplitude}, {"preset", p.preset},
                {"cfl", p.dt.cfl}, {"dt_max", p.dt.dt_max}, {"dt_fixed", p.dt.dt_fixed},
                {"seed", p.seed}, {"jobs", c.jobs}};
}

json constants_json(const MhdConstants& k) {
    auto prov = [&](const std::string& name) {
        auto it = k.provenance.find(name);
        if (it == k.provenance.end()) return std::string("unspecified");
        return std::string(it->second == Provenance::PaperFormula ? "formula" : "ensemble-max");
    };
    json j;
    for (auto& [name, val] : std::vector<std::pair<std::string, double>>{
             {"M0", k.M0}, {"M1", k.M1}, {"M2", k.M2}, {"c1", k.c1}, {"c2", k.c2},
             {"c3", k.c3}, {"c4", k.c4}, {"c5", k.c5}, {"C_eps", k.C_eps}, {"C_r", k.C_r},
             {"b0_hs", k.b0_hs}, {"eps", k.eps}})
        j[name] = json{{"value", val}, {"provenance", prov(name)}};
    return j;
}

int run_mhd(const Common& c, bool constants_only) {
    json cfg = load_config(c.config_path);
    MhdExperimentParams p = parse_mhd_params(cfg, c);
    fs::path out = prepare_outdir(cfg);

    auto res = mhd_experiment(p);
    if (!constants_only) res.run.series.write_csv((out / "series.csv").string());
    if (get_or(cfg, "save_final_state", false)) {
        std::vector<SpectralField> comps = res.run.final_state.u.comp;
        for (const auto& f : res.run.final_state.B.comp) comps.push_back(f);
        save_snapshot((out / "final_state.snap").string(), comps, true);
    }

    json params = mhd_params_json(p, c);
    json j_const = constants_json(res.mon.constants);
    j_const["T_star"] = res.mon.T_star;
    std::ofstream(out / "constants.json") << j_const.dump(2) << "\n";

    params["T_star"] = res.mon.T_star;
    emit_reports(out, constants_only ? "constants-fit" : "mhd-run", params, res.checks);
    return res.pass ? 0 : 1;
}

int run_ode(const Common& c) {
    json cfg = load_config(c.config_path);
    OdeBoundParams p;
    p.eps_list = get_or(cfg, "eps_list", p.eps_list);
    p.c1_list = get_or(cfg, "c1_list", p.c1_list);
    p.M1_list = get_or(cfg, "M1_list", p.M1_list);
    p.M2_list = get_or(cfg, "M2_list", p.M2_list);
    p.horizon_fraction = get_or(cfg, "horizon_fraction", p.horizon_fraction);
    p.dt = get_or(cfg, "dt", p.dt);
    fs::path out = prepare_outdir(cfg);

    auto res = ode_bound_experiment(p, c.jobs);

    CsvWriter w((out / "ode.csv").string());
    w.header({"eps", "c1", "M1", "M2", "T", "horizon", "max_excess", "max_eq_defect"});
    for (const auto& r : res.rows)
        w.row({r.params.eps, r.params.c1, r.params.M1, r.params.M2, r.params.T, r.horizon,
               r.max_excess, r.max_eq_defect});

    json params{{"eps_list", p.eps_list}, {"c1_list", p.c1_list}, {"M1_list", p.M1_list},
                {"M2_list", p.M2_list},   {"horizon_fraction", p.horizon_fraction},
                {"dt", p.dt},             {"jobs", c.jobs}};
    emit_reports(out, "ode-bound", params, res.checks);
    return res.pass ? 0 : 1;
}

// Aggregates report.json files produced by earlier runs.
int run_report(const Common& c) {
    json cfg = load_config(c.config_path);
    std::vector<std::string> inputs = get_or(cfg, "inputs", std::vector<std::string>{});
    if (inputs.empty()) throw std::runtime_error("report: config must list 'inputs'");
    fs::path out = prepare_outdir(cfg);

    json combined = json::array();
    bool pass = true;
    std::ofstream sum(out / "summary.txt");
    for (const auto& path : inputs) {
        json j = load_config(path);
        combined.push_back(j);
        bool ok = j.value("all_pass", false);
        pass = pass && ok;
        sum << (ok ? "PASS  " : "FAIL  ") << j.value("experiment", "?") << "  (" << path << ")\n";
    }
    sum << (pass ? "ALL EXPERIMENTS PASSED" : "EXPERIMENT FAILURES PRESENT") << "\n";
    json top{{"experiment", "report"}, {"inputs", inputs}, {"runs", combined}, {"all_pass", pass}};
    std::ofstream(out / "report.json") << top.dump(2) << "\n";
    return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mhdlab experiment runner"};
    app.require_subcommand(1);

    Common c;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", c.config_path, "config file (JSON)")->required();
        sub->add_option("--jobs", c.jobs, "worker count for sweeps");
        sub->add_option("--seed", c.seed, "override the config's random seed");
    };

    std::string kind;
    for (const char* name : {"heat-verify", "counterexample", "maxreg-verify", "stokes-verify",
                             "mhd-run", "ode-bound", "constants-fit", "report"}) {
        auto* sub = app.add_subcommand(name, name);
        add_common(sub);
        sub->callback([&kind, name] { kind = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;  // usage/parse problems are config errors
    }

    try {
        if (kind == "heat-verify") return run_heat_verify(c);
        if (kind == "counterexample") return run_counterexample(c);
        if (kind == "maxreg-verify") return run_maxreg(c);
        if (kind == "stokes-verify") return run_stokes(c);
        if (kind == "mhd-run") return run_mhd(c, false);
        if (kind == "constants-fit") return run_mhd(c, true);
        if (kind == "ode-bound") return run_ode(c);
        if (kind == "report") return run_report(c);
        std::cerr << "unknown subcommand\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
