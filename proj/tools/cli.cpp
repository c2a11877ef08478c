#include "skomap/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <sstream>

#include "skomap/config.hpp"
#include "skomap/csv.hpp"
#include "skomap/esm.hpp"
#include "skomap/parallel.hpp"
#include "skomap/report.hpp"

namespace skomap {

namespace {

using nlohmann::ordered_json;

struct Options {
    std::optional<std::string> config;
    std::optional<std::string> out;
    std::optional<std::string> seeds;
    std::optional<double> tol;
    std::optional<std::size_t> threads;
    bool inject_fault = false;

    // solve
    std::vector<std::string> files;
    // verify
    std::string suite;
    // check-conditions without a config
    std::optional<std::string> kind;
    std::optional<double> alpha;
    std::optional<double> tau;
    std::optional<std::string> construction;
    std::optional<double> c1;
};

std::string join(const std::string& dir, const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
}

std::string output_dir(const Options& o, const std::optional<std::string>& from_config) {
    if (o.out) return *o.out;
    if (from_config) return *from_config;
    throw UsageError("no output directory: pass --out or set \"out\" in the config");
}

void print_json(std::ostream& out, const ordered_json& j) { out << j.dump(2) << '\n'; }

int cmd_solve(const Options& o, std::ostream& out) {
    std::string psi_file, lower_file, upper_file;
    std::optional<std::string> cfg_out;
    if (o.config) {
        if (!o.files.empty()) throw UsageError("solve takes either --config or three CSV files");
        const auto c = parse_solve_config(load_json_file(*o.config));
        psi_file = c.psi;
        lower_file = c.lower;
        upper_file = c.upper;
        cfg_out = c.out;
    } else {
        if (o.files.size() != 3) throw UsageError("solve needs psi.csv lower.csv upper.csv");
        psi_file = o.files[0];
        lower_file = o.files[1];
        upper_file = o.files[2];
    }
    const std::string dir = output_dir(o, cfg_out);
    const auto psi = read_path_csv_file(psi_file);
    const auto lower = read_path_csv_file(lower_file);
    const auto upper = read_path_csv_file(upper_file);
    const auto in = align(psi, lower, upper);
    const auto sol = esm_solve(in.psi, in.bounds);
    const auto check = verify_esp(sol, in.psi, in.bounds, o.tol.value_or(1e-9));

    std::filesystem::create_directories(dir);
    write_path_csv_file(join(dir, "phi.csv"), sol.phi);
    write_path_csv_file(join(dir, "eta.csv"), sol.eta);
    write_path_csv_file(join(dir, "eta_l.csv"), sol.eta_l);
    write_path_csv_file(join(dir, "eta_r.csv"), sol.eta_r);
    ordered_json s;
    s["points"] = sol.phi.size();
    s["horizon"] = sol.phi.grid().horizon();
    s["variation"] = {{"phi", json_number(variation(sol.phi))},
                      {"eta", json_number(variation(sol.eta))},
                      {"eta_l", json_number(variation(sol.eta_l))},
                      {"eta_r", json_number(variation(sol.eta_r))}};
    s["range_check"] = to_json(check);
    write_text_file(join(dir, "summary.json"), s.dump(2) + "\n");
    print_json(out, s);
    return check.passed ? exit_ok : exit_failure;
}

int cmd_verify(const Options& o, std::ostream& out) {
    VerifyConfig c;
    if (o.config) {
        c = parse_verify_config(load_json_file(*o.config));
        if (!o.suite.empty() && parse_suite(o.suite) != c.suite) throw UsageError("suite differs from the config");
    } else {
        if (o.suite.empty()) throw UsageError("verify needs a suite name");
        c.suite = parse_suite(o.suite);
        c.seeds = parse_seed_range("0..99");
    }
    if (o.seeds) c.seeds = parse_seed_range(*o.seeds);
    if (o.tol) c.tol = o.tol;
    if (o.inject_fault) testing::inject_sign_fault(true);
    SuiteResult r;
    try {
        r = run_suite(c.suite, c.seeds, c.tol, resolve_threads(o.threads));
    } catch (...) {
        testing::inject_sign_fault(false);
        throw;
    }
    testing::inject_sign_fault(false);
    const auto j = to_json(r);
    if (o.out) write_text_file(join(*o.out, "verify_" + r.suite + ".json"), j.dump(2) + "\n");
    print_json(out, j);
    return r.passed ? exit_ok : exit_failure;
}

std::vector<std::uint64_t> seed_override(const Options& o, std::vector<std::uint64_t> seeds) {
    if (!o.seeds) return seeds;
    return expand_seeds(parse_seed_range(*o.seeds));
}

int cmd_cusp(const Options& o, std::ostream& out) {
    if (!o.config) throw UsageError("cusp needs --config");
    auto c = parse_cusp_config(load_json_file(*o.config));
    c.experiment.seeds = seed_override(o, c.experiment.seeds);
    const std::string dir = output_dir(o, c.out);
    const auto rep = variation_experiment(c.experiment, resolve_threads(o.threads));

    std::ostringstream csv;
    write_rows_header(csv, "", "alpha", false);
    write_rows(csv, rep, "", false);
    write_text_file(join(dir, "cusp_rows.csv"), csv.str());
    ordered_json s = to_json(rep, "alpha");
    s["boundary"] = boundary_kind_name(c.experiment.spec.kind);
    write_text_file(join(dir, "cusp_summary.json"), s.dump(2) + "\n");
    print_json(out, s);
    return exit_ok;
}

int cmd_thorn(const Options& o, std::ostream& out) {
    if (!o.config) throw UsageError("thorn needs --config");
    auto c = parse_thorn_config(load_json_file(*o.config));
    c.sweep.seeds = seed_override(o, c.sweep.seeds);
    const std::string dir = output_dir(o, c.out);
    const std::size_t threads = resolve_threads(o.threads);
    validate(c.sweep);

    const auto exc = excursion_variation_experiment(c.sweep, threads);
    const auto full = semimartingale_experiment(c.sweep, threads);
    std::optional<VariationReport> control;
    if (c.control) {
        ThornExperiment e = c.sweep;
        e.specs = {*c.control};
        control = semimartingale_experiment(e, threads);
        control->experiment = "thorn_control";
    }

    std::ostringstream csv;
    write_rows_header(csv, "experiment", "gamma", true);
    write_rows(csv, exc, "per_excursion", true);
    write_rows(csv, full, "full_horizon", true);
    if (control) write_rows(csv, *control, "control", true);
    write_text_file(join(dir, "thorn_rows.csv"), csv.str());

    ordered_json s;
    s["experiment"] = "thorn";
    s["per_excursion"] = to_json(exc, "gamma");
    s["full_horizon"] = to_json(full, "gamma");
    if (control) {
        s["control"] = to_json(*control, "gamma");
        s["control"]["base_width"] = c.control->base_width;
    }
    write_text_file(join(dir, "thorn_summary.json"), s.dump(2) + "\n");
    print_json(out, s);
    return exit_ok;
}

int cmd_check_conditions(const Options& o, std::ostream& out) {
    CheckConditionsConfig c;
    if (o.config) {
        c = parse_check_conditions_config(load_json_file(*o.config));
    } else {
        if (!o.kind) throw UsageError("check-conditions needs --config or --kind");
        c.boundary.kind = parse_boundary_kind(*o.kind);
        if (o.construction) c.sequence.construction = parse_construction(*o.construction);
        if (c.sequence.construction == Construction::boxes) c.sequence = box_options();
    }
    if (o.alpha) c.boundary.alpha = *o.alpha;
    if (o.tau) c.boundary.tau = *o.tau;
    if (o.c1) c.c1 = *o.c1;
    if (o.tol) c.cauchy_tol = *o.tol;
    c.boundary.validate();

    const auto seq = comb_sequence(c.boundary, c.sequence);
    ConditionReport rep;
    ordered_json j;
    j["boundary"] = {{"kind", boundary_kind_name(c.boundary.kind)}, {"alpha", c.boundary.alpha}, {"tau", c.boundary.tau}};
    j["sequence"] = to_json(seq);
    if (seq.construction == Construction::boxes) {
        rep = check_box_conditions(c.boundary, seq, boxes_for(c.boundary, seq), {c.c1, c.cauchy_tol});
        j["family"] = "boxes";
    } else {
        rep = check_comb_conditions(c.boundary, seq, {c.c1, c.cauchy_tol});
        j["family"] = "comb";
    }
    j["report"] = to_json(rep);
    if (o.out) write_text_file(join(*o.out, "conditions.json"), j.dump(2) + "\n");
    print_json(out, j);
    return rep.passed ? exit_ok : exit_failure;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Extended Skorokhod map on time-dependent intervals", "skomap"};
    app.require_subcommand(1);
    Options o;

    const auto common = [&](CLI::App* sub) {
        sub->add_option("--config", o.config, "JSON config file");
        sub->add_option("--out", o.out, "output directory");
        sub->add_option("--threads", o.threads, "worker threads (fallback: SKOMAP_THREADS)")->check(CLI::PositiveNumber);
    };

    auto* solve = app.add_subcommand("solve", "solve the map on CSV paths");
    common(solve);
    solve->add_option("files", o.files, "psi.csv lower.csv upper.csv");
    solve->add_option("--tol", o.tol, "range check tolerance");

    auto* verify = app.add_subcommand("verify", "run a seeded verification suite");
    common(verify);
    verify->add_option("suite", o.suite,
                       "esp | sp | oracle | mono-domain | mono-input | mono-constraint | symmetry | one-sided");
    verify->add_option("--seeds", o.seeds, "seed range a..b (default 0..99)");
    verify->add_option("--tol", o.tol, "violation tolerance");
    verify->add_flag("--inject-fault", o.inject_fault, "flip the sign of Xi (test fixture)")->group("");

    auto* cusp = app.add_subcommand("cusp", "local-time variation sweep in cusp domains");
    common(cusp);
    cusp->add_option("--seeds", o.seeds, "override the config seeds (a..b)");

    auto* thorn = app.add_subcommand("thorn", "local-time variation sweep in thorn domains");
    common(thorn);
    thorn->add_option("--seeds", o.seeds, "override the config seeds (a..b)");

    auto* check = app.add_subcommand("check-conditions", "build a comb or box sequence and check its conditions");
    common(check);
    check->add_option("--kind", o.kind, "symmetric_cusp | closing_cusp | opening_cusp | constant_gap");
    check->add_option("--alpha", o.alpha, "cusp exponent");
    check->add_option("--tau", o.tau, "pinch time");
    check->add_option("--construction", o.construction, "automatic | recursion | dyadic | boxes");
    check->add_option("--c1", o.c1, "constant of the min / box condition");
    check->add_option("--tol", o.tol, "Cauchy residual tolerance");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    }

    try {
        if (solve->parsed()) return cmd_solve(o, out);
        if (verify->parsed()) return cmd_verify(o, out);
        if (cusp->parsed()) return cmd_cusp(o, out);
        if (thorn->parsed()) return cmd_thorn(o, out);
        if (check->parsed()) return cmd_check_conditions(o, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return exit_domain;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_failure;
    }
    return exit_usage;
}

}  // namespace skomap
