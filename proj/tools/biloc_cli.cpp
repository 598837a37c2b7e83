// Command-line front end: validate scenario files, evaluate and optimize the
// bilocal quantity, sweep parameter families, run the classical enumeration,
// and emit the canonical maximal-violation triple.
//
// Exit codes: 0 success, 1 domain invariant violated, 2 I/O or parse error.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "biloc/io.hpp"

namespace fs = std::filesystem;
using namespace biloc;

namespace {

struct Options {
    std::string scenario, state, observables, out, table, mode = "eval";
    std::string grid;
    int restarts = 20, max_iters = 500, resolution = 0;
    std::uint64_t seed = 0;
    bool optimize_sources = false, quiet = false;
    int classical_L = 2, classical_M = 2;
};

std::vector<double> parse_grid(const std::string& s) {
    if (s.empty()) {
        std::vector<double> g;
        for (int k = 0; k <= 20; ++k) g.push_back(0.05 * k);
        return g;
    }
    std::vector<double> g;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            g.push_back(std::stod(tok));
        } catch (const std::exception&) {
            throw io_error("bad grid entry '" + tok + "'");
        }
    }
    if (g.empty()) throw io_error("empty grid");
    return g;
}

void emit(const Options& opt, const json& j) {
    if (opt.out.empty())
        std::cout << j.dump(2) << "\n";
    else
        save_json_file(opt.out, j);
}

int cmd_validate(const Options& opt) {
    ScenarioPtr sc = scenario_from_json(load_json_file(opt.scenario));
    double residual = sc->commutation_residual();
    bool valid = residual <= commute_tol(sc->dim);
    const char* names[3] = {"A", "B", "C"};
    std::printf("commutation residual: %.3e (tolerance %.3e)\n", residual,
                commute_tol(sc->dim));
    for (int p = 0; p < 3; ++p) {
        const MatrixAlgebra& alg = sc->party(p);
        std::printf("algebra %s: blocks [", names[p]);
        for (size_t k = 0; k < alg.blocks.size(); ++k)
            std::printf("%s(%d,%d)", k ? ", " : "", alg.blocks[k].first, alg.blocks[k].second);
        std::printf("], abelian=%s, contains_M2=%s\n", alg.is_abelian() ? "yes" : "no",
                    alg.contains_m2() ? "yes" : "no");
    }
    std::printf("valid: %s\n", valid ? "yes" : "no");
    return valid ? 0 : 1;
}

int cmd_evaluate(const Options& opt) {
    ScenarioPtr sc = scenario_from_json(load_json_file(opt.scenario));
    NetworkState st = state_from_json(load_json_file(opt.state), sc);
    ObservableSet obs = observables_from_json(load_json_file(opt.observables), sc);

    BilocalReport rep = evaluate(st, obs);
    ProbabilityTable tab = probability_table(st, obs);
    json j = report_to_json(rep);
    j["independence_residual"] = check_independence(st, *sc);
    j["marginal_factorization_residual"] = marginal_factorization_residual(tab);
    emit(opt, j);
    if (!opt.table.empty()) save_text_file(opt.table, probability_csv(tab));
    return 0;
}

int cmd_optimize(const Options& opt) {
    ScenarioPtr sc = scenario_from_json(load_json_file(opt.scenario));
    NetworkState st = state_from_json(load_json_file(opt.state), sc);

    SeesawOptions so;
    so.restarts = opt.restarts;
    so.max_iters = opt.max_iters;
    so.seed = opt.seed;
    so.optimize_sources = opt.optimize_sources;

    if (!opt.quiet) std::fprintf(stderr, "seed %llu\n", (unsigned long long)opt.seed);
    OptimizationTrace tr = seesaw(st, sc, so);
    for (const auto& w : tr.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());

    json j = trace_to_json(tr, opt.seed);
    if (opt.resolution > 0) {
        GridSearchResult gr = grid_search_qubit(st, sc, opt.resolution);
        j["grid_oracle_S"] = gr.S;
        j["grid_oracle_resolution"] = opt.resolution;
        if (!opt.quiet)
            std::fprintf(stderr, "grid oracle (resolution %d): S = %.12f\n", opt.resolution,
                         gr.S);
    }
    emit(opt, j);
    return 0;
}

int cmd_sweep(const Options& opt) {
    std::vector<double> grid = parse_grid(opt.grid);
    bool eval_mode = opt.mode == "eval";
    if (!eval_mode && opt.mode != "seesaw") throw io_error("mode must be eval or seesaw");

    SeesawOptions so;
    so.restarts = opt.restarts;
    so.max_iters = opt.max_iters;
    so.seed = opt.seed;
    if (!eval_mode && !opt.quiet)
        std::fprintf(stderr, "seed %llu\n", (unsigned long long)opt.seed);

    auto builder = [&](double v) {
        SweepPoint pt = werner_sweep_point(v);
        if (!eval_mode) pt.observables.reset();
        return pt;
    };
    std::vector<SweepRow> rows = sweep(grid, builder, so);
    std::string csv = sweep_csv(rows);
    if (opt.out.empty())
        std::fputs(csv.c_str(), stdout);
    else
        save_text_file(opt.out, csv);
    return 0;
}

int cmd_classical(const Options& opt) {
    double v = classical_bilocal_max(opt.classical_L, opt.classical_M);
    if (v == std::floor(v))
        std::printf("%.1f\n", v);
    else
        std::printf("%.12g\n", v);
    return 0;
}

int cmd_canonical(const Options& opt) {
    if (opt.out.empty()) throw io_error("canonical needs --out DIR");
    fs::create_directories(opt.out);
    CanonicalTriple canon = canonical_max_violation();
    fs::path dir(opt.out);
    save_json_file((dir / "scenario.json").string(), scenario_to_json(*canon.scenario));
    save_json_file((dir / "state.json").string(), state_to_json(canon.state));
    save_json_file((dir / "observables.json").string(),
                   observables_to_json(canon.observables));
    if (!opt.quiet)
        std::printf("wrote scenario.json, state.json, observables.json to %s\n",
                    opt.out.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"bilocal inequality laboratory for commuting-algebra network models"};
    app.require_subcommand(1);

    Options opt;
    app.add_flag("--quiet", opt.quiet, "suppress informational output");

    auto add_common = [&](CLI::App* c, bool needs_state, bool needs_obs) {
        c->add_option("--scenario", opt.scenario, "scenario JSON file")->required();
        if (needs_state)
            c->add_option("--state", opt.state, "network state JSON file")->required();
        if (needs_obs)
            c->add_option("--observables", opt.observables, "observables JSON file")
                ->required();
    };

    CLI::App* validate = app.add_subcommand("validate", "check a scenario file");
    add_common(validate, false, false);

    CLI::App* eval = app.add_subcommand("evaluate", "evaluate I, J, S and residuals");
    add_common(eval, true, true);
    eval->add_option("--out", opt.out, "write the report JSON here");
    eval->add_option("--table", opt.table, "write the correlation table CSV here");

    CLI::App* optimize = app.add_subcommand("optimize", "see-saw maximization of S");
    add_common(optimize, true, false);
    optimize->add_option("--out", opt.out, "write the trace JSON here");
    optimize->add_option("--restarts", opt.restarts, "random restarts");
    optimize->add_option("--max-iters", opt.max_iters, "iteration cap per restart");
    optimize->add_option("--seed", opt.seed, "RNG seed");
    optimize->add_option("--resolution", opt.resolution,
                         "also run the qubit grid oracle at this resolution");
    optimize->add_flag("--optimize-sources", opt.optimize_sources,
                       "co-optimize the two source states");

    CLI::App* sweepc = app.add_subcommand("sweep", "Werner visibility sweep (CSV)");
    sweepc->add_option("--grid", opt.grid, "comma-separated visibility values");
    sweepc->add_option("--mode", opt.mode, "eval (canonical observables) or seesaw");
    sweepc->add_option("--out", opt.out, "write the CSV here");
    sweepc->add_option("--restarts", opt.restarts, "random restarts (seesaw mode)");
    sweepc->add_option("--max-iters", opt.max_iters, "iteration cap (seesaw mode)");
    sweepc->add_option("--seed", opt.seed, "RNG seed (seesaw mode)");

    CLI::App* classical = app.add_subcommand("classical", "deterministic bilocal maximum");
    classical->add_option("L", opt.classical_L, "alphabet size of the first source");
    classical->add_option("M", opt.classical_M, "alphabet size of the second source");

    CLI::App* canonical =
        app.add_subcommand("canonical", "write the maximal-violation witness files");
    canonical->add_option("--out", opt.out, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (validate->parsed()) return cmd_validate(opt);
        if (eval->parsed()) return cmd_evaluate(opt);
        if (optimize->parsed()) return cmd_optimize(opt);
        if (sweepc->parsed()) return cmd_sweep(opt);
        if (classical->parsed()) return cmd_classical(opt);
        if (canonical->parsed()) return cmd_canonical(opt);
    } catch (const io_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const domain_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
