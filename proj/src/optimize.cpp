#include "biloc/optimize.hpp"

#include <algorithm>
#include <cmath>

namespace biloc {

void SeesawOptions::validate() const {
    if (max_iters < 1) throw domain_error("max_iters must be >= 1");
    if (restarts < 1) throw domain_error("restarts must be >= 1");
    if (tol_improve <= 0.0 || weight_guard <= 0.0)
        throw domain_error("tolerances must be positive");
}

namespace {

double sqrt_weight(double v, double guard) {
    double sgn = v >= 0.0 ? 1.0 : -1.0;  // sign(0) -> +1
    return sgn / (2.0 * std::max(std::sqrt(std::abs(v)), guard));
}

ObservableSet with_pair(const ObservableSet& obs, int party, Mat first, Mat second) {
    ObservableSet o = obs;
    switch (party) {
        case 0: o.A0 = std::move(first); o.A1 = std::move(second); break;
        case 1: o.B0 = std::move(first); o.B1 = std::move(second); break;
        case 2: o.C0 = std::move(first); o.C1 = std::move(second); break;
        default: throw domain_error("party index out of range");
    }
    return o;
}

struct RestartResult {
    double S = 0.0;
    ObservableSet obs;
    std::optional<SourceForm> sources;
    std::vector<double> s_values;
    int iterations = 0;
    bool converged = false;
};

RestartResult run_restart(const NetworkState& init_state, ScenarioPtr sp,
                          const SeesawOptions& opts, std::uint64_t stream) {
    Rng rng(opts.seed, stream);
    RestartResult res;
    NetworkState state = init_state;
    ObservableSet obs = random_observable_set(sp, rng);
    double S = evaluate_ij(state, obs).S;
    res.s_values.push_back(S);

    for (int round = 0; round < opts.max_iters; ++round) {
        bool any = false;
        for (int party = 0; party < 3; ++party) {
            PartyUpdate up = party_update(state, obs, party, opts);
            if (up.accepted) {
                obs = std::move(up.obs);
                S = up.value.S;
                any = true;
            }
        }
        if (opts.optimize_sources) {
            for (int src = 0; src < 2; ++src) {
                SourceUpdate up = source_update(obs, state, src, opts);
                if (up.accepted) {
                    state = std::move(up.state);
                    S = up.value.S;
                    any = true;
                }
            }
        }
        res.s_values.push_back(S);
        res.iterations = round + 1;
        if (!any) {
            res.converged = true;
            break;
        }
    }
    res.S = S;
    res.obs = std::move(obs);
    if (opts.optimize_sources && state.source_form) res.sources = state.source_form;
    return res;
}

}  // namespace

PartyUpdate party_update(const NetworkState& state, const ObservableSet& obs, int party,
                         const SeesawOptions& opts) {
    const Scenario& s = *obs.scenario;
    IJValue cur = evaluate_ij(state, obs);
    double wi = sqrt_weight(cur.I, opts.weight_guard);
    double wj = sqrt_weight(cur.J, opts.weight_guard);

    const Mat& rho = state.rho;
    Mat gi, gj;  // gradients of I and J w.r.t. the party's two observables
    switch (party) {
        case 0:
            gi = wi * obs.B0 * (obs.C0 + obs.C1) * rho;
            gj = wj * obs.B1 * (obs.C0 - obs.C1) * rho;
            break;
        case 1:
            gi = wi * (obs.C0 + obs.C1) * rho * (obs.A0 + obs.A1);
            gj = wj * (obs.C0 - obs.C1) * rho * (obs.A0 - obs.A1);
            break;
        case 2:
            gi = wi * rho * (obs.A0 + obs.A1) * obs.B0;
            gj = wj * rho * (obs.A0 - obs.A1) * obs.B1;
            break;
        default:
            throw domain_error("party index out of range");
    }
    const MatrixAlgebra& alg = s.party(party);
    // For settings 0/1 the J gradient enters with opposite signs (A0 vs A1,
    // C0 vs C1); for Bob the two settings decouple entirely.
    Mat first, second;
    if (party == 1) {
        first = alg.sign_element(gi);
        second = alg.sign_element(gj);
    } else {
        first = alg.sign_element(gi + gj);
        second = alg.sign_element(gi - gj);
    }

    ObservableSet cand = with_pair(obs, party, std::move(first), std::move(second));
    IJValue next = evaluate_ij(state, cand);
    if (next.S > cur.S + opts.tol_improve) return {std::move(cand), true, next};
    return {obs, false, cur};
}

SourceUpdate source_update(const ObservableSet& obs, const NetworkState& state, int source,
                           const SeesawOptions& opts) {
    if (!state.source_form)
        throw domain_error("source optimization requires tensor model");
    const SourceForm& sf = *state.source_form;
    std::vector<int> dims(sf.dims.begin(), sf.dims.end());

    IJValue cur = evaluate_ij(state, obs);
    double wi = sqrt_weight(cur.I, opts.weight_guard);
    double wj = sqrt_weight(cur.J, opts.weight_guard);
    Mat w = wi * (obs.A0 + obs.A1) * obs.B0 * (obs.C0 + obs.C1) +
            wj * (obs.A0 - obs.A1) * obs.B1 * (obs.C0 - obs.C1);

    // Effective operator on the free source: contract the other source in.
    Mat eff;
    if (source == 0) {
        Mat other = kron(Mat::Identity(sf.dims[0] * sf.dims[1], sf.dims[0] * sf.dims[1]),
                         sf.rho_BC);
        eff = herm_part(partial_trace(other * w, dims, {0, 1}));
    } else {
        Mat other = kron(sf.rho_AB,
                         Mat::Identity(sf.dims[2] * sf.dims[3], sf.dims[2] * sf.dims[3]));
        eff = herm_part(partial_trace(other * w, dims, {2, 3}));
    }

    bool degenerate = false;
    Mat proj = top_eigenprojector(eff, degenerate);
    if (degenerate) return {state, false, cur};

    NetworkState cand = source == 0 ? product_source_state(state.scenario, proj, sf.rho_BC)
                                    : product_source_state(state.scenario, sf.rho_AB, proj);
    IJValue next = evaluate_ij(cand, obs);
    if (next.S > cur.S + opts.tol_improve) return {std::move(cand), true, next};
    return {state, false, cur};
}

OptimizationTrace seesaw(const NetworkState& state, ScenarioPtr s, const SeesawOptions& opts,
                         ExecPolicy policy) {
    opts.validate();
    if (!s) throw domain_error("seesaw: missing scenario");
    if (state.rho.rows() != s->dim) throw domain_error("seesaw: dimension mismatch");
    if (!s->commuting()) throw domain_error("seesaw: scenario algebras do not commute");

    OptimizationTrace trace;
    if (!opts.optimize_sources) {
        double indep = state.independence_residual ? *state.independence_residual
                                                   : check_independence(state, *s);
        if (indep > 1e-8)
            trace.warnings.push_back("independence residual " + std::to_string(indep) +
                                     " exceeds 1e-8; bilocal bounds may not apply");
    } else if (!state.source_form) {
        throw domain_error("source optimization requires tensor model");
    }

    // Identity fallback: S = 2 for any state, per the trivial assignment.
    ObservableSet id_obs = ObservableSet::identity(s);
    double id_S = evaluate_ij(state, id_obs).S;

    std::vector<RestartResult> results(static_cast<size_t>(opts.restarts));
    if (policy == ExecPolicy::parallel) {
#pragma omp parallel for schedule(dynamic)
        for (int r = 0; r < opts.restarts; ++r)
            results[static_cast<size_t>(r)] =
                run_restart(state, s, opts, static_cast<std::uint64_t>(r));
    } else {
        for (int r = 0; r < opts.restarts; ++r)
            results[static_cast<size_t>(r)] =
                run_restart(state, s, opts, static_cast<std::uint64_t>(r));
    }

    int best = -1;
    double best_S = id_S;
    for (int r = 0; r < opts.restarts; ++r) {
        const auto& res = results[static_cast<size_t>(r)];
        trace.per_restart.push_back({res.S, res.iterations, res.converged});
        if (res.S > best_S) {
            best_S = res.S;
            best = r;
        }
    }

    trace.best_S = best_S;
    trace.best_restart = best;
    if (best < 0) {
        trace.best = std::move(id_obs);
        trace.s_values = {id_S};
        trace.iterations = 0;
        trace.converged = true;
        if (state.source_form) trace.best_sources = state.source_form;
    } else {
        RestartResult& win = results[static_cast<size_t>(best)];
        trace.best = std::move(win.obs);
        trace.s_values = std::move(win.s_values);
        trace.iterations = win.iterations;
        trace.converged = win.converged;
        trace.best_sources = win.sources;
        if (!trace.best_sources && state.source_form) trace.best_sources = state.source_form;
    }
    return trace;
}

std::vector<SweepRow> sweep(const std::vector<double>& grid,
                            const std::function<SweepPoint(double)>& builder,
                            const SeesawOptions& opts, ExecPolicy policy) {
    std::vector<SweepRow> rows(grid.size());
    auto run_one = [&](size_t k) {
        SweepPoint pt = builder(grid[k]);
        SweepRow row;
        row.param = grid[k];
        if (pt.observables) {
            row.S_best = evaluate_ij(pt.state, *pt.observables).S;
            row.converged = true;
            row.iters = 0;
        } else {
            OptimizationTrace tr = seesaw(pt.state, pt.scenario, opts, ExecPolicy::serial);
            row.S_best = tr.best_S;
            row.converged = tr.converged;
            row.iters = tr.iterations;
        }
        rows[k] = row;
    };
    if (policy == ExecPolicy::parallel) {
#pragma omp parallel for schedule(dynamic)
        for (size_t k = 0; k < grid.size(); ++k) run_one(k);
    } else {
        for (size_t k = 0; k < grid.size(); ++k) run_one(k);
    }
    return rows;
}

SweepPoint werner_sweep_point(double v) {
    CanonicalTriple canon = canonical_max_violation();
    NetworkState st = product_source_state(canon.scenario, werner_source(v), werner_source(v));
    return {std::move(st), canon.scenario, std::move(canon.observables)};
}

}  // namespace biloc
