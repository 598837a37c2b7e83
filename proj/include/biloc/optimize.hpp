#ifndef BILOC_OPTIMIZE_HPP
#define BILOC_OPTIMIZE_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "biloc/bilocal.hpp"

namespace biloc {

struct SeesawOptions {
    int max_iters = 500;
    int restarts = 20;
    double tol_improve = 1e-10;
    double weight_guard = 1e-12;
    std::uint64_t seed = 0;
    bool optimize_sources = false;

    void validate() const;
};

struct RestartSummary {
    double S = 0.0;
    int iterations = 0;
    bool converged = false;
};

struct OptimizationTrace {
    std::vector<double> s_values;  // best restart, value after each round
    ObservableSet best;
    std::optional<SourceForm> best_sources;
    double best_S = 0.0;
    int iterations = 0;
    bool converged = false;
    int best_restart = -1;  // -1 when the identity fallback wins
    std::vector<RestartSummary> per_restart;
    std::vector<std::string> warnings;
};

// One linearized ascent step for a party: weighted partial contractions of
// rho against the fixed operators, conditional expectation onto the party's
// algebra, spectral sign. The candidate pair replaces the current one only
// when S improves by at least tol_improve.
struct PartyUpdate {
    ObservableSet obs;
    bool accepted = false;
    IJValue value{};
};
PartyUpdate party_update(const NetworkState& state, const ObservableSet& obs, int party,
                         const SeesawOptions& opts);

// Accept-if-improve update of one source (0 = rho_AB, 1 = rho_BC) toward the
// top eigenprojector of its effective operator; the state must carry its
// product source form.
struct SourceUpdate {
    NetworkState state;
    bool accepted = false;
    IJValue value{};
};
SourceUpdate source_update(const ObservableSet& obs, const NetworkState& state, int source,
                           const SeesawOptions& opts);

OptimizationTrace seesaw(const NetworkState& state, ScenarioPtr s, const SeesawOptions& opts,
                         ExecPolicy policy = ExecPolicy::parallel);

// One sweep row per grid point. Points that carry observables are evaluated
// directly (converged = true, iters = 0); the rest run the see-saw.
struct SweepPoint {
    NetworkState state;
    ScenarioPtr scenario;
    std::optional<ObservableSet> observables;
};
struct SweepRow {
    double param = 0.0;
    double S_best = 0.0;
    bool converged = false;
    int iters = 0;
};
std::vector<SweepRow> sweep(const std::vector<double>& grid,
                            const std::function<SweepPoint(double)>& builder,
                            const SeesawOptions& opts,
                            ExecPolicy policy = ExecPolicy::parallel);

// Werner-visibility family on the canonical scenario with the canonical
// observables attached (evaluate-only rows).
SweepPoint werner_sweep_point(double v);

}  // namespace biloc

#endif
