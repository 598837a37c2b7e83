#ifndef BILOC_ORACLE_HPP
#define BILOC_ORACLE_HPP

#include <cstdint>
#include <vector>

#include "biloc/bilocal.hpp"

namespace biloc {

// Deterministic hidden-variable strategy over finite alphabets λ ∈ [L],
// μ ∈ [M]: responses a_x(λ), b_y(λ,μ), c_z(μ) in {-1,+1} with source
// weights p1, p2.
struct DeterministicStrategy {
    int L = 1, M = 1;
    std::vector<int> a0, a1;  // size L
    std::vector<int> b0, b1;  // size L*M, index λ*M + μ
    std::vector<int> c0, c1;  // size M
    std::vector<double> p1, p2;

    void validate() const;
    double I() const;
    double J() const;
    double S() const;
};

inline constexpr int classical_enumeration_cap = 4096;  // on L*M

// Exact maximum of S over deterministic responses with point-mass weights.
// I and J are multilinear in the response values, so the per-source optimum
// sits at a single (λ, μ) cell; each cell is solved by exhausting the 2^6
// local sign assignments. Expected value: 2.
double classical_bilocal_max(int L, int M, ExecPolicy policy = ExecPolicy::parallel);

struct GridSearchResult {
    double S = 0.0;
    ObservableSet best;
};

// Dense search over qubit observables on the (2,2,2,2) tensor scenario:
// A/C observables cosθ Z + sinθ cosφ X + sinθ sinφ Y on a resolution×resolution
// (θ, φ) grid, Bob restricted to the 16 tensor-Pauli products P ⊗ Q (signs
// are absorbed by |I| and |J|; P = Q = I is the included identity). The
// all-identity assignment (S = 2) is always a candidate. Exact over the grid
// up to frontier bucketing when the Pauli correlation tensor factorizes
// across the A|B1 and B2|C cuts (every product-source state); otherwise a
// direct enumeration is used, capped at resolution 8.
GridSearchResult grid_search_qubit(const NetworkState& state, ScenarioPtr s, int resolution,
                                   ExecPolicy policy = ExecPolicy::parallel);

// Conservative bound on how far the grid optimum can sit below the continuum
// optimum for singlet-grade inputs (second order in the mesh angle).
double grid_error(int resolution);

struct RandomSearchResult {
    double S = 0.0;
    ObservableSet best;
};

// Best of n observable sets drawn from the see-saw restart sampler, with the
// identity assignment (S = 2) as the n = 0 fallback candidate.
RandomSearchResult random_search(const NetworkState& state, ScenarioPtr s, int n,
                                 std::uint64_t seed, ExecPolicy policy = ExecPolicy::parallel);

}  // namespace biloc

#endif
