#include "biloc/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include <Eigen/SVD>

namespace biloc {

// --- classical enumeration ----------------------------------------------------

void DeterministicStrategy::validate() const {
    if (L < 1 || M < 1) throw domain_error("hidden-variable alphabets must be nonempty");
    auto check_signs = [](const std::vector<int>& v, size_t n, const char* what) {
        if (v.size() != n) throw domain_error(std::string(what) + ": wrong length");
        for (int s : v)
            if (s != 1 && s != -1) throw domain_error(std::string(what) + ": values must be ±1");
    };
    check_signs(a0, static_cast<size_t>(L), "a0");
    check_signs(a1, static_cast<size_t>(L), "a1");
    check_signs(b0, static_cast<size_t>(L * M), "b0");
    check_signs(b1, static_cast<size_t>(L * M), "b1");
    check_signs(c0, static_cast<size_t>(M), "c0");
    check_signs(c1, static_cast<size_t>(M), "c1");
    auto check_weights = [](const std::vector<double>& w, size_t n, const char* what) {
        if (w.size() != n) throw domain_error(std::string(what) + ": wrong length");
        double sum = 0.0;
        for (double x : w) {
            if (x < 0.0) throw domain_error(std::string(what) + ": negative weight");
            sum += x;
        }
        if (std::abs(sum - 1.0) > 1e-12)
            throw domain_error(std::string(what) + ": weights do not sum to 1");
    };
    check_weights(p1, static_cast<size_t>(L), "p1");
    check_weights(p2, static_cast<size_t>(M), "p2");
}

double DeterministicStrategy::I() const {
    double acc = 0.0;
    for (int l = 0; l < L; ++l)
        for (int m = 0; m < M; ++m)
            acc += p1[static_cast<size_t>(l)] * p2[static_cast<size_t>(m)] *
                   (a0[static_cast<size_t>(l)] + a1[static_cast<size_t>(l)]) *
                   b0[static_cast<size_t>(l * M + m)] *
                   (c0[static_cast<size_t>(m)] + c1[static_cast<size_t>(m)]);
    return acc;
}

double DeterministicStrategy::J() const {
    double acc = 0.0;
    for (int l = 0; l < L; ++l)
        for (int m = 0; m < M; ++m)
            acc += p1[static_cast<size_t>(l)] * p2[static_cast<size_t>(m)] *
                   (a0[static_cast<size_t>(l)] - a1[static_cast<size_t>(l)]) *
                   b1[static_cast<size_t>(l * M + m)] *
                   (c0[static_cast<size_t>(m)] - c1[static_cast<size_t>(m)]);
    return acc;
}

double DeterministicStrategy::S() const {
    return std::sqrt(std::abs(I())) + std::sqrt(std::abs(J()));
}

double classical_bilocal_max(int L, int M, ExecPolicy policy) {
    if (L < 1 || M < 1) throw domain_error("alphabet sizes must be >= 1");
    if (static_cast<long long>(L) * M > classical_enumeration_cap)
        throw domain_error("enumeration cap exceeded");

    // With point-mass weights only the responses at one (λ, μ) cell matter,
    // and every cell ranges over the same 64 sign assignments.
    auto cell_max = [] {
        double best = 0.0;
        for (int bits = 0; bits < 64; ++bits) {
            int a0 = (bits & 1) ? 1 : -1;
            int a1 = (bits & 2) ? 1 : -1;
            int b0 = (bits & 4) ? 1 : -1;
            int b1 = (bits & 8) ? 1 : -1;
            int c0 = (bits & 16) ? 1 : -1;
            int c1 = (bits & 32) ? 1 : -1;
            double i = (a0 + a1) * b0 * (c0 + c1);
            double j = (a0 - a1) * b1 * (c0 - c1);
            best = std::max(best, std::sqrt(std::abs(i)) + std::sqrt(std::abs(j)));
        }
        return best;
    };

    const int cells = L * M;
    std::vector<double> per_cell(static_cast<size_t>(cells));
    if (policy == ExecPolicy::parallel) {
#pragma omp parallel for schedule(static)
        for (int k = 0; k < cells; ++k) per_cell[static_cast<size_t>(k)] = cell_max();
    } else {
        for (int k = 0; k < cells; ++k) per_cell[static_cast<size_t>(k)] = cell_max();
    }
    return *std::max_element(per_cell.begin(), per_cell.end());
}

// --- qubit grid search ---------------------------------------------------------

namespace {

constexpr int grid_resolution_cap = 128;
constexpr int general_path_resolution_cap = 8;
constexpr int frontier_buckets = 2048;

struct PairEntry {
    double ep = -1.0, em = -1.0;
    int t0 = -1, t1 = -1, pp = 0, pm = 0;
    bool valid() const { return t0 >= 0; }
};

// total order used to merge thread-local candidates deterministically
bool better(const PairEntry& a, const PairEntry& b) {
    if (!b.valid()) return a.valid();
    if (!a.valid()) return false;
    if (a.em != b.em) return a.em > b.em;
    if (a.ep != b.ep) return a.ep > b.ep;
    if (a.t0 != b.t0) return a.t0 < b.t0;
    return a.t1 < b.t1;
}

struct SideData {
    std::vector<double> s;  // N x 4, dot products against the four Pauli rows
    int n_points = 0;
};

// One-sided pair scan: Pareto frontier of (max_p |s_p(t0)+s_p(t1)|,
// max_p |s_p(t0)-s_p(t1)|) over all grid pairs, bucketed on the first
// coordinate. Every kept entry is achievable, so the final maximum is a
// grid-feasible lower bound.
std::vector<PairEntry> pair_frontier(const SideData& side, ExecPolicy policy) {
    const int n = side.n_points;
    double max_ep = 0.0;
    for (int t = 0; t < n; ++t)
        for (int p = 0; p < 4; ++p)
            max_ep = std::max(max_ep, 2.0 * std::abs(side.s[static_cast<size_t>(t * 4 + p)]));

    const double scale =
        max_ep > 0.0 ? (frontier_buckets - 1) / max_ep : 0.0;
    std::vector<PairEntry> buckets(frontier_buckets);

    auto scan_range = [&](int lo, int hi, std::vector<PairEntry>& out) {
        for (int t0 = lo; t0 < hi; ++t0) {
            const double* s0 = &side.s[static_cast<size_t>(t0 * 4)];
            for (int t1 = t0; t1 < n; ++t1) {
                const double* s1 = &side.s[static_cast<size_t>(t1 * 4)];
                double ep = -1.0, em = -1.0;
                int pp = 0, pm = 0;
                for (int p = 0; p < 4; ++p) {
                    double vplus = std::abs(s0[p] + s1[p]);
                    double vminus = std::abs(s0[p] - s1[p]);
                    if (vplus > ep) {
                        ep = vplus;
                        pp = p;
                    }
                    if (vminus > em) {
                        em = vminus;
                        pm = p;
                    }
                }
                int k = std::min(frontier_buckets - 1,
                                 static_cast<int>(ep * scale));
                PairEntry e{ep, em, t0, t1, pp, pm};
                if (better(e, out[static_cast<size_t>(k)])) out[static_cast<size_t>(k)] = e;
            }
        }
    };

    if (policy == ExecPolicy::parallel) {
#pragma omp parallel
        {
            std::vector<PairEntry> local(frontier_buckets);
#pragma omp for schedule(dynamic, 16) nowait
            for (int t0 = 0; t0 < n; ++t0) scan_range(t0, t0 + 1, local);
#pragma omp critical
            for (int k = 0; k < frontier_buckets; ++k)
                if (better(local[static_cast<size_t>(k)], buckets[static_cast<size_t>(k)]))
                    buckets[static_cast<size_t>(k)] = local[static_cast<size_t>(k)];
        }
    } else {
        scan_range(0, n, buckets);
    }

    // keep only Pareto-optimal representatives, sorted by ep descending
    std::vector<PairEntry> frontier;
    for (auto& e : buckets)
        if (e.valid()) frontier.push_back(e);
    std::sort(frontier.begin(), frontier.end(),
              [](const PairEntry& a, const PairEntry& b) { return a.ep > b.ep; });
    std::vector<PairEntry> pareto;
    double best_em = -1.0;
    for (const auto& e : frontier)
        if (e.em > best_em) {
            pareto.push_back(e);
            best_em = e.em;
        }
    return pareto;
}

struct GridGeometry {
    int res = 1;
    std::vector<double> theta, phi;
    int n_points() const { return res * res; }
    double theta_of(int t) const { return theta[static_cast<size_t>(t / res)]; }
    double phi_of(int t) const { return phi[static_cast<size_t>(t % res)]; }
    // Bloch vector components ordered (X, Y, Z) to match pauli(1..3).
    std::array<double, 3> unit(int t) const {
        double th = theta_of(t), ph = phi_of(t);
        return {std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th)};
    }
};

GridGeometry make_grid(int resolution) {
    GridGeometry g;
    g.res = resolution;
    const double pi = std::acos(-1.0);
    for (int k = 0; k < resolution; ++k)
        g.theta.push_back(resolution == 1 ? 0.0 : k * pi / (resolution - 1));
    for (int k = 0; k < resolution; ++k) g.phi.push_back(2.0 * pi * k / resolution);
    return g;
}

}  // namespace

double grid_error(int resolution) {
    const double pi = std::acos(-1.0);
    double dth = pi / (2.0 * std::max(1, resolution - 1));
    double dph = pi / resolution;
    double eps = std::hypot(dth, dph);
    return 4.0 * std::sqrt(2.0) * eps * eps + 1e-6;
}

GridSearchResult grid_search_qubit(const NetworkState& state, ScenarioPtr s, int resolution,
                                   ExecPolicy policy) {
    if (!s || !s->tensor_dims || *s->tensor_dims != std::array<int, 4>{2, 2, 2, 2})
        throw domain_error("grid search needs the (2,2,2,2) tensor scenario");
    for (int p = 0; p < 3; ++p)
        if (s->party(p).blocks.size() != 1 || s->party(p).blocks[0].first < 2)
            throw domain_error("grid search needs full qubit party blocks");
    if (resolution < 1) throw domain_error("resolution must be >= 1");
    if (resolution > grid_resolution_cap) throw domain_error("resolution too large");
    if (state.rho.rows() != 16) throw domain_error("grid search: dimension mismatch");

    // A|B1 x B2|C factorization of the Pauli correlation tensor
    // T[i][p][q][j] = tr(rho σ_i ⊗ σ_p ⊗ σ_q ⊗ σ_j): exact from the source
    // form when present, otherwise a rank test on the 12x12 reshaping over
    // (i,p) x (q,j) with i,j in 1..3 and p,q in 0..3.
    Eigen::MatrixXd corr;
    Eigen::VectorXd avec(12), cvec(12);
    bool rank_one = false;
    if (state.source_form && state.source_form->dims == std::array<int, 4>{2, 2, 2, 2}) {
        for (int i = 0; i < 3; ++i)
            for (int p = 0; p < 4; ++p)
                avec(i * 4 + p) =
                    real_trace(state.source_form->rho_AB * kron(pauli(i + 1), pauli(p)), 1e-9);
        for (int q = 0; q < 4; ++q)
            for (int j = 0; j < 3; ++j)
                cvec(q * 3 + j) =
                    real_trace(state.source_form->rho_BC * kron(pauli(q), pauli(j + 1)), 1e-9);
        rank_one = true;
    } else {
        corr.resize(12, 12);
        for (int i = 0; i < 3; ++i)
            for (int p = 0; p < 4; ++p)
                for (int q = 0; q < 4; ++q)
                    for (int j = 0; j < 3; ++j) {
                        Mat op =
                            kron(kron(kron(pauli(i + 1), pauli(p)), pauli(q)), pauli(j + 1));
                        corr(i * 4 + p, q * 3 + j) = real_trace(state.rho * op, 1e-9);
                    }
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(corr,
                                              Eigen::ComputeThinU | Eigen::ComputeThinV);
        double s1 = svd.singularValues()(0);
        double s2 = svd.singularValues()(1);
        if (s2 <= 1e-9 * std::max(1.0, s1)) {
            double r = std::sqrt(s1);
            avec = r * svd.matrixU().col(0);
            cvec = r * svd.matrixV().col(0);
            rank_one = true;
        }
    }

    GridGeometry grid = make_grid(resolution);
    const int n = grid.n_points();
    std::vector<int> dims = {2, 2, 2, 2};

    double best_S = 2.0;  // the all-identity assignment
    ObservableSet best = ObservableSet::identity(s);

    if (rank_one) {
        auto side_dots = [&](const Eigen::VectorXd& vec, bool a_side) {
            SideData side;
            side.n_points = n;
            side.s.resize(static_cast<size_t>(n * 4));
            for (int t = 0; t < n; ++t) {
                auto u = grid.unit(t);
                for (int p = 0; p < 4; ++p) {
                    double acc = 0.0;
                    for (int i = 0; i < 3; ++i)
                        acc += u[static_cast<size_t>(i)] *
                               (a_side ? vec(i * 4 + p) : vec(p * 3 + i));
                    side.s[static_cast<size_t>(t * 4 + p)] = acc;
                }
            }
            return side;
        };
        std::vector<PairEntry> fa = pair_frontier(side_dots(avec, true), policy);
        std::vector<PairEntry> fc = pair_frontier(side_dots(cvec, false), policy);

        PairEntry best_a, best_c;
        for (const auto& ea : fa)
            for (const auto& ec : fc) {
                double sv = std::sqrt(ea.ep * ec.ep) + std::sqrt(ea.em * ec.em);
                if (sv > best_S) {
                    best_S = sv;
                    best_a = ea;
                    best_c = ec;
                }
            }
        if (best_a.valid()) {
            Mat a0 = embed_contiguous(
                bloch_observable(grid.theta_of(best_a.t0), grid.phi_of(best_a.t0)), dims, 0, 1);
            Mat a1 = embed_contiguous(
                bloch_observable(grid.theta_of(best_a.t1), grid.phi_of(best_a.t1)), dims, 0, 1);
            Mat b0 = embed_contiguous(kron(pauli(best_a.pp), pauli(best_c.pp)), dims, 1, 2);
            Mat b1 = embed_contiguous(kron(pauli(best_a.pm), pauli(best_c.pm)), dims, 1, 2);
            Mat c0 = embed_contiguous(
                bloch_observable(grid.theta_of(best_c.t0), grid.phi_of(best_c.t0)), dims, 3, 1);
            Mat c1 = embed_contiguous(
                bloch_observable(grid.theta_of(best_c.t1), grid.phi_of(best_c.t1)), dims, 3, 1);
            best = ObservableSet::create(s, a0, a1, b0, b1, c0, c1);
        }
        return {best_S, std::move(best)};
    }

    // correlations do not factorize: direct enumeration over both pair grids
    if (resolution > general_path_resolution_cap)
        throw domain_error("resolution too large for non-product correlations");

    struct Best {
        double S = -1.0;
        int a0 = 0, a1 = 0, c0 = 0, c1 = 0, pI = 0, qI = 0, pJ = 0, qJ = 0;
    };
    std::vector<std::array<double, 3>> units(static_cast<size_t>(n));
    for (int t = 0; t < n; ++t) units[static_cast<size_t>(t)] = grid.unit(t);

    auto scan_apair = [&](int t0, int t1, Best& out) {
        std::array<double, 3> up{}, um{};
        for (int i = 0; i < 3; ++i) {
            up[static_cast<size_t>(i)] =
                units[static_cast<size_t>(t0)][static_cast<size_t>(i)] +
                units[static_cast<size_t>(t1)][static_cast<size_t>(i)];
            um[static_cast<size_t>(i)] =
                units[static_cast<size_t>(t0)][static_cast<size_t>(i)] -
                units[static_cast<size_t>(t1)][static_cast<size_t>(i)];
        }
        // alpha[(p,q)][j] = Σ_i u_i T[i][p][q][j]
        double aI[16][3], aJ[16][3];
        for (int p = 0; p < 4; ++p)
            for (int q = 0; q < 4; ++q)
                for (int j = 0; j < 3; ++j) {
                    double sI = 0.0, sJ = 0.0;
                    for (int i = 0; i < 3; ++i) {
                        double tval = corr(i * 4 + p, q * 3 + j);
                        sI += up[static_cast<size_t>(i)] * tval;
                        sJ += um[static_cast<size_t>(i)] * tval;
                    }
                    aI[p * 4 + q][j] = sI;
                    aJ[p * 4 + q][j] = sJ;
                }
        for (int u0 = 0; u0 < n; ++u0)
            for (int u1 = u0; u1 < n; ++u1) {
                double bi = 0.0, bj = 0.0;
                int piI = 0, qiI = 0, piJ = 0, qiJ = 0;
                for (int pq = 0; pq < 16; ++pq) {
                    double vI = 0.0, vJ = 0.0;
                    for (int j = 0; j < 3; ++j) {
                        double vp = units[static_cast<size_t>(u0)][static_cast<size_t>(j)] +
                                    units[static_cast<size_t>(u1)][static_cast<size_t>(j)];
                        double vm = units[static_cast<size_t>(u0)][static_cast<size_t>(j)] -
                                    units[static_cast<size_t>(u1)][static_cast<size_t>(j)];
                        vI += aI[pq][j] * vp;
                        vJ += aJ[pq][j] * vm;
                    }
                    if (std::abs(vI) > bi) {
                        bi = std::abs(vI);
                        piI = pq / 4;
                        qiI = pq % 4;
                    }
                    if (std::abs(vJ) > bj) {
                        bj = std::abs(vJ);
                        piJ = pq / 4;
                        qiJ = pq % 4;
                    }
                }
                double sv = std::sqrt(bi) + std::sqrt(bj);
                if (sv > out.S) out = {sv, t0, t1, u0, u1, piI, qiI, piJ, qiJ};
            }
    };

    Best global;
    if (policy == ExecPolicy::parallel) {
#pragma omp parallel
        {
            Best local;
#pragma omp for schedule(dynamic) nowait
            for (int t0 = 0; t0 < n; ++t0)
                for (int t1 = t0; t1 < n; ++t1) scan_apair(t0, t1, local);
#pragma omp critical
            if (local.S > global.S ||
                (local.S == global.S && std::tie(local.a0, local.a1, local.c0, local.c1) <
                                            std::tie(global.a0, global.a1, global.c0, global.c1)))
                global = local;
        }
    } else {
        for (int t0 = 0; t0 < n; ++t0)
            for (int t1 = t0; t1 < n; ++t1) scan_apair(t0, t1, global);
    }

    if (global.S > best_S) {
        best_S = global.S;
        Mat a0 = embed_contiguous(
            bloch_observable(grid.theta_of(global.a0), grid.phi_of(global.a0)), dims, 0, 1);
        Mat a1 = embed_contiguous(
            bloch_observable(grid.theta_of(global.a1), grid.phi_of(global.a1)), dims, 0, 1);
        Mat b0 = embed_contiguous(kron(pauli(global.pI), pauli(global.qI)), dims, 1, 2);
        Mat b1 = embed_contiguous(kron(pauli(global.pJ), pauli(global.qJ)), dims, 1, 2);
        Mat c0 = embed_contiguous(
            bloch_observable(grid.theta_of(global.c0), grid.phi_of(global.c0)), dims, 3, 1);
        Mat c1 = embed_contiguous(
            bloch_observable(grid.theta_of(global.c1), grid.phi_of(global.c1)), dims, 3, 1);
        best = ObservableSet::create(s, a0, a1, b0, b1, c0, c1);
    }
    return {best_S, std::move(best)};
}

// --- random search ---------------------------------------------------------------

RandomSearchResult random_search(const NetworkState& state, ScenarioPtr s, int n,
                                 std::uint64_t seed, ExecPolicy policy) {
    if (!s) throw domain_error("random search: missing scenario");
    if (state.rho.rows() != s->dim) throw domain_error("random search: dimension mismatch");
    if (n < 0) throw domain_error("sample count must be nonnegative");

    std::vector<double> values(static_cast<size_t>(n));
    auto sample_value = [&](int i) {
        Rng rng(seed, static_cast<std::uint64_t>(i));
        ObservableSet obs = random_observable_set(s, rng);
        return evaluate_ij(state, obs).S;
    };
    if (policy == ExecPolicy::parallel) {
#pragma omp parallel for schedule(dynamic, 8)
        for (int i = 0; i < n; ++i) values[static_cast<size_t>(i)] = sample_value(i);
    } else {
        for (int i = 0; i < n; ++i) values[static_cast<size_t>(i)] = sample_value(i);
    }

    int best_i = -1;
    double best_S = 2.0;  // identity fallback
    for (int i = 0; i < n; ++i)
        if (values[static_cast<size_t>(i)] > best_S) {
            best_S = values[static_cast<size_t>(i)];
            best_i = i;
        }

    if (best_i < 0) return {2.0, ObservableSet::identity(s)};
    Rng rng(seed, static_cast<std::uint64_t>(best_i));
    return {best_S, random_observable_set(s, rng)};
}

}  // namespace biloc
