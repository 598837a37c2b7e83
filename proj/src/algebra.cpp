#include "biloc/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>

namespace biloc {

namespace {

// Offsets of each block along the diagonal in block coordinates.
std::vector<int> block_offsets(const std::vector<std::pair<int, int>>& blocks) {
    std::vector<int> off;
    int acc = 0;
    for (auto [n, m] : blocks) {
        off.push_back(acc);
        acc += n * m;
    }
    return off;
}

}  // namespace

bool MatrixAlgebra::is_abelian() const {
    return std::all_of(blocks.begin(), blocks.end(), [](auto b) { return b.first == 1; });
}

bool MatrixAlgebra::contains_m2() const {
    return std::any_of(blocks.begin(), blocks.end(), [](auto b) { return b.first >= 2; });
}

int MatrixAlgebra::span_dim() const {
    int s = 0;
    for (auto [n, m] : blocks) s += n * n;
    return s;
}

std::vector<Mat> MatrixAlgebra::reduced_blocks(const Mat& x) const {
    Mat y = embedding * x * embedding.adjoint();
    std::vector<Mat> out;
    auto off = block_offsets(blocks);
    for (size_t i = 0; i < blocks.size(); ++i) {
        auto [n, m] = blocks[i];
        Mat r = Mat::Zero(n, n);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                cplx acc = 0.0;
                for (int s = 0; s < m; ++s) acc += y(off[i] + a * m + s, off[i] + b * m + s);
                r(a, b) = acc / static_cast<double>(m);
            }
        out.push_back(std::move(r));
    }
    return out;
}

Mat MatrixAlgebra::assemble(const std::vector<Mat>& reduced) const {
    Mat y = Mat::Zero(ambient_dim, ambient_dim);
    auto off = block_offsets(blocks);
    for (size_t i = 0; i < blocks.size(); ++i) {
        auto [n, m] = blocks[i];
        y.block(off[i], off[i], n * m, n * m) = kron(reduced[i], Mat::Identity(m, m));
    }
    return embedding.adjoint() * y * embedding;
}

Mat MatrixAlgebra::conditional_expectation(const Mat& x) const {
    if (x.rows() != ambient_dim || x.cols() != ambient_dim)
        throw domain_error("conditional_expectation: dimension mismatch");
    return assemble(reduced_blocks(x));
}

double MatrixAlgebra::membership_residual(const Mat& x) const {
    return operator_norm(x - conditional_expectation(x));
}

Mat MatrixAlgebra::sign_element(const Mat& h) const {
    std::vector<Mat> red = reduced_blocks(h);
    for (auto& r : red) r = sign_operator(herm_part(r));
    return assemble(red);
}

Mat MatrixAlgebra::random_sign_element(Rng& rng) const {
    return sign_element(random_hermitian(ambient_dim, rng));
}

std::pair<Mat, Mat> MatrixAlgebra::anticommuting_pair() const {
    for (size_t i = 0; i < blocks.size(); ++i) {
        auto [n, m] = blocks[i];
        if (n < 2) continue;
        std::vector<Mat> rx, ry;
        for (size_t j = 0; j < blocks.size(); ++j) {
            rx.push_back(Mat::Zero(blocks[j].first, blocks[j].first));
            ry.push_back(Mat::Zero(blocks[j].first, blocks[j].first));
        }
        rx[i].block(0, 0, 2, 2) = pauli(1);
        ry[i].block(0, 0, 2, 2) = pauli(3);
        (void)m;
        return {assemble(rx), assemble(ry)};
    }
    throw domain_error("algebra has no block of dimension >= 2");
}

MatrixAlgebra make_block_algebra(int ambient_dim, std::vector<std::pair<int, int>> blocks,
                                 Mat embedding) {
    if (ambient_dim < 1) throw domain_error("ambient dimension must be positive");
    int total = 0;
    for (auto [n, m] : blocks) {
        if (n < 1 || m < 1) throw domain_error("block dimensions must be positive");
        total += n * m;
    }
    if (total != ambient_dim) throw domain_error("block dimensions do not sum to ambient_dim");
    if (embedding.rows() != ambient_dim || embedding.cols() != ambient_dim)
        throw domain_error("embedding has wrong shape");
    double udev = operator_norm(Mat(embedding * embedding.adjoint()) -
                                Mat(Mat::Identity(ambient_dim, ambient_dim)));
    if (udev > tol_unitary) throw domain_error("embedding is not unitary");

    MatrixAlgebra alg;
    alg.ambient_dim = ambient_dim;
    alg.blocks = std::move(blocks);
    alg.embedding = std::move(embedding);

    auto off = block_offsets(alg.blocks);
    for (size_t i = 0; i < alg.blocks.size(); ++i) {
        auto [n, m] = alg.blocks[i];
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                Mat y = Mat::Zero(ambient_dim, ambient_dim);
                for (int s = 0; s < m; ++s) y(off[i] + a * m + s, off[i] + b * m + s) = 1.0;
                alg.basis.push_back(alg.embedding.adjoint() * y * alg.embedding);
            }
    }
    return alg;
}

bool is_abelian(const MatrixAlgebra& alg) { return alg.is_abelian(); }
bool contains_M2(const MatrixAlgebra& alg) { return alg.contains_m2(); }
Mat conditional_expectation(const MatrixAlgebra& alg, const Mat& x) {
    // the operation contract takes Hermitian input; the member stays linear
    // for internal use on products (membership residuals, gradient steps)
    if (!is_hermitian(x)) throw domain_error("conditional_expectation: input not Hermitian");
    return alg.conditional_expectation(x);
}
double membership_residual(const MatrixAlgebra& alg, const Mat& x) {
    return alg.membership_residual(x);
}

const MatrixAlgebra& Scenario::party(int p) const {
    switch (p) {
        case 0: return alg_A;
        case 1: return alg_B;
        case 2: return alg_C;
        default: throw domain_error("party index out of range");
    }
}

double check_mutual_commutation(const Scenario& s) {
    double worst = 0.0;
    for (int p = 0; p < 3; ++p)
        for (int q = p + 1; q < 3; ++q)
            for (const Mat& x : s.party(p).basis)
                for (const Mat& y : s.party(q).basis)
                    worst = std::max(worst, operator_norm(x * y - y * x));
    return worst;
}

double Scenario::commutation_residual() const {
    std::call_once(comm_once_, [this] { comm_residual_ = check_mutual_commutation(*this); });
    return comm_residual_;
}

namespace {

// Block-diagonal subalgebra of a leg given a partition of the leg dimension,
// embedded through the permutation that moves the party's legs to the front.
MatrixAlgebra leg_algebra(const std::vector<int>& dims, const std::vector<int>& party_legs,
                          const std::vector<int>& partition) {
    int d = 1;
    for (int dk : dims) d *= dk;
    int leg_dim = 1;
    for (int k : party_legs) leg_dim *= dims[static_cast<size_t>(k)];
    int psum = std::accumulate(partition.begin(), partition.end(), 0);
    if (psum != leg_dim) throw domain_error("partition does not sum to the leg dimension");

    std::vector<int> order = party_legs;
    for (int k = 0; k < static_cast<int>(dims.size()); ++k)
        if (std::find(party_legs.begin(), party_legs.end(), k) == party_legs.end())
            order.push_back(k);

    int mult = d / leg_dim;
    std::vector<std::pair<int, int>> blocks;
    for (int n : partition) blocks.emplace_back(n, mult);
    return make_block_algebra(d, blocks, leg_permutation_unitary(dims, order));
}

}  // namespace

ScenarioPtr make_partitioned_scenario(const std::array<int, 4>& dims,
                                      const std::vector<int>& part_A,
                                      const std::vector<int>& part_B,
                                      const std::vector<int>& part_C) {
    for (int dk : dims)
        if (dk < 1) throw domain_error("tensor leg dimensions must be >= 1");
    long long d = 1;
    for (int dk : dims) {
        d *= dk;
        if (d > max_ambient_dim()) throw domain_error("scenario too large");
    }
    std::vector<int> dv(dims.begin(), dims.end());
    auto sc = std::make_shared<Scenario>(
        static_cast<int>(d), leg_algebra(dv, {0}, part_A), leg_algebra(dv, {1, 2}, part_B),
        leg_algebra(dv, {3}, part_C), dims);
    return sc;
}

ScenarioPtr make_tensor_scenario(int d_A, int d_B1, int d_B2, int d_C) {
    return make_partitioned_scenario({d_A, d_B1, d_B2, d_C}, {d_A}, {d_B1 * d_B2}, {d_C});
}

}  // namespace biloc
