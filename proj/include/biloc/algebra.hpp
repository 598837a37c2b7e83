#ifndef BILOC_ALGEBRA_HPP
#define BILOC_ALGEBRA_HPP

#include <array>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "biloc/linalg.hpp"

namespace biloc {

// A finite-dimensional *-subalgebra of the d x d matrices, stored through its
// canonical decomposition: conjugating by `embedding` brings every element to
// the block-diagonal form  ⊕_i ( M_{n_i} ⊗ I_{m_i} ). The spanning basis is
// the embedded matrix units of the blocks; each basis element has operator
// norm one.
struct MatrixAlgebra {
    int ambient_dim = 0;
    std::vector<std::pair<int, int>> blocks;  // (n_i, m_i)
    Mat embedding;                            // U with U X U* block-diagonal
    std::vector<Mat> basis;                   // derived; Σ n_i² elements

    bool is_abelian() const;
    bool contains_m2() const;
    int span_dim() const;

    // Per-block n_i x n_i reductions of U X U* (multiplicity average); these
    // are the block coordinates of the conditional expectation of X.
    std::vector<Mat> reduced_blocks(const Mat& x) const;
    // Inverse of reduced_blocks on algebra elements: U* (⊕ r_i ⊗ I_{m_i}) U.
    Mat assemble(const std::vector<Mat>& reduced) const;

    // Trace-orthogonal projection onto the algebra, extended linearly to
    // arbitrary (not necessarily Hermitian) inputs.
    Mat conditional_expectation(const Mat& x) const;
    double membership_residual(const Mat& x) const;

    // Spectral sign computed block-wise, so the result lies in the algebra by
    // construction. Input is reduced first; eigenvalue 0 maps to +1.
    Mat sign_element(const Mat& h) const;

    // Restart distribution: ambient GUE matrix, projected into the algebra by
    // the conditional expectation, then passed through the sign map.
    Mat random_sign_element(Rng& rng) const;

    // Hermitian pair (X, Y) in the algebra with XY = -YX and X² = Y² = P for
    // a rank-2 corner projection P of some block with n_i >= 2. Exact
    // anticommuting pairs squaring to the ambient identity do not exist when
    // odd blocks are present, so the corner form is the strongest witness
    // available in general.
    std::pair<Mat, Mat> anticommuting_pair() const;
};

MatrixAlgebra make_block_algebra(int ambient_dim, std::vector<std::pair<int, int>> blocks,
                                 Mat embedding);

bool is_abelian(const MatrixAlgebra& alg);
bool contains_M2(const MatrixAlgebra& alg);
Mat conditional_expectation(const MatrixAlgebra& alg, const Mat& x);
double membership_residual(const MatrixAlgebra& alg, const Mat& x);

// Three pairwise-commuting algebras on one ambient space.
struct Scenario {
    int dim = 0;
    MatrixAlgebra alg_A, alg_B, alg_C;
    std::array<std::string, 3> labels = {"A", "B", "C"};
    // Set when built on a four-leg tensor split (A, B1, B2, C).
    std::optional<std::array<int, 4>> tensor_dims;

    Scenario() = default;
    Scenario(int d, MatrixAlgebra a, MatrixAlgebra b, MatrixAlgebra c,
             std::optional<std::array<int, 4>> tdims = std::nullopt)
        : dim(d), alg_A(std::move(a)), alg_B(std::move(b)), alg_C(std::move(c)),
          tensor_dims(tdims) {}
    Scenario(const Scenario&) = delete;
    Scenario& operator=(const Scenario&) = delete;

    const MatrixAlgebra& party(int p) const;  // 0=A, 1=B, 2=C

    // Max cross-party commutator norm, computed once and cached.
    double commutation_residual() const;
    bool commuting(double tol_scale = 1.0) const {
        return commutation_residual() <= tol_scale * commute_tol(dim);
    }

  private:
    mutable std::once_flag comm_once_;
    mutable double comm_residual_ = -1.0;
};

using ScenarioPtr = std::shared_ptr<const Scenario>;

// Full recomputation (free-function form used by validation paths).
double check_mutual_commutation(const Scenario& s);

// Tensor-product model on legs (A, B1, B2, C): full matrix algebras per
// party, Bob acting jointly on the middle two legs.
ScenarioPtr make_tensor_scenario(int d_A, int d_B1, int d_B2, int d_C);

// Same leg structure but each party's algebra is the block-diagonal
// subalgebra given by a partition of its leg dimension ({n} = full,
// {1,1,...} = diagonal). Bob's partition splits d_B1 * d_B2.
ScenarioPtr make_partitioned_scenario(const std::array<int, 4>& dims,
                                      const std::vector<int>& part_A,
                                      const std::vector<int>& part_B,
                                      const std::vector<int>& part_C);

}  // namespace biloc

#endif
