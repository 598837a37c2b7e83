#ifndef BILOC_LINALG_HPP
#define BILOC_LINALG_HPP

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "biloc/core.hpp"

namespace biloc {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;

Mat kron(const Mat& a, const Mat& b);
Mat herm_part(const Mat& m);
double hermiticity_residual(const Mat& m);
bool is_hermitian(const Mat& m, double tol = tol_hermitian);

// Largest singular value.
double operator_norm(const Mat& m);
// Sum of singular values (for Hermitian input: sum of |eigenvalues|).
double trace_norm(const Mat& m);

RVec hermitian_eigenvalues(const Mat& m);
double min_eigenvalue(const Mat& m);
double max_abs_eigenvalue(const Mat& m);

// Spectral sign map of a Hermitian matrix; eigenvalue 0 goes to +1, so the
// result always squares to the identity.
Mat sign_operator(const Mat& h);

// Top-eigenvector projector of a Hermitian matrix. degenerate is set when
// the two largest eigenvalues are closer than deg_tol.
Mat top_eigenprojector(const Mat& h, bool& degenerate, double deg_tol = 1e-12);

// Real part of tr(rho * x), rejecting an imaginary part above tol.
double real_trace(const Mat& m, double tol = 1e-10);

// --- tensor-leg bookkeeping -------------------------------------------------
//
// Operators on a product of legs H_0 ⊗ H_1 ⊗ ... with row-major index
// conventions (leftmost leg is the slowest index), matching kron().

// Permutation unitary mapping leg order (0,1,...,L-1) to the given order:
// row index runs over the reordered legs, column over the original ones.
Mat leg_permutation_unitary(const std::vector<int>& dims, const std::vector<int>& order);

// Partial trace keeping the listed legs (in their original relative order).
Mat partial_trace(const Mat& x, const std::vector<int>& dims, const std::vector<int>& keep);

// Embed an operator acting on a contiguous run of legs [first, first+count)
// as an ambient operator (identity on the remaining legs).
Mat embed_contiguous(const Mat& x, const std::vector<int>& dims, int first, int count);

// --- seeded sampling ---------------------------------------------------------

// SplitMix64-style mixing so that (seed, stream) pairs give independent,
// platform-stable generators; used for parallel restarts and batch samplers.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

struct Rng {
    std::mt19937_64 eng;
    explicit Rng(std::uint64_t seed) : eng(seed) {}
    Rng(std::uint64_t seed, std::uint64_t stream) : eng(mix_seed(seed, stream)) {}
    double normal() {
        return std::normal_distribution<double>(0.0, 1.0)(eng);
    }
    double uniform() {
        return std::uniform_real_distribution<double>(0.0, 1.0)(eng);
    }
    int uniform_int(int lo, int hi) {  // inclusive bounds
        return std::uniform_int_distribution<int>(lo, hi)(eng);
    }
};

Mat random_gaussian(int rows, int cols, Rng& rng);
Mat random_hermitian(int d, Rng& rng);   // GUE-type
Mat random_density(int d, Rng& rng);     // Hilbert-Schmidt ensemble
Mat random_unitary(int d, Rng& rng);     // Haar via QR with phase fix

// Pauli matrices and friends.
Mat pauli(int k);  // 0 -> I, 1 -> X, 2 -> Y, 3 -> Z
Mat bloch_observable(double theta, double phi);  // cosθ Z + sinθ cosφ X + sinθ sinφ Y

}  // namespace biloc

#endif
