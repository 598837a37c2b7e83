#include "biloc/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

namespace biloc {

int max_ambient_dim() {
    static const int cap = [] {
        if (const char* s = std::getenv("BILOC_MAX_DIM")) {
            int v = std::atoi(s);
            if (v > 0) return v;
        }
        return 64;
    }();
    return cap;
}

Mat kron(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

Mat herm_part(const Mat& m) { return 0.5 * (m + m.adjoint()); }

double hermiticity_residual(const Mat& m) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

bool is_hermitian(const Mat& m, double tol) {
    return m.rows() == m.cols() && hermiticity_residual(m) <= tol;
}

double operator_norm(const Mat& m) {
    if (m.rows() == 0) return 0.0;
    // sqrt of the largest eigenvalue of m*m; cheaper and stabler than a full
    // SVD at these sizes.
    Eigen::SelfAdjointEigenSolver<Mat> es(Mat(m.adjoint() * m), Eigen::EigenvaluesOnly);
    double top = es.eigenvalues().maxCoeff();
    return std::sqrt(std::max(0.0, top));
}

double trace_norm(const Mat& m) {
    if (m.rows() == 0) return 0.0;
    if (is_hermitian(m, 1e-10)) {
        Eigen::SelfAdjointEigenSolver<Mat> es(herm_part(m), Eigen::EigenvaluesOnly);
        return es.eigenvalues().cwiseAbs().sum();
    }
    Eigen::JacobiSVD<Mat> svd(m);
    return svd.singularValues().sum();
}

RVec hermitian_eigenvalues(const Mat& m) {
    Eigen::SelfAdjointEigenSolver<Mat> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

double min_eigenvalue(const Mat& m) { return hermitian_eigenvalues(m).minCoeff(); }

double max_abs_eigenvalue(const Mat& m) {
    return hermitian_eigenvalues(m).cwiseAbs().maxCoeff();
}

Mat sign_operator(const Mat& h) {
    Eigen::SelfAdjointEigenSolver<Mat> es(h);
    RVec vals = es.eigenvalues();
    Mat v = es.eigenvectors();
    RVec s(vals.size());
    for (Eigen::Index i = 0; i < vals.size(); ++i) s(i) = vals(i) >= 0.0 ? 1.0 : -1.0;
    return v * s.asDiagonal() * v.adjoint();
}

Mat top_eigenprojector(const Mat& h, bool& degenerate, double deg_tol) {
    Eigen::SelfAdjointEigenSolver<Mat> es(h);
    Eigen::Index n = es.eigenvalues().size();
    degenerate = n >= 2 && es.eigenvalues()(n - 1) - es.eigenvalues()(n - 2) <= deg_tol;
    Eigen::VectorXcd v = es.eigenvectors().col(n - 1);
    return v * v.adjoint();
}

double real_trace(const Mat& m, double tol) {
    cplx t = m.trace();
    if (std::abs(t.imag()) > tol)
        throw domain_error("non-Hermitian expectation (imaginary trace " +
                           std::to_string(t.imag()) + ")");
    return t.real();
}

// --- tensor-leg bookkeeping -------------------------------------------------

namespace {

std::vector<int> strides_of(const std::vector<int>& dims) {
    std::vector<int> s(dims.size());
    int acc = 1;
    for (int k = static_cast<int>(dims.size()) - 1; k >= 0; --k) {
        s[static_cast<size_t>(k)] = acc;
        acc *= dims[static_cast<size_t>(k)];
    }
    return s;
}

int total_dim(const std::vector<int>& dims) {
    return std::accumulate(dims.begin(), dims.end(), 1, std::multiplies<int>());
}

}  // namespace

Mat leg_permutation_unitary(const std::vector<int>& dims, const std::vector<int>& order) {
    const int L = static_cast<int>(dims.size());
    if (static_cast<int>(order.size()) != L)
        throw domain_error("leg permutation: order/dims size mismatch");
    const int d = total_dim(dims);
    std::vector<int> in_strides = strides_of(dims);
    std::vector<int> new_dims(order.size());
    for (size_t k = 0; k < order.size(); ++k) new_dims[k] = dims[static_cast<size_t>(order[k])];
    std::vector<int> out_strides = strides_of(new_dims);

    Mat u = Mat::Zero(d, d);
    std::vector<int> idx(static_cast<size_t>(L), 0);
    for (int col = 0; col < d; ++col) {
        int rem = col;
        for (int k = 0; k < L; ++k) {
            idx[static_cast<size_t>(k)] = rem / in_strides[static_cast<size_t>(k)];
            rem %= in_strides[static_cast<size_t>(k)];
        }
        int row = 0;
        for (int k = 0; k < L; ++k)
            row += idx[static_cast<size_t>(order[k])] * out_strides[static_cast<size_t>(k)];
        u(row, col) = 1.0;
    }
    return u;
}

Mat partial_trace(const Mat& x, const std::vector<int>& dims, const std::vector<int>& keep) {
    const int d = total_dim(dims);
    if (x.rows() != d || x.cols() != d) throw domain_error("partial_trace: dimension mismatch");
    std::vector<int> traced;
    for (int k = 0; k < static_cast<int>(dims.size()); ++k)
        if (std::find(keep.begin(), keep.end(), k) == keep.end()) traced.push_back(k);

    std::vector<int> st = strides_of(dims);
    int dk = 1, dt = 1;
    for (int k : keep) dk *= dims[static_cast<size_t>(k)];
    for (int k : traced) dt *= dims[static_cast<size_t>(k)];

    // flat index of a (kept multi-index, traced multi-index) pair
    auto flat = [&](int kv, int tv) {
        int id = 0;
        for (int k = static_cast<int>(keep.size()) - 1; k >= 0; --k) {
            int leg = keep[static_cast<size_t>(k)];
            id += (kv % dims[static_cast<size_t>(leg)]) * st[static_cast<size_t>(leg)];
            kv /= dims[static_cast<size_t>(leg)];
        }
        for (int k = static_cast<int>(traced.size()) - 1; k >= 0; --k) {
            int leg = traced[static_cast<size_t>(k)];
            id += (tv % dims[static_cast<size_t>(leg)]) * st[static_cast<size_t>(leg)];
            tv /= dims[static_cast<size_t>(leg)];
        }
        return id;
    };

    Mat out = Mat::Zero(dk, dk);
    for (int r = 0; r < dk; ++r)
        for (int c = 0; c < dk; ++c) {
            cplx acc = 0.0;
            for (int t = 0; t < dt; ++t) acc += x(flat(r, t), flat(c, t));
            out(r, c) = acc;
        }
    return out;
}

Mat embed_contiguous(const Mat& x, const std::vector<int>& dims, int first, int count) {
    int pre = 1, mid = 1, post = 1;
    for (int k = 0; k < first; ++k) pre *= dims[static_cast<size_t>(k)];
    for (int k = first; k < first + count; ++k) mid *= dims[static_cast<size_t>(k)];
    for (int k = first + count; k < static_cast<int>(dims.size()); ++k)
        post *= dims[static_cast<size_t>(k)];
    if (x.rows() != mid || x.cols() != mid)
        throw domain_error("embed_contiguous: operator does not match the legs");
    return kron(kron(Mat::Identity(pre, pre), x), Mat::Identity(post, post));
}

// --- seeded sampling ----------------------------------------------------------

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

Mat random_gaussian(int rows, int cols, Rng& rng) {
    Mat g(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) {
            double re = rng.normal();
            double im = rng.normal();
            g(i, j) = cplx(re, im);
        }
    return g;
}

Mat random_hermitian(int d, Rng& rng) {
    Mat g = random_gaussian(d, d, rng);
    return herm_part(g);
}

Mat random_density(int d, Rng& rng) {
    Mat g = random_gaussian(d, d, rng);
    Mat rho = g * g.adjoint();
    rho /= rho.trace().real();
    return rho;
}

Mat random_unitary(int d, Rng& rng) {
    Mat g = random_gaussian(d, d, rng);
    Eigen::HouseholderQR<Mat> qr(g);
    Mat q = qr.householderQ() * Mat::Identity(d, d);
    Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int k = 0; k < d; ++k) {
        cplx rk = r(k, k);
        cplx ph = std::abs(rk) > 0 ? rk / std::abs(rk) : cplx(1.0, 0.0);
        q.col(k) *= ph;
    }
    return q;
}

Mat pauli(int k) {
    Mat m(2, 2);
    switch (k) {
        case 0: m << 1, 0, 0, 1; break;
        case 1: m << 0, 1, 1, 0; break;
        case 2: m << 0, cplx(0, -1), cplx(0, 1), 0; break;
        case 3: m << 1, 0, 0, -1; break;
        default: throw domain_error("pauli index out of range");
    }
    return m;
}

Mat bloch_observable(double theta, double phi) {
    return std::cos(theta) * pauli(3) + std::sin(theta) * std::cos(phi) * pauli(1) +
           std::sin(theta) * std::sin(phi) * pauli(2);
}

}  // namespace biloc
