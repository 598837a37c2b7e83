#include "biloc/states.hpp"

#include <cmath>

namespace biloc {

void validate_density(const Mat& rho, const std::string& what) {
    if (rho.rows() != rho.cols()) throw domain_error(what + ": not square");
    if (hermiticity_residual(rho) > tol_hermitian)
        throw domain_error(what + ": not Hermitian within 1e-12");
    if (std::abs(rho.trace().real() - 1.0) > tol_density ||
        std::abs(rho.trace().imag()) > tol_density)
        throw domain_error(what + ": trace differs from 1");
    if (min_eigenvalue(herm_part(rho)) < -tol_density)
        throw domain_error(what + ": negative eigenvalue beyond tolerance");
}

NetworkState NetworkState::from_density(Mat rho, ScenarioPtr scenario) {
    validate_density(rho, "network state");
    NetworkState st;
    st.rho = std::move(rho);
    st.faithful = min_eigenvalue(herm_part(st.rho)) > tol_faithful;
    st.scenario = std::move(scenario);
    if (st.scenario) st.independence_residual = check_independence(st, *st.scenario);
    return st;
}

NetworkState product_source_state(ScenarioPtr s, const Mat& rho_AB, const Mat& rho_BC) {
    if (!s || !s->tensor_dims) throw domain_error("product sources need a tensor scenario");
    auto [dA, dB1, dB2, dC] = *s->tensor_dims;
    if (rho_AB.rows() != dA * dB1) throw domain_error("rho_AB dimension mismatch");
    if (rho_BC.rows() != dB2 * dC) throw domain_error("rho_BC dimension mismatch");
    validate_density(rho_AB, "rho_AB");
    validate_density(rho_BC, "rho_BC");

    // Legs are ordered (A, B1, B2, C), so the ambient operator is a plain
    // Kronecker product of the two source densities.
    NetworkState st;
    st.rho = kron(rho_AB, rho_BC);
    st.faithful = min_eigenvalue(herm_part(st.rho)) > tol_faithful;
    st.independence_residual = 0.0;
    st.scenario = std::move(s);
    st.source_form = SourceForm{{dA, dB1, dB2, dC}, rho_AB, rho_BC};
    return st;
}

double check_independence(const NetworkState& state, const Scenario& s) {
    if (state.rho.rows() != s.dim) throw domain_error("state/scenario dimension mismatch");
    double worst = 0.0;
    for (const Mat& a : s.alg_A.basis) {
        cplx ta = (state.rho * a).trace();
        for (const Mat& c : s.alg_C.basis) {
            cplx tc = (state.rho * c).trace();
            cplx tac = (state.rho * a * c).trace();
            worst = std::max(worst, std::abs(tac - ta * tc));
        }
    }
    return worst;
}

bool is_faithful(const NetworkState& state) { return state.faithful; }

NetworkState mix_toward(const NetworkState& state, const NetworkState& other, double t) {
    if (t < 0.0 || t > 1.0) throw domain_error("mixing parameter outside [0,1]");
    if (state.rho.rows() != other.rho.rows()) throw domain_error("state dimension mismatch");
    NetworkState st;
    st.rho = (1.0 - t) * state.rho + t * other.rho;
    st.faithful = min_eigenvalue(herm_part(st.rho)) > tol_faithful;
    st.scenario = state.scenario ? state.scenario : other.scenario;
    if (st.scenario) st.independence_residual = check_independence(st, *st.scenario);
    return st;
}

double trace_distance(const NetworkState& a, const NetworkState& b) {
    if (a.rho.rows() != b.rho.rows()) throw domain_error("state dimension mismatch");
    return trace_norm(a.rho - b.rho);
}

Mat singlet() {
    Eigen::VectorXcd psi(4);
    psi << 0, 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0), 0;
    return psi * psi.adjoint();
}

Mat werner_source(double v) {
    if (v < 0.0 || v > 1.0) throw domain_error("Werner visibility outside [0,1]");
    return v * singlet() + (1.0 - v) * Mat::Identity(4, 4) / 4.0;
}

Mat maximally_entangled_source(int n) {
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(n * n);
    for (int i = 0; i < n; ++i) psi(i * n + i) = 1.0 / std::sqrt(static_cast<double>(n));
    return psi * psi.adjoint();
}

}  // namespace biloc
