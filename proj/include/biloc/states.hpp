#ifndef BILOC_STATES_HPP
#define BILOC_STATES_HPP

#include <array>
#include <optional>

#include "biloc/algebra.hpp"

namespace biloc {

// The two source density matrices of a product-built network state, kept so
// that files round-trip and so that source optimization and the grid oracle
// can work on the factors directly.
struct SourceForm {
    std::array<int, 4> dims;  // (d_A, d_B1, d_B2, d_C)
    Mat rho_AB;               // density on A ⊗ B1
    Mat rho_BC;               // density on B2 ⊗ C
};

struct NetworkState {
    Mat rho;
    bool faithful = false;
    // 0 by construction for product-source states; recomputed on mixing when
    // the scenario is known, absent otherwise.
    std::optional<double> independence_residual;
    ScenarioPtr scenario;  // may be null
    std::optional<SourceForm> source_form;

    // Validates Hermiticity, positivity and unit trace, computes the
    // faithfulness flag, and caches the independence residual when a
    // scenario is attached.
    static NetworkState from_density(Mat rho, ScenarioPtr scenario = nullptr);
};

// Throws unless rho is Hermitian within 1e-12 with eigenvalues >= -1e-12 and
// unit trace within 1e-12.
void validate_density(const Mat& rho, const std::string& what);

NetworkState product_source_state(ScenarioPtr s, const Mat& rho_AB, const Mat& rho_BC);

// Max over normalized cross-party basis pairs of |τ(AC) - τ(A)τ(C)|.
double check_independence(const NetworkState& state, const Scenario& s);

bool is_faithful(const NetworkState& state);

NetworkState mix_toward(const NetworkState& state, const NetworkState& other, double t);

// Trace norm of the density-matrix difference.
double trace_distance(const NetworkState& a, const NetworkState& b);

// Common two-qubit sources.
Mat singlet();                       // |ψ-><ψ-|
Mat werner_source(double v);         // v singlet + (1-v) I/4
Mat maximally_entangled_source(int n);  // |φ+><φ+| on n ⊗ n

}  // namespace biloc

#endif
