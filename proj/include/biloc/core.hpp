#ifndef BILOC_CORE_HPP
#define BILOC_CORE_HPP

#include <stdexcept>
#include <string>

namespace biloc {

// Domain-contract violations (bad dimensions, non-density inputs, invalid
// observables, ...) vs. file/schema problems. The CLI maps these to exit
// codes 1 and 2 respectively.
struct domain_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Execution policy for the data-parallel kernels. Every kernel has a serial
// reference path producing bit-identical results; tests compare the two.
enum class ExecPolicy { serial, parallel };

// Tolerances used across modules.
inline constexpr double tol_unitary = 1e-10;
inline constexpr double tol_hermitian = 1e-12;
inline constexpr double tol_faithful = 1e-12;
inline constexpr double tol_membership = 1e-10;
inline constexpr double tol_spectrum = 1e-10;
inline constexpr double tol_density = 1e-12;

// Commutation tolerance scales with the ambient dimension.
inline double commute_tol(int dim) { return 1e-10 * static_cast<double>(dim); }

// Ambient-dimension cap; BILOC_MAX_DIM overrides the default of 64.
int max_ambient_dim();

}  // namespace biloc

#endif
