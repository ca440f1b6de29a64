#pragma once

#include "ismf/grid.hpp"

namespace ismf {

struct CgStats {
  int iterations = 0;
  double relative_residual = 0.0;
};

/// Solves (I - alpha lap_h) x = b with the Neumann Laplacian by conjugate
/// gradients, all components at once. `x` holds the initial guess on entry.
/// Throws SolverError if the relative residual does not reach `tol` within
/// `max_iterations`.
CgStats solve_shifted_laplacian(const Field& b, double alpha, Field& x, double tol = 1e-10,
                                int max_iterations = 500);

}  // namespace ismf
