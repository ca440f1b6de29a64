#include "ismf/cg.hpp"

#include <cmath>
#include <sstream>

#include "ismf/errors.hpp"

namespace ismf {

namespace {

Field apply(const Field& x, double alpha) {
  Field out = laplacian_neumann(x, x.grid());
  out *= -alpha;
  out += x;
  return out;
}

double dot_all(const Field& a, const Field& b) {
  const auto av = a.values();
  const auto bv = b.values();
  double s = 0.0;
  for (std::size_t i = 0; i < av.size(); ++i) s += av[i] * bv[i];
  return s;
}

}  // namespace

CgStats solve_shifted_laplacian(const Field& b, double alpha, Field& x, double tol, int max_iterations) {
  require_same_shape(b, x, "solve_shifted_laplacian");
  if (alpha < 0.0) throw InvalidArgument("solve_shifted_laplacian: alpha must be nonnegative");
  const double b_norm = std::sqrt(dot_all(b, b));
  CgStats stats;
  if (b_norm == 0.0) {
    x *= 0.0;
    return stats;
  }
  Field r = b - apply(x, alpha);
  Field p = r;
  double rr = dot_all(r, r);
  stats.relative_residual = std::sqrt(rr) / b_norm;
  while (stats.relative_residual > tol) {
    if (stats.iterations >= max_iterations) {
      std::ostringstream os;
      os << "conjugate gradients stalled after " << stats.iterations << " iterations, relative residual "
         << stats.relative_residual;
      throw SolverError(os.str(), stats.iterations, stats.relative_residual);
    }
    const Field ap = apply(p, alpha);
    const double step = rr / dot_all(p, ap);
    x.axpy(step, p);
    r.axpy(-step, ap);
    const double rr_next = dot_all(r, r);
    p *= rr_next / rr;
    p += r;
    rr = rr_next;
    ++stats.iterations;
    stats.relative_residual = std::sqrt(rr) / b_norm;
  }
  return stats;
}

}  // namespace ismf
