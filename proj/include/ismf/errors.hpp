#pragma once

#include <sstream>
#include <stdexcept>
#include <string>

namespace ismf {

/// The state stopped being finite or left the regular regime.
class BlowUp : public std::runtime_error {
 public:
  BlowUp(const std::string& what, double time, double last_valid_time)
      : std::runtime_error(what), time_(time), last_valid_(last_valid_time) {}
  double time() const { return time_; }
  double last_valid_time() const { return last_valid_; }

 private:
  double time_;
  double last_valid_;
};

/// The advecting field fails its divergence or tangency certificate.
class AdmissibilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An iterative linear solve did not reach its tolerance.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, int iterations, double residual)
      : std::runtime_error(what), iterations_(iterations), residual_(residual) {}
  int iterations() const { return iterations_; }
  double residual() const { return residual_; }

 private:
  int iterations_;
  double residual_;
};

/// A flow-map particle left the closed domain.
class ConfinementError : public std::runtime_error {
 public:
  ConfinementError(const std::string& what, std::size_t seed, double time)
      : std::runtime_error(what), seed_(seed), time_(time) {}
  std::size_t seed() const { return seed_; }
  double time() const { return time_; }

 private:
  std::size_t seed_;
  double time_;
};

}  // namespace ismf
