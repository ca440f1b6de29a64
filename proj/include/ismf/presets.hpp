#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "ismf/fields.hpp"
#include "ismf/grid.hpp"

namespace ismf {

/// A configuration value that cannot be used; carries the offending key.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& key, const std::string& message)
      : std::runtime_error(key.empty() ? message : key + ": " + message), key_(key) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

/// "name(a,b,...)" split into its name and numeric arguments.
struct PresetCall {
  std::string name;
  std::vector<double> args;
};

PresetCall parse_preset(const std::string& text, const std::string& key = "preset");

/// Initial data: "constant(z)" (or x, y, or three components),
/// "tilted-cosine(alpha,k)", "random-smooth(seed,modes)". Result is
/// normalized onto the sphere.
SpinField make_initial_data(const std::string& preset, const Grid& g);

/// Advecting fields: "zero", "psi-sine(k,l[,amplitude])" on 2D grids,
/// "potential-sine(k,l[,amplitude])" on 3D grids (A = (0,0,psi)).
AdmissibleField make_velocity(const std::string& preset, const Grid& g);

/// Sampled stream function amplitude * sin(k pi x/Lx) sin(l pi y/Ly).
Field sine_stream_function(const Grid& g, int k, int l, double amplitude = 1.0);

}  // namespace ismf
