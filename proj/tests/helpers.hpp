#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <random>

#include "ismf/grid.hpp"

namespace ismf::testing {

inline constexpr double pi = 3.14159265358979323846;

/// Field with `components` components sampled from f(position, component).
inline Field sample(const Grid& g, int components,
                    const std::function<double(const std::array<double, 3>&, int)>& f) {
  Field out(g, components);
  for (std::size_t cell = 0; cell < g.size(); ++cell) {
    const auto x = g.position(cell);
    for (int c = 0; c < components; ++c) out(cell, c) = f(x, c);
  }
  return out;
}

inline Field scalar(const Grid& g, const std::function<double(const std::array<double, 3>&)>& f) {
  return sample(g, 1, [&](const std::array<double, 3>& x, int) { return f(x); });
}

/// Uniform random values in [-1, 1] from a fixed seed.
inline Field random_field(const Grid& g, int components, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Field out(g, components);
  for (double& x : out.values()) x = dist(rng);
  return out;
}

/// max over cells (optionally only those at least `margin` cells from every wall).
inline double max_abs_diff(const Field& a, const Field& b, int margin = 0) {
  const Grid& g = a.grid();
  double m = 0.0;
  for (std::size_t cell = 0; cell < g.size(); ++cell) {
    const auto ix = g.coords(cell);
    bool inside = true;
    for (int ax = 0; ax < g.dim(); ++ax) {
      if (ix[ax] < margin || ix[ax] >= g.cells(ax) - margin) inside = false;
    }
    if (!inside) continue;
    for (int c = 0; c < a.components(); ++c) m = std::max(m, std::abs(a(cell, c) - b(cell, c)));
  }
  return m;
}

}  // namespace ismf::testing
