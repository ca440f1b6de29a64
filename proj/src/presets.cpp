#include "ismf/presets.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace ismf {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

void expect_args(const PresetCall& call, std::size_t lo, std::size_t hi, const std::string& key) {
  if (call.args.size() < lo || call.args.size() > hi) {
    std::ostringstream os;
    os << "preset '" << call.name << "' takes " << lo;
    if (hi != lo) os << " to " << hi;
    os << " arguments, got " << call.args.size();
    throw ConfigError(key, os.str());
  }
}

}  // namespace

PresetCall parse_preset(const std::string& text, const std::string& key) {
  const std::string s = trim(text);
  PresetCall call;
  const auto open = s.find('(');
  if (open == std::string::npos) {
    call.name = s;
    return call;
  }
  if (s.back() != ')') throw ConfigError(key, "unbalanced parentheses in '" + s + "'");
  call.name = trim(s.substr(0, open));
  const std::string body = s.substr(open + 1, s.size() - open - 2);
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    if (item == "x" || item == "y" || item == "z") {
      call.args.push_back(item == "x" ? 0.0 : item == "y" ? 1.0 : 2.0);
      call.name += ":axis";
      continue;
    }
    try {
      std::size_t used = 0;
      call.args.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError(key, "cannot parse argument '" + item + "' in '" + s + "'");
    }
  }
  return call;
}

SpinField make_initial_data(const std::string& preset, const Grid& g) {
  const PresetCall call = parse_preset(preset, "initial.preset");
  Field u(g, 3);
  if (call.name == "constant:axis") {
    expect_args(call, 1, 1, "initial.preset");
    const int axis = static_cast<int>(call.args[0]);
    for (std::size_t cell = 0; cell < g.size(); ++cell) u(cell, axis) = 1.0;
  } else if (call.name == "constant") {
    expect_args(call, 3, 3, "initial.preset");
    for (std::size_t cell = 0; cell < g.size(); ++cell) u.set_vec3(cell, {call.args[0], call.args[1], call.args[2]});
  } else if (call.name == "tilted-cosine") {
    expect_args(call, 2, 2, "initial.preset");
    const double alpha = call.args[0];
    const double k = call.args[1];
    for (std::size_t cell = 0; cell < g.size(); ++cell) {
      const double x = g.position(cell)[0];
      const double theta = alpha * std::cos(k * std::numbers::pi * x / g.extent(0));
      u.set_vec3(cell, {std::sin(theta), 0.0, std::cos(theta)});
    }
  } else if (call.name == "random-smooth") {
    expect_args(call, 2, 2, "initial.preset");
    const auto seed = static_cast<std::uint64_t>(call.args[0]);
    const int modes = static_cast<int>(call.args[1]);
    if (modes < 0) throw ConfigError("initial.preset", "random-smooth needs a nonnegative mode count");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Field perturbation(g, 3);
    const int kmax[3] = {modes, g.dim() > 1 ? modes : 0, g.dim() > 2 ? modes : 0};
    for (int k0 = 0; k0 <= kmax[0]; ++k0)
      for (int k1 = 0; k1 <= kmax[1]; ++k1)
        for (int k2 = 0; k2 <= kmax[2]; ++k2) {
          const int ks[3] = {k0, k1, k2};
          const double decay = 1.0 / (1.0 + k0 * k0 + k1 * k1 + k2 * k2);
          const double amp[3] = {normal(rng) * decay, normal(rng) * decay, normal(rng) * decay};
          for (std::size_t cell = 0; cell < g.size(); ++cell) {
            const auto x = g.position(cell);
            double mode = 1.0;
            for (int a = 0; a < g.dim(); ++a) mode *= std::cos(ks[a] * std::numbers::pi * x[a] / g.extent(a));
            for (int c = 0; c < 3; ++c) perturbation(cell, c) += amp[c] * mode;
          }
        }
    // keep the perturbation strictly inside the unit ball around e_z
    const double peak = max_pointwise_norm(perturbation);
    if (peak > 0.0) perturbation *= 0.9 / peak;
    for (std::size_t cell = 0; cell < g.size(); ++cell) {
      auto p = perturbation.vec3(cell);
      u.set_vec3(cell, {p[0], p[1], 1.0 + p[2]});
    }
  } else {
    throw ConfigError("initial.preset", "unknown initial-data preset '" + call.name + "'");
  }
  try {
    return normalize_sphere(u);
  } catch (const DegenerateData& e) {
    throw ConfigError("initial.preset", e.what());
  }
}

Field sine_stream_function(const Grid& g, int k, int l, double amplitude) {
  Field psi(g, 1);
  for (std::size_t cell = 0; cell < g.size(); ++cell) {
    const auto x = g.position(cell);
    psi(cell, 0) = amplitude * std::sin(k * std::numbers::pi * x[0] / g.extent(0)) *
                   std::sin(l * std::numbers::pi * x[1] / g.extent(1));
  }
  return psi;
}

AdmissibleField make_velocity(const std::string& preset, const Grid& g) {
  const PresetCall call = parse_preset(preset, "velocity.preset");
  if (call.name == "zero") {
    Field v(g, g.dim());
    auto cert = check_admissible(v);
    return {std::move(v), cert};
  }
  if (call.name == "psi-sine") {
    expect_args(call, 2, 3, "velocity.preset");
    if (g.dim() != 2) throw ConfigError("velocity.preset", "psi-sine needs a 2D grid");
    const double amp = call.args.size() > 2 ? call.args[2] : 1.0;
    return stream_function_field_2d(
        sine_stream_function(g, static_cast<int>(call.args[0]), static_cast<int>(call.args[1]), amp));
  }
  if (call.name == "potential-sine") {
    expect_args(call, 2, 3, "velocity.preset");
    if (g.dim() != 3) throw ConfigError("velocity.preset", "potential-sine needs a 3D grid");
    const double amp = call.args.size() > 2 ? call.args[2] : 1.0;
    const Field psi = sine_stream_function(g, static_cast<int>(call.args[0]), static_cast<int>(call.args[1]), amp);
    Field a(g, 3);
    for (std::size_t cell = 0; cell < g.size(); ++cell) a(cell, 2) = psi(cell, 0);
    return vector_potential_field_3d(a);
  }
  throw ConfigError("velocity.preset", "unknown velocity preset '" + call.name + "'");
}

}  // namespace ismf
