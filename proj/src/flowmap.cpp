#include "ismf/flowmap.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "ismf/errors.hpp"
#include "ismf/galerkin.hpp"
#include "ismf/time_grid.hpp"

namespace ismf {

namespace {

struct Tap {
  int index;
  double weight;
  bool flipped;
};

// Mirror an index into [0, n); each reflection flips the odd parity sign.
Tap mirror(int idx, int n, double weight) {
  bool flipped = false;
  for (int guard = 0; guard < 4 && (idx < 0 || idx >= n); ++guard) {
    idx = idx < 0 ? -1 - idx : 2 * n - 1 - idx;
    flipped = !flipped;
  }
  return {std::clamp(idx, 0, n - 1), weight, flipped};
}

std::vector<Tap> taps(const Grid& g, int axis, double x, Interpolation order) {
  if (axis >= g.dim()) return {{0, 1.0, false}};
  const int n = g.cells(axis);
  const double s = x / g.spacing(axis) - 0.5;
  const int i0 = static_cast<int>(std::floor(s));
  const double w = s - i0;
  if (order == Interpolation::multilinear) return {mirror(i0, n, 1.0 - w), mirror(i0 + 1, n, w)};
  const double w2 = w * w;
  const double w3 = w2 * w;
  return {mirror(i0 - 1, n, 0.5 * (-w3 + 2.0 * w2 - w)), mirror(i0, n, 0.5 * (3.0 * w3 - 5.0 * w2 + 2.0)),
          mirror(i0 + 1, n, 0.5 * (-3.0 * w3 + 4.0 * w2 + w)), mirror(i0 + 2, n, 0.5 * (w3 - w2))};
}

double det_small(const std::array<std::array<double, 3>, 3>& m, int dim) {
  if (dim == 1) return m[0][0];
  if (dim == 2) return m[0][0] * m[1][1] - m[0][1] * m[1][0];
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

}  // namespace

std::vector<double> interpolate(const Field& f, const Point& x, bool vector_parity, Interpolation order) {
  const Grid& g = f.grid();
  const int comps = f.components();
  std::array<std::vector<Tap>, 3> t{taps(g, 0, x[0], order), taps(g, 1, x[1], order), taps(g, 2, x[2], order)};
  std::vector<double> out(comps, 0.0);
  for (const Tap& a : t[0]) {
    for (const Tap& b : t[1]) {
      for (const Tap& c : t[2]) {
        const double w = a.weight * b.weight * c.weight;
        const std::size_t cell = g.flat(a.index, b.index, c.index);
        for (int q = 0; q < comps; ++q) {
          double value = f(cell, q);
          if (vector_parity && q < 3) {
            const bool flip = (q == 0 && a.flipped) || (q == 1 && b.flipped) || (q == 2 && c.flipped);
            if (flip) value = -value;
          }
          out[q] += w * value;
        }
      }
    }
  }
  return out;
}

SeedLattice SeedLattice::regular(const Grid& g, const std::vector<int>& counts, double satellite_fraction) {
  if (static_cast<int>(counts.size()) != g.dim()) throw InvalidArgument("seed lattice: one count per axis");
  SeedLattice s;
  s.dim = g.dim();
  for (int a = 0; a < s.dim; ++a) {
    if (counts[a] < 1) throw InvalidArgument("seed lattice: counts must be positive");
    s.counts[a] = counts[a];
    s.spacing[a] = g.extent(a) / counts[a];
  }
  if (satellite_fraction < 0.0 || satellite_fraction >= 0.5) {
    throw InvalidArgument("seed lattice: satellite fraction must lie in [0, 0.5)");
  }
  double h = s.spacing[0];
  for (int a = 1; a < s.dim; ++a) h = std::min(h, s.spacing[a]);
  s.satellite_step = satellite_fraction * h;
  for (int i = 0; i < s.counts[0]; ++i) {
    for (int j = 0; j < s.counts[1]; ++j) {
      for (int k = 0; k < s.counts[2]; ++k) {
        Point p{0.0, 0.0, 0.0};
        const int idx[3] = {i, j, k};
        for (int a = 0; a < s.dim; ++a) p[a] = (idx[a] + 0.5) * s.spacing[a];
        s.points.push_back(p);
      }
    }
  }
  return s;
}

std::size_t FlowMap::sample_index(double t) const {
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (std::abs(times[i] - t) <= 1e-12 * std::max(1.0, std::abs(t))) return i;
  }
  std::ostringstream os;
  os << "flow map has no sample at t=" << t;
  throw InvalidArgument(os.str());
}

void FlowMap::write_csv(std::ostream& os, const std::vector<double>& times_to_write) const {
  static const char* names[3] = {"x", "y", "z"};
  os << "seed_ix,t";
  for (int a = 0; a < seeds.dim; ++a) os << ',' << names[a];
  os << ",det\n" << std::setprecision(17);
  std::vector<std::size_t> rows;
  if (times_to_write.empty()) {
    for (std::size_t i = 0; i < times.size(); ++i) rows.push_back(i);
  } else {
    for (double t : times_to_write) rows.push_back(sample_index(t));
  }
  for (std::size_t k : rows) {
    const JacobianDeterminant det = jacobian_det(*this, times[k]);
    for (std::size_t s = 0; s < seeds.points.size(); ++s) {
      os << s << ',' << times[k];
      for (int a = 0; a < seeds.dim; ++a) os << ',' << positions[k][s][a];
      os << ',' << det.det[s] << '\n';
    }
  }
}

FlowMap integrate_flow(const VelocitySource& v, const SeedLattice& seeds, double gamma, double t_end, double dt,
                       const std::vector<double>& sample_times, const Tolerances& tol, Interpolation order) {
  const Grid& g = v.grid();
  if (seeds.dim != g.dim()) throw InvalidArgument("integrate_flow: seed lattice dimension differs from grid");
  require_admissible(v, {0.0, t_end}, tol);
  for (const Point& p : seeds.points) {
    for (int a = 0; a < g.dim(); ++a) {
      if (p[a] < 0.0 || p[a] > g.extent(a)) throw InvalidArgument("integrate_flow: seed outside the domain");
    }
  }
  const double tol_conf = 1e-6 * g.min_extent();
  const StepSchedule schedule = StepSchedule::build(t_end, dt, sample_times);

  FlowMap fm;
  fm.seeds = seeds;
  fm.gamma = gamma;
  const std::size_t n_seeds = seeds.points.size();
  std::vector<Point> x = seeds.points;
  if (seeds.satellite_step > 0.0) {
    for (const Point& p : seeds.points) {
      for (int a = 0; a < seeds.dim; ++a) {
        for (int side = 0; side < 2; ++side) {
          Point q = p;
          q[a] += (side == 0 ? -1.0 : 1.0) * seeds.satellite_step;
          x.push_back(q);
        }
      }
    }
  }
  auto record = [&](double t) {
    fm.times.push_back(t);
    fm.positions.emplace_back(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(n_seeds));
    if (x.size() > n_seeds) fm.satellites.emplace_back(x.begin() + static_cast<std::ptrdiff_t>(n_seeds), x.end());
  };
  record(0.0);

  const bool frozen = v.is_static();
  Field v0 = v.at(0.0);
  Field vh = v0;
  Field v1 = v0;
  auto velocity_at = [&](const Field& field, const Point& p) {
    const auto w = interpolate(field, p, true, order);
    Point out{0.0, 0.0, 0.0};
    for (int a = 0; a < g.dim(); ++a) out[a] = gamma * w[a];
    return out;
  };
  auto shifted = [](const Point& p, double s, const Point& k) {
    return Point{p[0] + s * k[0], p[1] + s * k[1], p[2] + s * k[2]};
  };

  double t = 0.0;
  double segment_start = 0.0;
  for (std::size_t seg = 0; seg < schedule.stops.size(); ++seg) {
    const int steps = schedule.steps_per_segment[seg];
    const double h = schedule.dt_per_segment[seg];
    for (int j = 0; j < steps; ++j) {
      if (!frozen) {
        v0 = v.at(t);
        vh = v.at(t + 0.5 * h);
        v1 = v.at(t + h);
      }
      const double t_next = j + 1 == steps ? schedule.stops[seg] : segment_start + (j + 1) * h;
      for (std::size_t s = 0; s < x.size(); ++s) {
        const Point& p = x[s];
        const Point k1 = velocity_at(v0, p);
        const Point k2 = velocity_at(vh, shifted(p, 0.5 * h, k1));
        const Point k3 = velocity_at(vh, shifted(p, 0.5 * h, k2));
        const Point k4 = velocity_at(v1, shifted(p, h, k3));
        Point next = p;
        for (int a = 0; a < 3; ++a) next[a] += h / 6.0 * (k1[a] + 2.0 * k2[a] + 2.0 * k3[a] + k4[a]);
        for (int a = 0; a < g.dim(); ++a) {
          const double out = std::max(-next[a], next[a] - g.extent(a));
          fm.max_excursion = std::max(fm.max_excursion, out);
          if (!(out <= tol_conf)) {
            const std::size_t seed = s < n_seeds ? s : (s - n_seeds) / (2 * seeds.dim);
            std::ostringstream os;
            os << "particle from seed " << seed << " left the domain at t=" << t_next << " (axis " << a
               << ", distance " << out << ")";
            throw ConfinementError(os.str(), seed, t_next);
          }
        }
        x[s] = next;
      }
      t = t_next;
    }
    segment_start = schedule.stops[seg];
    record(t);
  }
  return fm;
}

double JacobianDeterminant::max_deviation(bool interior_only) const {
  double worst = 0.0;
  for (std::size_t i = 0; i < det.size(); ++i) {
    if (interior_only && one_sided[i]) continue;
    worst = std::max(worst, std::abs(det[i] - 1.0));
  }
  return worst;
}

JacobianDeterminant jacobian_det(const FlowMap& fm, double t, JacobianStencil stencil) {
  const std::size_t k = fm.sample_index(t);
  const SeedLattice& s = fm.seeds;
  const auto& pos = fm.positions[k];
  JacobianDeterminant out;
  out.det.resize(pos.size());
  out.one_sided.assign(pos.size(), false);
  if (stencil == JacobianStencil::automatic) {
    stencil = fm.satellites.empty() ? JacobianStencil::lattice2 : JacobianStencil::satellites;
  }
  if (stencil == JacobianStencil::satellites) {
    if (fm.satellites.empty()) throw InvalidArgument("jacobian_det: flow map has no satellites");
    const auto& sat = fm.satellites[k];
    const std::size_t per = 2 * static_cast<std::size_t>(s.dim);
    for (std::size_t i = 0; i < pos.size(); ++i) {
      std::array<std::array<double, 3>, 3> m{};
      for (int a = 0; a < s.dim; ++a) {
        const Point& lo = sat[i * per + 2 * a];
        const Point& hi = sat[i * per + 2 * a + 1];
        for (int b = 0; b < s.dim; ++b) m[b][a] = (hi[b] - lo[b]) / (2.0 * s.satellite_step);
      }
      out.det[i] = det_small(m, s.dim);
    }
    return out;
  }
  const int order = stencil == JacobianStencil::lattice4 ? 4 : 2;
  for (int i = 0; i < s.counts[0]; ++i) {
    for (int j = 0; j < s.counts[1]; ++j) {
      for (int l = 0; l < s.counts[2]; ++l) {
        const std::size_t here = s.flat(i, j, l);
        std::array<std::array<double, 3>, 3> m{};
        for (int a = 0; a < s.dim; ++a) {
          const int idx[3] = {i, j, l};
          const int n = s.counts[a];
          auto at = [&](int offset) {
            int q[3] = {idx[0], idx[1], idx[2]};
            q[a] += offset;
            return pos[s.flat(q[0], q[1], q[2])];
          };
          const int p = idx[a];
          const double d = s.spacing[a];
          if (n < 3) throw InvalidArgument("jacobian_det: need at least 3 seeds per axis");
          for (int b = 0; b < s.dim; ++b) {
            double deriv;
            if (order == 4 && p >= 2 && p + 2 < n) {
              deriv = (at(-2)[b] - 8.0 * at(-1)[b] + 8.0 * at(1)[b] - at(2)[b]) / (12.0 * d);
            } else if (p >= 1 && p + 1 < n) {
              deriv = (at(1)[b] - at(-1)[b]) / (2.0 * d);
            } else if (p == 0) {
              deriv = (-3.0 * at(0)[b] + 4.0 * at(1)[b] - at(2)[b]) / (2.0 * d);
              out.one_sided[here] = true;
            } else {
              deriv = (3.0 * at(0)[b] - 4.0 * at(-1)[b] + at(-2)[b]) / (2.0 * d);
              out.one_sided[here] = true;
            }
            m[b][a] = deriv;
          }
        }
        out.det[here] = det_small(m, s.dim);
      }
    }
  }
  return out;
}

double GaugeResidual::sup_max() const {
  return max_residual.empty() ? 0.0 : *std::max_element(max_residual.begin(), max_residual.end());
}

double GaugeResidual::sup_rms() const {
  return rms_residual.empty() ? 0.0 : *std::max_element(rms_residual.begin(), rms_residual.end());
}

GaugeResidual gauge_material_derivative_check(const std::vector<double>& times, const std::vector<Field>& u,
                                              const std::vector<Field>& dtu, const FlowMap& fm,
                                              const VelocitySource& v, Interpolation order) {
  if (u.size() != times.size() || dtu.size() != times.size() || fm.times.size() != times.size()) {
    throw InvalidArgument("gauge check: trajectory and flow map have different sample counts");
  }
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (std::abs(times[i] - fm.times[i]) > 1e-12 * std::max(1.0, std::abs(times[i]))) {
      throw InvalidArgument("gauge check: time stamps are misaligned with the flow map");
    }
  }
  GaugeResidual out;
  const std::size_t seeds = fm.seeds.points.size();
  for (std::size_t k = 1; k + 1 < times.size(); ++k) {
    const Field vk = v.at(times[k]);
    const Field drift = transport(vk, u[k], u[k].grid());
    const double span = times[k + 1] - times[k - 1];
    double worst = 0.0;
    double sum_sq = 0.0;
    for (std::size_t s = 0; s < seeds; ++s) {
      const auto ahead = interpolate(u[k + 1], fm.positions[k + 1][s], false, order);
      const auto behind = interpolate(u[k - 1], fm.positions[k - 1][s], false, order);
      const auto rate = interpolate(dtu[k], fm.positions[k][s], false, order);
      const auto carry = interpolate(drift, fm.positions[k][s], false, order);
      double sq = 0.0;
      double target_sq = 0.0;
      for (std::size_t c = 0; c < ahead.size(); ++c) {
        const double target = rate[c] + fm.gamma * carry[c];
        const double d = (ahead[c] - behind[c]) / span - target;
        sq += d * d;
        target_sq += target * target;
      }
      out.scale = std::max(out.scale, std::sqrt(target_sq));
      worst = std::max(worst, std::sqrt(sq));
      sum_sq += sq;
    }
    out.t.push_back(times[k]);
    out.max_residual.push_back(worst);
    out.rms_residual.push_back(std::sqrt(sum_sq / static_cast<double>(seeds)));
  }
  return out;
}

}  // namespace ismf
