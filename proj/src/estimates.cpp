#include "ismf/estimates.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>

namespace ismf {

NormSet norms(const Field& f) {
  const Grid& g = f.grid();
  NormSet n;
  n.l2_sq = l2_norm_sq(f);
  n.grad_l2_sq = dirichlet_energy(f);
  n.h1_sq = n.l2_sq + n.grad_l2_sq;
  const Field lap = laplacian_neumann(f, g);
  n.lap_l2_sq = l2_norm_sq(lap);
  n.h2_surrogate_sq = n.l2_sq + n.lap_l2_sq;
  n.h3_surrogate_sq = n.l2_sq + n.lap_l2_sq + dirichlet_energy(lap);
  n.sup_abs = max_pointwise_norm(f);
  return n;
}

namespace {

// second difference along one axis with even ghosts
Field second_difference(const Field& f, int axis) {
  const Grid& g = f.grid();
  Field out(g, f.components());
  const int n = g.cells(axis);
  const std::size_t s = g.stride(axis);
  const double inv_h2 = 1.0 / (g.spacing(axis) * g.spacing(axis));
  for (std::size_t cell = 0; cell < g.size(); ++cell) {
    const int q = g.coords(cell)[axis];
    for (int c = 0; c < f.components(); ++c) {
      const double here = f(cell, c);
      const double plus = q + 1 < n ? f(cell + s, c) : here;
      const double minus = q > 0 ? f(cell - s, c) : here;
      out(cell, c) = (plus - 2.0 * here + minus) * inv_h2;
    }
  }
  return out;
}

}  // namespace

double h2_full_sq(const Field& f) {
  const Grid& g = f.grid();
  double total = l2_norm_sq(f) + dirichlet_energy(f);
  for (int a = 0; a < g.dim(); ++a) {
    total += l2_norm_sq(second_difference(f, a));
    const Field da = derivative(f, a, Parity::even);
    for (int b = 0; b < g.dim(); ++b) {
      if (b == a) continue;
      total += l2_norm_sq(derivative(da, b, Parity::even));
    }
  }
  return total;
}

double equivalent_norm_ratio(const Field& f) {
  const double l2 = std::sqrt(l2_norm_sq(f));
  const double lap = std::sqrt(l2_norm_sq(laplacian_neumann(f, f.grid())));
  return std::sqrt(h2_full_sq(f)) / (l2 + lap);
}

std::vector<double> cumulative_trapezoid(const std::vector<double>& t, const std::vector<double>& y) {
  if (t.size() != y.size()) throw InvalidArgument("cumulative_trapezoid: length mismatch");
  std::vector<double> out(t.size(), 0.0);
  for (std::size_t i = 1; i < t.size(); ++i) {
    out[i] = out[i - 1] + 0.5 * (t[i] - t[i - 1]) * (y[i] + y[i - 1]);
  }
  return out;
}

double VelocitySeries::forcing(std::size_t i) const {
  const double v2 = inf[i] * inf[i];
  return dtv_h1_sq[i] + v2 * v2 + grad_inf[i] * grad_inf[i];
}

VelocitySeries sample_velocity(const VelocitySource& v, const std::vector<double>& times) {
  VelocitySeries s;
  s.t = times;
  // a static field has identical norms at every sample
  std::optional<VelocityNorms> fixed;
  if (v.is_static()) fixed = velocity_norms(v.at(0.0));
  for (double t : times) {
    const VelocityNorms n = fixed ? *fixed : velocity_norms(v.at(t));
    s.inf.push_back(n.inf);
    s.grad_inf.push_back(n.grad_inf);
    s.w13.push_back(n.w13());
    if (v.is_static()) {
      s.dtv_h1_sq.push_back(0.0);
    } else {
      const Field dv = v.time_derivative(t);
      s.dtv_h1_sq.push_back(l2_norm_sq(dv) + dirichlet_energy(dv));
    }
  }
  return s;
}

Envelopes envelopes(const VelocitySeries& v) {
  Envelopes e;
  e.t = v.t;
  std::vector<double> twice_grad(v.t.size()), speed2(v.t.size()), f(v.t.size());
  for (std::size_t i = 0; i < v.t.size(); ++i) {
    twice_grad[i] = 2.0 * v.grad_inf[i];
    speed2[i] = v.inf[i] * v.inf[i];
    f[i] = v.forcing(i);
  }
  e.gronwall = cumulative_trapezoid(v.t, twice_grad);
  e.speed_sq = cumulative_trapezoid(v.t, speed2);
  e.forcing = cumulative_trapezoid(v.t, f);
  return e;
}

std::vector<double> EstimateCheck::slack() const {
  std::vector<double> s(lhs.size());
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    if (kind == Kind::identity) {
      s[i] = tolerance * std::abs(rhs[i]) + abs_floor - std::abs(lhs[i] - rhs[i]);
    } else {
      s[i] = rhs[i] * (1.0 + tolerance) + abs_floor - lhs[i];
    }
    if (std::isnan(s[i])) s[i] = -std::numeric_limits<double>::infinity();
  }
  return s;
}

bool EstimateCheck::pass() const { return !first_violation().has_value(); }

std::optional<double> EstimateCheck::first_violation() const {
  const auto s = slack();
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] < 0.0) return t[i];
  }
  return std::nullopt;
}

double EstimateCheck::min_slack() const {
  const auto s = slack();
  return s.empty() ? 0.0 : *std::min_element(s.begin(), s.end());
}

bool EnergyReport::all_hard_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const EstimateCheck& c) { return !c.hard || c.pass(); });
}

const EstimateCheck* EnergyReport::find(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

void EnergyReport::write_summary(std::ostream& os) const {
  os << std::setprecision(6);
  for (const auto& c : checks) {
    const bool ok = c.pass();
    os << (c.hard ? (ok ? "PASS " : "FAIL ") : "INFO ") << c.name << " min_slack=" << c.min_slack()
       << " tol=" << c.tolerance;
    if (!c.lhs.empty()) os << " lhs_end=" << c.lhs.back() << " rhs_end=" << c.rhs.back();
    if (auto t = c.first_violation()) os << " first_violation_t=" << *t;
    os << '\n';
  }
  for (const auto& k : constants) os << "CONST " << k.name << '=' << k.value << '\n';
}

void EnergyReport::write_csv(std::ostream& os) const {
  os << "estimate,t,lhs,rhs,slack\n" << std::setprecision(17);
  for (const auto& c : checks) {
    const auto s = c.slack();
    for (std::size_t i = 0; i < c.t.size(); ++i) {
      os << c.name << ',' << c.t[i] << ',' << c.lhs[i] << ',' << c.rhs[i] << ',' << s[i] << '\n';
    }
  }
}

namespace {

void require_aligned(const std::vector<double>& a, const std::vector<double>& b, const char* what) {
  if (a.size() != b.size()) throw InvalidArgument(std::string(what) + ": series lengths differ");
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::abs(a[i] - b[i]) > 1e-12 * std::max(1.0, std::abs(a[i]))) {
      throw InvalidArgument(std::string(what) + ": time stamps are misaligned");
    }
  }
}

std::vector<double> running_max(const std::vector<double>& y) {
  std::vector<double> out(y.size());
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < y.size(); ++i) {
    m = std::max(m, y[i]);
    out[i] = m;
  }
  return out;
}

}  // namespace

EnergyReport check_weak_bounds(const WeakSeries& u, const VelocitySeries& v, double epsilon,
                               const Tolerances& tol) {
  const std::size_t n = u.t.size();
  if (n == 0) throw InvalidArgument("check_weak_bounds: empty series");
  for (const auto* col : {&u.l2_sq, &u.grad_l2_sq, &u.lap_l2_sq, &u.dtu_l2_sq, &u.sup_abs}) {
    if (col->size() != n) throw InvalidArgument("check_weak_bounds: series lengths differ");
  }
  if (!u.diss_accum.empty() && u.diss_accum.size() != n) {
    throw InvalidArgument("check_weak_bounds: dissipation series length differs");
  }
  require_aligned(u.t, v.t, "check_weak_bounds");
  for (std::size_t i = 1; i < n; ++i) {
    if (!(u.t[i] > u.t[i - 1])) throw InvalidArgument("check_weak_bounds: time stamps must increase");
  }

  EnergyReport report;
  report.env = envelopes(v);
  const auto& I = report.env.gronwall;
  const auto& S = report.env.speed_sq;
  const double l2_0 = u.l2_sq[0];
  const double grad_0 = u.grad_l2_sq[0];
  const double floor = 1e-12 * std::max(1.0, l2_0);

  std::vector<double> diss = u.diss_accum;
  if (diss.empty()) {
    std::vector<double> rate(n);
    for (std::size_t i = 0; i < n; ++i) rate[i] = 2.0 * epsilon * u.grad_l2_sq[i];
    diss = cumulative_trapezoid(u.t, rate);
  }

  auto make = [&](std::string name, EstimateCheck::Kind kind, bool hard, double tolerance) {
    EstimateCheck c;
    c.name = std::move(name);
    c.kind = kind;
    c.hard = hard;
    c.tolerance = tolerance;
    c.abs_floor = floor;
    c.t = u.t;
    c.lhs.resize(n);
    c.rhs.resize(n);
    return c;
  };

  auto l2_law = make("L2-law-3.3", EstimateCheck::Kind::identity, true, tol.identity);
  for (std::size_t i = 0; i < n; ++i) {
    l2_law.lhs[i] = u.l2_sq[i] + diss[i];
    l2_law.rhs[i] = l2_0;
  }

  const auto sup_grad = running_max(u.grad_l2_sq);
  auto gronwall = make("H1-gronwall-3.4", EstimateCheck::Kind::inequality, true, tol.envelope);
  std::vector<double> lap_rate(n), dtu_sq(n), h1(n);
  for (std::size_t i = 0; i < n; ++i) {
    gronwall.lhs[i] = sup_grad[i];
    gronwall.rhs[i] = std::exp(I[i]) * grad_0;
    lap_rate[i] = 2.0 * epsilon * u.lap_l2_sq[i];
    dtu_sq[i] = u.dtu_l2_sq[i];
    h1[i] = u.l2_sq[i] + u.grad_l2_sq[i];
  }

  auto lap_diss = make("H1-gronwall-3.4:dissipation", EstimateCheck::Kind::inequality, true, tol.envelope);
  const auto lap_int = cumulative_trapezoid(u.t, lap_rate);
  for (std::size_t i = 0; i < n; ++i) {
    lap_diss.lhs[i] = lap_int[i];
    lap_diss.rhs[i] = (1.0 + I[i] * std::exp(I[i])) * grad_0;
  }

  auto dtu = make("dtU-3.5", EstimateCheck::Kind::inequality, true, tol.envelope);
  const auto dtu_int = cumulative_trapezoid(u.t, dtu_sq);
  for (std::size_t i = 0; i < n; ++i) {
    dtu.lhs[i] = dtu_int[i];
    dtu.rhs[i] = ((1.0 + epsilon) / epsilon + 2.0 * S[i]) * (1.0 + I[i] * std::exp(I[i])) * grad_0;
  }

  auto weak = make("H1-weak-1.2", EstimateCheck::Kind::inequality, true, tol.envelope);
  const auto sup_h1 = running_max(h1);
  for (std::size_t i = 0; i < n; ++i) {
    weak.lhs[i] = sup_h1[i];
    weak.rhs[i] = std::exp(I[i]) * grad_0 + l2_0;
  }

  // finite-n iterates may leave the ball; reported, not enforced
  auto maxprin = make("maxprin-3.6", EstimateCheck::Kind::inequality, false, 0.0);
  maxprin.abs_floor = SpinField::kConstraintTol;
  const auto sup_abs = running_max(u.sup_abs);
  for (std::size_t i = 0; i < n; ++i) {
    maxprin.lhs[i] = sup_abs[i];
    maxprin.rhs[i] = 1.0;
  }

  report.checks = {l2_law, gronwall, lap_diss, dtu, weak, maxprin};
  report.constants.push_back({"max_overshoot", std::max(0.0, sup_abs.back() - 1.0)});
  return report;
}

EnergyReport check_weak_bounds(const std::vector<double>& times, const std::vector<Field>& u,
                               const VelocitySource& v, double epsilon, const Tolerances& tol) {
  if (times.size() != u.size()) throw InvalidArgument("check_weak_bounds: time stamps and snapshots differ");
  WeakSeries s;
  s.t = times;
  const std::size_t n = u.size();
  for (std::size_t i = 0; i < n; ++i) {
    const NormSet ns = norms(u[i]);
    s.l2_sq.push_back(ns.l2_sq);
    s.grad_l2_sq.push_back(ns.grad_l2_sq);
    s.lap_l2_sq.push_back(ns.lap_l2_sq);
    s.sup_abs.push_back(ns.sup_abs);
    if (n < 2) {
      s.dtu_l2_sq.push_back(0.0);
      continue;
    }
    const std::size_t lo = i == 0 ? 0 : i - 1;
    const std::size_t hi = i + 1 == n ? i : i + 1;
    Field d = u[hi];
    d -= u[lo];
    d *= 1.0 / (times[hi] - times[lo]);
    s.dtu_l2_sq.push_back(l2_norm_sq(d));
  }
  return check_weak_bounds(s, sample_velocity(v, times), epsilon, tol);
}

double CosineTestFunction::shape(const Grid& g, const std::array<double, 3>& x) const {
  double value = 1.0;
  for (int a = 0; a < g.dim(); ++a) value *= std::cos(k[a] * std::numbers::pi * x[a] / g.extent(a));
  return value;
}

double CosineTestFunction::shape_derivative(const Grid& g, const std::array<double, 3>& x, int axis) const {
  double value = 1.0;
  for (int a = 0; a < g.dim(); ++a) {
    const double w = k[a] * std::numbers::pi / g.extent(a);
    value *= a == axis ? -w * std::sin(w * x[a]) : std::cos(w * x[a]);
  }
  return value;
}

double weak_form_residual(const std::vector<double>& times, const std::vector<Field>& u,
                          const VelocitySource& v, const CosineTestFunction& phi) {
  if (times.size() != u.size() || times.empty()) {
    throw InvalidArgument("weak_form_residual: need matching nonempty time stamps and snapshots");
  }
  const Grid& g = u.front().grid();
  const int c = phi.component;
  const double vol = g.cell_volume();
  std::vector<double> shape(g.size());
  std::vector<std::array<double, 3>> dshape(g.size());
  for (std::size_t cell = 0; cell < g.size(); ++cell) {
    const auto x = g.position(cell);
    shape[cell] = phi.shape(g, x);
    for (int a = 0; a < g.dim(); ++a) dshape[cell][a] = phi.shape_derivative(g, x, a);
  }

  auto pair_at = [&](const Field& f, double t) {
    double s = 0.0;
    for (std::size_t cell = 0; cell < g.size(); ++cell) s += f(cell, c) * shape[cell];
    return s * vol * phi.amplitude(t);
  };

  // integrand of the time integrals at one snapshot
  std::vector<double> integrand(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    const Field& ui = u[i];
    const double t = times[i];
    const double a = phi.amplitude(t);
    double sum = 0.0;
    // - <u, d_t phi>
    double pair_u = 0.0;
    for (std::size_t cell = 0; cell < g.size(); ++cell) pair_u += ui(cell, c) * shape[cell];
    sum -= pair_u * vol * phi.a1;
    // + <v . grad u, phi>
    const Field adv = advect(v.at(t), ui, g);
    double pair_adv = 0.0;
    for (std::size_t cell = 0; cell < g.size(); ++cell) pair_adv += adv(cell, c) * shape[cell];
    sum += pair_adv * vol * a;
    // + <u x grad u, grad phi>
    const auto grad = gradient(ui, g);
    double pair_flux = 0.0;
    for (int ax = 0; ax < g.dim(); ++ax) {
      const Field flux = cross(ui, grad[ax]);
      for (std::size_t cell = 0; cell < g.size(); ++cell) pair_flux += flux(cell, c) * dshape[cell][ax];
    }
    sum += pair_flux * vol * a;
    integrand[i] = sum;
  }
  const double time_integral = cumulative_trapezoid(times, integrand).back();
  return std::abs(pair_at(u.back(), times.back()) - pair_at(u.front(), times.front()) + time_integral);
}

double sup_l2_difference(const std::vector<double>& times_a, const std::vector<Field>& a,
                         const std::vector<double>& times_b, const std::vector<Field>& b) {
  require_aligned(times_a, times_b, "sup_l2_difference");
  if (a.size() != times_a.size() || b.size() != times_b.size()) {
    throw InvalidArgument("sup_l2_difference: snapshot counts differ from time stamps");
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Field& x = a[i];
    const Field& y = b[i];
    double d;
    if (x.grid() == y.grid()) {
      d = l2_norm_sq(x - y);
    } else if (x.cells() < y.cells()) {
      d = l2_norm_sq(x - restrict_average(y, x.grid()));
    } else {
      d = l2_norm_sq(restrict_average(x, y.grid()) - y);
    }
    worst = std::max(worst, std::sqrt(d));
  }
  return worst;
}

double functional_G(const Field& u, const Field& dtu, double epsilon) {
  const NormSet nu = norms(u);
  const double dtu_h1 = l2_norm_sq(dtu) + dirichlet_energy(dtu);
  return (1.0 + epsilon * epsilon) * nu.h2_surrogate_sq + dtu_h1 + 1.0;
}

double equivalent_h3_ratio(const NormSet& u, double dtu_h1_sq, double v_w13) {
  const double base = 1.0 + u.h2_surrogate_sq + dtu_h1_sq + v_w13 * v_w13;
  return u.h3_surrogate_sq / (base * base * base);
}

double fit_g_constant(const std::vector<double>& t, const std::vector<double>& g_values,
                      const std::vector<double>& v_w13, const std::vector<double>& forcing) {
  const std::size_t n = t.size();
  if (g_values.size() != n || v_w13.size() != n || forcing.size() != n) {
    throw InvalidArgument("fit_g_constant: series lengths differ");
  }
  double c_hat = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (n < 2) break;
    const std::size_t lo = i == 0 ? 0 : i - 1;
    const std::size_t hi = i + 1 == n ? i : i + 1;
    const double rate = (g_values[hi] - g_values[lo]) / (t[hi] - t[lo]);
    const double base = g_values[i] + v_w13[i] * v_w13[i];
    const double denom = base * base * base * base + forcing[i];
    c_hat = std::max(c_hat, rate / denom);
  }
  return c_hat;
}

}  // namespace ismf
