#include "corrlab/transform.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "corrlab/errors.hpp"
#include "corrlab/quadrature.hpp"

namespace corrlab {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx kI{0.0, 1.0};

cplx ipow(cplx z, int p) {
  cplx r = 1.0;
  for (int i = 0; i < p; ++i) r *= z;
  return r;
}

double norm_of(const RVec& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double max_coef(const MuForm& mu) {
  double c = 0.0;
  for (const auto& t : mu.terms) c += std::abs(t.coef);
  return c;
}

/// q'-rule on [-r2, r2] resolving the envelope, the form and the factors
/// exp(-i q'v) and exp(-r mu(q')).
QuadratureRule q_rule(const ScatteringModelF& F, const MuForm& mu, double vnorm, double r,
                      const TransformOptions& o) {
  double L = 2.0 * F.r2;
  double per = o.nodes_per_period / o.order;
  double panels = std::max<double>(o.min_panels, vnorm * L / (2.0 * kPi) * per);
  if (F.form == FormKind::pole || F.form == FormKind::log) panels = std::max(panels, 2.0 * L / F.eps);
  if (F.form == FormKind::grid) panels = std::max(panels, 2.0 * L / F.spacing);
  if (r > 0.0) panels = std::max(panels, 2.0 * L * std::sqrt(r * max_coef(mu)));

  std::vector<double> cuts = {-F.r2, -F.r1, F.r1, F.r2};
  if ((F.form == FormKind::pole || F.form == FormKind::log) && std::abs(F.q0) < F.r2) cuts.push_back(F.q0);
  std::sort(cuts.begin(), cuts.end());
  QuadratureRule rule;
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    double len = cuts[i + 1] - cuts[i];
    if (len <= 0.0) continue;
    int n = std::max(1, static_cast<int>(std::ceil(panels * len / L)));
    append_composite(rule, cuts[i], cuts[i + 1], n, o.order);
  }
  return rule;
}

double lagrange(const std::vector<double>& y, double origin, double h, int order, double x) {
  double s = (x - origin) / h;
  int n = static_cast<int>(y.size());
  if (s < 0.0 || s > n - 1) return 0.0;
  int first = static_cast<int>(std::floor(s)) - (order - 1) / 2;
  first = std::clamp(first, 0, std::max(0, n - 1 - order));
  int last = std::min(n - 1, first + order);
  double out = 0.0;
  for (int i = first; i <= last; ++i) {
    double li = 1.0;
    for (int j = first; j <= last; ++j)
      if (j != i) li *= (s - j) / (i - j);
    out += li * y[i];
  }
  return out;
}

double edge_max(const VFunction& T, int dim, double R) {
  std::vector<RVec> dirs;
  if (dim == 1) {
    dirs = {{1.0}, {-1.0}};
  } else {
    for (int k = 0; k < 8; ++k) dirs.push_back({std::cos(k * kPi / 4), std::sin(k * kPi / 4)});
  }
  double m = 0.0;
  for (const auto& d : dirs)
    for (int i = 0; i < 16; ++i) {
      double s = R * (0.9 + 0.1 * i / 15.0);
      RVec v(d);
      for (auto& x : v) x *= s;
      m = std::max(m, std::abs(T(v)));
    }
  return m;
}

double peak_of(const VFunction& T, int dim, double R) {
  double m = std::abs(T(RVec(dim, 0.0)));
  for (int i = 1; i <= 64; ++i) {
    double s = R * i / 64.0;
    RVec v(dim, 0.0);
    v[0] = s;
    m = std::max(m, std::abs(T(v)));
    v[0] = -s;
    m = std::max(m, std::abs(T(v)));
  }
  return m;
}

/// (2 pi)^-2 int over the sector phi in [a, b], |v| <= R of e^{i q.v} T(v).
cplx sector_integral(const VFunction& T, const CVec& q, double a, double b, double R, const VGrid& g) {
  int nr = std::max(1, static_cast<int>(std::ceil(R / g.panel_width)));
  int nphi = std::max(2, static_cast<int>(std::ceil((b - a) * R / g.panel_width)));
  auto rr = composite_gauss_legendre(0.0, R, nr, g.order);
  auto rp = composite_gauss_legendre(a, b, nphi, g.order);
  cplx sum = 0.0;
  for (size_t j = 0; j < rp.nodes.size(); ++j) {
    double c = std::cos(rp.nodes[j]), s = std::sin(rp.nodes[j]);
    cplx inner = 0.0;
    for (size_t i = 0; i < rr.nodes.size(); ++i) {
      double r = rr.nodes[i];
      RVec v = {r * c, r * s};
      inner += rr.weights[i] * r * std::exp(kI * (q[0] * v[0] + q[1] * v[1])) * T(v);
    }
    sum += rp.weights[j] * inner;
  }
  return sum / (4.0 * kPi * kPi);
}

/// (2 pi)^-1 int_0^R e^{i q c s} T(c s) ds for direction c = +-1.
cplx ray_integral(const VFunction& T, cplx q, double c, double R, const VGrid& g) {
  int n = std::max(1, static_cast<int>(std::ceil(R / g.panel_width)));
  auto rule = composite_gauss_legendre(0.0, R, n, g.order);
  cplx sum = 0.0;
  for (size_t i = 0; i < rule.nodes.size(); ++i) {
    double v = c * rule.nodes[i];
    sum += rule.weights[i] * std::exp(kI * q * v) * T({v});
  }
  return sum / (2.0 * kPi);
}

double resolve_radius(const VFunction& T, const VGrid& g, double* truncation) {
  if (g.radius > 0.0) {
    double peak = peak_of(T, g.dim, g.radius);
    double tr = peak > 0.0 ? edge_max(T, g.dim, g.radius) / peak : 0.0;
    if (tr > g.truncation_tol)
      throw ComputeError("truncation: |T| at the edge of the v-box (radius " + std::to_string(g.radius) +
                         ") is " + std::to_string(tr) + " of its peak");
    *truncation = tr;
    return g.radius;
  }
  double R = choose_truncation(T, g.dim, g.truncation_tol, 8.0, g.max_radius);
  double peak = peak_of(T, g.dim, R);
  *truncation = peak > 0.0 ? edge_max(T, g.dim, R) / peak : 0.0;
  return R;
}

}  // namespace

std::string_view to_string(FormKind k) {
  switch (k) {
    case FormKind::bump: return "bump";
    case FormKind::pole: return "pole";
    case FormKind::log: return "log";
    case FormKind::grid: return "grid";
  }
  return "?";
}

void ScatteringModelF::validate() const {
  if (dim != 1 && dim != 2) throw ComputeError("dimension l must be 1 or 2");
  if (!(r1 > 0.0 && r2 > r1)) throw ComputeError("envelope needs 0 < r1 < r2");
  if ((form == FormKind::pole || form == FormKind::log) && !(eps > 0.0))
    throw ComputeError("pole and log forms need eps > 0");
  if (form == FormKind::grid) {
    if (dim != 1) throw ComputeError("grid form is one-dimensional");
    if (samples.size() < 2 || !(spacing > 0.0)) throw ComputeError("grid form needs samples and spacing > 0");
    if (interp_order < 1 || interp_order > 7) throw ComputeError("interpolation order must be in 1..7");
  }
}

cplx ScatteringModelF::operator()(const RVec& q) const {
  double env = Bump(r1, r2)(norm_of(q));
  if (env == 0.0) return 0.0;
  switch (form) {
    case FormKind::bump: return env;
    case FormKind::pole: return env / cplx(q[0] - q0, eps);
    case FormKind::log: return env * std::log(cplx(q[0] - q0, eps));
    case FormKind::grid: return env * lagrange(samples, origin, spacing, interp_order, q[0]);
  }
  return 0.0;
}

cplx ScatteringModelF::continuation(const CVec& q) const {
  switch (form) {
    case FormKind::bump: return 1.0;
    case FormKind::pole: return 1.0 / (q[0] - q0 + kI * eps);
    case FormKind::log: return std::log(q[0] - q0 + kI * eps);
    case FormKind::grid: break;
  }
  throw ComputeError("grid form has no analytic continuation");
}

MuForm MuForm::quadratic(const std::vector<double>& c) {
  MuForm m;
  m.dim = static_cast<int>(c.size());
  for (int j = 0; j < m.dim; ++j) {
    MuTerm t;
    t.coef = c[j];
    t.powers.assign(m.dim, 0);
    t.powers[j] = 2;
    m.terms.push_back(t);
  }
  return m;
}

cplx MuForm::operator()(const CVec& q) const {
  cplx s = 0.0;
  for (const auto& t : terms) {
    cplx p = t.coef;
    for (int j = 0; j < dim; ++j) p *= ipow(q[j], t.powers[j]);
    s += p;
  }
  return s;
}

double MuForm::operator()(const RVec& q) const {
  CVec c(q.begin(), q.end());
  return (*this)(c).real();
}

void MuForm::validate(double support_radius) const {
  if (dim != 1 && dim != 2) throw ComputeError("mu: dimension must be 1 or 2");
  for (const auto& t : terms) {
    if (static_cast<int>(t.powers.size()) != dim) throw ComputeError("mu: exponent list has wrong length");
    bool constant = true;
    for (int p : t.powers) {
      if (p < 0) throw ComputeError("mu: negative exponent");
      if (p > 0) constant = false;
    }
    if (constant && t.coef != 0.0) throw ComputeError("mu: mu(0) must vanish");
  }
  int n = dim == 1 ? 201 : 41;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < (dim == 1 ? 1 : n); ++j) {
      RVec q(dim);
      q[0] = support_radius * (2.0 * i / (n - 1) - 1.0);
      if (dim == 2) {
        q[1] = support_radius * (2.0 * j / (n - 1) - 1.0);
        if (norm_of(q) > support_radius) continue;
      }
      if ((*this)(q) < -1e-12) throw ComputeError("mu: negative on the support");
    }
}

CVec hefer_factor(const MuForm& mu, const CVec& q, const CVec& q2) {
  CVec rho(mu.dim, 0.0);
  for (const auto& t : mu.terms) {
    for (int j = 0; j < mu.dim; ++j) {
      int p = t.powers[j];
      if (p == 0) continue;
      cplx f = t.coef;
      for (int i = 0; i < j; ++i) f *= ipow(q2[i], t.powers[i]);
      for (int i = j + 1; i < mu.dim; ++i) f *= ipow(q[i], t.powers[i]);
      cplx s = 0.0;
      for (int k = 0; k < p; ++k) s += ipow(q[j], k) * ipow(q2[j], p - 1 - k);
      rho[j] += f * s;
    }
  }
  return rho;
}

cplx forward_T(const ScatteringModelF& F, const MuForm& mu, const RVec& v, double r, const TransformOptions& o) {
  if (static_cast<int>(v.size()) != F.dim || mu.dim != F.dim) throw ComputeError("forward_T: dimension mismatch");
  auto rule = q_rule(F, mu, norm_of(v), r, o);
  cplx sum = 0.0;
  if (F.dim == 1) {
    for (size_t i = 0; i < rule.nodes.size(); ++i) {
      double q = rule.nodes[i];
      sum += rule.weights[i] * F({q}) * std::exp(-r * mu(RVec{q}) - kI * q * v[0]);
    }
    return sum;
  }
  for (size_t i = 0; i < rule.nodes.size(); ++i)
    for (size_t j = 0; j < rule.nodes.size(); ++j) {
      RVec q = {rule.nodes[i], rule.nodes[j]};
      cplx f = F(q);
      if (f == 0.0) continue;
      sum += rule.weights[i] * rule.weights[j] * f * std::exp(-r * mu(q) - kI * (q[0] * v[0] + q[1] * v[1]));
    }
  return sum;
}

double forward_T_radial(const ScatteringModelF& F, double c, double vnorm, double r, const TransformOptions& o) {
  if (F.form != FormKind::bump && F.form != FormKind::grid)
    throw ComputeError("forward_T_radial: form is not rotation invariant");
  double per = o.nodes_per_period / o.order;
  double panels = std::max<double>(o.min_panels, vnorm * F.r2 / (2.0 * kPi) * per);
  if (r > 0.0) panels = std::max(panels, 2.0 * F.r2 * std::sqrt(r * c));
  QuadratureRule rule;
  append_composite(rule, 0.0, F.r1, std::max(1, static_cast<int>(std::ceil(panels * F.r1 / F.r2))), o.order);
  append_composite(rule, F.r1, F.r2, std::max(1, static_cast<int>(std::ceil(panels * (F.r2 - F.r1) / F.r2))),
                   o.order);
  double sum = 0.0;
  for (size_t i = 0; i < rule.nodes.size(); ++i) {
    double rho = rule.nodes[i];
    sum += rule.weights[i] * rho * F({rho, 0.0}).real() * std::exp(-r * c * rho * rho) *
           std::cyl_bessel_j(0.0, rho * vnorm);
  }
  return 2.0 * kPi * sum;
}

double choose_truncation(const VFunction& T, int dim, double tol, double start, double max_radius) {
  double R = start;
  double peak = peak_of(T, dim, R);
  while (R <= max_radius) {
    peak = std::max(peak, peak_of(T, dim, R));
    if (edge_max(T, dim, R) <= tol * peak) return R;
    R *= 1.4;
  }
  throw ComputeError("truncation: |T| does not fall below " + std::to_string(tol) + " of its peak within |v| <= " +
                     std::to_string(max_radius));
}

InverseResult inverse_F(const VFunction& T, const RVec& q, const VGrid& g) {
  return inverse_F(T, std::vector<RVec>{q}, g).front();
}

std::vector<InverseResult> inverse_F(const VFunction& T, const std::vector<RVec>& qs, const VGrid& g) {
  for (const auto& q : qs)
    if (static_cast<int>(q.size()) != g.dim) throw ComputeError("inverse_F: dimension mismatch");
  InverseResult base;
  base.radius = resolve_radius(T, g, &base.truncation);
  double R = base.radius;
  std::vector<InverseResult> out(qs.size(), base);

  if (g.dim == 1 || g.radial) {
    double lo = g.dim == 1 ? -R : 0.0;
    int n = std::max(1, static_cast<int>(std::ceil((R - lo) / g.panel_width)));
    auto rule = composite_gauss_legendre(lo, R, n, g.order);
    std::vector<cplx> tv(rule.nodes.size());
    for (size_t i = 0; i < rule.nodes.size(); ++i)
      tv[i] = g.dim == 1 ? T({rule.nodes[i]}) : T({rule.nodes[i], 0.0});
    for (size_t k = 0; k < qs.size(); ++k) {
      cplx sum = 0.0;
      for (size_t i = 0; i < rule.nodes.size(); ++i) {
        double v = rule.nodes[i];
        if (g.dim == 1)
          sum += rule.weights[i] * std::exp(kI * qs[k][0] * v) * tv[i];
        else
          sum += rule.weights[i] * v * tv[i] * std::cyl_bessel_j(0.0, norm_of(qs[k]) * v);
      }
      out[k].value = sum / (2.0 * kPi);
    }
    return out;
  }
  for (size_t k = 0; k < qs.size(); ++k)
    out[k].value = sector_integral(T, CVec{qs[k][0], qs[k][1]}, 0.0, 2.0 * kPi, R, g);
  return out;
}

SplitResult split_F(const ScatteringModelF& F, const MuForm& mu, double gamma0, cplx q, const SplitOptions& o) {
  if (F.dim != 1 || mu.dim != 1) throw ComputeError("split_F: only l = 1 is supported");
  if (!(gamma0 > 0.0)) throw ComputeError("split_F: gamma0 must be positive");
  cplx mu_q = mu(CVec{q});
  const double chunk = 4.0;
  const double max_radius = 4000.0;
  SplitResult out;

  for (double side : {1.0, -1.0}) {
    double a = 0.0;
    double peak = 0.0;
    double last = 0.0;
    while (true) {
      int n = std::max(1, static_cast<int>(std::ceil(chunk / o.panel_width)));
      auto rule = composite_gauss_legendre(a, a + chunk, n, o.inner.order);
      double chunk_max = 0.0;
      for (size_t i = 0; i < rule.nodes.size(); ++i) {
        double s = rule.nodes[i];
        double v = side * s;
        double r = gamma0 * s;
        auto qr = q_rule(F, mu, s, r, o.inner);
        cplx T = 0.0, H = 0.0;
        for (size_t k = 0; k < qr.nodes.size(); ++k) {
          double qp = qr.nodes[k];
          cplx f = F({qp});
          if (f == 0.0) continue;
          cplx base = qr.weights[k] * f * std::exp(-r * mu(RVec{qp}) - kI * qp * v);
          T += base;
          H += base * hefer_factor(mu, CVec{q}, CVec{qp})[0];
        }
        H *= -kI;
        cplx phase = std::exp(kI * q * v + r * mu_q) / (2.0 * kPi);
        cplx i1 = phase * T;
        cplx i2 = gamma0 * side * phase * H;
        out.F1 += rule.weights[i] * i1;
        out.F2 += rule.weights[i] * i2;
        double m = std::abs(i1) + std::abs(i2);
        chunk_max = std::max(chunk_max, m);
      }
      peak = std::max(peak, chunk_max);
      last = chunk_max;
      a += chunk;
      if (o.radius > 0.0) {
        if (a >= o.radius) break;
      } else if (chunk_max <= o.tail_tol * peak) {
        break;
      }
      if (a >= max_radius)
        throw ComputeError("split_F: integrand does not decay by |v| = " + std::to_string(a));
    }
    out.radius = std::max(out.radius, a);
    out.tail = std::max(out.tail, peak > 0.0 ? last / peak : 0.0);
  }
  return out;
}

bool in_cone_Q(const HoleSpec& hole, const CVec& q, double margin) {
  if (hole.dim == 1) {
    double y = q[0].imag();
    return y != 0.0 && hole.center * y > margin * std::abs(y);
  }
  double y1 = q[0].imag(), y2 = q[1].imag();
  double yn = std::hypot(y1, y2);
  if (yn == 0.0) return false;
  double d = std::remainder(std::atan2(y2, y1) - hole.center, 2.0 * kPi);
  return std::abs(d) + hole.angle < std::acos(margin);
}

ConeSplit cone_split(const VFunction& T, const HoleSpec& hole, const CVec& q, const VGrid& grid, double margin) {
  if (hole.dim != grid.dim || static_cast<int>(q.size()) != hole.dim)
    throw ComputeError("cone_split: dimension mismatch");
  if (hole.dim == 1 && std::abs(hole.center) != 1.0) throw ComputeError("cone_split: l = 1 hole must be +1 or -1");
  if (hole.dim == 2 && !(hole.angle > 0.0 && hole.angle < kPi / 2))
    throw ComputeError("cone_split: hole half-angle must lie in (0, pi/2)");

  VGrid g = grid;
  g.radial = false;
  double truncation = 0.0;
  double R = resolve_radius(T, g, &truncation);

  bool real_point = true;
  for (const auto& z : q) real_point = real_point && z.imag() == 0.0;

  ConeSplit out;
  if (hole.dim == 1) {
    out.F_A = ray_integral(T, q[0].real(), -hole.center, R, g);
    if (real_point || in_cone_Q(hole, q, margin)) {
      out.F_H = ray_integral(T, q[0], hole.center, R, g);
      out.convergent = true;
    }
  } else {
    double a = hole.center - hole.angle, b = hole.center + hole.angle;
    CVec re = {q[0].real(), q[1].real()};
    out.F_A = sector_integral(T, re, b, a + 2.0 * kPi, R, g);
    if (real_point || in_cone_Q(hole, q, margin)) {
      out.F_H = sector_integral(T, q, a, b, R, g);
      out.convergent = true;
    }
  }
  if (!out.convergent) out.diagnostic = "Im q lies outside the dual cone of the hole";
  return out;
}

double cauchy_riemann_residual(const std::function<cplx(cplx)>& f, cplx q, double h) {
  cplx dx = (f(q + h) - f(q - h)) / (2.0 * h);
  cplx dy = (f(q + kI * h) - f(q - kI * h)) / (2.0 * kI * h);
  return std::abs(dx - dy);
}

}  // namespace corrlab
