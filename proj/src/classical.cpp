#include "corrlab/classical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "corrlab/errors.hpp"
#include "corrlab/landau.hpp"
#include "corrlab/quadrature.hpp"

namespace corrlab {

namespace {

constexpr double kPi = std::numbers::pi;

double norm3(const Vec3& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }

double chi_norm(const MomentumWavePacket& pk) {
  auto rule = composite_gauss_legendre(0.0, pk.r2, 16, 16);
  Bump b(pk.r1, pk.r2);
  double s = 0.0;
  for (size_t i = 0; i < rule.nodes.size(); ++i) {
    double r = rule.nodes[i];
    double c = b(r);
    s += rule.weights[i] * r * r * c * c;
  }
  return 4.0 * kPi * s * pk.amplitude * pk.amplitude;
}

struct Tilt {
  Vec3 dx{};
  Vec3 dp{};
};

double draw_axis(const AxisProfile& a, double shift, std::mt19937_64& rng) {
  if (a.kind == ProfileKind::gaussian) {
    if (a.width == 0.0) return a.mean;
    std::normal_distribution<double> n(a.mean + shift, a.width);
    return n(rng);
  }
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Bump b(0.5 * a.width, a.width);
  while (true) {
    double x = a.width * u(rng);
    std::uniform_real_distribution<double> acc(0.0, 1.0);
    if (acc(rng) < b(std::abs(x))) return a.mean + x;
  }
}

PhaseSample draw(const PhaseSpaceDensity& rho, const Tilt& tilt, std::mt19937_64& rng) {
  PhaseSample s;
  for (int a = 0; a < 3; ++a) s.x[a] = draw_axis(rho.position[a], tilt.dx[a], rng);
  if (rho.packet) {
    const auto& pk = *rho.packet;
    std::uniform_real_distribution<double> u(-1.0, 1.0), acc(0.0, 1.0);
    while (true) {
      Vec3 d{pk.r2 * u(rng), pk.r2 * u(rng), pk.r2 * u(rng)};
      if (norm3(d) >= pk.r2) continue;
      Vec3 p{pk.pbar.x + d[0], pk.pbar.y + d[1], pk.pbar.z + d[2]};
      double c = pk.chi(p) / pk.amplitude;
      if (acc(rng) < c * c) {
        s.p = p;
        break;
      }
    }
  } else {
    for (int a = 0; a < 3; ++a) s.p[a] = draw_axis(rho.momentum[a], tilt.dp[a], rng);
  }
  return s;
}

/// log of rho / proposal for the Gaussian factors that were shifted.
double log_weight(const PhaseSpaceDensity& rho, const Tilt& tilt, const PhaseSample& s) {
  double lw = 0.0;
  auto add = [&](const AxisProfile& a, double shift, double v) {
    if (a.kind != ProfileKind::gaussian || a.width == 0.0 || shift == 0.0) return;
    double z0 = (v - a.mean) / a.width;
    double z1 = (v - a.mean - shift) / a.width;
    lw += 0.5 * (z1 * z1 - z0 * z0);
  };
  for (int a = 0; a < 3; ++a) {
    add(rho.position[a], tilt.dx[a], s.x[a]);
    if (!rho.packet) add(rho.momentum[a], tilt.dp[a], s.p[a]);
  }
  return lw;
}

/// Event line of one trajectory: E(t) = A + t D for t in [lo, hi].
struct Line {
  std::array<double, 4> A{};
  std::array<double, 4> D{};
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
};

Line make_line(const OverlapPacket& pk, const PhaseSample& s, double tau) {
  Line L;
  double m = pk.density.mass;
  double t0 = pk.displacement.t * tau;
  L.D = {1.0, s.p[0] / m, s.p[1] / m, s.p[2] / m};
  Vec3 us = pk.displacement.spatial();
  L.A[0] = 0.0;
  for (int a = 0; a < 3; ++a) L.A[a + 1] = s.x[a] + us[a] * tau - t0 * L.D[a + 1];
  if (pk.orientation == Orientation::initial)
    L.lo = t0;
  else
    L.hi = t0;
  return L;
}

std::array<double, 4> point_at(const Line& L, double t) {
  return {L.A[0] + t * L.D[0], L.A[1] + t * L.D[1], L.A[2] + t * L.D[2], L.A[3] + t * L.D[3]};
}

double dot4(const std::array<double, 4>& a, const std::array<double, 4>& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3];
}

std::array<double, 4> sub4(const std::array<double, 4>& a, const std::array<double, 4>& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]};
}

double nearest_t(const Line& L, const std::array<double, 4>& c) {
  double t = dot4(sub4(c, L.A), L.D) / dot4(L.D, L.D);
  return std::clamp(t, L.lo, L.hi);
}

/// Half the distance between two half-lines.
double pair_radius(const Line& a, const Line& b) {
  auto dist = [&](double t1, double t2) { return std::sqrt(dot4(sub4(point_at(a, t1), point_at(b, t2)), sub4(point_at(a, t1), point_at(b, t2)))); };
  auto best_given_t1 = [&](double t1) { return nearest_t(b, point_at(a, t1)); };
  auto best_given_t2 = [&](double t2) { return nearest_t(a, point_at(b, t2)); };

  double a11 = dot4(a.D, a.D), a22 = dot4(b.D, b.D), a12 = dot4(a.D, b.D);
  auto w = sub4(a.A, b.A);
  double r1 = -dot4(a.D, w), r2 = dot4(b.D, w);
  double det = a11 * a22 - a12 * a12;
  double best = std::numeric_limits<double>::infinity();
  if (det > 1e-14 * a11 * a22) {
    double t1 = (r1 * a22 + a12 * r2) / det;
    double t2 = (a11 * r2 + a12 * r1) / det;
    if (t1 >= a.lo && t1 <= a.hi && t2 >= b.lo && t2 <= b.hi) return 0.5 * dist(t1, t2);
  }
  for (double t1 : {a.lo, a.hi})
    if (std::isfinite(t1)) {
      double t2 = best_given_t1(t1);
      best = std::min(best, dist(t1, t2));
    }
  for (double t2 : {b.lo, b.hi})
    if (std::isfinite(t2)) {
      double t1 = best_given_t2(t2);
      best = std::min(best, dist(t1, t2));
    }
  if (!std::isfinite(best)) {
    double t1 = 0.0;
    best = dist(t1, best_given_t1(t1));
  }
  return 0.5 * best;
}

double multi_radius(const std::vector<Line>& lines, int iters) {
  size_t n = lines.size();
  std::array<double, 4> c{};
  for (const auto& L : lines) {
    double t = std::isfinite(L.lo) ? L.lo : (std::isfinite(L.hi) ? L.hi : 0.0);
    auto p = point_at(L, t);
    for (int k = 0; k < 4; ++k) c[k] += p[k] / n;
  }
  double r = 0.0;
  std::vector<std::array<double, 4>> e(n);
  for (int it = 0; it < iters; ++it) {
    for (size_t i = 0; i < n; ++i) e[i] = point_at(lines[i], nearest_t(lines[i], c));
    auto ball = e[0];
    for (int k = 1; k <= 64; ++k) {
      size_t far = 0;
      double fd = -1.0;
      for (size_t i = 0; i < n; ++i) {
        auto d = sub4(e[i], ball);
        double dd = dot4(d, d);
        if (dd > fd) fd = dd, far = i;
      }
      for (int q = 0; q < 4; ++q) ball[q] += (e[far][q] - ball[q]) / (k + 1);
    }
    c = ball;
    double nr = 0.0;
    for (const auto& L : lines) {
      auto d = sub4(point_at(L, nearest_t(L, c)), c);
      nr = std::max(nr, std::sqrt(dot4(d, d)));
    }
    if (it > 0 && std::abs(nr - r) <= 1e-12 * (1.0 + r)) return nr;
    r = nr;
  }
  return r;
}

bool is_gauss(const AxisProfile& a) { return a.kind == ProfileKind::gaussian; }

/// Most likely configuration passing through one event, Gaussian factors only.
std::vector<Tilt> choose_tilts(const std::vector<OverlapPacket>& packets, double tau) {
  size_t n = packets.size();
  double lo = -std::numeric_limits<double>::infinity(), hi = std::numeric_limits<double>::infinity();
  double span = 0.0;
  for (const auto& pk : packets) {
    double t0 = pk.displacement.t * tau;
    if (pk.orientation == Orientation::initial)
      lo = std::max(lo, t0);
    else
      hi = std::min(hi, t0);
    span = std::max(span, std::abs(t0) + norm3(pk.displacement.spatial()) * tau);
  }
  if (!std::isfinite(lo) && !std::isfinite(hi)) lo = -span, hi = span;
  if (!std::isfinite(lo)) lo = hi - 2.0 * span - 1.0;
  if (!std::isfinite(hi)) hi = lo + 2.0 * span + 1.0;
  if (lo > hi) return std::vector<Tilt>(n);

  struct AxisTerm {
    double mean, var, sx2, sp2, dt;
  };
  auto terms = [&](double tc, int a) {
    std::vector<AxisTerm> out;
    for (const auto& pk : packets) {
      const auto& rho = pk.density;
      double m = rho.mass;
      double dt = tc - pk.displacement.t * tau;
      double mx = rho.position[a].mean + pk.displacement.spatial()[a] * tau;
      double sx2 = is_gauss(rho.position[a]) ? rho.position[a].width * rho.position[a].width : 0.0;
      double mp = rho.packet ? std::array<double, 3>{rho.packet->pbar.x, rho.packet->pbar.y, rho.packet->pbar.z}[a]
                             : rho.momentum[a].mean;
      double sp2 = (!rho.packet && is_gauss(rho.momentum[a])) ? rho.momentum[a].width * rho.momentum[a].width : 0.0;
      out.push_back({mx + dt * mp / m, sx2 + dt * dt * sp2 / (m * m), sx2, sp2, dt});
    }
    return out;
  };
  auto event_y = [&](const std::vector<AxisTerm>& t) {
    double pinned = 0.0, npinned = 0.0, num = 0.0, den = 0.0;
    for (const auto& x : t) {
      if (x.var == 0.0) {
        pinned += x.mean;
        npinned += 1.0;
      } else {
        num += x.mean / x.var;
        den += 1.0 / x.var;
      }
    }
    if (npinned > 0.0) return pinned / npinned;
    return den > 0.0 ? num / den : 0.0;
  };
  auto cost = [&](double tc) {
    double c = 0.0;
    for (int a = 0; a < 3; ++a) {
      auto t = terms(tc, a);
      double y = event_y(t);
      for (const auto& x : t)
        if (x.var > 0.0) c += (y - x.mean) * (y - x.mean) / (2.0 * x.var);
    }
    return c;
  };

  const int grid = 64;
  double best_t = lo, best_c = cost(lo);
  for (int k = 1; k <= grid; ++k) {
    double t = lo + (hi - lo) * k / grid;
    double c = cost(t);
    if (c < best_c) best_c = c, best_t = t;
  }
  double a = std::max(lo, best_t - (hi - lo) / grid), b = std::min(hi, best_t + (hi - lo) / grid);
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int it = 0; it < 60; ++it) {
    double x1 = b - g * (b - a), x2 = a + g * (b - a);
    if (cost(x1) < cost(x2))
      b = x2;
    else
      a = x1;
  }
  double tc = 0.5 * (a + b);
  if (cost(tc) > best_c) tc = best_t;

  std::vector<Tilt> tilts(n);
  for (int ax = 0; ax < 3; ++ax) {
    auto t = terms(tc, ax);
    double y = event_y(t);
    for (size_t i = 0; i < n; ++i) {
      if (t[i].var == 0.0) continue;
      double s = y - t[i].mean;
      tilts[i].dx[ax] = t[i].sx2 * s / t[i].var;
      tilts[i].dp[ax] = t[i].dt * t[i].sp2 / packets[i].density.mass * s / t[i].var;
    }
  }
  return tilts;
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / v.size();
}

double stderr_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  double m = mean_of(v), s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / (v.size() - 1) / v.size());
}

}  // namespace

double AxisProfile::density(double x) const {
  if (kind == ProfileKind::gaussian) {
    if (width == 0.0) return x == mean ? std::numeric_limits<double>::infinity() : 0.0;
    double z = (x - mean) / width;
    return std::exp(-0.5 * z * z) / (width * std::sqrt(2.0 * kPi));
  }
  return Bump(0.5 * width, width)(std::abs(x - mean)) / (1.5 * width);
}

void PhaseSpaceDensity::validate() const {
  if (!(mass > 0.0)) throw ComputeError("phase-space density: mass must be positive");
  auto check = [](const AxisProfile& a, const char* what) {
    if (!(a.width >= 0.0) || !std::isfinite(a.width) || !std::isfinite(a.mean))
      throw ComputeError(std::string("phase-space density: unnormalizable ") + what + " profile");
    if (a.kind == ProfileKind::compact && a.width == 0.0)
      throw ComputeError(std::string("phase-space density: compact ") + what + " profile of zero width");
  };
  for (const auto& a : position) check(a, "position");
  if (packet) {
    packet->validate();
    if (packet->spatial_dim != 3) throw ComputeError("phase-space density: packet must have 3 spatial dimensions");
  } else {
    for (const auto& a : momentum) check(a, "momentum");
  }
}

double PhaseSpaceDensity::position_density(const Vec3& x) const {
  return position[0].density(x[0]) * position[1].density(x[1]) * position[2].density(x[2]);
}

double PhaseSpaceDensity::momentum_density(const Vec3& p) const {
  if (packet) {
    double c = packet->chi(p);
    return c * c / chi_norm(*packet);
  }
  return momentum[0].density(p[0]) * momentum[1].density(p[1]) * momentum[2].density(p[2]);
}

PhaseSpaceDensity gaussian_packet_density(double mass, const Vec3& pbar, double gamma, double tau) {
  PhaseSpaceDensity r;
  r.mass = mass;
  double sx = std::sqrt(gamma * tau);
  double sp = 1.0 / (2.0 * sx);
  for (int a = 0; a < 3; ++a) {
    r.position[a] = {ProfileKind::gaussian, 0.0, sx};
    r.momentum[a] = {ProfileKind::gaussian, pbar[a], sp};
  }
  return r;
}

PhaseSpaceDensity point_density(double mass, const Vec3& x0, const Vec3& p0) {
  PhaseSpaceDensity r;
  r.mass = mass;
  for (int a = 0; a < 3; ++a) {
    r.position[a] = {ProfileKind::gaussian, x0[a], 0.0};
    r.momentum[a] = {ProfileKind::gaussian, p0[a], 0.0};
  }
  return r;
}

std::vector<PhaseSample> sample_density(const PhaseSpaceDensity& rho, int count, std::uint64_t seed) {
  if (count < 0) throw ComputeError("sample_density: count must be nonnegative");
  rho.validate();
  std::mt19937_64 rng(seed);
  std::vector<PhaseSample> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) out.push_back(draw(rho, Tilt{}, rng));
  return out;
}

Vec3 propagate_free(const PhaseSample& s, double t, double m) {
  return {s.x[0] + t * s.p[0] / m, s.x[1] + t * s.p[1] / m, s.x[2] + t * s.p[2] / m};
}

double asymptotic_position_density(const PhaseSpaceDensity& rho, const Vec3& u, double t, double exponent) {
  if (!(t > 0.0)) throw ComputeError("asymptotic_density: t must be positive");
  double m = rho.mass;
  double f = std::abs(oncone_normalizer(m, t, exponent));
  Vec3 mu{m * u[0], m * u[1], m * u[2]};
  return 4.0 * m * m * std::pow(2.0 * kPi, 3) * rho.momentum_density(mu) / (f * f);
}

double asymptotic_density(const PhaseSpaceDensity& rho, const Vec3& u, const Vec3& p, double t, double exponent) {
  return asymptotic_position_density(rho, u, t, exponent) * rho.momentum_density(p);
}

DensityEstimate classical_density(const PhaseSpaceDensity& rho, const Vec3& u, double t, double half_width, int count,
                                  std::uint64_t seed, int batches) {
  if (!(t > 0.0) || !(half_width > 0.0)) throw ComputeError("classical_density: t and half_width must be positive");
  if (batches < 2 || count < batches) throw ComputeError("classical_density: need at least two batches of samples");
  rho.validate();
  double volume = std::pow(2.0 * half_width * t, 3);
  std::vector<double> est;
  int per = count / batches;
  for (int b = 0; b < batches; ++b) {
    std::mt19937_64 rng(sub_seed(seed, b));
    long hits = 0;
    for (int i = 0; i < per; ++i) {
      auto s = draw(rho, Tilt{}, rng);
      auto x = propagate_free(s, t, rho.mass);
      bool in = true;
      for (int a = 0; a < 3; ++a) in = in && std::abs(x[a] / t - u[a]) <= half_width;
      hits += in;
    }
    est.push_back(static_cast<double>(hits) / per);
  }
  DensityEstimate d;
  d.batches = batches;
  d.probability = mean_of(est);
  d.density = d.probability / volume;
  d.statistical_error = stderr_of(est) / volume;
  return d;
}

double overlap_radius(const std::vector<OverlapPacket>& packets, const std::vector<PhaseSample>& samples, double tau,
                      int iters) {
  std::vector<Line> lines;
  for (size_t i = 0; i < packets.size(); ++i) lines.push_back(make_line(packets[i], samples[i], tau));
  if (lines.size() == 2) return pair_radius(lines[0], lines[1]);
  return multi_radius(lines, iters);
}

OverlapEstimate overlap_probability(const std::vector<OverlapPacket>& packets, double tau, double growth_c, int count,
                                    std::uint64_t seed, const OverlapOptions& o) {
  if (packets.size() < 2) throw ComputeError("overlap_probability: needs at least two packets");
  if (!(tau > 0.0) || !(growth_c > 0.0)) throw ComputeError("overlap_probability: tau and growth_c must be positive");
  if (o.batches < 16) throw ComputeError("overlap_probability: at least 16 batches are required");
  if (count < o.batches) throw ComputeError("overlap_probability: count smaller than the number of batches");
  for (const auto& pk : packets) pk.density.validate();

  OverlapEstimate est;
  est.tau = tau;
  est.region_radius = growth_c * std::sqrt(tau);
  std::vector<Tilt> tilts(packets.size());
  if (o.importance) tilts = choose_tilts(packets, tau);
  for (const auto& t : tilts)
    for (int a = 0; a < 3; ++a) est.weighted = est.weighted || t.dx[a] != 0.0 || t.dp[a] != 0.0;

  int per = count / o.batches;
  std::vector<double> vals;
  std::vector<PhaseSample> s(packets.size());
  for (int b = 0; b < o.batches; ++b) {
    std::mt19937_64 rng(sub_seed(seed, b));
    double sum = 0.0;
    for (int k = 0; k < per; ++k) {
      double lw = 0.0;
      for (size_t i = 0; i < packets.size(); ++i) {
        s[i] = draw(packets[i].density, tilts[i], rng);
        lw += log_weight(packets[i].density, tilts[i], s[i]);
      }
      if (overlap_radius(packets, s, tau, o.descent_iters) <= est.region_radius) {
        sum += std::exp(lw);
        ++est.accepted;
      }
    }
    vals.push_back(sum / per);
  }
  if (est.accepted == 0) {
    est.upper_bound = true;
    est.probability = 3.0 / (static_cast<double>(per) * o.batches);
    return est;
  }
  est.probability = mean_of(vals);
  est.statistical_error = stderr_of(vals);
  return est;
}

ComparisonReport correspondence_compare(const FalloffFit& classical, const FalloffFit& quantum,
                                        const ComparisonOptions& o) {
  if (classical.tau_max < quantum.tau_min || quantum.tau_max < classical.tau_min)
    throw ComputeError("correspondence_compare: the fits cover disjoint tau ranges");
  ComparisonReport r;
  r.classical_kind = classical.kind;
  r.quantum_kind = quantum.kind;
  r.kinds_match = classical.kind == quantum.kind;
  r.classical_value = classical.exponent_or_rate;
  r.quantum_doubled = 2.0 * quantum.exponent_or_rate;
  r.difference = r.classical_value - r.quantum_doubled;
  r.relative_difference = r.quantum_doubled != 0.0 ? std::abs(r.difference) / std::abs(r.quantum_doubled) : 0.0;
  if (r.kinds_match) {
    if (classical.kind == FalloffKind::power)
      r.corresponds = std::abs(r.difference) <= o.power_tol;
    else
      r.corresponds = r.relative_difference <= o.rate_tol;
  }
  return r;
}

}  // namespace corrlab
