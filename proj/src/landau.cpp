#include "corrlab/landau.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "corrlab/errors.hpp"
#include "corrlab/least_squares.hpp"

namespace corrlab {

std::string_view to_string(Feasibility f) {
  switch (f) {
    case Feasibility::feasible: return "feasible";
    case Feasibility::infeasible: return "infeasible";
    case Feasibility::inconclusive: return "inconclusive";
  }
  return "?";
}

std::string_view to_string(PointKind k) {
  switch (k) {
    case PointKind::trivial: return "Trivial";
    case PointKind::singular: return "Singular";
    case PointKind::unknown: return "Unknown";
  }
  return "?";
}

std::uint64_t sub_seed(std::uint64_t root, std::uint64_t index) {
  // splitmix64 finalizer
  std::uint64_t z = root + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace {

FourVector get4(const Eigen::VectorXd& x, Eigen::Index at) { return {x[at], x[at + 1], x[at + 2], x[at + 3]}; }

void put4(Eigen::VectorXd& x, Eigen::Index at, const FourVector& v) {
  for (int mu = 0; mu < 4; ++mu) x[at + mu] = v[mu];
}

// Residual blocks shared by the solver (k fixed) and the surface projector
// (k free). `alpha_sign` is +1, or -1 for the time-reversed request.
struct LandauSystem {
  const Diagram& d;
  CycleBasis basis;
  double alpha_sign = 1.0;

  explicit LandauSystem(const Diagram& dia, double sign = 1.0) : d(dia), basis(cycle_basis(dia)), alpha_sign(sign) {}

  int lines() const { return d.num_lines(); }

  // Appends internal-line and closure residuals; conservation needs k.
  void append(const KConfiguration& k, const LineMomenta& q, const std::vector<double>& s,
              std::vector<double>& r) const {
    for (int l = 0; l < lines(); ++l) {
      const double m = d.internal_lines[l].particle.mass;
      r.push_back(lorentz_square(q[l]) - m * m);
      r.push_back(std::max(0.0, -q[l].t));
    }
    for (const auto& [v, res] : conservation_residual(d, k, q)) {
      for (int mu = 0; mu < 4; ++mu) r.push_back(res[mu]);
    }
    for (const auto& cycle : basis.cycles) {
      FourVector sum;
      for (auto [l, dir] : cycle) sum += (dir * alpha_sign * s[l] * s[l]) * q[l];
      for (int mu = 0; mu < 4; ++mu) r.push_back(sum[mu]);
    }
    if (lines() > 0) {
      double total = 0.0;
      for (double si : s) total += si * si;
      r.push_back(total - 1.0);
    }
  }
};

Eigen::VectorXd to_eigen(const std::vector<double>& r) {
  return Eigen::Map<const Eigen::VectorXd>(r.data(), static_cast<Eigen::Index>(r.size()));
}

double typical_momentum(const KConfiguration& k) {
  double s = 0.0;
  for (const auto& p : k.momenta) s += spatial_norm(p);
  return k.momenta.empty() ? 1.0 : std::max(0.5, s / static_cast<double>(k.momenta.size()));
}

}  // namespace

std::map<VertexId, FourVector> realize_spacetime(const Diagram& d, const LineMomenta& q,
                                                 const std::vector<double>& alphas, double tol_real) {
  if (q.size() != d.internal_lines.size() || alphas.size() != d.internal_lines.size()) {
    throw ComputeError("realize_spacetime: one momentum and one alpha per internal line required");
  }
  for (double a : alphas) {
    if (a < 0.0) throw ComputeError("backward in time");
  }
  std::map<VertexId, FourVector> pos;
  if (d.vertices.empty()) return pos;
  pos[d.vertices.front()] = FourVector{};
  // Grow the placed set along lines until nothing changes; this walks a
  // spanning tree in breadth order.
  bool grew = true;
  while (grew) {
    grew = false;
    for (std::size_t l = 0; l < d.internal_lines.size(); ++l) {
      const auto& line = d.internal_lines[l];
      const bool has_from = pos.count(line.from) > 0;
      const bool has_to = pos.count(line.to) > 0;
      if (has_from && !has_to) {
        pos[line.to] = pos[line.from] + alphas[l] * q[l];
        grew = true;
      } else if (has_to && !has_from) {
        pos[line.from] = pos[line.to] - alphas[l] * q[l];
        grew = true;
      }
    }
  }
  if (pos.size() != d.vertices.size()) throw ComputeError("realize_spacetime: disconnected diagram");
  for (std::size_t l = 0; l < d.internal_lines.size(); ++l) {
    const auto& line = d.internal_lines[l];
    const FourVector gap = pos[line.to] - pos[line.from] - alphas[l] * q[l];
    const double scale = 1.0 + euclidean_norm(alphas[l] * q[l]);
    if (euclidean_norm(gap) > tol_real * scale) {
      throw ComputeError("realize_spacetime: cycle through line " + std::to_string(l) + " does not close");
    }
  }
  return pos;
}

FeasibilityResult solve_landau(const Diagram& d, const KConfiguration& k, const SolverOptions& opts) {
  if (const auto bad = validate_k(d, k); !bad.empty()) throw ComputeError("invalid K: " + bad.front());

  FeasibilityResult out;
  const int L = d.num_lines();
  if (L == 0) {
    // Nothing beyond K's own constraints, already checked.
    out.status = Feasibility::feasible;
    Realization r;
    r.vertex_positions = realize_spacetime(d, {}, {});
    out.realization = std::move(r);
    return out;
  }

  const double sign = opts.time_reversed ? -1.0 : 1.0;
  const LandauSystem sys(d, sign);
  const ResidualFn f = [&](const Eigen::VectorXd& x) {
    LineMomenta q(L);
    std::vector<double> s(L);
    for (int l = 0; l < L; ++l) {
      q[l] = get4(x, 4 * l);
      s[l] = x[4 * L + l];
    }
    std::vector<double> r;
    sys.append(k, q, s, r);
    return to_eigen(r);
  };

  LeastSquaresOptions lso;
  lso.max_iters = opts.max_iters;
  lso.tol_residual = std::min(1e-13, opts.tol_feas * 1e-3);

  const double sigma = typical_momentum(k);
  double best = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_x;
  bool any_settled = false;
  int total_iters = 0;
  for (int start = 0; start < std::max(1, opts.starts); ++start) {
    std::mt19937_64 rng(sub_seed(opts.seed, static_cast<std::uint64_t>(start)));
    std::normal_distribution<double> normal(0.0, sigma);
    std::uniform_real_distribution<double> unif(0.3, 1.0);
    Eigen::VectorXd x(5 * L);
    for (int l = 0; l < L; ++l) {
      const double m = d.internal_lines[l].particle.mass;
      const double px = normal(rng), py = normal(rng), pz = normal(rng);
      put4(x, 4 * l, on_shell(m, px, py, pz));
      x[4 * L + l] = unif(rng);
    }
    const auto res = levenberg_marquardt(f, x, lso);
    total_iters += res.iterations;
    any_settled = any_settled || res.converged;
    if (res.residual_norm < best) {
      best = res.residual_norm;
      best_x = res.x;
    }
    if (best <= opts.tol_feas) break;
  }

  out.iterations = total_iters;
  out.residual = best;
  LineMomenta q(L);
  std::vector<double> alphas(L);
  for (int l = 0; l < L; ++l) {
    q[l] = get4(best_x, 4 * l);
    alphas[l] = sign * best_x[4 * L + l] * best_x[4 * L + l];
  }
  if (best > opts.tol_feas) {
    out.status = any_settled ? Feasibility::infeasible : Feasibility::inconclusive;
    return out;
  }
  if (*std::min_element(alphas.begin(), alphas.end()) < 0.0) {
    // Kinematically consistent, but only with lines running backward in time.
    out.status = Feasibility::infeasible;
    return out;
  }
  out.status = Feasibility::feasible;
  out.degenerate = *std::min_element(alphas.begin(), alphas.end()) < opts.alpha_min;
  Realization r;
  r.vertex_positions = realize_spacetime(d, q, alphas, std::max(1e-8, 10.0 * opts.tol_feas));
  r.internal_momenta = std::move(q);
  r.alphas = std::move(alphas);
  out.realization = std::move(r);
  return out;
}

std::optional<SurfaceState> project_to_surface(const Diagram& d, const SurfaceState& start, double tol) {
  const int n = d.num_external();
  const int L = d.num_lines();
  const LandauSystem sys(d);
  const auto unpack = [&](const Eigen::VectorXd& x) {
    SurfaceState s;
    s.k.momenta.resize(n);
    s.q.resize(L);
    s.alphas.resize(L);
    for (int i = 0; i < n; ++i) s.k.momenta[i] = get4(x, 4 * i);
    for (int l = 0; l < L; ++l) {
      s.q[l] = get4(x, 4 * n + 4 * l);
      s.alphas[l] = x[4 * n + 4 * L + l];  // holds sqrt(alpha) until the end
    }
    return s;
  };
  const ResidualFn f = [&](const Eigen::VectorXd& x) {
    const SurfaceState s = unpack(x);
    std::vector<double> r;
    for (int i = 0; i < n; ++i) {
      const auto& ext = d.external_lines[i];
      const double m = ext.particle.mass;
      r.push_back(lorentz_square(s.k.momenta[i]) - m * m);
      const double e = s.k.momenta[i].t;
      r.push_back(ext.orientation == Orientation::initial ? std::max(0.0, -e) : std::max(0.0, e));
    }
    sys.append(s.k, s.q, s.alphas, r);
    return to_eigen(r);
  };

  Eigen::VectorXd x(4 * n + 5 * L);
  for (int i = 0; i < n; ++i) put4(x, 4 * i, start.k.momenta[i]);
  for (int l = 0; l < L; ++l) {
    put4(x, 4 * n + 4 * l, start.q[l]);
    x[4 * n + 4 * L + l] = std::sqrt(std::max(0.0, start.alphas[l]));
  }
  LeastSquaresOptions lso;
  lso.max_iters = 100;
  lso.tol_residual = tol;
  const auto res = project_min_norm(f, x, lso);
  if (!(res.residual_norm <= tol)) return std::nullopt;
  SurfaceState s = unpack(res.x);
  for (double& a : s.alphas) a = a * a;
  return s;
}

SurfaceSample sample_surface(const Diagram& d, int count, std::uint64_t seed, const SolverOptions& opts) {
  SurfaceSample out;
  if (count <= 0) return out;
  const int budget = std::max(100, 50 * count);
  const int n = d.num_external();
  const int L = d.num_lines();
  for (int attempt = 0; attempt < budget && static_cast<int>(out.points.size()) < count; ++attempt) {
    std::mt19937_64 rng(sub_seed(seed, static_cast<std::uint64_t>(attempt)));
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.2, 1.0);
    SurfaceState start;
    for (int i = 0; i < n; ++i) {
      const auto& ext = d.external_lines[i];
      const double px = normal(rng), py = normal(rng), pz = normal(rng);
      const FourVector p = on_shell(ext.particle.mass, px, py, pz);
      start.k.momenta.push_back(ext.orientation == Orientation::initial ? p : -p);
    }
    double total = 0.0;
    for (int l = 0; l < L; ++l) {
      const double px = normal(rng), py = normal(rng), pz = normal(rng);
      start.q.push_back(on_shell(d.internal_lines[l].particle.mass, px, py, pz));
      start.alphas.push_back(unif(rng));
      total += start.alphas.back();
    }
    for (double& a : start.alphas) a /= total;

    auto state = project_to_surface(d, start);
    if (!state) continue;
    if (L > 0 && *std::min_element(state->alphas.begin(), state->alphas.end()) < 1e-3) continue;
    if (!validate_k(d, state->k).empty()) continue;
    SolverOptions check = opts;
    check.seed = sub_seed(seed, 1'000'000 + static_cast<std::uint64_t>(attempt));
    if (!solve_landau(d, state->k, check).feasible()) continue;
    out.points.push_back(state->k);
    out.states.push_back(std::move(*state));
  }
  out.budget_exhausted = static_cast<int>(out.points.size()) < count;
  return out;
}

Classification classify_point(const std::vector<Diagram>& catalog, const KConfiguration& k, const SolverOptions& opts) {
  Classification c;
  for (std::size_t i = 0; i < catalog.size(); ++i) {
    const auto r = solve_landau(catalog[i], k, opts);
    if (r.feasible()) c.feasible.push_back(static_cast<int>(i));
    if (r.status == Feasibility::inconclusive) c.inconclusive.push_back(static_cast<int>(i));
  }
  if (!c.feasible.empty()) {
    c.kind = PointKind::singular;
  } else if (!c.inconclusive.empty()) {
    c.kind = PointKind::unknown;
  }
  return c;
}

}  // namespace corrlab
