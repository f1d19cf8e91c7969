#include "corrlab/displacement.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <random>

namespace corrlab {

Eigen::VectorXd DisplacementVector::flat() const {
  Eigen::VectorXd v(4 * static_cast<Eigen::Index>(components.size()));
  for (std::size_t i = 0; i < components.size(); ++i) {
    for (int mu = 0; mu < 4; ++mu) v[4 * i + mu] = components[i][mu];
  }
  return v;
}

DisplacementVector DisplacementVector::from_flat(const Eigen::VectorXd& v) {
  DisplacementVector u;
  for (Eigen::Index i = 0; i + 3 < v.size(); i += 4) u.components.emplace_back(v[i], v[i + 1], v[i + 2], v[i + 3]);
  return u;
}

DisplacementVector compute_U(const Realization& r, const Diagram& d, const KConfiguration& k) {
  if (k.momenta.size() != d.external_lines.size()) throw ComputeError("compute_U: K does not match the diagram");
  DisplacementVector u;
  for (const auto& ext : d.external_lines) {
    auto it = r.vertex_positions.find(ext.vertex);
    if (it == r.vertex_positions.end()) throw ComputeError("compute_U: realization misses a vertex");
    u.components.push_back(it->second);
  }
  return u;
}

GaugeBasis gauge_basis(const KConfiguration& k) {
  const std::size_t n = k.momenta.size();
  GaugeBasis b;
  for (int mu = 0; mu < 4; ++mu) {
    FourVector a;
    a[mu] = 1.0;
    b.generators.push_back({std::vector<FourVector>(n, a)});
  }
  for (std::size_t i = 0; i < n; ++i) {
    DisplacementVector g{std::vector<FourVector>(n)};
    g.components[i] = k.momenta[i];
    b.generators.push_back(std::move(g));
  }
  return b;
}

namespace {

std::string fingerprint(const Eigen::MatrixXd& G) {
  // FNV-1a over the raw bytes of the generator matrix.
  std::uint64_t h = 1469598103934665603ULL;
  for (Eigen::Index j = 0; j < G.cols(); ++j) {
    for (Eigen::Index i = 0; i < G.rows(); ++i) {
      const double x = G(i, j);
      unsigned char bytes[sizeof(double)];
      std::memcpy(bytes, &x, sizeof(double));
      for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
      }
    }
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace

ReducedU reduce_mod_gauge(const DisplacementVector& u, const GaugeBasis& basis) {
  const Eigen::VectorXd x = u.flat();
  const Eigen::Index dim = x.size();
  const Eigen::Index m = static_cast<Eigen::Index>(basis.generators.size());
  Eigen::MatrixXd G(dim, m);
  for (Eigen::Index j = 0; j < m; ++j) {
    const Eigen::VectorXd g = basis.generators[j].flat();
    if (g.size() != dim) throw ComputeError("reduce_mod_gauge: basis does not match U");
    G.col(j) = g;
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(G);
  qr.setThreshold(1e-10);
  const int rank = static_cast<int>(qr.rank());
  if (rank < m) {
    throw ComputeError("reduce_mod_gauge: degenerate K, gauge generators have rank " + std::to_string(rank) +
                       " < " + std::to_string(m));
  }
  const Eigen::MatrixXd Q = qr.householderQ();
  const Eigen::MatrixXd span = Q.leftCols(m);
  const Eigen::MatrixXd perp = Q.rightCols(dim - m);

  ReducedU r;
  r.projected = x - span * (span.transpose() * x);
  const Eigen::VectorXd c = perp.transpose() * x;
  r.coords.assign(c.data(), c.data() + c.size());
  r.gauge_rank = rank;
  r.basis_fingerprint = fingerprint(G);
  return r;
}

double lorentz_pairing(const Eigen::VectorXd& u, const Eigen::VectorXd& t) {
  double s = 0.0;
  for (Eigen::Index i = 0; i + 3 < u.size(); i += 4) {
    s += u[i] * t[i] - u[i + 1] * t[i + 1] - u[i + 2] * t[i + 2] - u[i + 3] * t[i + 3];
  }
  return s;
}

double normality_check(const Eigen::VectorXd& u, const std::vector<Eigen::VectorXd>& tangents) {
  if (tangents.empty()) throw ComputeError("normality_check: no tangents");
  const double nu = u.norm();
  double worst = 0.0;
  for (const auto& t : tangents) {
    if (t.size() != u.size()) throw ComputeError("normality_check: tangent dimension mismatch");
    const double denom = nu * t.norm();
    if (denom == 0.0) continue;
    worst = std::max(worst, std::abs(lorentz_pairing(u, t)) / denom);
  }
  return worst;
}

std::vector<Eigen::VectorXd> surface_tangents(const Diagram& d, const SurfaceState& state, int count,
                                              std::uint64_t seed, double h) {
  std::vector<Eigen::VectorXd> out;
  const std::size_t n = state.k.momenta.size();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int attempt = 0; attempt < 4 * count && static_cast<int>(out.size()) < count; ++attempt) {
    std::vector<FourVector> delta(n);
    for (auto& v : delta) v = {normal(rng), normal(rng), normal(rng), normal(rng)};
    SurfaceState plus = state, minus = state;
    for (std::size_t i = 0; i < n; ++i) {
      plus.k.momenta[i] += h * delta[i];
      minus.k.momenta[i] -= h * delta[i];
    }
    const auto p = project_to_surface(d, plus, 1e-13);
    const auto m = project_to_surface(d, minus, 1e-13);
    if (!p || !m) continue;
    Eigen::VectorXd t(4 * static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
      const FourVector diff = p->k.momenta[i] - m->k.momenta[i];
      for (int mu = 0; mu < 4; ++mu) t[4 * i + mu] = diff[mu] / (2.0 * h);
    }
    out.push_back(std::move(t));
  }
  return out;
}

Diagram contracted(const Diagram& d) {
  Diagram c;
  c.vertices = {0};
  for (const auto& ext : d.external_lines) c.external_lines.push_back({0, ext.particle, ext.orientation});
  return c;
}

namespace {

ConeRay ray_for(const Diagram& d, const KConfiguration& k, const FeasibilityResult& r, const SolverOptions& opts) {
  if (r.degenerate) throw NoRayError("cone_ray: only a contracted realization exists");
  const auto red = reduce_mod_gauge(compute_U(*r.realization, d, k), gauge_basis(k));
  double norm = 0.0;
  for (double c : red.coords) norm += c * c;
  norm = std::sqrt(norm);
  if (norm == 0.0) throw NoRayError("cone_ray: reduced displacement vanishes");
  ConeRay ray;
  for (double c : red.coords) ray.direction.push_back(c / norm);
  ray.projected = red.projected / red.projected.norm();
  ray.basis_fingerprint = red.basis_fingerprint;
  SolverOptions rev = opts;
  rev.time_reversed = true;
  ray.opposite_infeasible = !solve_landau(d, k, rev).feasible();
  return ray;
}

}  // namespace

ConeRay cone_ray(const std::vector<Diagram>& catalog, const KConfiguration& k, const SolverOptions& opts) {
  std::optional<ConeRay> found;
  for (std::size_t i = 0; i < catalog.size(); ++i) {
    const auto r = solve_landau(catalog[i], k, opts);
    if (!r.feasible()) continue;
    if (catalog[i].num_lines() == 0) continue;  // single-vertex diagrams are the trivial ones
    ConeRay ray = ray_for(catalog[i], k, r, opts);
    ray.diagram = static_cast<int>(i);
    if (found) {
      double dot = 0.0;
      for (std::size_t j = 0; j < ray.direction.size(); ++j) dot += ray.direction[j] * found->direction[j];
      if (dot < 1.0 - 1e-6) throw UnsupportedError("cone_ray: K lies on several distinct surfaces");
      continue;
    }
    found = std::move(ray);
  }
  if (!found) throw NoRayError("cone_ray: K is a trivial point for this catalog");
  return *found;
}

}  // namespace corrlab
