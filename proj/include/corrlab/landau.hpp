#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "corrlab/diagram.hpp"

namespace corrlab {

struct SolverOptions {
  int max_iters = 200;
  int starts = 16;
  double tol_feas = 1e-8;
  double alpha_min = 1e-10;
  std::uint64_t seed = 1;
  // Parametrize alpha = -s^2 instead of +s^2: lines forced backward in time.
  bool time_reversed = false;
};

/// Space-time embedding of a diagram. Alphas are normalized to sum to one.
struct Realization {
  std::map<VertexId, FourVector> vertex_positions;
  LineMomenta internal_momenta;
  std::vector<double> alphas;
};

enum class Feasibility { feasible, infeasible, inconclusive };

std::string_view to_string(Feasibility f);

struct FeasibilityResult {
  Feasibility status = Feasibility::inconclusive;
  double residual = 0.0;
  std::optional<Realization> realization;
  int iterations = 0;
  // Some alpha below alpha_min: a contracted line.
  bool degenerate = false;

  bool feasible() const { return status == Feasibility::feasible; }
};

FeasibilityResult solve_landau(const Diagram& d, const KConfiguration& k, const SolverOptions& opts = {});

/// Vertex positions from a spanning-tree walk starting at the first vertex,
/// which sits at the origin. Throws ComputeError for negative alphas
/// ("backward in time") or an open cycle.
std::map<VertexId, FourVector> realize_spacetime(const Diagram& d, const LineMomenta& q,
                                                 const std::vector<double>& alphas, double tol_real = 1e-8);

/// Joint point of external momenta, internal momenta and alphas.
struct SurfaceState {
  KConfiguration k;
  LineMomenta q;
  std::vector<double> alphas;
};

/// Minimum-norm projection of `start` onto the Landau conditions of `d`
/// (external and internal mass shells, conservation, loop closure, sum of
/// alphas = 1). Returns nothing when the projection does not reach `tol`.
std::optional<SurfaceState> project_to_surface(const Diagram& d, const SurfaceState& start, double tol = 1e-12);

struct SurfaceSample {
  std::vector<KConfiguration> points;
  std::vector<SurfaceState> states;
  // Budget exhausted before `count` points were found.
  bool budget_exhausted = false;
};

SurfaceSample sample_surface(const Diagram& d, int count, std::uint64_t seed, const SolverOptions& opts = {});

enum class PointKind { trivial, singular, unknown };

std::string_view to_string(PointKind k);

struct Classification {
  PointKind kind = PointKind::trivial;
  std::vector<int> feasible;      // catalog indices
  std::vector<int> inconclusive;  // catalog indices
};

Classification classify_point(const std::vector<Diagram>& catalog, const KConfiguration& k,
                              const SolverOptions& opts = {});

/// Deterministic sub-seed for task `index` under `root`.
std::uint64_t sub_seed(std::uint64_t root, std::uint64_t index);

}  // namespace corrlab
