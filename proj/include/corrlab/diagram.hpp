#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "corrlab/four_vector.hpp"

namespace corrlab {

using VertexId = int;

/// Default tolerances in natural units: |k^2 - m^2| and |sum k|.
inline constexpr double kTolShell = 1e-9;
inline constexpr double kTolCons = 1e-9;

struct ParticleSpec {
  double mass = 1.0;
  std::string label;

  friend bool operator==(const ParticleSpec&, const ParticleSpec&) = default;
};

enum class Orientation { initial, final };

std::string_view to_string(Orientation o);

/// Internal line; `from -> to` is the direction of positive-energy flow.
struct InternalLine {
  VertexId from = 0;
  VertexId to = 0;
  ParticleSpec particle;

  friend bool operator==(const InternalLine&, const InternalLine&) = default;
};

struct ExternalLine {
  VertexId vertex = 0;
  ParticleSpec particle;
  Orientation orientation = Orientation::initial;

  friend bool operator==(const ExternalLine&, const ExternalLine&) = default;
};

/// Topological scattering diagram. Counts are derived from the lists.
struct Diagram {
  std::vector<VertexId> vertices;
  std::vector<InternalLine> internal_lines;
  std::vector<ExternalLine> external_lines;
  /// Permits vertices of degree < 2 (source/sink test fixtures).
  bool allow_low_degree = false;

  int num_lines() const { return static_cast<int>(internal_lines.size()); }
  int num_vertices() const { return static_cast<int>(vertices.size()); }
  int num_external() const { return static_cast<int>(external_lines.size()); }

  /// Position of `v` in `vertices`, or -1.
  int vertex_index(VertexId v) const;

  friend bool operator==(const Diagram&, const Diagram&) = default;
};

struct ValidationReport {
  std::vector<std::string> violations;
  int num_lines = 0;
  int num_vertices = 0;
  int num_external = 0;
  /// First Betti number; only meaningful when the graph is connected.
  int loops = 0;

  bool valid() const { return violations.empty(); }
};

ValidationReport validate_diagram(const Diagram& d);

/// Number of independent internal cycles, N_l - N_v + 1.
/// Throws ComputeError for a disconnected diagram.
int loop_count(const Diagram& d);

/// External mathematical momenta k_i (k = p initial, k = -p final),
/// ordered as the diagram's external lines.
struct KConfiguration {
  std::vector<FourVector> momenta;

  friend bool operator==(const KConfiguration&, const KConfiguration&) = default;
};

/// Violated KConfiguration invariants relative to `d` (empty when valid).
std::vector<std::string> validate_k(const Diagram& d, const KConfiguration& k,
                                    double tol_shell = kTolShell, double tol_cons = kTolCons);

/// Internal momentum assignment, indexed like `Diagram::internal_lines`.
using LineMomenta = std::vector<FourVector>;

/// Per-vertex sum of incoming minus outgoing momentum. External lines
/// contribute k_i; internal lines contribute +q at `to` and -q at `from`.
std::map<VertexId, FourVector> conservation_residual(const Diagram& d, const KConfiguration& k,
                                                     const LineMomenta& q);

/// Spanning forest bookkeeping shared by the solver and the realizer.
struct CycleBasis {
  /// Per independent cycle: (line index, +1 forward / -1 backward).
  std::vector<std::vector<std::pair<int, int>>> cycles;
  /// Lines that belong to the BFS spanning tree.
  std::vector<bool> in_tree;
};

CycleBasis cycle_basis(const Diagram& d);

std::string save_diagram(const Diagram& d);
Diagram load_diagram(std::string_view json_text);

std::string save_k(const KConfiguration& k);
KConfiguration load_k(std::string_view json_text);

/// Reference diagrams used throughout the tests and the CLI examples.
namespace fixtures {

/// One vertex, two initial and two final lines.
Diagram single_vertex_2to2(double mass = 1.0);

/// Two initial lines (a, b) fuse into an internal line of mass
/// `internal_mass`; it meets a third initial line (c) at the second vertex,
/// which emits two finals (d, e). External order: a, b, c, d, e.
Diagram pole(double internal_mass = 2.5);

/// Three vertices joined by three internal lines, two external lines each.
Diagram triangle();

/// Two vertices joined by two internal lines (two-particle threshold).
Diagram threshold();

}  // namespace fixtures

}  // namespace corrlab
