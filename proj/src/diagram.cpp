#include "corrlab/diagram.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>
#include <sstream>

#include <json.hpp>

#include "corrlab/errors.hpp"

namespace corrlab {

using nlohmann::json;

std::string_view to_string(Orientation o) { return o == Orientation::initial ? "initial" : "final"; }

int Diagram::vertex_index(VertexId v) const {
  auto it = std::find(vertices.begin(), vertices.end(), v);
  return it == vertices.end() ? -1 : static_cast<int>(it - vertices.begin());
}

namespace {

// Adjacency over internal lines: per vertex index, (neighbour index, line index).
std::vector<std::vector<std::pair<int, int>>> adjacency(const Diagram& d) {
  std::vector<std::vector<std::pair<int, int>>> adj(d.vertices.size());
  for (int l = 0; l < d.num_lines(); ++l) {
    const int a = d.vertex_index(d.internal_lines[l].from);
    const int b = d.vertex_index(d.internal_lines[l].to);
    if (a < 0 || b < 0) continue;
    adj[a].emplace_back(b, l);
    adj[b].emplace_back(a, l);
  }
  return adj;
}

bool is_connected(const Diagram& d) {
  if (d.vertices.empty()) return false;
  const auto adj = adjacency(d);
  std::vector<bool> seen(d.vertices.size(), false);
  std::queue<int> todo;
  todo.push(0);
  seen[0] = true;
  while (!todo.empty()) {
    const int v = todo.front();
    todo.pop();
    for (auto [w, l] : adj[v]) {
      if (!seen[w]) {
        seen[w] = true;
        todo.push(w);
      }
    }
  }
  return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
}

}  // namespace

ValidationReport validate_diagram(const Diagram& d) {
  ValidationReport r;
  r.num_lines = d.num_lines();
  r.num_vertices = d.num_vertices();
  r.num_external = d.num_external();

  if (d.vertices.empty()) r.violations.emplace_back("no vertices");
  std::set<VertexId> ids(d.vertices.begin(), d.vertices.end());
  if (ids.size() != d.vertices.size()) r.violations.emplace_back("duplicate vertex id");

  std::vector<int> degree(d.vertices.size(), 0);
  for (const auto& line : d.internal_lines) {
    const int a = d.vertex_index(line.from);
    const int b = d.vertex_index(line.to);
    if (a < 0 || b < 0) {
      r.violations.emplace_back("internal line references unknown vertex");
      continue;
    }
    if (a == b) r.violations.emplace_back("self-loop at vertex " + std::to_string(line.from));
    ++degree[a];
    ++degree[b];
    if (!(line.particle.mass > 0.0)) r.violations.emplace_back("non-positive mass");
  }
  for (const auto& ext : d.external_lines) {
    const int a = d.vertex_index(ext.vertex);
    if (a < 0) {
      r.violations.emplace_back("external line references unknown vertex");
      continue;
    }
    ++degree[a];
    if (!(ext.particle.mass > 0.0)) r.violations.emplace_back("non-positive mass");
  }
  if (!d.allow_low_degree) {
    for (std::size_t i = 0; i < degree.size(); ++i) {
      if (degree[i] < 2) r.violations.emplace_back("vertex " + std::to_string(d.vertices[i]) + " has degree < 2");
    }
  }
  const bool connected = !d.vertices.empty() && is_connected(d);
  if (!d.vertices.empty() && !connected) r.violations.emplace_back("disconnected");
  r.loops = connected ? r.num_lines - r.num_vertices + 1 : 0;
  return r;
}

int loop_count(const Diagram& d) {
  if (!is_connected(d)) throw ComputeError("loop_count: disconnected diagram");
  return d.num_lines() - d.num_vertices() + 1;
}

std::vector<std::string> validate_k(const Diagram& d, const KConfiguration& k, double tol_shell,
                                    double tol_cons) {
  std::vector<std::string> out;
  if (k.momenta.size() != d.external_lines.size()) {
    out.emplace_back("momentum count does not match external lines");
    return out;
  }
  FourVector total;
  for (std::size_t i = 0; i < k.momenta.size(); ++i) {
    const auto& ki = k.momenta[i];
    const auto& ext = d.external_lines[i];
    const double m = ext.particle.mass;
    if (std::abs(lorentz_square(ki) - m * m) > tol_shell) {
      out.emplace_back("external " + std::to_string(i) + " off mass shell");
    }
    const bool positive = ki.t > 0.0;
    if ((ext.orientation == Orientation::initial) != positive) {
      out.emplace_back("external " + std::to_string(i) + " has wrong energy sign");
    }
    total += ki;
  }
  for (int mu = 0; mu < 4; ++mu) {
    if (std::abs(total[mu]) > tol_cons) {
      out.emplace_back("momentum not conserved");
      break;
    }
  }
  return out;
}

std::map<VertexId, FourVector> conservation_residual(const Diagram& d, const KConfiguration& k,
                                                     const LineMomenta& q) {
  if (q.size() != d.internal_lines.size()) {
    throw ComputeError("conservation_residual: missing internal momentum assignment");
  }
  if (k.momenta.size() != d.external_lines.size()) {
    throw ComputeError("conservation_residual: momentum count does not match external lines");
  }
  std::map<VertexId, FourVector> res;
  for (VertexId v : d.vertices) res[v] = FourVector{};
  for (std::size_t i = 0; i < d.external_lines.size(); ++i) res[d.external_lines[i].vertex] += k.momenta[i];
  for (std::size_t l = 0; l < d.internal_lines.size(); ++l) {
    res[d.internal_lines[l].to] += q[l];
    res[d.internal_lines[l].from] -= q[l];
  }
  return res;
}

CycleBasis cycle_basis(const Diagram& d) {
  const auto adj = adjacency(d);
  const std::size_t nv = d.vertices.size();
  CycleBasis basis;
  basis.in_tree.assign(d.internal_lines.size(), false);
  if (nv == 0) return basis;

  // BFS tree: parent vertex and the line used to reach each vertex.
  std::vector<int> parent(nv, -1), parent_line(nv, -1), depth(nv, -1);
  for (std::size_t root = 0; root < nv; ++root) {
    if (depth[root] >= 0) continue;
    depth[root] = 0;
    std::queue<int> todo;
    todo.push(static_cast<int>(root));
    while (!todo.empty()) {
      const int v = todo.front();
      todo.pop();
      for (auto [w, l] : adj[v]) {
        if (depth[w] < 0) {
          depth[w] = depth[v] + 1;
          parent[w] = v;
          parent_line[w] = l;
          basis.in_tree[l] = true;
          todo.push(w);
        }
      }
    }
  }

  // Signed path from a vertex up to the root: +1 when the line is
  // traversed along its from->to direction.
  auto step_sign = [&](int child) {
    const auto& line = d.internal_lines[parent_line[child]];
    return d.vertex_index(line.to) == child ? +1 : -1;  // parent -> child along the line
  };

  for (int l = 0; l < d.num_lines(); ++l) {
    if (basis.in_tree[l]) continue;
    const int a = d.vertex_index(d.internal_lines[l].from);
    const int b = d.vertex_index(d.internal_lines[l].to);
    // Cycle: a -> b along line l, then b back to a through the tree.
    std::vector<std::pair<int, int>> cycle{{l, +1}};
    std::vector<std::pair<int, int>> up_from_b, up_from_a;
    int x = b, y = a;
    while (depth[x] > depth[y]) { up_from_b.emplace_back(parent_line[x], -step_sign(x)); x = parent[x]; }
    while (depth[y] > depth[x]) { up_from_a.emplace_back(parent_line[y], step_sign(y)); y = parent[y]; }
    while (x != y) {
      up_from_b.emplace_back(parent_line[x], -step_sign(x));
      x = parent[x];
      up_from_a.emplace_back(parent_line[y], step_sign(y));
      y = parent[y];
    }
    cycle.insert(cycle.end(), up_from_b.begin(), up_from_b.end());
    cycle.insert(cycle.end(), up_from_a.rbegin(), up_from_a.rend());
    basis.cycles.push_back(std::move(cycle));
  }
  return basis;
}

// ---------------------------------------------------------------- JSON I/O

namespace {

void reject_unknown(const json& obj, std::initializer_list<std::string_view> allowed, std::string_view where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end()) {
      throw ParseError("unknown field \"" + it.key() + "\" in " + std::string(where));
    }
  }
}

ParticleSpec parse_particle(const json& obj) {
  if (!obj.contains("mass")) throw ParseError("missing mass");
  if (!obj["mass"].is_number()) throw ParseError("mass must be a number");
  ParticleSpec p;
  p.mass = obj["mass"].get<double>();
  if (!(p.mass > 0.0)) throw ParseError("non-positive mass");
  if (obj.contains("label")) p.label = obj["label"].get<std::string>();
  return p;
}

int parse_id(const json& v) {
  if (!v.is_number_integer()) throw ParseError("vertex ids must be integers");
  return v.get<int>();
}

}  // namespace

std::string save_diagram(const Diagram& d) {
  json doc;
  doc["vertices"] = d.vertices;
  json internal = json::array();
  for (const auto& l : d.internal_lines) {
    internal.push_back({{"from", l.from}, {"to", l.to}, {"mass", l.particle.mass}, {"label", l.particle.label}});
  }
  json external = json::array();
  for (const auto& e : d.external_lines) {
    external.push_back({{"vertex", e.vertex},
                        {"mass", e.particle.mass},
                        {"label", e.particle.label},
                        {"orientation", std::string(to_string(e.orientation))}});
  }
  doc["internal"] = std::move(internal);
  doc["external"] = std::move(external);
  if (d.allow_low_degree) doc["allow_low_degree"] = true;
  return doc.dump(2);
}

Diagram load_diagram(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("diagram: invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("diagram: top level must be an object");
  reject_unknown(doc, {"vertices", "internal", "external", "allow_low_degree"}, "diagram");
  if (!doc.contains("vertices") || !doc["vertices"].is_array()) throw ParseError("diagram: missing vertices");

  Diagram d;
  for (const auto& v : doc["vertices"]) d.vertices.push_back(parse_id(v));
  if (doc.contains("internal")) {
    for (const auto& l : doc["internal"]) {
      reject_unknown(l, {"from", "to", "mass", "label"}, "internal line");
      if (!l.contains("from") || !l.contains("to")) throw ParseError("internal line: missing endpoint");
      d.internal_lines.push_back({parse_id(l["from"]), parse_id(l["to"]), parse_particle(l)});
    }
  }
  if (doc.contains("external")) {
    for (const auto& e : doc["external"]) {
      reject_unknown(e, {"vertex", "mass", "label", "orientation"}, "external line");
      if (!e.contains("vertex")) throw ParseError("external line: missing vertex");
      if (!e.contains("orientation")) throw ParseError("external line: missing orientation");
      const auto o = e["orientation"].get<std::string>();
      if (o != "initial" && o != "final") throw ParseError("external line: bad orientation \"" + o + "\"");
      d.external_lines.push_back(
          {parse_id(e["vertex"]), parse_particle(e), o == "initial" ? Orientation::initial : Orientation::final});
    }
  }
  if (doc.contains("allow_low_degree")) d.allow_low_degree = doc["allow_low_degree"].get<bool>();
  return d;
}

std::string save_k(const KConfiguration& k) {
  json rows = json::array();
  for (const auto& p : k.momenta) rows.push_back({p.t, p.x, p.y, p.z});
  return json{{"momenta", rows}}.dump(2);
}

KConfiguration load_k(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("k-configuration: invalid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("momenta")) throw ParseError("k-configuration: missing momenta");
  reject_unknown(doc, {"momenta"}, "k-configuration");
  KConfiguration k;
  for (const auto& row : doc["momenta"]) {
    if (!row.is_array() || row.size() != 4) throw ParseError("k-configuration: each momentum needs 4 components");
    k.momenta.emplace_back(row[0].get<double>(), row[1].get<double>(), row[2].get<double>(), row[3].get<double>());
  }
  return k;
}

// ---------------------------------------------------------------- fixtures

namespace fixtures {

Diagram single_vertex_2to2(double mass) {
  Diagram d;
  d.vertices = {0};
  d.external_lines = {{0, {mass, "a"}, Orientation::initial},
                      {0, {mass, "b"}, Orientation::initial},
                      {0, {mass, "c"}, Orientation::final},
                      {0, {mass, "d"}, Orientation::final}};
  return d;
}

Diagram pole(double internal_mass) {
  Diagram d;
  d.vertices = {0, 1};
  d.internal_lines = {{0, 1, {internal_mass, "x"}}};
  d.external_lines = {{0, {1.0, "a"}, Orientation::initial},
                      {0, {1.0, "b"}, Orientation::initial},
                      {1, {1.0, "c"}, Orientation::initial},
                      {1, {1.5, "d"}, Orientation::final},
                      {1, {1.5, "e"}, Orientation::final}};
  return d;
}

Diagram triangle() {
  Diagram d;
  d.vertices = {0, 1, 2};
  d.internal_lines = {{0, 1, {1.0, "q1"}}, {1, 2, {1.0, "q2"}}, {0, 2, {1.0, "q3"}}};
  d.external_lines = {{0, {4.0, "a"}, Orientation::initial}, {0, {1.0, "d"}, Orientation::final},
                      {1, {1.0, "b"}, Orientation::initial}, {1, {1.0, "e"}, Orientation::final},
                      {2, {1.0, "c"}, Orientation::initial}, {2, {3.0, "f"}, Orientation::final}};
  return d;
}

Diagram threshold() {
  Diagram d;
  d.vertices = {0, 1};
  d.internal_lines = {{0, 1, {1.0, "q1"}}, {0, 1, {1.0, "q2"}}};
  d.external_lines = {{0, {1.0, "a"}, Orientation::initial},
                      {0, {1.0, "b"}, Orientation::initial},
                      {1, {1.0, "c"}, Orientation::final},
                      {1, {1.0, "d"}, Orientation::final}};
  return d;
}

}  // namespace fixtures

}  // namespace corrlab
