#include "corrlab/report.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "corrlab/classical.hpp"
#include "corrlab/diagram.hpp"
#include "corrlab/displacement.hpp"
#include "corrlab/errors.hpp"
#include "corrlab/falloff.hpp"
#include "corrlab/landau.hpp"
#include "corrlab/singularity.hpp"

namespace corrlab {

using nlohmann::json;

namespace {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string quote_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::vector<std::string>> split_csv(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false, any = false;
  for (size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    any = true;
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      row.push_back(field);
      field.clear();
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      row.push_back(field);
      field.clear();
      rows.push_back(row);
      row.clear();
      any = false;
    } else {
      field += c;
    }
  }
  if (quoted) throw ParseError("csv: unterminated quoted field");
  if (any) {
    row.push_back(field);
    rows.push_back(row);
  }
  return rows;
}

std::string trim(std::string_view s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string_view::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return std::string(s.substr(a, b - a + 1));
}

std::string read_file(const std::string& path, const std::string& role) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read " + role + " file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

KeyValues read_config(const std::string& path, const std::string& role) {
  return parse_key_values(read_file(path, role));
}

json fit_json(const FalloffFit& f) {
  json j;
  j["kind"] = std::string(to_string(f.kind));
  j["exponent_or_rate"] = f.exponent_or_rate;
  j["C"] = f.C;
  j["alpha"] = f.alpha;
  j["prefactor_power"] = f.prefactor_power;
  j["stretched_coefficient"] = f.stretched_coefficient;
  j["raw_rate"] = f.raw_rate;
  j["raw_C"] = f.raw_C;
  j["residual"] = f.residual;
  j["power_residual"] = f.power_residual;
  j["exponential_residual"] = f.exponential_residual;
  j["superpoly_residual"] = f.superpoly_residual;
  j["tau_min"] = f.tau_min;
  j["tau_max"] = f.tau_max;
  j["windows_increasing"] = f.windows_increasing;
  j["underflow"] = f.underflow;
  json w = json::array();
  for (const auto& x : f.windows) w.push_back({{"tau", x.tau}, {"exponent", x.exponent}});
  j["windows"] = w;
  return j;
}

json cplx_json(cplx z) { return json::array({z.real(), z.imag()}); }

json four_json(const FourVector& v) { return json::array({v.t, v.x, v.y, v.z}); }

struct OptionSpec {
  std::set<std::string> required_inputs;
  std::set<std::string> optional_inputs;
  std::map<std::string, std::string> defaults;  // "" = required option
};

OptionSpec option_spec(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::degree:
      return {{}, {}, {{"nl", ""}, {"nv", ""}}};
    case ExperimentKind::analyze:
      return {{"diagram", "k"}, {"catalog"}, {{"tol_feas", "1e-8"}, {"starts", "16"}}};
    case ExperimentKind::scan_surface:
      return {{"diagram"}, {}, {{"count", "10"}, {"tol_feas", "1e-8"}, {"starts", "16"}}};
    case ExperimentKind::falloff:
      return {{"packet"},
              {},
              {{"u", ""}, {"gamma", "packet"}, {"tau_min", "20"}, {"tau_max", "200"}, {"points", "12"},
               {"spacing", "geometric"}, {"refine", "1"}}};
    case ExperimentKind::transform:
      return {{"model"},
              {},
              {{"experiment", ""}, {"q", "0,0.1,0.2"}, {"imag", "0"}, {"gamma0", "0.5"}, {"hole", "1"},
               {"margin", "0.05"}, {"truncation_tol", "1e-10"}}};
    case ExperimentKind::mc_compare:
      return {{"packet"},
              {"diagram"},
              {{"u", ""}, {"tau_grid", ""}, {"count", "20000"}, {"growth_c", "1"}, {"bin", "0.1"}, {"refine", "1"}}};
  }
  return {};
}

std::vector<double> tau_grid(double lo, double hi, long n, const std::string& spacing) {
  if (!(lo > 0.0) || !(hi > lo) || n < 2) throw ParseError("tau grid needs 0 < tau_min < tau_max and points >= 2");
  std::vector<double> t;
  for (long i = 0; i < n; ++i) {
    double s = static_cast<double>(i) / (n - 1);
    if (spacing == "geometric")
      t.push_back(lo * std::pow(hi / lo, s));
    else if (spacing == "linear")
      t.push_back(lo + (hi - lo) * s);
    else
      throw ParseError("spacing must be geometric or linear");
  }
  return t;
}

SolverOptions solver_options(const std::map<std::string, std::string>& o, std::uint64_t seed) {
  SolverOptions so;
  so.tol_feas = parse_double(o.at("tol_feas"), "tol_feas");
  so.starts = static_cast<int>(parse_int(o.at("starts"), "starts"));
  so.seed = seed;
  return so;
}

std::vector<std::string> split_paths(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// ---- experiments ----

json run_degree(const std::map<std::string, std::string>& o, Table& t) {
  int nl = static_cast<int>(parse_int(o.at("nl"), "nl"));
  int nv = static_cast<int>(parse_int(o.at("nv"), "nv"));
  auto deg = degree(nl, nv);
  auto model = local_model(deg);
  json r;
  r["d"] = to_string(deg.d);
  r["d_value"] = boost::rational_cast<double>(deg.d);
  r["num_lines"] = nl;
  r["num_vertices"] = nv;
  r["local_model"] = std::string(to_string(model.kind));
  t.header = {"num_lines", "num_vertices", "d"};
  t.rows.push_back({double(nl), double(nv), boost::rational_cast<double>(deg.d)});
  return r;
}

json run_analyze(const ExperimentSpec& spec, const std::map<std::string, std::string>& o, Table& t) {
  Diagram d = load_diagram(read_file(spec.inputs.at("diagram"), "diagram"));
  KConfiguration k = load_k(read_file(spec.inputs.at("k"), "k"));
  std::vector<Diagram> catalog = {d};
  if (spec.inputs.count("catalog"))
    for (const auto& p : split_paths(spec.inputs.at("catalog"))) catalog.push_back(load_diagram(read_file(p, "catalog")));
  auto viol = validate_k(d, k);
  if (!viol.empty()) {
    std::string msg = "invalid K:";
    for (const auto& v : viol) msg += " " + v + ";";
    throw ComputeError(msg);
  }
  auto so = solver_options(o, spec.seed);
  auto cls = classify_point(catalog, k, so);
  json r;
  r["classification"] = std::string(to_string(cls.kind));
  r["feasible_diagrams"] = cls.feasible;
  r["inconclusive_diagrams"] = cls.inconclusive;
  json per = json::array();
  t.header = {"catalog_index", "status", "residual", "degenerate"};
  for (size_t i = 0; i < catalog.size(); ++i) {
    auto fr = solve_landau(catalog[i], k, so);
    json e;
    e["index"] = i;
    e["status"] = std::string(to_string(fr.status));
    e["residual"] = fr.residual;
    e["degenerate"] = fr.degenerate;
    if (fr.realization) e["alphas"] = fr.realization->alphas;
    per.push_back(e);
    double code = fr.status == Feasibility::feasible ? 1.0 : fr.status == Feasibility::infeasible ? 0.0 : -1.0;
    t.rows.push_back({double(i), code, fr.residual, fr.degenerate ? 1.0 : 0.0});
  }
  r["diagrams"] = per;
  if (cls.kind == PointKind::singular) {
    try {
      auto ray = cone_ray(catalog, k, so);
      r["cone_ray"] = {{"direction", ray.direction},
                       {"diagram", ray.diagram},
                       {"basis_fingerprint", ray.basis_fingerprint},
                       {"opposite_infeasible", ray.opposite_infeasible}};
    } catch (const ComputeError& e) {
      r["cone_ray"] = {{"error", e.what()}};
    }
  }
  return r;
}

json run_scan(const ExperimentSpec& spec, const std::map<std::string, std::string>& o, Table& t) {
  Diagram d = load_diagram(read_file(spec.inputs.at("diagram"), "diagram"));
  long count = parse_int(o.at("count"), "count");
  if (count < 0) throw ParseError("count must be nonnegative");
  auto so = solver_options(o, spec.seed);
  auto s = sample_surface(d, static_cast<int>(count), spec.seed, so);
  for (int i = 0; i < d.num_external(); ++i)
    for (const char* c : {"t", "x", "y", "z"}) t.header.push_back("k" + std::to_string(i) + "_" + c);
  t.header.push_back("max_shell_residual");
  double worst = 0.0;
  for (size_t i = 0; i < s.points.size(); ++i) {
    std::vector<double> row;
    for (const auto& p : s.points[i].momenta)
      for (int c = 0; c < 4; ++c) row.push_back(p[c]);
    double res = 0.0;
    for (int l = 0; l < d.num_lines(); ++l) {
      double m = d.internal_lines[l].particle.mass;
      res = std::max(res, std::abs(lorentz_square(s.states[i].q[l]) - m * m));
    }
    worst = std::max(worst, res);
    row.push_back(res);
    t.rows.push_back(row);
  }
  json r;
  r["requested"] = count;
  r["found"] = s.points.size();
  r["budget_exhausted"] = s.budget_exhausted;
  r["max_shell_residual"] = worst;
  return r;
}

QuadratureOptions quad_options(const std::map<std::string, std::string>& o) {
  QuadratureOptions q;
  q.refine = parse_double(o.at("refine"), "refine");
  return q;
}

json run_falloff(const ExperimentSpec& spec, const std::map<std::string, std::string>& o, Table& t) {
  auto pk = packet_from_config(read_config(spec.inputs.at("packet"), "packet"));
  if (o.at("gamma") != "packet") pk.gamma = parse_double(o.at("gamma"), "gamma");
  auto u = parse_four_vector(o.at("u"), "u");
  auto taus = tau_grid(parse_double(o.at("tau_min"), "tau_min"), parse_double(o.at("tau_max"), "tau_max"),
                       parse_int(o.at("points"), "points"), o.at("spacing"));
  auto s = falloff_fit(pk, u, taus, FitOptions{}, quad_options(o));
  t.header = {"tau", "magnitude"};
  for (size_t i = 0; i < s.taus.size(); ++i) t.rows.push_back({s.taus[i], s.magnitudes[i]});
  json r;
  r["gamma"] = pk.gamma;
  r["u"] = four_json(u);
  r["fit"] = fit_json(s.fit);
  return r;
}

json run_transform(const ExperimentSpec& spec, const std::map<std::string, std::string>& o, Table& t) {
  auto model = model_from_config(read_config(spec.inputs.at("model"), "model"));
  const auto& F = model.F;
  const auto& mu = model.mu;
  std::string exp = o.at("experiment");
  auto qs = parse_list(o.at("q"), "q");
  double imag = parse_double(o.at("imag"), "imag");
  VGrid grid;
  grid.dim = F.dim;
  grid.truncation_tol = parse_double(o.at("truncation_tol"), "truncation_tol");
  json r;
  r["experiment"] = exp;
  r["form"] = std::string(to_string(F.form));
  r["dim"] = F.dim;

  if (exp == "roundtrip") {
    VFunction T;
    if (F.dim == 1) {
      T = [&](const RVec& v) { return forward_T(F, mu, v, 0.0); };
    } else {
      if (F.form != FormKind::bump) throw ComputeError("roundtrip in l = 2 supports the bump form only");
      grid.radial = true;
      T = [&](const RVec& v) { return cplx(forward_T_radial(F, mu.terms.at(0).coef, std::hypot(v[0], v[1]), 0.0)); };
    }
    std::vector<RVec> pts;
    for (double q : qs) pts.push_back(F.dim == 1 ? RVec{q} : RVec{q, 0.0});
    auto res = inverse_F(T, pts, grid);
    t.header = {"q", "F_re", "F_im", "inverse_re", "inverse_im", "abs_error"};
    double worst = 0.0;
    for (size_t i = 0; i < pts.size(); ++i) {
      cplx f = F(pts[i]);
      double err = std::abs(res[i].value - f);
      worst = std::max(worst, err);
      t.rows.push_back({qs[i], f.real(), f.imag(), res[i].value.real(), res[i].value.imag(), err});
    }
    r["max_abs_error"] = worst;
    r["radius"] = res.empty() ? 0.0 : res[0].radius;
    r["truncation"] = res.empty() ? 0.0 : res[0].truncation;
    return r;
  }
  if (exp == "split") {
    double g0 = parse_double(o.at("gamma0"), "gamma0");
    std::vector<cplx> refs;
    if (imag == 0.0) {
      VFunction T = [&](const RVec& v) { return forward_T(F, mu, v, 0.0); };
      std::vector<RVec> pts;
      for (double q : qs) pts.push_back({q});
      for (const auto& x : inverse_F(T, pts, grid)) refs.push_back(x.value);
    } else {
      for (double q : qs) refs.push_back(F.continuation({cplx(q, imag)}));
    }
    t.header = {"q_re", "q_im", "F1_re", "F1_im", "F2_re", "F2_im", "reference_re", "reference_im", "abs_error"};
    double worst = 0.0;
    for (size_t i = 0; i < qs.size(); ++i) {
      auto s = split_F(F, mu, g0, cplx(qs[i], imag));
      double err = std::abs(s.F1 + s.F2 - refs[i]);
      worst = std::max(worst, err);
      t.rows.push_back({qs[i], imag, s.F1.real(), s.F1.imag(), s.F2.real(), s.F2.imag(), refs[i].real(), refs[i].imag(),
                        err});
    }
    r["gamma0"] = g0;
    r["reference"] = imag == 0.0 ? "direct inversion" : "analytic continuation";
    r["max_abs_error"] = worst;
    return r;
  }
  if (exp == "cone") {
    if (F.dim != 1) throw ComputeError("cone experiment supports l = 1");
    HoleSpec hole;
    hole.center = parse_double(o.at("hole"), "hole");
    double margin = parse_double(o.at("margin"), "margin");
    VFunction T = [&](const RVec& v) { return forward_T(F, mu, v, 0.0); };
    grid.radius = choose_truncation(T, 1, grid.truncation_tol);
    t.header = {"q_re", "q_im", "convergent", "FH_re", "FH_im", "FA_re", "FA_im"};
    json pts = json::array();
    for (double q : qs) {
      auto c = cone_split(T, hole, {cplx(q, imag)}, grid, margin);
      double nan = std::nan("");
      cplx fh = c.F_H ? *c.F_H : cplx(nan, nan);
      t.rows.push_back({q, imag, c.convergent ? 1.0 : 0.0, fh.real(), fh.imag(), c.F_A.real(), c.F_A.imag()});
      json e = {{"q", cplx_json(cplx(q, imag))}, {"convergent", c.convergent}, {"F_A", cplx_json(c.F_A)}};
      if (c.F_H) e["F_H"] = cplx_json(*c.F_H);
      if (!c.diagnostic.empty()) e["diagnostic"] = c.diagnostic;
      pts.push_back(e);
    }
    r["radius"] = grid.radius;
    r["points"] = pts;
    return r;
  }
  throw ParseError("experiment must be roundtrip, split or cone");
}

json run_mc_compare(const ExperimentSpec& spec, const std::map<std::string, std::string>& o, Table& t) {
  auto pk = packet_from_config(read_config(spec.inputs.at("packet"), "packet"));
  auto u = parse_four_vector(o.at("u"), "u");
  auto taus = parse_list(o.at("tau_grid"), "tau_grid");
  long count = parse_int(o.at("count"), "count");
  double growth_c = parse_double(o.at("growth_c"), "growth_c");
  double bin = parse_double(o.at("bin"), "bin");
  if (taus.size() < 4) throw ParseError("tau_grid needs at least 4 values");
  if (!(u.t > 0.0)) throw ParseError("u must have positive time component");

  json r;
  if (spec.inputs.count("diagram")) {
    Diagram d = load_diagram(read_file(spec.inputs.at("diagram"), "diagram"));
    auto acc = degree_accounting(d);
    r["diagram_degree"] = to_string(acc.total);
  }
  auto quantum = falloff_fit(pk, u, taus, FitOptions{}, quad_options(o));
  std::vector<double> cval, cerr;
  Vec3 pbar{pk.pbar.x, pk.pbar.y, pk.pbar.z};
  for (double tau : taus) {
    if (pk.gamma == 0.0) {
      PhaseSpaceDensity rho;
      rho.mass = pk.mass;
      rho.packet = pk;
      for (auto& a : rho.position) a = {ProfileKind::compact, 0.0, 1.0};
      Vec3 w{u.x / u.t, u.y / u.t, u.z / u.t};
      auto d = classical_density(rho, w, u.t * tau, bin, static_cast<int>(count), spec.seed);
      cval.push_back(d.density);
      cerr.push_back(d.statistical_error);
    } else {
      OverlapPacket a{gaussian_packet_density(pk.mass, pbar, pk.gamma, tau), FourVector{}, Orientation::initial};
      OverlapPacket b{point_density(pk.mass, {0, 0, 0}, {0, 0, 0}), u, Orientation::final};
      auto e = overlap_probability({a, b}, tau, growth_c, static_cast<int>(count), spec.seed);
      cval.push_back(e.probability);
      cerr.push_back(e.statistical_error);
    }
  }
  auto classical = fit_falloff(taus, cval, pk.gamma);
  auto cmp = correspondence_compare(classical, quantum.fit);
  t.header = {"tau", "quantum_amplitude", "classical", "classical_error"};
  for (size_t i = 0; i < taus.size(); ++i) t.rows.push_back({taus[i], quantum.magnitudes[i], cval[i], cerr[i]});
  r["mode"] = pk.gamma == 0.0 ? "on-cone density" : "off-cone overlap";
  r["quantum_fit"] = fit_json(quantum.fit);
  r["classical_fit"] = fit_json(classical);
  r["comparison"] = {{"kinds_match", cmp.kinds_match},
                     {"classical_value", cmp.classical_value},
                     {"quantum_doubled", cmp.quantum_doubled},
                     {"difference", cmp.difference},
                     {"relative_difference", cmp.relative_difference},
                     {"corresponds", cmp.corresponds}};
  return r;
}

}  // namespace

std::string emit_plotdata(const Table& t) {
  std::string out;
  for (size_t i = 0; i < t.header.size(); ++i) out += (i ? "," : "") + quote_field(t.header[i]);
  out += "\n";
  for (const auto& row : t.rows) {
    for (size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + format_number(row[i]);
    out += "\n";
  }
  return out;
}

Table parse_plotdata(std::string_view csv) {
  auto rows = split_csv(csv);
  if (rows.empty()) throw ParseError("csv: missing header");
  Table t;
  t.header = rows[0];
  for (size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != t.header.size())
      throw ParseError("csv: row " + std::to_string(r) + " has " + std::to_string(rows[r].size()) + " fields");
    std::vector<double> row;
    for (const auto& f : rows[r]) {
      if (f == "nan")
        row.push_back(std::nan(""));
      else
        row.push_back(parse_double(f, "csv field"));
    }
    t.rows.push_back(row);
  }
  return t;
}

KeyValues parse_key_values(std::string_view text) {
  KeyValues kv;
  std::istringstream in{std::string(text)};
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::string s = trim(line);
    if (s.empty()) continue;
    auto eq = s.find('=');
    if (eq == std::string::npos) throw ParseError("line " + std::to_string(n) + ": expected key = value");
    std::string key = trim(s.substr(0, eq));
    std::string value = trim(s.substr(eq + 1));
    if (key.empty()) throw ParseError("line " + std::to_string(n) + ": empty key");
    if (!kv.emplace(key, value).second) throw ParseError("line " + std::to_string(n) + ": duplicate key '" + key + "'");
  }
  return kv;
}

double parse_double(const std::string& text, const std::string& what) {
  std::string s = trim(text);
  if (s == "nan") return std::nan("");
  double v = 0.0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || s.empty())
    throw ParseError(what + ": '" + text + "' is not a number");
  return v;
}

long parse_int(const std::string& text, const std::string& what) {
  std::string s = trim(text);
  long v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || s.empty())
    throw ParseError(what + ": '" + text + "' is not an integer");
  return v;
}

std::vector<double> parse_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(item, what));
  if (out.empty()) throw ParseError(what + ": empty list");
  return out;
}

FourVector parse_four_vector(const std::string& text, const std::string& what) {
  auto v = parse_list(text, what);
  if (v.size() != 4) throw ParseError(what + ": expected t,x,y,z");
  return {v[0], v[1], v[2], v[3]};
}

MomentumWavePacket packet_from_config(const KeyValues& kv) {
  static const std::set<std::string> known = {"mass", "pbar", "gamma", "r1", "r2", "spatial_dim", "amplitude"};
  for (const auto& [k, v] : kv)
    if (!known.count(k)) throw ParseError("packet: unknown key '" + k + "'");
  MomentumWavePacket pk;
  if (kv.count("mass")) pk.mass = parse_double(kv.at("mass"), "mass");
  if (kv.count("gamma")) pk.gamma = parse_double(kv.at("gamma"), "gamma");
  if (kv.count("r1")) pk.r1 = parse_double(kv.at("r1"), "r1");
  if (kv.count("r2")) pk.r2 = parse_double(kv.at("r2"), "r2");
  if (kv.count("spatial_dim")) pk.spatial_dim = static_cast<int>(parse_int(kv.at("spatial_dim"), "spatial_dim"));
  if (kv.count("amplitude")) pk.amplitude = parse_double(kv.at("amplitude"), "amplitude");
  pk.pbar = on_shell(pk.mass, 0.0, 0.0, 0.0);
  if (kv.count("pbar")) {
    auto v = parse_list(kv.at("pbar"), "pbar");
    if (v.size() == 3)
      pk.pbar = on_shell(pk.mass, v[0], v[1], v[2]);
    else if (v.size() == 4)
      pk.pbar = {v[0], v[1], v[2], v[3]};
    else
      throw ParseError("pbar: expected x,y,z or t,x,y,z");
  }
  pk.validate();
  return pk;
}

TransformModel model_from_config(const KeyValues& kv) {
  static const std::set<std::string> known = {"form", "dim", "q0",  "eps",     "r1",     "r2",
                                              "mu",   "samples", "origin", "spacing", "interp_order"};
  for (const auto& [k, v] : kv)
    if (!known.count(k)) throw ParseError("model: unknown key '" + k + "'");
  TransformModel m;
  auto& F = m.F;
  std::string form = kv.count("form") ? kv.at("form") : "bump";
  if (form == "bump")
    F.form = FormKind::bump;
  else if (form == "pole")
    F.form = FormKind::pole;
  else if (form == "log")
    F.form = FormKind::log;
  else if (form == "grid")
    F.form = FormKind::grid;
  else
    throw ParseError("model: unknown form '" + form + "'");
  if (kv.count("dim")) F.dim = static_cast<int>(parse_int(kv.at("dim"), "dim"));
  if (kv.count("q0")) F.q0 = parse_double(kv.at("q0"), "q0");
  if (kv.count("eps")) F.eps = parse_double(kv.at("eps"), "eps");
  if (kv.count("r1")) F.r1 = parse_double(kv.at("r1"), "r1");
  if (kv.count("r2")) F.r2 = parse_double(kv.at("r2"), "r2");
  if (kv.count("samples")) F.samples = parse_list(kv.at("samples"), "samples");
  if (kv.count("origin")) F.origin = parse_double(kv.at("origin"), "origin");
  if (kv.count("spacing")) F.spacing = parse_double(kv.at("spacing"), "spacing");
  if (kv.count("interp_order")) F.interp_order = static_cast<int>(parse_int(kv.at("interp_order"), "interp_order"));
  std::vector<double> c(F.dim, 1.0);
  if (kv.count("mu")) c = parse_list(kv.at("mu"), "mu");
  if (static_cast<int>(c.size()) != F.dim) throw ParseError("model: mu needs one coefficient per dimension");
  m.mu = MuForm::quadratic(c);
  F.validate();
  m.mu.validate(F.r2);
  return m;
}

std::string_view to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::analyze: return "analyze";
    case ExperimentKind::scan_surface: return "scan-surface";
    case ExperimentKind::falloff: return "falloff";
    case ExperimentKind::transform: return "transform";
    case ExperimentKind::mc_compare: return "mc-compare";
    case ExperimentKind::degree: return "degree";
  }
  return "?";
}

ExperimentKind experiment_kind_from_string(std::string_view s) {
  for (auto k : {ExperimentKind::analyze, ExperimentKind::scan_surface, ExperimentKind::falloff,
                 ExperimentKind::transform, ExperimentKind::mc_compare, ExperimentKind::degree})
    if (to_string(k) == s) return k;
  throw ParseError("unknown experiment kind '" + std::string(s) + "'");
}

std::map<std::string, std::string> resolve_options(const ExperimentSpec& spec) {
  auto os = option_spec(spec.kind);
  for (const auto& in : os.required_inputs)
    if (!spec.inputs.count(in) || spec.inputs.at(in).empty())
      throw ParseError(std::string(to_string(spec.kind)) + ": missing input '" + in + "'");
  for (const auto& [k, v] : spec.inputs)
    if (!os.required_inputs.count(k) && !os.optional_inputs.count(k))
      throw ParseError(std::string(to_string(spec.kind)) + ": unexpected input '" + k + "'");
  std::map<std::string, std::string> out = os.defaults;
  for (const auto& [k, v] : spec.options) {
    if (!os.defaults.count(k)) throw ParseError(std::string(to_string(spec.kind)) + ": unknown option '" + k + "'");
    out[k] = v;
  }
  for (const auto& [k, v] : out)
    if (v.empty()) throw ParseError(std::string(to_string(spec.kind)) + ": missing option '" + k + "'");
  return out;
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  auto opts = resolve_options(spec);
  ExperimentResult res;
  json result;
  switch (spec.kind) {
    case ExperimentKind::degree: result = run_degree(opts, res.table); break;
    case ExperimentKind::analyze: result = run_analyze(spec, opts, res.table); break;
    case ExperimentKind::scan_surface: result = run_scan(spec, opts, res.table); break;
    case ExperimentKind::falloff: result = run_falloff(spec, opts, res.table); break;
    case ExperimentKind::transform: result = run_transform(spec, opts, res.table); break;
    case ExperimentKind::mc_compare: result = run_mc_compare(spec, opts, res.table); break;
  }
  json report;
  report["name"] = spec.name;
  report["kind"] = std::string(to_string(spec.kind));
  report["seed"] = spec.seed;
  report["inputs"] = spec.inputs;
  report["options"] = opts;
  report["result"] = result;
  res.report_json = report.dump(2) + "\n";
  return res;
}

int run(const ExperimentSpec& spec, std::string* err) {
  try {
    auto res = run_experiment(spec);
    std::filesystem::path dir(spec.output_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    std::ofstream rep(dir / (spec.name + ".report.json"), std::ios::binary);
    std::ofstream csv(dir / (spec.name + ".csv"), std::ios::binary);
    if (!rep || !csv) throw ParseError("cannot write output files in '" + spec.output_dir + "'");
    rep << res.report_json;
    csv << emit_plotdata(res.table);
    return 0;
  } catch (const ParseError& e) {
    if (err) *err = e.what();
    return 2;
  } catch (const std::exception& e) {
    if (err) *err = e.what();
    return 1;
  }
}

}  // namespace corrlab
