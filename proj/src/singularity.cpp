#include "corrlab/singularity.hpp"

#include <cmath>
#include <map>

#include "corrlab/errors.hpp"

namespace corrlab {

std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

std::string_view to_string(ModelKind k) {
  switch (k) {
    case ModelKind::pole: return "pole";
    case ModelKind::log: return "log";
    case ModelKind::sqrt: return "sqrt";
    case ModelKind::power: return "power";
  }
  return "?";
}

SingularityDegree degree(int num_lines, int num_vertices) {
  if (num_lines < 0 || num_vertices < 1) throw ComputeError("degree: need N_l >= 0 and N_v >= 1");
  SingularityDegree s;
  s.d = Rational(3LL * num_lines - 4LL * num_vertices + 3, 2);
  s.num_lines = num_lines;
  s.num_vertices = num_vertices;
  return s;
}

Rational degree_from_counts(int num_lines, int num_vertices) {
  const long long twice = 3LL * num_lines - 4LL * (num_vertices - 1) - 1;
  return Rational(twice, 2);
}

std::complex<double> LocalModel::evaluate(double E, double eps) const {
  const std::complex<double> z(E, eps);
  switch (kind) {
    case ModelKind::pole: return std::complex<double>(0.0, 1.0) / z;
    case ModelKind::log: return std::log(z);
    case ModelKind::sqrt: return std::sqrt(z);
    case ModelKind::power:
      return std::pow(z, static_cast<double>(d.numerator()) / static_cast<double>(d.denominator()));
  }
  return {};
}

LocalModel local_model(const SingularityDegree& deg) {
  LocalModel m;
  m.d = deg.d;
  if (deg.d == Rational(-1)) {
    m.kind = ModelKind::pole;
  } else if (deg.d == Rational(0)) {
    m.kind = ModelKind::log;
  } else if (deg.d == Rational(1, 2)) {
    m.kind = ModelKind::sqrt;
  } else {
    m.kind = ModelKind::power;
  }
  return m;
}

AccountingReport degree_accounting(const Diagram& d) {
  const int nl = d.num_lines();
  const int nv = d.num_vertices();
  AccountingReport rep;
  rep.items.push_back({"lines", nl, Rational(3, 2), Rational(3LL * nl, 2)});
  rep.items.push_back({"vertices", nv - 1, Rational(-2), Rational(-2LL * (nv - 1))});
  rep.items.push_back({"constant", 1, Rational(-1, 2), Rational(-1, 2)});
  for (const auto& item : rep.items) rep.total += item.contribution;

  std::map<std::pair<VertexId, VertexId>, int> pair_count;
  std::map<VertexId, int> deg;
  for (const auto& line : d.internal_lines) {
    const auto key = std::minmax(line.from, line.to);
    if (++pair_count[{key.first, key.second}] > 2) rep.at_most_two_lines_per_pair = false;
    ++deg[line.from];
    ++deg[line.to];
  }
  for (const auto& ext : d.external_lines) ++deg[ext.vertex];
  for (VertexId v : d.vertices) {
    if (deg[v] <= 2) rep.no_trivial_vertex = false;
  }
  return rep;
}

}  // namespace corrlab
