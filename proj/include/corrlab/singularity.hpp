#pragma once

#include <complex>
#include <string>
#include <vector>

#include <boost/rational.hpp>

#include "corrlab/diagram.hpp"

namespace corrlab {

using Rational = boost::rational<long long>;

std::string to_string(const Rational& r);

struct SingularityDegree {
  Rational d;
  int num_lines = 0;
  int num_vertices = 1;
};

/// d = (3 N_l - 4 N_v + 3) / 2. Throws ComputeError for N_l < 0 or N_v < 1.
SingularityDegree degree(int num_lines, int num_vertices);

/// The same quantity through 2d = 3 N_l - 4 (N_v - 1) - 1.
Rational degree_from_counts(int num_lines, int num_vertices);

enum class ModelKind { pole, log, sqrt, power };

std::string_view to_string(ModelKind k);

inline constexpr double kDefaultEpsilon = 1e-6;

/// Local behaviour in E = p^2 - m^2, approached from Im E > 0.
struct LocalModel {
  ModelKind kind = ModelKind::power;
  Rational d;

  /// pole: i / (E + i eps); log: log(E + i eps); sqrt: sqrt(E + i eps);
  /// power: (E + i eps)^d. Principal branches throughout.
  std::complex<double> evaluate(double E, double eps = kDefaultEpsilon) const;
};

LocalModel local_model(const SingularityDegree& deg);

struct AccountingItem {
  std::string name;
  int count = 0;
  Rational per_item;
  Rational contribution;
};

struct AccountingReport {
  std::vector<AccountingItem> items;
  Rational total;
  // Conditions under which the counting holds; reported, never enforced.
  bool at_most_two_lines_per_pair = true;
  bool no_trivial_vertex = true;
};

/// +3/2 per internal line, -2 per vertex beyond the first, -1/2 constant.
AccountingReport degree_accounting(const Diagram& d);

}  // namespace corrlab
