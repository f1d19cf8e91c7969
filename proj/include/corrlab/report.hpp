#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "corrlab/transform.hpp"
#include "corrlab/wavepacket.hpp"

namespace corrlab {

/// Plot data: a header and numeric rows of the same width.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  friend bool operator==(const Table&, const Table&) = default;
};

/// Header row then one line per row; fields quoted when they contain a comma,
/// a quote or a line break. Numbers use 17 significant digits; NaN is "nan".
std::string emit_plotdata(const Table& t);
Table parse_plotdata(std::string_view csv);

using KeyValues = std::map<std::string, std::string>;

/// `key = value` lines; '#' starts a comment. Duplicate keys are errors.
KeyValues parse_key_values(std::string_view text);

double parse_double(const std::string& text, const std::string& what);
long parse_int(const std::string& text, const std::string& what);
std::vector<double> parse_list(const std::string& text, const std::string& what);
/// "t,x,y,z".
FourVector parse_four_vector(const std::string& text, const std::string& what);

/// Keys: mass, pbar (x,y,z or t,x,y,z), gamma, r1, r2, spatial_dim, amplitude.
MomentumWavePacket packet_from_config(const KeyValues& kv);

struct TransformModel {
  ScatteringModelF F;
  MuForm mu;
};

/// Keys: form, dim, q0, eps, r1, r2, mu (quadratic coefficients), samples,
/// origin, spacing, interp_order.
TransformModel model_from_config(const KeyValues& kv);

enum class ExperimentKind { analyze, scan_surface, falloff, transform, mc_compare, degree };

std::string_view to_string(ExperimentKind k);
ExperimentKind experiment_kind_from_string(std::string_view s);

struct ExperimentSpec {
  std::string name = "experiment";
  ExperimentKind kind = ExperimentKind::degree;
  std::map<std::string, std::string> inputs;   // role -> path (catalog: comma separated)
  std::map<std::string, std::string> options;  // unresolved user options
  std::uint64_t seed = 1;
  std::string output_dir = ".";
};

struct ExperimentResult {
  std::string report_json;
  Table table;
};

/// Resolved option set for the spec (defaults merged in). Throws ParseError
/// for unknown options and for missing required inputs or options.
std::map<std::string, std::string> resolve_options(const ExperimentSpec& spec);

/// Runs the experiment in memory. Throws ParseError or ComputeError.
ExperimentResult run_experiment(const ExperimentSpec& spec);

/// Runs and writes <output_dir>/<name>.report.json and <name>.csv. Returns
/// 0 on completion, 2 for parse or configuration errors, 1 for computation
/// errors; the message goes to `err`.
int run(const ExperimentSpec& spec, std::string* err = nullptr);

}  // namespace corrlab
