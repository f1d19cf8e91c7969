#include <CLI11.hpp>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "corrlab/errors.hpp"
#include "corrlab/report.hpp"

namespace {

struct Flag {
  std::string name;  // option key, also the flag name with '_' -> '-'
  bool input = false;
  std::string help;
};

const std::map<std::string, std::vector<Flag>>& command_flags() {
  static const std::map<std::string, std::vector<Flag>> flags = {
      {"degree", {{"nl", false, "number of internal lines"}, {"nv", false, "number of vertices"}}},
      {"analyze",
       {{"diagram", true, "diagram JSON"},
        {"k", true, "external momenta JSON"},
        {"catalog", true, "extra diagram JSON files, comma separated"},
        {"tol_feas", false, "feasibility tolerance"},
        {"starts", false, "solver starts"}}},
      {"scan-surface",
       {{"diagram", true, "diagram JSON"},
        {"count", false, "points to sample"},
        {"tol_feas", false, "feasibility tolerance"},
        {"starts", false, "solver starts"}}},
      {"falloff",
       {{"packet", true, "packet config"},
        {"u", false, "direction t,x,y,z"},
        {"gamma", false, "Gaussian width parameter (default: the packet's)"},
        {"tau_min", false, "smallest tau"},
        {"tau_max", false, "largest tau"},
        {"points", false, "grid points"},
        {"spacing", false, "geometric or linear"},
        {"refine", false, "quadrature refinement factor"}}},
      {"transform",
       {{"model", true, "model config"},
        {"experiment", false, "roundtrip, split or cone"},
        {"q", false, "real parts of q, comma separated"},
        {"imag", false, "imaginary part added to every q"},
        {"gamma0", false, "split parameter"},
        {"hole", false, "hole direction, +1 or -1"},
        {"margin", false, "dual cone margin"},
        {"truncation_tol", false, "edge tolerance of the v-box"}}},
      {"mc-compare",
       {{"packet", true, "packet config"},
        {"diagram", true, "diagram JSON (degree bookkeeping)"},
        {"u", false, "direction t,x,y,z"},
        {"tau_grid", false, "tau values, comma separated"},
        {"count", false, "Monte Carlo samples per tau"},
        {"growth_c", false, "overlap region growth constant"},
        {"bin", false, "half-width of the u-bin"},
        {"refine", false, "quadrature refinement factor"}}},
  };
  return flags;
}

const std::map<std::string, std::string> kAbout = {
    {"degree", "degree of singularity from line and vertex counts"},
    {"analyze", "classify one external configuration against a diagram catalog"},
    {"scan-surface", "sample points of a diagram's singularity surface"},
    {"falloff", "position-space fall-off of a wave packet along a direction"},
    {"transform", "Fourier round trip, split and cone experiments"},
    {"mc-compare", "classical Monte Carlo against the quantum fall-off"},
};

std::string flag_name(std::string s) {
  for (auto& c : s)
    if (c == '_') c = '-';
  return "--" + s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"corrlab: Landau diagrams, wave-packet fall-off and classical correspondence"};
  app.require_subcommand(1);

  std::string name, out_dir = ".";
  std::uint64_t seed = 1;
  std::map<std::string, std::map<std::string, std::string>> values;
  std::map<std::string, CLI::App*> subs;

  for (const auto& [cmd, flags] : command_flags()) {
    auto* sub = app.add_subcommand(cmd, kAbout.at(cmd));
    sub->add_option("--name", name, "report base name (default: the command)");
    sub->add_option("--out-dir", out_dir, "output directory");
    sub->add_option("--seed", seed, "random seed");
    for (const auto& f : flags) sub->add_option(flag_name(f.name), values[cmd][f.name], f.help);
    subs[cmd] = sub;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  for (const auto& [cmd, sub] : subs) {
    if (!sub->parsed()) continue;
    corrlab::ExperimentSpec spec;
    try {
      spec.kind = corrlab::experiment_kind_from_string(cmd);
    } catch (const corrlab::ParseError& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 2;
    }
    spec.name = name.empty() ? cmd : name;
    spec.output_dir = out_dir;
    spec.seed = seed;
    for (const auto& f : command_flags().at(cmd)) {
      if (sub->count(flag_name(f.name)) == 0) continue;
      (f.input ? spec.inputs : spec.options)[f.name] = values[cmd][f.name];
    }
    std::string err;
    int code = corrlab::run(spec, &err);
    if (code != 0)
      std::cerr << "error: " << err << "\n";
    else
      std::cout << spec.output_dir << "/" << spec.name << ".report.json\n";
    return code;
  }
  return 2;
}
