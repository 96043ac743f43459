// Command-line front end. Everything goes through the C interface; this file
// only turns flags into a JSON argument object and writes the report.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "polyrec/polyrec.h"

namespace {

enum class Kind { kInt, kNumber, kText, kFlag };

struct Option {
  std::string name;
  Kind kind;
  std::string help;
};

struct Subcommand {
  std::string name;
  std::string help;
  std::vector<Option> options;
};

const std::vector<Subcommand>& subcommands() {
  static const std::vector<Subcommand> table = {
      {"search", "good shifts n <= M with |A ∩ (A+P_i(n))|/N > density^2 - eps",
       {{"N", Kind::kInt, "ambient interval [1, N]"},
        {"set", Kind::kText, "full | evens | ap | random | list"},
        {"start", Kind::kInt, "ap start"},
        {"step", Kind::kInt, "ap step"},
        {"density", Kind::kNumber, "random set density"},
        {"elements", Kind::kText, "list set, e.g. 1..5,9"},
        {"poly", Kind::kText, "family, e.g. \"0,1;1,1\" (coefficients of n, n^2, ...)"},
        {"eps", Kind::kNumber, "epsilon"},
        {"c", Kind::kNumber, "shift-range constant (defaults to constants.c_shift)"},
        {"permissive", Kind::kFlag, "allow N outside the hypotheses"},
        {"uniform", Kind::kFlag, "also report the uniformity certificate"},
        {"K", Kind::kInt, "moment order for the certificate"}}},
      {"decompose", "structured + uniform + small decomposition of a balanced set function",
       {{"N", Kind::kInt, "modulus"},
        {"set", Kind::kText, "full | evens | ap | random | list"},
        {"start", Kind::kInt, "ap start"},
        {"step", Kind::kInt, "ap step"},
        {"density", Kind::kNumber, "random set density"},
        {"elements", Kind::kText, "list set"},
        {"eps", Kind::kNumber, "target for ||f3||_2"},
        {"schedule", Kind::kText, "experimental | reciprocal | reference"},
        {"scale", Kind::kNumber, "reciprocal schedule: eta(t) = scale / t"},
        {"l", Kind::kInt, "family size for the reference schedule"}}},
      {"weyl", "Weyl sum moments against congruence counts",
       {{"poly", Kind::kText, "polynomial coefficients"},
        {"M", Kind::kInt, "summation length"},
        {"N", Kind::kInt, "modulus"},
        {"K", Kind::kInt, "moment order"},
        {"weights", Kind::kText, "ones | random"}}},
      {"tarry", "exact Tarry / Vinogradov system counts",
       {{"K", Kind::kInt, "tuple length"},
        {"k", Kind::kInt, "number of power-sum equations"},
        {"M", Kind::kInt, "range [1, M]"},
        {"method", Kind::kText, "auto | convolution | meet-in-the-middle"},
        {"poly", Kind::kText, "single-polynomial form instead of power sums"},
        {"probe", Kind::kText, "growth probe M values, e.g. 50,100,200,400"}}},
      {"dioph", "lattice theta sums and diophantine approximation",
       {{"op", Kind::kText, "approx | power | theta | a_lambda | flattice | averages | schmidt | denominator"},
        {"poly", Kind::kText, "family for approx"},
        {"theta", Kind::kText, "targets, decimals or p/q"},
        {"eps", Kind::kNumber, "epsilon"},
        {"N", Kind::kInt, "range [1, N]"},
        {"lattice", Kind::kText, "JSON {\"blocks\":[{\"dim\":d,\"basis\":[...]}]}"},
        {"R", Kind::kNumber, "scale for (R Z)^d blocks"},
        {"dims", Kind::kText, "block dimensions for (R Z)^d, e.g. 1,2"},
        {"alpha", Kind::kText, "per-block vectors, ';' between blocks"},
        {"x", Kind::kText, "theta point, ';' between blocks"},
        {"t", Kind::kNumber, "theta parameter"},
        {"dual", Kind::kFlag, "flattice: also evaluate the dual form"},
        {"c", Kind::kNumber, "dilation factor"},
        {"q", Kind::kInt, "subsampling step"},
        {"beta", Kind::kText, "perturbed vector"},
        {"q_max", Kind::kInt, "largest denominator scanned"},
        {"radius", Kind::kNumber, "schmidt dual-vector radius"},
        {"B", Kind::kNumber, "schmidt quality threshold"},
        {"delta", Kind::kNumber, "denominator: delta"},
        {"thresholds", Kind::kText, "denominator: explicit B_i"}}},
      {"ergodic", "recurrence searches in finite measure-preserving systems",
       {{"system", Kind::kText, "rotation:m:a | skew:m:a | perm:<file>"},
        {"subset", Kind::kText, "all | random | list such as 0..49"},
        {"density", Kind::kNumber, "random subset density"},
        {"op", Kind::kText, "khintchine | griesmer"},
        {"eps", Kind::kNumber, "epsilon"},
        {"v", Kind::kText, "the set B, e.g. 1..10"},
        {"constants", Kind::kText, "griesmer constants, e.g. 1,5"},
        {"multiplier", Kind::kInt, "khintchine: search T^multiplier"},
        {"permissive", Kind::kFlag, "run below the size hypothesis"}}},
      {"lift", "lift A to B in [-N', N']^k and check the implication",
       {{"N", Kind::kInt, "ambient interval [1, N]"},
        {"set", Kind::kText, "full | evens | ap | random | list"},
        {"start", Kind::kInt, "ap start"},
        {"step", Kind::kInt, "ap step"},
        {"density", Kind::kNumber, "random set density"},
        {"elements", Kind::kText, "list set"},
        {"poly", Kind::kText, "family"},
        {"half_width", Kind::kInt, "N' (0 picks the smallest accepted)"}}},
      {"selftest", "fast invariant suite", {}},
  };
  return table;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"polyrec: polynomial recurrence experiments"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path, out_path, csv_path;
  long long seed = -1;
  int threads = 0;
  app.add_option("--config", config_path, "JSON config (falls back to $POLYREC_CONFIG)");
  app.add_option("--out", out_path, "write the JSON report here instead of stdout");
  app.add_option("--csv", csv_path, "write the CSV table here");
  app.add_option("--seed", seed, "override the config seed");
  app.add_option("--threads", threads, "override the config thread count");

  // Values are captured as strings and typed when the argument object is built.
  std::map<std::string, std::map<std::string, std::string>> values;
  std::map<std::string, std::map<std::string, bool>> flags;
  std::map<std::string, CLI::App*> apps;
  for (const auto& sc : subcommands()) {
    auto* sub = app.add_subcommand(sc.name, sc.help);
    apps[sc.name] = sub;
    for (const auto& o : sc.options) {
      if (o.kind == Kind::kFlag) {
        sub->add_flag("--" + o.name, flags[sc.name][o.name], o.help);
      } else {
        sub->add_option("--" + o.name, values[sc.name][o.name], o.help);
      }
    }
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  const Subcommand* chosen = nullptr;
  for (const auto& sc : subcommands())
    if (apps[sc.name]->parsed()) chosen = &sc;

  try {
    nlohmann::json args = nlohmann::json::object();
    for (const auto& o : chosen->options) {
      auto* sub = apps[chosen->name];
      if (sub->count("--" + o.name) == 0) continue;
      const auto& raw = values[chosen->name][o.name];
      switch (o.kind) {
        case Kind::kInt: {
          std::size_t used = 0;
          const long long v = std::stoll(raw, &used);
          if (used != raw.size()) throw std::invalid_argument("--" + o.name + " expects an integer");
          args[o.name] = v;
          break;
        }
        case Kind::kNumber: {
          std::size_t used = 0;
          const double v = std::stod(raw, &used);
          if (used != raw.size()) throw std::invalid_argument("--" + o.name + " expects a number");
          args[o.name] = v;
          break;
        }
        case Kind::kText:
          args[o.name] = raw;
          break;
        case Kind::kFlag:
          args[o.name] = flags[chosen->name][o.name];
          break;
      }
    }

    if (config_path.empty()) {
      if (const char* env = std::getenv("POLYREC_CONFIG")) config_path = env;
    }
    nlohmann::json config = config_path.empty() ? nlohmann::json::object()
                                                : nlohmann::json::parse(read_file(config_path));
    if (!config.is_object()) throw std::invalid_argument("config: expected a JSON object");
    if (seed >= 0) config["seed"] = seed;
    if (threads > 0) config["threads"] = threads;

    polyrec_config* cfg = nullptr;
    if (polyrec_config_from_json(config.dump().c_str(), &cfg) != POLYREC_OK) {
      std::cerr << "polyrec: " << polyrec_last_error() << "\n";
      return 2;
    }
    if (out_path.empty() && config.contains("json_out")) out_path = config["json_out"].get<std::string>();
    if (csv_path.empty() && config.contains("csv_out")) csv_path = config["csv_out"].get<std::string>();

    polyrec_report* report = nullptr;
    const auto status = polyrec_run(chosen->name.c_str(), args.dump().c_str(), cfg, &report);
    polyrec_config_free(cfg);
    if (status != POLYREC_OK) {
      std::cerr << "polyrec: " << polyrec_status_string(status) << ": " << polyrec_last_error()
                << "\n";
      return 2;
    }
    const char* json = nullptr;
    const char* csv = nullptr;
    int passed = 0;
    polyrec_report_json(report, &json);
    polyrec_report_csv(report, &csv);
    polyrec_report_passed(report, &passed);
    const std::string json_text = std::string(json) + "\n";
    const std::string csv_text = csv;
    polyrec_report_free(report);

    if (out_path.empty()) {
      std::cout << json_text;
    } else {
      write_file(out_path, json_text);
    }
    if (!csv_path.empty()) write_file(csv_path, csv_text);
    if (!passed) std::cerr << "polyrec: one or more assertions failed\n";
    return passed ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "polyrec: " << e.what() << "\n";
    return 2;
  }
}
