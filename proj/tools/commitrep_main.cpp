// commitrep command-line tool.
//
//   commitrep evolve --b-list 1.5,5.5,9.5 --replicates 100 --out runs/fig3a
//   commitrep run --config runs/fig3a/manifest.json
//
// Results go to stdout as one JSON line; failures exit nonzero with one JSON
// line on stderr.

#include <cstdlib>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "commitrep/experiment.hpp"

namespace {

using commitrep::ConfigError;
using commitrep::ExperimentConfig;
using nlohmann::json;

enum class KeyType { kNumber, kInteger, kUnsigned, kString, kBool, kNumberList, kStringList, kIntegerList };

struct Key {
  const char* name;
  KeyType type;
  const char* help;
};

// Every config key except `kind`, which the subcommand sets.
const std::vector<Key>& Keys() {
  static const std::vector<Key> keys = {
      {"benefit", KeyType::kNumber, "benefit b of cooperation"},
      {"arrangement_cost", KeyType::kNumber, "cost c_a of entering an arrangement"},
      {"epsilon", KeyType::kNumber, "perception error"},
      {"regime", KeyType::kString, "reputation regime 2a, 2b or 2c"},
      {"population_size", KeyType::kInteger, "population size N"},
      {"turns", KeyType::kInteger, "evolution turns per run"},
      {"mutation_rate", KeyType::kNumber, "mutation probability per turn"},
      {"selection_strength", KeyType::kNumber, "imitation selection strength s"},
      {"snapshot_stride", KeyType::kInteger, "turns between stored snapshots"},
      {"tail_fraction", KeyType::kNumber, "final fraction of turns for tail frequencies"},
      {"replicates", KeyType::kInteger, "runs per grid point"},
      {"seed_base", KeyType::kUnsigned, "replicate r uses seed_base + r"},
      {"out", KeyType::kString, "output directory (default $COMMITREP_OUT or ./commitrep-out)"},
      {"b_list", KeyType::kNumberList, "benefit grid, comma separated"},
      {"c_a_list", KeyType::kNumberList, "arrangement cost grid"},
      {"epsilon_list", KeyType::kNumberList, "perception error grid"},
      {"regime_list", KeyType::kStringList, "regime grid"},
      {"strategies", KeyType::kStringList, "fixation strategy set, e.g. RA,0-,1A"},
      {"product_order", KeyType::kString, "fixation product order: majority or minority"},
      {"rounds", KeyType::kInteger, "rounds per reputation simulation (even)"},
      {"compositions", KeyType::kInteger, "sampled compositions per grid point"},
      {"norm", KeyType::kIntegerList, "assessment rules g11,g10,g01,g00 in {-1,0,1}"},
      {"write_runs", KeyType::kBool, "evolve: also write every trajectory"},
      {"threads", KeyType::kInteger, "worker threads, 0 = all cores"},
  };
  return keys;
}

std::string FlagName(const std::string& key) {
  std::string flag = "--";
  for (char ch : key) flag += ch == '_' ? '-' : ch;
  return flag;
}

json Scalar(KeyType type, const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    switch (type) {
      case KeyType::kNumber:
      case KeyType::kNumberList: {
        const double v = std::stod(text, &used);
        if (used != text.size()) break;
        return v;
      }
      case KeyType::kInteger:
      case KeyType::kIntegerList: {
        const long long v = std::stoll(text, &used);
        if (used != text.size()) break;
        return v;
      }
      case KeyType::kUnsigned: {
        if (!text.empty() && text[0] == '-') break;
        const unsigned long long v = std::stoull(text, &used);
        if (used != text.size()) break;
        return v;
      }
      case KeyType::kBool:
        if (text == "true" || text == "1") return true;
        if (text == "false" || text == "0") return false;
        break;
      case KeyType::kString:
      case KeyType::kStringList:
        return text;
    }
  } catch (const std::exception&) {
  }
  throw ConfigError(key, "cannot parse '" + text + "'");
}

struct Subcommand {
  CLI::App* app = nullptr;
  std::string config_path;
  std::map<std::string, std::vector<std::string>> values;
  bool full_scale = false;
};

void AddKeyOptions(Subcommand& sub) {
  for (const auto& key : Keys()) {
    auto& slot = sub.values[key.name];
    const std::string flag = FlagName(key.name) + (std::string(key.name) == "seed_base" ? ",--seed" : "");
    if (key.type == KeyType::kBool) {
      sub.app->add_option(flag, slot, key.help)->expected(0, 1)->default_str("true");
    } else if (key.type == KeyType::kNumberList || key.type == KeyType::kStringList ||
               key.type == KeyType::kIntegerList) {
      sub.app->add_option(flag, slot, key.help)->delimiter(',')->expected(1, -1);
    } else {
      sub.app->add_option(flag, slot, key.help)->expected(1);
    }
  }
}

ExperimentConfig Resolve(const Subcommand& sub, const std::string& kind) {
  json j = json::object();
  if (!sub.config_path.empty()) j = commitrep::ToJson(commitrep::LoadConfig(sub.config_path));
  if (!kind.empty()) j["kind"] = kind;
  for (const auto& key : Keys()) {
    const auto& vals = sub.values.at(key.name);
    if (sub.app->count(FlagName(key.name)) == 0) continue;
    const bool list =
        key.type == KeyType::kNumberList || key.type == KeyType::kStringList || key.type == KeyType::kIntegerList;
    if (list) {
      json arr = json::array();
      for (const auto& v : vals) {
        if (!v.empty()) arr.push_back(Scalar(key.type, key.name, v));
      }
      j[key.name] = arr;
    } else if (key.type == KeyType::kBool && vals.empty()) {
      j[key.name] = true;
    } else {
      if (vals.size() != 1) throw ConfigError(key.name, "expected exactly one value");
      j[key.name] = Scalar(key.type, key.name, vals.front());
    }
  }
  return commitrep::FromJson(j);
}

int Fail(const std::string& kind, const std::string& message, const std::string& field = "", int code = 1) {
  json err = {{"status", "error"}, {"error", kind}, {"message", message}};
  if (!field.empty()) err["field"] = field;
  std::cerr << err.dump() << std::endl;
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Evolution of commitment and reputation under indirect reciprocity"};
  app.set_version_flag("--version", std::string(COMMITREP_VERSION));
  app.require_subcommand(1);

  const std::vector<std::pair<std::string, std::string>> kinds = {
      {"evolve", "evolutionary runs, averaged trajectories"},
      {"sweep", "mean cooperation over the b x c_a grid"},
      {"fixation", "pairwise fixation probability tables"},
      {"reputation-validate", "image-matrix reputations of sampled compositions"},
      {"compositions-sample", "sample compositions from evolutionary runs"},
  };
  std::map<std::string, Subcommand> subs;
  for (const auto& [name, help] : kinds) {
    auto& sub = subs[name];
    sub.app = app.add_subcommand(name, help);
    sub.app->add_option("--config", sub.config_path, "base config or manifest; flags override it");
    AddKeyOptions(sub);
  }
  auto& run = subs["run"];
  run.app = app.add_subcommand("run", "run a config file or manifest");
  run.app->add_option("--config", run.config_path, "config or manifest")->required();
  AddKeyOptions(run);

  auto& figures = subs["reproduce-figures"];
  figures.app = app.add_subcommand("reproduce-figures", "one CSV per figure, desk scale unless --full-scale");
  std::string figures_out;
  std::int64_t figures_threads = 0;
  figures.app->add_option("--out", figures_out, "output directory");
  figures.app->add_option("--threads", figures_threads, "worker threads, 0 = all cores");
  figures.app->add_flag("--full-scale", figures.full_scale, "full-size grids and replicate counts");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return Fail("usage", e.what(), "", 2);
  }

  try {
    if (figures.app->parsed()) {
      const auto out = figures_out.empty() ? commitrep::DefaultOutputDirectory() : std::filesystem::path(figures_out);
      json files = json::array();
      for (const auto& p : commitrep::ReproduceFigures(out, figures.full_scale, figures_threads)) {
        files.push_back(p.string());
      }
      std::cout << json{{"status", "ok"}, {"out", out.string()}, {"files", files}}.dump() << std::endl;
      return 0;
    }
    for (auto& [name, sub] : subs) {
      if (!sub.app->parsed() || name == "reproduce-figures") continue;
      const ExperimentConfig config = Resolve(sub, name == "run" ? "" : name);
      const auto summary = commitrep::RunConfig(config);
      for (const auto& w : summary.warnings) std::cerr << json{{"status", "warning"}, {"message", w}}.dump() << '\n';
      std::cout << json{{"status", "ok"},
                        {"out", summary.out.string()},
                        {"files", summary.files},
                        {"wall_seconds", summary.wall_seconds}}
                       .dump()
                << std::endl;
      return 0;
    }
  } catch (const ConfigError& e) {
    return Fail("config", e.what(), e.field(), 2);
  } catch (const std::runtime_error& e) {
    return Fail("io", e.what(), "", 3);
  } catch (const std::exception& e) {
    return Fail("internal", e.what());
  }
  return Fail("usage", "no subcommand", "", 2);
}
