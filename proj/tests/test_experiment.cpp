#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "commitrep/experiment.hpp"

using namespace commitrep;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path Scratch(const std::string& name) {
  const char* env = std::getenv("COMMITREP_TEST_TMP");
  const fs::path root = env ? fs::path(env) : fs::temp_directory_path() / "commitrep-tests";
  const fs::path dir = root / name;
  fs::remove_all(dir);
  return dir;
}

std::string Slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::string FieldOf(const json& j) {
  try {
    FromJson(j);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "";
}

ExperimentConfig SmallEvolve() {
  ExperimentConfig c;
  c.kind = ExperimentKind::kEvolve;
  c.b_list = {1.5, 5.5};
  c.turns = 3000;
  c.replicates = 3;
  c.seed_base = 11;
  c.write_runs = true;
  return c;
}

}  // namespace

TEST_SUITE("experiment") {

TEST_CASE("config round trip through JSON") {
  const ExperimentConfig defaults;
  CHECK(FromJson(ToJson(defaults)) == defaults);

  ExperimentConfig c;
  c.kind = ExperimentKind::kReputationValidate;
  c.benefit = 9.5;
  c.epsilon = 0.05;
  c.regime = Regime::kInfiniteHorizon;
  c.b_list = {1.5, 5.5};
  c.c_a_list = {0.25, 1.75};
  c.epsilon_list = {0.0, 0.05};
  c.regime_list = {Regime::kShortHorizon, Regime::kLongHorizon};
  c.strategies = {strategies::kRA, strategies::k0Minus};
  c.product_order = ProductOrder::kFromInvaderMinority;
  c.seed_base = 18446744073709551000ULL;
  c.norm = Norm::FromInts(1, -1, 1, 0);
  c.rounds = 1000;
  c.compositions = 3;
  c.write_runs = true;
  c.threads = 2;
  c.out = "somewhere";
  const json j = ToJson(c);
  CHECK(FromJson(j) == c);
  CHECK(ToJson(FromJson(j)) == j);
  // and through text
  CHECK(FromJson(json::parse(j.dump())) == c);
}

TEST_CASE("missing keys keep defaults") {
  const auto c = FromJson(json{{"kind", "fixation"}, {"benefit", 1.5}});
  CHECK(c.kind == ExperimentKind::kFixation);
  CHECK(c.benefit == 1.5);
  CHECK(c.arrangement_cost == 1.0);
  CHECK(c.strategy_set().size() == 8);
}

TEST_CASE("validation errors name the field") {
  CHECK(FieldOf(json{{"epsilon", 1.5}}) == "epsilon");
  CHECK(FieldOf(json{{"bogus", 1}}) == "bogus");
  CHECK(FieldOf(json{{"turns", "many"}}) == "turns");
  CHECK(FieldOf(json{{"turns", 1.5}}) == "turns");
  CHECK(FieldOf(json{{"kind", "dance"}}) == "kind");
  CHECK(FieldOf(json{{"regime", "2z"}}) == "regime");
  CHECK(FieldOf(json{{"b_list", {1.5, "x"}}}) == "b_list[1]");
  CHECK(FieldOf(json{{"c_a_list", {-1.0}}}) == "c_a_list[0]");
  CHECK(FieldOf(json{{"regime_list", {"2a", "3"}}}) == "regime_list[1]");
  CHECK(FieldOf(json{{"strategies", {"RA", "RA"}}}) == "strategies");
  CHECK(FieldOf(json{{"kind", "fixation"}, {"strategies", {"RA"}}}) == "strategies");
  CHECK(FieldOf(json{{"rounds", 11}}) == "rounds");
  CHECK(FieldOf(json{{"norm", {1, -1, 0}}}) == "norm");
  CHECK(FieldOf(json{{"norm", {1, -1, 0, 2}}}) == "norm");
  CHECK(FieldOf(json{{"seed_base", -1}}) == "seed_base");
  CHECK(FieldOf(json{{"replicates", 0}}) == "replicates");
  CHECK(FieldOf(json{{"population_size", 1}}) == "population_size");
  CHECK(FieldOf(json{{"write_runs", 1}}) == "write_runs");
  CHECK(FieldOf(json::array()) == "config");
}

TEST_CASE("manifest round trip and LoadConfig") {
  auto c = SmallEvolve();
  c.out = Scratch("manifest").string();
  const auto summary = RunConfig(c);
  CHECK(summary.manifest["schema"] == "commitrep.manifest/1");
  CHECK(summary.manifest["tool_version"] == COMMITREP_VERSION);
  CHECK(summary.manifest["seeds"]["replicates"] == json({11, 12, 13}));
  CHECK(LoadConfig(summary.out / "manifest.json") == c);

  const fs::path cfg = summary.out / "config.json";
  std::ofstream(cfg) << ToJson(c).dump(2);
  CHECK(LoadConfig(cfg) == c);

  std::ofstream(summary.out / "broken.json") << "{ not json";
  CHECK_THROWS_AS(LoadConfig(summary.out / "broken.json"), ConfigError);
  CHECK_THROWS_AS(LoadConfig(summary.out / "missing.json"), std::runtime_error);
}

TEST_CASE("evolve with zero turns writes only the initial state") {
  ExperimentConfig c;
  c.kind = ExperimentKind::kEvolve;
  c.turns = 0;
  c.write_runs = true;
  c.out = Scratch("turns0").string();
  RunConfig(c);
  CHECK(Slurp(fs::path(c.out) / "trajectories.csv") ==
        "# schema: commitrep.trajectories/1\n"
        "b,c_a,epsilon,regime,replicate,seed,turn,n_1+,n_1A,n_1-,n_R+,n_RA,n_R-,n_0+,n_0A,n_0-,cooperation\n"
        "5.5,1,0.01,2b,0,1,0,0,0,0,0,0,0,0,0,100,0\n");
  const std::string mean = Slurp(fs::path(c.out) / "trajectory_mean.csv");
  CHECK(mean.find("\n5.5,1,0.01,2b,0,0,0,0,0,0,0,0,0,1,0,1\n") != std::string::npos);
}

TEST_CASE("every kind produces byte-identical CSVs on re-run") {
  std::vector<ExperimentConfig> configs;
  configs.push_back(SmallEvolve());
  ExperimentConfig sweep;
  sweep.kind = ExperimentKind::kSweep;
  sweep.b_list = {1.5, 5.5};
  sweep.c_a_list = {0.5, 1.5};
  sweep.epsilon_list = {0.0, 0.05};
  sweep.turns = 2000;
  sweep.replicates = 2;
  configs.push_back(sweep);
  ExperimentConfig fixation;
  fixation.kind = ExperimentKind::kFixation;
  fixation.b_list = {1.5, 9.5};
  configs.push_back(fixation);
  ExperimentConfig rep;
  rep.kind = ExperimentKind::kReputationValidate;
  rep.turns = 3000;
  rep.replicates = 2;
  rep.compositions = 6;
  rep.rounds = 2000;
  rep.regime_list = {Regime::kShortHorizon, Regime::kInfiniteHorizon};
  configs.push_back(rep);
  ExperimentConfig comp = rep;
  comp.kind = ExperimentKind::kCompositionsSample;
  configs.push_back(comp);

  int idx = 0;
  for (auto c : configs) {
    CAPTURE(to_string(c.kind));
    c.threads = 1;
    c.out = Scratch("det" + std::to_string(idx) + "a").string();
    const auto first = RunConfig(c);
    // rerun from the manifest, with a different thread count
    auto again = LoadConfig(first.out / "manifest.json");
    again.threads = 3;
    again.out = Scratch("det" + std::to_string(idx) + "b").string();
    const auto second = RunConfig(again);
    REQUIRE(first.files == second.files);
    for (const auto& f : first.files) {
      if (f == "manifest.json") continue;
      CAPTURE(f);
      const std::string a = Slurp(first.out / f);
      if (f.ends_with(".csv")) CHECK(a.rfind("# schema: commitrep.", 0) == 0);
      CHECK(a == Slurp(second.out / f));
    }
    ++idx;
  }
}

TEST_CASE("fixation config reproduces the reference anchor") {
  ExperimentConfig c;
  c.kind = ExperimentKind::kFixation;
  c.benefit = 1.5;
  c.out = Scratch("fixation").string();
  RunConfig(c);
  const std::string csv = Slurp(fs::path(c.out) / "fixation.csv");
  const auto pos = csv.find("\nR-,1A,");
  REQUIRE(pos != std::string::npos);
  const double rho = std::stod(csv.substr(pos + 7));
  CHECK(std::abs(rho - 0.8624) < 0.005);
  CHECK(Slurp(fs::path(c.out) / "fixation_tables.txt").find("86.24%") != std::string::npos);
}

TEST_CASE("reputation-validate counts compositions without observers") {
  ExperimentConfig c;
  c.kind = ExperimentKind::kReputationValidate;
  c.benefit = 1.5;  // mostly defectors, so observer-free compositions are common
  c.turns = 2000;
  c.compositions = 15;
  c.rounds = 1000;
  c.out = Scratch("exclusion").string();
  const auto summary = RunConfig(c);
  const auto& counts = summary.manifest["counts"];
  CHECK(counts["compositions_sampled"] == 15);
  CHECK(counts["compositions_excluded_no_observers"].get<int>() > 0);
  const std::string scen = Slurp(fs::path(c.out) / "reputation_scenarios.csv");
  const int excluded = counts["compositions_excluded_no_observers"].get<int>();
  CHECK(scen.find("2b_e0.01_b1.5_c1,1.5,1,0.01,2b,15,0," + std::to_string(excluded) + "," +
                  std::to_string(15 - excluded) + "\n") != std::string::npos);
  // excluded compositions contribute no rows
  std::istringstream rows(Slurp(fs::path(c.out) / "reputation.csv"));
  std::string line;
  std::getline(rows, line);
  std::getline(rows, line);
  while (std::getline(rows, line)) {
    // strategy, mean, mean excluding self, num_observers follow the quoted composition
    std::istringstream fields(line.substr(line.rfind('"') + 2));
    std::string field;
    for (int k = 0; k < 4; ++k) std::getline(fields, field, ',');
    CHECK(std::stoi(field) > 0);
  }
}

TEST_CASE("warnings and sampling with replacement are reported") {
  ExperimentConfig c;
  c.kind = ExperimentKind::kCompositionsSample;
  c.benefit = 1.0;
  c.turns = 10;
  c.snapshot_stride = 10;
  c.compositions = 5;  // only 2 snapshots exist
  c.out = Scratch("warnings").string();
  const auto summary = RunConfig(c);
  REQUIRE(summary.warnings.size() == 2);
  CHECK(summary.warnings[0].find("Prisoner") != std::string::npos);
  CHECK(summary.warnings[1].find("replacement") != std::string::npos);
}

TEST_CASE("output directory errors") {
  const fs::path blocker = Scratch("blocker");
  fs::create_directories(blocker.parent_path());
  std::ofstream(blocker) << "a file, not a directory";
  ExperimentConfig c;
  c.kind = ExperimentKind::kFixation;
  c.out = (blocker / "sub").string();
  CHECK_THROWS_AS(RunConfig(c), std::runtime_error);
}

TEST_CASE("default output directory honours the environment") {
  ::setenv("COMMITREP_OUT", "/tmp/somewhere-else", 1);
  CHECK(DefaultOutputDirectory() == fs::path("/tmp/somewhere-else"));
  ::unsetenv("COMMITREP_OUT");
  CHECK(DefaultOutputDirectory() == fs::path("commitrep-out"));
}

TEST_CASE("figure configs") {
  const auto desk = FigureConfigs(false);
  REQUIRE(desk.size() == 5);
  CHECK(desk[0].first == "fig2");
  CHECK(desk[0].second.b_list.size() == 5);
  CHECK(desk[0].second.c_a_list.size() == 5);
  CHECK(desk[0].second.replicates == 20);
  CHECK(desk[1].second.replicates == 100);
  CHECK(desk[4].second.regime_list.size() == 3);
  for (const auto& [name, c] : desk) CHECK_NOTHROW(c.Validate());
  const auto full = FigureConfigs(true);
  CHECK(full[0].second.replicates == 100);
  CHECK(full[4].second.compositions == 1000);
  CHECK(full[4].second.rounds == 1000000);
}

}  // TEST_SUITE
