#include "commitrep/experiment.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "commitrep/format.hpp"
#include "commitrep/parallel.hpp"
#include "commitrep/reputation.hpp"

namespace commitrep {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kManifestSchema = "commitrep.manifest/1";

struct GridPoint {
  double benefit;
  double arrangement_cost;
  double epsilon;
  Regime regime;
};

std::vector<GridPoint> Grid(const ExperimentConfig& c) {
  std::vector<GridPoint> grid;
  for (auto regime : c.regimes()) {
    for (double eps : c.epsilons()) {
      for (double b : c.benefits()) {
        for (double ca : c.arrangement_costs()) grid.push_back({b, ca, eps, regime});
      }
    }
  }
  return grid;
}

GameParams PointGame(const ExperimentConfig& c, const GridPoint& p) {
  GameParams game = c.game();
  game.benefit = p.benefit;
  game.arrangement_cost = p.arrangement_cost;
  game.epsilon = p.epsilon;
  game.regime = p.regime;
  return game;
}

std::string ScenarioId(const GridPoint& p) {
  return to_string(p.regime) + "_e" + FormatDouble(p.epsilon) + "_b" + FormatDouble(p.benefit) + "_c" +
         FormatDouble(p.arrangement_cost);
}

// Leading columns shared by every grid-keyed CSV.
std::string PointColumns(const GridPoint& p) {
  return FormatDouble(p.benefit) + ',' + FormatDouble(p.arrangement_cost) + ',' + FormatDouble(p.epsilon) + ',' +
         to_string(p.regime);
}

// Seeds for streams other than the evolution replicates.
std::uint64_t DeriveSeed(std::uint64_t base, std::uint64_t stream, std::uint64_t index) {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (stream * 0x100000001B3ULL + index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}
constexpr std::uint64_t kSamplingStream = 1;
constexpr std::uint64_t kReputationStream = 2;

double Seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// Collects output files; each is written once, whole.
class Output {
 public:
  explicit Output(fs::path root) : root_(std::move(root)) {
    std::error_code ec;
    fs::create_directories(root_, ec);
    if (ec || !fs::is_directory(root_)) {
      throw std::runtime_error("cannot create output directory " + root_.string() + ": " + ec.message());
    }
  }

  void Write(const std::string& name, const std::string& content) {
    const fs::path path = root_ / name;
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
    os << content;
    os.close();
    if (!os) throw std::runtime_error("write failed for " + path.string());
    files_.push_back(name);
  }

  const fs::path& root() const { return root_; }
  const std::vector<std::string>& files() const { return files_; }

 private:
  fs::path root_;
  std::vector<std::string> files_;
};

struct RunContext {
  const ExperimentConfig& config;
  Output& out;
  json seeds = json::object();
  json timings = json::array();
  json counts = json::object();
  std::vector<std::string> warnings;
};

std::string StrategyColumns(const std::string& prefix) {
  std::string cols;
  for (auto s : AllStrategies()) cols += ',' + prefix + s.name();
  return cols;
}

std::vector<std::uint64_t> ReplicateSeeds(const ExperimentConfig& c) {
  std::vector<std::uint64_t> seeds;
  for (std::int64_t r = 0; r < c.replicates; ++r) seeds.push_back(c.seed_base + static_cast<std::uint64_t>(r));
  return seeds;
}

// Runs all replicates of one grid point in chunks, handing each finished
// trajectory to `consume` in replicate order.
void ForEachReplicate(const ExperimentConfig& c, const GameParams& game,
                      const std::function<void(std::int64_t, const Trajectory&)>& consume) {
  constexpr std::int64_t kChunk = 64;
  for (std::int64_t first = 0; first < c.replicates; first += kChunk) {
    const std::int64_t n = std::min(kChunk, c.replicates - first);
    std::vector<Trajectory> runs(static_cast<std::size_t>(n));
    ParallelFor(runs.size(), static_cast<unsigned>(c.threads), [&](std::size_t i) {
      EvolutionParams evo = c.evolution();
      evo.seed = c.seed_base + static_cast<std::uint64_t>(first) + i;
      runs[i] = RunEvolution(game, evo);
    });
    for (std::int64_t i = 0; i < n; ++i) consume(first + i, runs[static_cast<std::size_t>(i)]);
  }
}

void RunEvolve(RunContext& ctx) {
  const auto& c = ctx.config;
  std::ostringstream mean_csv;
  std::ostringstream summary_csv;
  std::ostringstream runs_csv;
  mean_csv << "# schema: commitrep.trajectory_mean/1\n"
           << "b,c_a,epsilon,regime,turn" << StrategyColumns("f_") << ",cooperation,replicates\n";
  summary_csv << "# schema: commitrep.evolve_summary/1\n"
              << "b,c_a,epsilon,regime,replicate,seed,mean_cooperation,tail_turns" << StrategyColumns("tail_f_")
              << '\n';
  runs_csv << "# schema: commitrep.trajectories/1\n"
           << "b,c_a,epsilon,regime,replicate,seed,turn" << StrategyColumns("n_") << ",cooperation\n";
  ctx.seeds["replicates"] = ReplicateSeeds(c);

  const auto n = static_cast<double>(c.population_size);
  for (const auto& point : Grid(c)) {
    const auto start = std::chrono::steady_clock::now();
    const GameParams game = PointGame(c, point);
    const std::string cols = PointColumns(point);
    std::vector<std::int64_t> turns;
    std::vector<std::array<double, kNumStrategies>> freq_sum;
    std::vector<double> coop_sum;
    ForEachReplicate(c, game, [&](std::int64_t r, const Trajectory& traj) {
      if (r == 0) {
        for (const auto& snap : traj.snapshots) turns.push_back(snap.turn);
        freq_sum.assign(turns.size(), {});
        coop_sum.assign(turns.size(), 0.0);
      }
      for (std::size_t t = 0; t < traj.snapshots.size(); ++t) {
        const auto& snap = traj.snapshots[t];
        for (std::size_t s = 0; s < kNumStrategies; ++s) {
          freq_sum[t][s] += static_cast<double>(snap.state.counts()[s]) / n;
        }
        coop_sum[t] += snap.cooperation;
      }
      const std::uint64_t seed = c.seed_base + static_cast<std::uint64_t>(r);
      summary_csv << cols << ',' << r << ',' << seed << ',' << FormatDouble(traj.mean_cooperation) << ','
                  << traj.tail_turns;
      for (double f : traj.tail_frequency) summary_csv << ',' << FormatDouble(f);
      summary_csv << '\n';
      if (c.write_runs) {
        for (const auto& snap : traj.snapshots) {
          runs_csv << cols << ',' << r << ',' << seed << ',' << snap.turn;
          for (auto count : snap.state.counts()) runs_csv << ',' << count;
          runs_csv << ',' << FormatDouble(snap.cooperation) << '\n';
        }
      }
    });
    const auto reps = static_cast<double>(c.replicates);
    for (std::size_t t = 0; t < turns.size(); ++t) {
      mean_csv << cols << ',' << turns[t];
      for (double f : freq_sum[t]) mean_csv << ',' << FormatDouble(f / reps);
      mean_csv << ',' << FormatDouble(coop_sum[t] / reps) << ',' << c.replicates << '\n';
    }
    ctx.timings.push_back({{"scenario", ScenarioId(point)}, {"seconds", Seconds(start)}});
  }
  ctx.out.Write("trajectory_mean.csv", mean_csv.str());
  ctx.out.Write("evolve_summary.csv", summary_csv.str());
  if (c.write_runs) ctx.out.Write("trajectories.csv", runs_csv.str());
}

void RunSweep(RunContext& ctx) {
  const auto& c = ctx.config;
  std::ostringstream csv;
  csv << "# schema: commitrep.sweep/1\n"
      << "b,c_a,mean_cooperation,replicates,seed_base,epsilon,regime,s,mu\n";
  ctx.seeds["replicates"] = ReplicateSeeds(c);
  const auto benefits = c.benefits();
  const auto costs = c.arrangement_costs();
  for (auto regime : c.regimes()) {
    for (double eps : c.epsilons()) {
      GameParams game = c.game();
      game.epsilon = eps;
      game.regime = regime;
      EvolutionParams evo = c.evolution();
      evo.seed = c.seed_base;
      const SweepResult result = Sweep(benefits, costs, game, evo, c.replicates, static_cast<unsigned>(c.threads));
      for (const auto& p : result.points) {
        csv << FormatDouble(p.benefit) << ',' << FormatDouble(p.arrangement_cost) << ','
            << FormatDouble(p.mean_cooperation) << ',' << p.replicates << ',' << p.seed_base << ','
            << FormatDouble(eps) << ',' << to_string(regime) << ',' << FormatDouble(c.selection_strength) << ','
            << FormatDouble(c.mutation_rate) << '\n';
        ctx.timings.push_back(
            {{"scenario", ScenarioId({p.benefit, p.arrangement_cost, eps, regime})}, {"seconds", p.seconds}});
      }
    }
  }
  ctx.out.Write("sweep.csv", csv.str());
}

void RunFixation(RunContext& ctx) {
  const auto& c = ctx.config;
  std::ostringstream csv;
  std::ostringstream text;
  bool first = true;
  const auto set = c.strategy_set();
  for (const auto& point : Grid(c)) {
    const auto start = std::chrono::steady_clock::now();
    const FixationTable table =
        ComputeFixationTable(set, PointGame(c, point), c.population_size, c.selection_strength, c.product_order);
    table.WriteCsv(csv, first);
    first = false;
    text << "# b=" << FormatDouble(point.benefit) << " c_a=" << FormatDouble(point.arrangement_cost)
         << " epsilon=" << FormatDouble(point.epsilon) << " regime=" << to_string(point.regime)
         << " N=" << c.population_size << " s=" << FormatDouble(c.selection_strength)
         << " order=" << to_string(c.product_order) << '\n';
    table.WriteText(text);
    text << '\n';
    ctx.timings.push_back({{"scenario", ScenarioId(point)}, {"seconds", Seconds(start)}});
  }
  ctx.out.Write("fixation.csv", csv.str());
  ctx.out.Write("fixation_tables.txt", text.str());
}

// Evolution runs of one grid point, then `compositions` draws from their snapshots.
CompositionSample SamplePoint(RunContext& ctx, const GridPoint& point, std::size_t point_index) {
  const auto& c = ctx.config;
  std::vector<Trajectory> store;
  store.reserve(static_cast<std::size_t>(c.replicates));
  ForEachReplicate(c, PointGame(c, point), [&](std::int64_t, const Trajectory& traj) { store.push_back(traj); });
  const std::uint64_t seed = DeriveSeed(c.seed_base, kSamplingStream, point_index);
  ctx.seeds["sampling"][ScenarioId(point)] = seed;
  Rng rng(seed);
  CompositionSample sample = SampleCompositions(store, static_cast<std::size_t>(c.compositions), rng);
  if (sample.with_replacement) {
    ctx.warnings.push_back(ScenarioId(point) + ": fewer snapshots than compositions, sampled with replacement");
  }
  return sample;
}

void RunCompositionsSample(RunContext& ctx) {
  const auto& c = ctx.config;
  std::ostringstream csv;
  csv << "# schema: commitrep.compositions/1\n"
      << "scenario,b,c_a,epsilon,regime,sample,with_replacement,composition,num_observers" << StrategyColumns("n_")
      << '\n';
  ctx.seeds["replicates"] = ReplicateSeeds(c);
  const auto grid = Grid(c);
  for (std::size_t p = 0; p < grid.size(); ++p) {
    const auto start = std::chrono::steady_clock::now();
    const CompositionSample sample = SamplePoint(ctx, grid[p], p);
    for (std::size_t i = 0; i < sample.compositions.size(); ++i) {
      const auto& comp = sample.compositions[i];
      csv << ScenarioId(grid[p]) << ',' << PointColumns(grid[p]) << ',' << i << ','
          << (sample.with_replacement ? 1 : 0) << ",\"" << comp.to_string() << "\"," << comp.count_observers();
      for (auto count : comp.counts()) csv << ',' << count;
      csv << '\n';
    }
    ctx.timings.push_back({{"scenario", ScenarioId(grid[p])}, {"seconds", Seconds(start)}});
  }
  ctx.out.Write("compositions.csv", csv.str());
}

void RunReputationValidate(RunContext& ctx) {
  const auto& c = ctx.config;
  std::ostringstream csv;
  std::ostringstream scenarios;
  WriteReputationCsvHeader(csv);
  scenarios << "# schema: commitrep.reputation_scenarios/1\n"
            << "scenario,b,c_a,epsilon,regime,sampled,with_replacement,excluded_no_observers,simulated\n";
  ctx.seeds["replicates"] = ReplicateSeeds(c);
  std::int64_t total_excluded = 0;
  std::int64_t total_sampled = 0;
  const auto grid = Grid(c);
  for (std::size_t p = 0; p < grid.size(); ++p) {
    const auto start = std::chrono::steady_clock::now();
    const GridPoint& point = grid[p];
    const GameParams game = PointGame(c, point);
    const CompositionSample sample = SamplePoint(ctx, point, p);

    // Compositions without observers have no reputations; they are only counted.
    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < sample.compositions.size(); ++i) {
      if (sample.compositions[i].count_observers() > 0) kept.push_back(i);
    }
    std::vector<ReputationReport> reports(kept.size());
    ParallelFor(kept.size(), static_cast<unsigned>(c.threads), [&](std::size_t k) {
      const std::size_t i = kept[k];
      const std::uint64_t seed =
          DeriveSeed(c.seed_base, kReputationStream, p * static_cast<std::size_t>(c.compositions) + i);
      reports[k] = SimulateReputations(sample.compositions[i], game, c.norm, c.rounds, seed);
    });
    const std::string id = ScenarioId(point);
    for (const auto& report : reports) WriteReputationCsvRows(csv, id, report);

    const auto sampled = static_cast<std::int64_t>(sample.compositions.size());
    const auto excluded = sampled - static_cast<std::int64_t>(kept.size());
    total_sampled += sampled;
    total_excluded += excluded;
    scenarios << id << ',' << PointColumns(point) << ',' << sampled << ',' << (sample.with_replacement ? 1 : 0) << ','
              << excluded << ',' << kept.size() << '\n';
    ctx.timings.push_back({{"scenario", id}, {"seconds", Seconds(start)}});
  }
  ctx.counts["compositions_sampled"] = total_sampled;
  ctx.counts["compositions_excluded_no_observers"] = total_excluded;
  ctx.out.Write("reputation.csv", csv.str());
  ctx.out.Write("reputation_scenarios.csv", scenarios.str());
}

// --- JSON ----------------------------------------------------------------

template <typename T>
T Get(const json& v, const std::string& key);

template <>
double Get<double>(const json& v, const std::string& key) {
  if (!v.is_number()) throw ConfigError(key, "expected a number");
  return v.get<double>();
}
template <>
std::int64_t Get<std::int64_t>(const json& v, const std::string& key) {
  if (!v.is_number_integer()) throw ConfigError(key, "expected an integer");
  if (v.is_number_unsigned() && v.get<std::uint64_t>() > static_cast<std::uint64_t>(INT64_MAX)) {
    throw ConfigError(key, "integer out of range");
  }
  return v.get<std::int64_t>();
}
template <>
std::uint64_t Get<std::uint64_t>(const json& v, const std::string& key) {
  if (!v.is_number_unsigned()) throw ConfigError(key, "expected a non-negative integer");
  return v.get<std::uint64_t>();
}
template <>
bool Get<bool>(const json& v, const std::string& key) {
  if (!v.is_boolean()) throw ConfigError(key, "expected true or false");
  return v.get<bool>();
}
template <>
std::string Get<std::string>(const json& v, const std::string& key) {
  if (!v.is_string()) throw ConfigError(key, "expected a string");
  return v.get<std::string>();
}

// Converts a parse failure from the core library into a ConfigError for `key`.
template <typename Fn>
auto Parsed(const std::string& key, Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(key, e.what());
  }
}

template <typename T, typename Fn>
std::vector<T> GetList(const json& v, const std::string& key, Fn&& convert) {
  if (!v.is_array()) throw ConfigError(key, "expected a list");
  std::vector<T> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back(convert(v[i], key + "[" + std::to_string(i) + "]"));
  }
  return out;
}

using Setter = std::function<void(ExperimentConfig&, const json&)>;

const std::map<std::string, Setter>& Setters() {
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> t;
    auto number = [](double ExperimentConfig::*m, const std::string& key) {
      return Setter([m, key](ExperimentConfig& c, const json& v) { c.*m = Get<double>(v, key); });
    };
    auto integer = [](std::int64_t ExperimentConfig::*m, const std::string& key) {
      return Setter([m, key](ExperimentConfig& c, const json& v) { c.*m = Get<std::int64_t>(v, key); });
    };
    auto doubles = [](std::vector<double> ExperimentConfig::*m, const std::string& key) {
      return Setter([m, key](ExperimentConfig& c, const json& v) {
        c.*m = GetList<double>(v, key, [](const json& e, const std::string& k) { return Get<double>(e, k); });
      });
    };
    t["kind"] = [](ExperimentConfig& c, const json& v) {
      c.kind = Parsed("kind", [&] { return ParseExperimentKind(Get<std::string>(v, "kind")); });
    };
    t["benefit"] = number(&ExperimentConfig::benefit, "benefit");
    t["arrangement_cost"] = number(&ExperimentConfig::arrangement_cost, "arrangement_cost");
    t["epsilon"] = number(&ExperimentConfig::epsilon, "epsilon");
    t["regime"] = [](ExperimentConfig& c, const json& v) {
      c.regime = Parsed("regime", [&] { return ParseRegime(Get<std::string>(v, "regime")); });
    };
    t["population_size"] = integer(&ExperimentConfig::population_size, "population_size");
    t["turns"] = integer(&ExperimentConfig::turns, "turns");
    t["mutation_rate"] = number(&ExperimentConfig::mutation_rate, "mutation_rate");
    t["selection_strength"] = number(&ExperimentConfig::selection_strength, "selection_strength");
    t["snapshot_stride"] = integer(&ExperimentConfig::snapshot_stride, "snapshot_stride");
    t["tail_fraction"] = number(&ExperimentConfig::tail_fraction, "tail_fraction");
    t["replicates"] = integer(&ExperimentConfig::replicates, "replicates");
    t["seed_base"] = [](ExperimentConfig& c, const json& v) { c.seed_base = Get<std::uint64_t>(v, "seed_base"); };
    t["out"] = [](ExperimentConfig& c, const json& v) { c.out = Get<std::string>(v, "out"); };
    t["b_list"] = doubles(&ExperimentConfig::b_list, "b_list");
    t["c_a_list"] = doubles(&ExperimentConfig::c_a_list, "c_a_list");
    t["epsilon_list"] = doubles(&ExperimentConfig::epsilon_list, "epsilon_list");
    t["regime_list"] = [](ExperimentConfig& c, const json& v) {
      c.regime_list = GetList<Regime>(v, "regime_list", [](const json& e, const std::string& k) {
        return Parsed(k, [&] { return ParseRegime(Get<std::string>(e, k)); });
      });
    };
    t["strategies"] = [](ExperimentConfig& c, const json& v) {
      c.strategies = GetList<Strategy>(v, "strategies", [](const json& e, const std::string& k) {
        return Parsed(k, [&] { return Strategy::Parse(Get<std::string>(e, k)); });
      });
    };
    t["product_order"] = [](ExperimentConfig& c, const json& v) {
      c.product_order = Parsed("product_order", [&] { return ParseProductOrder(Get<std::string>(v, "product_order")); });
    };
    t["rounds"] = integer(&ExperimentConfig::rounds, "rounds");
    t["compositions"] = integer(&ExperimentConfig::compositions, "compositions");
    t["norm"] = [](ExperimentConfig& c, const json& v) {
      const auto ints = GetList<std::int64_t>(
          v, "norm", [](const json& e, const std::string& k) { return Get<std::int64_t>(e, k); });
      if (ints.size() != 4) throw ConfigError("norm", "expected four rules [g11, g10, g01, g00]");
      c.norm = Parsed("norm", [&] {
        return Norm::FromInts(static_cast<int>(ints[0]), static_cast<int>(ints[1]), static_cast<int>(ints[2]),
                              static_cast<int>(ints[3]));
      });
    };
    t["write_runs"] = [](ExperimentConfig& c, const json& v) { c.write_runs = Get<bool>(v, "write_runs"); };
    t["threads"] = integer(&ExperimentConfig::threads, "threads");
    return t;
  }();
  return table;
}

void RequireFinite(double v, const std::string& key) {
  if (!std::isfinite(v)) throw ConfigError(key, "must be finite");
}
void CheckCost(double v, const std::string& key) {
  if (!(v >= 0.0) || !std::isfinite(v)) throw ConfigError(key, "must be finite and >= 0");
}
void CheckProbability(double v, const std::string& key) {
  if (!(v >= 0.0 && v <= 1.0)) throw ConfigError(key, "must lie in [0, 1]");
}

}  // namespace

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kEvolve:
      return "evolve";
    case ExperimentKind::kSweep:
      return "sweep";
    case ExperimentKind::kFixation:
      return "fixation";
    case ExperimentKind::kReputationValidate:
      return "reputation-validate";
    case ExperimentKind::kCompositionsSample:
      return "compositions-sample";
  }
  return "?";
}

ExperimentKind ParseExperimentKind(std::string_view text) {
  for (auto k : {ExperimentKind::kEvolve, ExperimentKind::kSweep, ExperimentKind::kFixation,
                 ExperimentKind::kReputationValidate, ExperimentKind::kCompositionsSample}) {
    if (text == to_string(k)) return k;
  }
  throw std::invalid_argument("unknown experiment kind '" + std::string(text) +
                              "' (expected evolve, sweep, fixation, reputation-validate or compositions-sample)");
}

void ExperimentConfig::Validate() const {
  RequireFinite(benefit, "benefit");
  CheckCost(arrangement_cost, "arrangement_cost");
  CheckProbability(epsilon, "epsilon");
  for (std::size_t i = 0; i < b_list.size(); ++i) RequireFinite(b_list[i], "b_list[" + std::to_string(i) + "]");
  for (std::size_t i = 0; i < c_a_list.size(); ++i) CheckCost(c_a_list[i], "c_a_list[" + std::to_string(i) + "]");
  for (std::size_t i = 0; i < epsilon_list.size(); ++i) {
    CheckProbability(epsilon_list[i], "epsilon_list[" + std::to_string(i) + "]");
  }
  if (population_size < 2) throw ConfigError("population_size", "must be >= 2");
  if (turns < 0) throw ConfigError("turns", "must be >= 0");
  CheckProbability(mutation_rate, "mutation_rate");
  CheckCost(selection_strength, "selection_strength");
  if (snapshot_stride < 1) throw ConfigError("snapshot_stride", "must be >= 1");
  CheckProbability(tail_fraction, "tail_fraction");
  if (replicates < 1) throw ConfigError("replicates", "must be >= 1");
  if (threads < 0 || threads > 4096) throw ConfigError("threads", "must lie in [0, 4096]");
  if (rounds < 2 || rounds % 2 != 0) throw ConfigError("rounds", "must be a positive even number");
  if (compositions < 1) throw ConfigError("compositions", "must be >= 1");

  std::set<Strategy> seen;
  for (auto s : strategies) {
    if (!seen.insert(s).second) throw ConfigError("strategies", "duplicate strategy " + s.name());
  }
  if (kind == ExperimentKind::kFixation && strategy_set().size() < 2) {
    throw ConfigError("strategies", "a fixation table needs at least two strategies");
  }
}

std::vector<double> ExperimentConfig::benefits() const { return b_list.empty() ? std::vector{benefit} : b_list; }
std::vector<double> ExperimentConfig::arrangement_costs() const {
  return c_a_list.empty() ? std::vector{arrangement_cost} : c_a_list;
}
std::vector<double> ExperimentConfig::epsilons() const {
  return epsilon_list.empty() ? std::vector{epsilon} : epsilon_list;
}
std::vector<Regime> ExperimentConfig::regimes() const { return regime_list.empty() ? std::vector{regime} : regime_list; }
std::vector<Strategy> ExperimentConfig::strategy_set() const {
  return strategies.empty() ? ReferenceTableOrder() : strategies;
}

GameParams ExperimentConfig::game() const {
  GameParams g;
  g.benefit = benefit;
  g.arrangement_cost = arrangement_cost;
  g.epsilon = epsilon;
  g.regime = regime;
  return g;
}

EvolutionParams ExperimentConfig::evolution() const {
  EvolutionParams e;
  e.population_size = population_size;
  e.turns = turns;
  e.mutation_rate = mutation_rate;
  e.selection_strength = selection_strength;
  e.seed = seed_base;
  e.snapshot_stride = snapshot_stride;
  e.tail_fraction = tail_fraction;
  return e;
}

json ToJson(const ExperimentConfig& c) {
  json j;
  j["kind"] = to_string(c.kind);
  j["benefit"] = c.benefit;
  j["arrangement_cost"] = c.arrangement_cost;
  j["epsilon"] = c.epsilon;
  j["regime"] = to_string(c.regime);
  j["population_size"] = c.population_size;
  j["turns"] = c.turns;
  j["mutation_rate"] = c.mutation_rate;
  j["selection_strength"] = c.selection_strength;
  j["snapshot_stride"] = c.snapshot_stride;
  j["tail_fraction"] = c.tail_fraction;
  j["replicates"] = c.replicates;
  j["seed_base"] = c.seed_base;
  j["out"] = c.out;
  j["b_list"] = c.b_list;
  j["c_a_list"] = c.c_a_list;
  j["epsilon_list"] = c.epsilon_list;
  j["regime_list"] = json::array();
  for (auto r : c.regime_list) j["regime_list"].push_back(to_string(r));
  j["strategies"] = json::array();
  for (auto s : c.strategies) j["strategies"].push_back(s.name());
  j["product_order"] = to_string(c.product_order);
  j["rounds"] = c.rounds;
  j["compositions"] = c.compositions;
  j["norm"] = json::array();
  for (auto r : c.norm.rules) j["norm"].push_back(static_cast<int>(r));
  j["write_runs"] = c.write_runs;
  j["threads"] = c.threads;
  return j;
}

ExperimentConfig FromJson(const json& j) {
  if (!j.is_object()) throw ConfigError("config", "expected a JSON object");
  ExperimentConfig c;
  const auto& setters = Setters();
  for (const auto& [key, value] : j.items()) {
    const auto it = setters.find(key);
    if (it == setters.end()) throw ConfigError(key, "unknown key");
    it->second(c, value);
  }
  c.Validate();
  return c;
}

ExperimentConfig LoadConfig(const fs::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open config " + path.string());
  json j;
  try {
    j = json::parse(is);
  } catch (const json::parse_error& e) {
    throw ConfigError("config", std::string("not valid JSON: ") + e.what());
  }
  if (j.is_object() && j.contains("schema")) {
    if (j["schema"] != kManifestSchema) throw ConfigError("schema", "unsupported manifest schema");
    if (!j.contains("config")) throw ConfigError("config", "manifest has no config");
    return FromJson(j["config"]);
  }
  return FromJson(j);
}

fs::path DefaultOutputDirectory() {
  const char* env = std::getenv("COMMITREP_OUT");
  return env != nullptr && *env != '\0' ? fs::path(env) : fs::path("commitrep-out");
}

RunSummary RunConfig(const ExperimentConfig& config) {
  config.Validate();
  const auto start = std::chrono::steady_clock::now();
  Output out(config.out.empty() ? DefaultOutputDirectory() : fs::path(config.out));
  RunContext ctx{config, out, json::object(), json::array(), json::object(), {}};

  std::set<std::string> seen;
  for (const auto& point : Grid(config)) {
    for (auto& w : PointGame(config, point).Validate()) {
      if (seen.insert(w).second) ctx.warnings.push_back(std::move(w));
    }
  }

  switch (config.kind) {
    case ExperimentKind::kEvolve:
      RunEvolve(ctx);
      break;
    case ExperimentKind::kSweep:
      RunSweep(ctx);
      break;
    case ExperimentKind::kFixation:
      RunFixation(ctx);
      break;
    case ExperimentKind::kReputationValidate:
      RunReputationValidate(ctx);
      break;
    case ExperimentKind::kCompositionsSample:
      RunCompositionsSample(ctx);
      break;
  }

  RunSummary summary;
  summary.out = out.root();
  summary.files = out.files();
  summary.warnings = ctx.warnings;
  summary.wall_seconds = Seconds(start);

  json manifest;
  manifest["schema"] = kManifestSchema;
  manifest["tool"] = "commitrep";
  manifest["tool_version"] = COMMITREP_VERSION;
  manifest["config"] = ToJson(config);
  manifest["seeds"] = ctx.seeds;
  manifest["files"] = summary.files;
  manifest["wall_seconds"] = summary.wall_seconds;
  manifest["timings"] = ctx.timings;
  manifest["warnings"] = summary.warnings;
  if (!ctx.counts.empty()) manifest["counts"] = ctx.counts;
  out.Write("manifest.json", manifest.dump(2) + "\n");
  summary.files = out.files();
  summary.manifest = std::move(manifest);
  return summary;
}

std::vector<std::pair<std::string, ExperimentConfig>> FigureConfigs(bool full_scale) {
  std::vector<std::pair<std::string, ExperimentConfig>> figs;

  ExperimentConfig fig2;
  fig2.kind = ExperimentKind::kSweep;
  if (full_scale) {
    for (int i = 0; i <= 16; ++i) fig2.b_list.push_back(1.5 + 0.5 * i);
    for (int i = 0; i <= 12; ++i) fig2.c_a_list.push_back(0.25 + 0.125 * i);
    fig2.replicates = 100;
  } else {
    fig2.b_list = {1.5, 3.5, 5.5, 7.5, 9.5};
    fig2.c_a_list = {0.25, 0.625, 1.0, 1.375, 1.75};
    fig2.replicates = 20;
  }
  figs.emplace_back("fig2", fig2);

  ExperimentConfig fig3a;
  fig3a.kind = ExperimentKind::kEvolve;
  fig3a.b_list = {1.5, 5.5, 9.5};
  fig3a.replicates = full_scale ? 1000 : 100;
  figs.emplace_back("fig3a", fig3a);

  ExperimentConfig fig3b;
  fig3b.kind = ExperimentKind::kFixation;
  fig3b.b_list = {1.5, 5.5, 9.5};
  figs.emplace_back("fig3b", fig3b);

  ExperimentConfig fig3c;
  fig3c.kind = ExperimentKind::kEvolve;
  fig3c.b_list = {1.5, 5.5, 9.5};
  fig3c.replicates = 1;
  fig3c.write_runs = true;
  figs.emplace_back("fig3c", fig3c);

  ExperimentConfig fig4;
  fig4.kind = ExperimentKind::kReputationValidate;
  fig4.epsilon_list = {0.05};
  fig4.regime_list = {Regime::kShortHorizon, Regime::kLongHorizon, Regime::kInfiniteHorizon};
  fig4.b_list = {1.5, 5.5, 9.5};
  fig4.c_a_list = {0.25, 1.0, 1.75};
  fig4.replicates = full_scale ? 100 : 2;
  fig4.compositions = full_scale ? 1000 : 10;
  fig4.rounds = full_scale ? 1000000 : 100000;
  figs.emplace_back("fig4", fig4);
  return figs;
}

std::vector<fs::path> ReproduceFigures(const fs::path& out, bool full_scale, std::int64_t threads) {
  static const std::map<std::string, std::string> kMainCsv = {{"fig2", "sweep.csv"},
                                                              {"fig3a", "trajectory_mean.csv"},
                                                              {"fig3b", "fixation.csv"},
                                                              {"fig3c", "trajectories.csv"},
                                                              {"fig4", "reputation.csv"}};
  std::vector<fs::path> written;
  for (auto& [name, config] : FigureConfigs(full_scale)) {
    config.out = (out / name).string();
    config.threads = threads;
    const RunSummary summary = RunConfig(config);
    const fs::path target = out / (name + ".csv");
    std::error_code ec;
    fs::copy_file(summary.out / kMainCsv.at(name), target, fs::copy_options::overwrite_existing, ec);
    if (ec) throw std::runtime_error("cannot write " + target.string() + ": " + ec.message());
    written.push_back(target);
  }
  return written;
}

}  // namespace commitrep
