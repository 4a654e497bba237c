#ifndef COMMITREP_EXPERIMENT_HPP
#define COMMITREP_EXPERIMENT_HPP

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "commitrep/analytic.hpp"
#include "commitrep/evolution.hpp"
#include "commitrep/fixation.hpp"
#include "commitrep/strategy.hpp"

namespace commitrep {

enum class ExperimentKind : std::uint8_t { kEvolve, kSweep, kFixation, kReputationValidate, kCompositionsSample };

std::string to_string(ExperimentKind kind);
ExperimentKind ParseExperimentKind(std::string_view text);

// Invalid configuration; `field()` is the offending key.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

// Flat key set, one member per JSON key (same names).
//
// Every kind runs over the grid b_list x c_a_list x epsilon_list x regime_list;
// an empty list stands for the single scalar value (benefit, arrangement_cost,
// epsilon, regime). Replicate r of every grid point is seeded seed_base + r.
struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::kEvolve;

  double benefit = 5.5;
  double arrangement_cost = 1.0;
  double epsilon = 0.01;
  Regime regime = Regime::kLongHorizon;

  std::int64_t population_size = 100;
  std::int64_t turns = 100000;
  double mutation_rate = 0.01;
  double selection_strength = 1.0;
  std::int64_t snapshot_stride = 100;
  double tail_fraction = 0.1;

  std::int64_t replicates = 1;
  std::uint64_t seed_base = 1;
  std::string out;

  std::vector<double> b_list;
  std::vector<double> c_a_list;
  std::vector<double> epsilon_list;
  std::vector<Regime> regime_list;

  // fixation: strategy set (rows/columns of the table) and product order
  std::vector<Strategy> strategies;
  ProductOrder product_order = ProductOrder::kFromInvaderMajority;

  // reputation-validate / compositions-sample
  std::int64_t rounds = 1000000;
  std::int64_t compositions = 20;
  Norm norm = Norm::UpholdArrangements();

  // evolve: also write every replicate's trajectory
  bool write_runs = false;
  // 0 = all cores; never affects results
  std::int64_t threads = 0;

  // Throws ConfigError.
  void Validate() const;

  std::vector<double> benefits() const;
  std::vector<double> arrangement_costs() const;
  std::vector<double> epsilons() const;
  std::vector<Regime> regimes() const;
  std::vector<Strategy> strategy_set() const;

  GameParams game() const;
  EvolutionParams evolution() const;

  bool operator==(const ExperimentConfig&) const = default;
};

nlohmann::json ToJson(const ExperimentConfig& config);
// Strict: unknown keys and wrongly typed values raise ConfigError; missing keys
// keep their defaults. The result is validated.
ExperimentConfig FromJson(const nlohmann::json& j);

// Reads a config file or a manifest written by RunConfig (its "config" object).
ExperimentConfig LoadConfig(const std::filesystem::path& path);

// Default output directory: $COMMITREP_OUT, else "commitrep-out".
std::filesystem::path DefaultOutputDirectory();

struct RunSummary {
  std::filesystem::path out;
  std::vector<std::string> files;
  std::vector<std::string> warnings;
  double wall_seconds = 0.0;
  nlohmann::json manifest;
};

// Runs the experiment and writes its CSVs plus manifest.json into config.out
// (DefaultOutputDirectory() when empty). CSV content depends only on the config.
// Throws ConfigError for an invalid config and std::runtime_error for I/O failures.
RunSummary RunConfig(const ExperimentConfig& config);

// Configs behind reproduce-figures, keyed fig2, fig3a, fig3b, fig3c, fig4.
std::vector<std::pair<std::string, ExperimentConfig>> FigureConfigs(bool full_scale);

// Runs every figure config into out/<figure>/ and copies each figure's main
// CSV to out/<figure>.csv. Returns the figure CSV paths.
std::vector<std::filesystem::path> ReproduceFigures(const std::filesystem::path& out, bool full_scale,
                                                    std::int64_t threads = 0);

}  // namespace commitrep

#endif  // COMMITREP_EXPERIMENT_HPP
