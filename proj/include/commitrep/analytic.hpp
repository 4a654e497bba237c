#ifndef COMMITREP_ANALYTIC_HPP
#define COMMITREP_ANALYTIC_HPP

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "commitrep/strategy.hpp"

namespace commitrep {

template <typename T>
using PerStrategy = std::array<T, kNumStrategies>;

// Assumption about how long players with zero reputation stay excluded
// from arrangements when nobody commits unconditionally.
enum class Regime : std::uint8_t {
  kShortHorizon,     // "2a": none/low/high predictions always hold
  kLongHorizon,      // "2b": fakers without redemption fall to zero
  kInfiniteHorizon,  // "2c": every committing strategy without redemption falls to zero
};

std::string to_string(Regime regime);
Regime ParseRegime(std::string_view text);

struct GameParams {
  double benefit = 5.5;
  double arrangement_cost = 1.0;
  double epsilon = 0.01;
  Regime regime = Regime::kLongHorizon;

  // Cost of cooperating; every payoff is expressed in units of it.
  static constexpr double kCooperationCost = 1.0;

  // Throws std::invalid_argument on c_a < 0 or epsilon outside [0,1].
  // Returns human-readable warnings (benefit <= cost) that do not block a run.
  std::vector<std::string> Validate() const;
};

enum class PredictionKind : std::uint8_t { kNone, kLow, kHigh, kZero };
std::string to_string(PredictionKind kind);

struct ReputationPrediction {
  PredictionKind kind = PredictionKind::kNone;
  double value = 1.0;
};

// Strategy counts of a well-mixed population.
class PopulationState {
 public:
  PopulationState() = default;
  // Throws std::invalid_argument on a total below 2 or negative counts.
  explicit PopulationState(const PerStrategy<std::int64_t>& counts);
  static PopulationState FromMap(const std::map<Strategy, std::int64_t>& counts);
  static PopulationState Homogeneous(Strategy s, std::int64_t n);
  // "RA:60,1A:30,R-:10"
  static PopulationState Parse(std::string_view text);

  std::int64_t count(Strategy s) const { return counts_[s.index()]; }
  std::int64_t size() const { return size_; }
  const PerStrategy<std::int64_t>& counts() const { return counts_; }
  double frequency(Strategy s) const { return static_cast<double>(count(s)) / static_cast<double>(size_); }
  bool contains(Strategy s) const { return count(s) > 0; }
  std::int64_t count_observers() const;

  // Moves one player from `from` to `to`. Requires count(from) >= 1.
  void Move(Strategy from, Strategy to);

  std::string to_string() const;

  friend bool operator==(const PopulationState&, const PopulationState&) = default;

 private:
  PerStrategy<std::int64_t> counts_{};
  std::int64_t size_ = 0;
};

// At least one unconditional committer other than one copy of the focal player.
bool RedemptionPossible(const PopulationState& pop, Strategy focal);

ReputationPrediction PredictReputation(Strategy strategy, const GameParams& params, bool redemption);

// Probability that none of `num_observers` misperceives an action.
double AbsorptionProbability(std::int64_t num_observers, double epsilon);

double CommitProbability(Strategy strategy, double partner_reputation);

// Expected probability that `strategy` cooperates given the arrangement probability.
double CooperationProbability(Strategy strategy, double arrangement_probability);

// Expected payoff of i against j given the reputations of both.
double PairwisePayoff(Strategy i, Strategy j, double rep_i, double rep_j, const GameParams& params);

// Predicted reputation of every strategy present in `pop`; absent strategies are nullopt.
PerStrategy<std::optional<double>> RegimeReputations(const PopulationState& pop, const GameParams& params);

// Dense payoff matrix over a subset of the strategy space.
class PayoffMatrix {
 public:
  PayoffMatrix() = default;

  bool contains(Strategy s) const { return included_[s.index()]; }
  // Throws std::out_of_range if either strategy is not part of the matrix.
  double at(Strategy i, Strategy j) const;
  // Unchecked access for hot loops.
  double operator()(std::size_t i, std::size_t j) const { return values_[i * kNumStrategies + j]; }
  std::vector<Strategy> strategies() const;

  void WriteCsv(std::ostream& os) const;

 private:
  friend PayoffMatrix BuildPayoffMatrix(std::span<const Strategy>, const PerStrategy<std::optional<double>>&,
                                        const GameParams&);
  std::array<double, kNumStrategies * kNumStrategies> values_{};
  PerStrategy<bool> included_{};
};

// Throws std::invalid_argument if a listed strategy has no reputation.
PayoffMatrix BuildPayoffMatrix(std::span<const Strategy> strategy_set,
                               const PerStrategy<std::optional<double>>& reputations, const GameParams& params);

// Payoff matrix over the strategies present in `pop`, with regime-consistent reputations.
PayoffMatrix PopulationPayoffMatrix(const PopulationState& pop, const GameParams& params);

// Mean payoff of one player of strategy i against the rest of the population.
// Throws std::invalid_argument if i is absent from the population.
double AveragePayoff(Strategy i, const PopulationState& pop, const PayoffMatrix& payoffs);

}  // namespace commitrep

#endif  // COMMITREP_ANALYTIC_HPP
