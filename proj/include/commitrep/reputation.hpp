#ifndef COMMITREP_REPUTATION_HPP
#define COMMITREP_REPUTATION_HPP

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "commitrep/analytic.hpp"
#include "commitrep/evolution.hpp"
#include "commitrep/random.hpp"
#include "commitrep/strategy.hpp"

namespace commitrep {

struct RoundRecord;

// Every player's private binary opinion of every player. Only rows of
// reputation-conditional players (observers) are ever written.
class ImageMatrix {
 public:
  // All opinions start good.
  explicit ImageMatrix(std::span<const Strategy> players);

  std::size_t size() const { return players_.size(); }
  Strategy strategy(std::size_t player) const { return players_[player]; }
  const std::vector<Strategy>& players() const { return players_; }
  const std::vector<std::size_t>& observers() const { return observers_; }
  bool is_observer(std::size_t player) const { return players_[player].is_observer(); }

  Opinion opinion(std::size_t observer, std::size_t target) const {
    return static_cast<Opinion>(opinions_[observer * size() + target]);
  }
  // Throws std::logic_error when `observer` is not an observer.
  void set_opinion(std::size_t observer, std::size_t target, Opinion value);

  // Number of observers holding a good opinion of `target`.
  std::int64_t good_count(std::size_t target) const { return good_counts_[target]; }
  // Fraction of observers holding a good opinion of `target`; nullopt without observers.
  std::optional<double> reputation(std::size_t target) const;

  const std::vector<std::uint8_t>& raw() const { return opinions_; }

 private:
  friend RoundRecord PlayRound(ImageMatrix& matrix, const Norm& norm, double epsilon, Rng& rng);
  std::vector<Strategy> players_;
  std::vector<std::size_t> observers_;
  std::vector<std::uint8_t> opinions_;
  std::vector<std::int64_t> good_counts_;
};

struct RoundRecord {
  std::size_t x = 0;
  std::size_t y = 0;
  bool offer_x = false;
  bool offer_y = false;
  bool arrangement = false;
  bool cooperate_x = false;
  bool cooperate_y = false;
};

// One commitment / cooperation / assessment round between two distinct random
// players. Every observer assesses both players; each (observer, player)
// assessment misreads the cooperation bit independently with probability epsilon.
RoundRecord PlayRound(ImageMatrix& matrix, const Norm& norm, double epsilon, Rng& rng);

struct StrategyReputation {
  Strategy strategy;
  std::int64_t count = 0;
  // Time and player average of the observer-mean opinion over the sampled rounds.
  double mean = 0.0;
  // Same, leaving out observers' opinions of themselves; nullopt when the only
  // observer of this strategy's players is the player itself.
  std::optional<double> mean_excluding_self;
  bool redemption = false;
  ReputationPrediction prediction;
};

struct ReputationReport {
  PopulationState composition;
  std::int64_t num_observers = 0;
  // False when there are no observers; `strategies` is then empty.
  bool reputations_defined = false;
  std::vector<StrategyReputation> strategies;
  GameParams params;
  std::int64_t rounds = 0;
  std::uint64_t seed = 0;

  const StrategyReputation* find(Strategy s) const;
};

// Plays `rounds` rounds from an all-good image matrix and averages reputations
// over the second half. Players are laid out in canonical strategy order.
// Throws std::invalid_argument when `rounds` is odd or negative.
ReputationReport SimulateReputations(const PopulationState& composition, const GameParams& params, const Norm& norm,
                                     std::int64_t rounds, std::uint64_t seed);

struct CompositionSample {
  std::vector<PopulationState> compositions;
  bool with_replacement = false;
};

// Uniform draws over all stored snapshots of all trajectories; without
// replacement unless `count` exceeds the number of snapshots.
// Throws std::invalid_argument when the store holds no snapshots.
CompositionSample SampleCompositions(std::span<const Trajectory> store, std::size_t count, Rng& rng);

// CSV rows: scenario, composition, strategy, mean_reputation, ... one per strategy.
void WriteReputationCsvHeader(std::ostream& os);
void WriteReputationCsvRows(std::ostream& os, const std::string& scenario, const ReputationReport& report);

}  // namespace commitrep

#endif  // COMMITREP_REPUTATION_HPP
