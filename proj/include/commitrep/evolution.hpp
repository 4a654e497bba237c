#ifndef COMMITREP_EVOLUTION_HPP
#define COMMITREP_EVOLUTION_HPP

#include <cstdint>
#include <ostream>
#include <span>
#include <vector>

#include "commitrep/analytic.hpp"
#include "commitrep/random.hpp"

namespace commitrep {

struct EvolutionParams {
  std::int64_t population_size = 100;
  std::int64_t turns = 100000;
  double mutation_rate = 0.01;
  double selection_strength = 1.0;
  std::uint64_t seed = 1;
  // Snapshot every `snapshot_stride` turns; the final turn is always kept.
  std::int64_t snapshot_stride = 100;
  // Fraction of final turns over which `Trajectory::tail_frequency` is averaged.
  double tail_fraction = 0.1;
  bool record_cooperation = false;
  bool record_events = false;

  // Throws std::invalid_argument naming the offending field.
  void Validate() const;
};

// Expected fraction of cooperative acts per interaction under predicted reputations.
double CooperationFrequency(const PopulationState& pop, const GameParams& params);

// Fermi imitation probability for a model earning `payoff_gap` more than the learner.
double ImitationProbability(double payoff_gap, double selection_strength);

// One mutation or social learning event; recomputes payoffs from scratch.
PopulationState EvolutionStep(const PopulationState& pop, const GameParams& game, const EvolutionParams& evo, Rng& rng);

enum class EventKind : std::uint8_t { kMutation, kImitation };

struct EvolutionEvent {
  std::int64_t turn = 0;
  EventKind kind = EventKind::kMutation;
  Strategy from;
  Strategy to;
};

struct Snapshot {
  std::int64_t turn = 0;
  PopulationState state;
  double cooperation = 0.0;
};

struct Trajectory {
  std::vector<Snapshot> snapshots;
  // Cooperation after every turn; only filled when `record_cooperation` is set.
  std::vector<double> cooperation;
  // Mean over the states after turns 1..T (the initial state when T = 0).
  double mean_cooperation = 0.0;
  PerStrategy<double> tail_frequency{};
  std::int64_t tail_turns = 0;
  std::vector<EvolutionEvent> events;

  void WriteCsv(std::ostream& os) const;
};

Trajectory RunEvolution(const GameParams& game, const EvolutionParams& evo);

// Starting composition: everybody plays 0-.
PopulationState InitialPopulation(std::int64_t population_size);

struct SweepPoint {
  double benefit = 0.0;
  double arrangement_cost = 0.0;
  double mean_cooperation = 0.0;
  std::int64_t replicates = 0;
  std::uint64_t seed_base = 0;
  double seconds = 0.0;
};

struct SweepResult {
  std::vector<double> benefits;
  std::vector<double> arrangement_costs;
  // Row-major over (benefit, arrangement_cost).
  std::vector<SweepPoint> points;

  const SweepPoint& at(std::size_t benefit_idx, std::size_t cost_idx) const {
    return points[benefit_idx * arrangement_costs.size() + cost_idx];
  }
  // Arrangement costs at which cooperation at the largest benefit is below the
  // maximum over benefits for that cost.
  std::vector<double> CostsWithDeclineAtHighBenefit() const;

  void WriteCsv(std::ostream& os) const;
};

// Replicate r of every grid point runs with seed `evo.seed + r`.
// Throws std::invalid_argument on an empty grid or replicates < 1.
SweepResult Sweep(std::span<const double> benefits, std::span<const double> arrangement_costs,
                  const GameParams& game_template, const EvolutionParams& evo, std::int64_t replicates,
                  unsigned threads = 0);

}  // namespace commitrep

#endif  // COMMITREP_EVOLUTION_HPP
