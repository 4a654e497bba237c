#include "commitrep/evolution.hpp"
#include "commitrep/format.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "commitrep/parallel.hpp"

namespace commitrep {

namespace {

// Payoffs and cooperation level for one composition. Rebuilt whenever the
// composition changes, since predicted reputations depend on it.
struct CompositionModel {
  PayoffMatrix payoffs;
  double cooperation = 0.0;

  CompositionModel(const PopulationState& pop, const GameParams& game)
      : payoffs(PopulationPayoffMatrix(pop, game)), cooperation(CooperationFrequency(pop, game)) {}
};

Strategy StrategyOfPlayer(const PopulationState& pop, std::uint64_t player) {
  std::uint64_t cumulative = 0;
  for (std::size_t i = 0; i < kNumStrategies; ++i) {
    cumulative += static_cast<std::uint64_t>(pop.counts()[i]);
    if (player < cumulative) return Strategy::FromIndex(i);
  }
  throw std::logic_error("player index outside the population");
}

// Applies one turn in place. Returns true when a player switched strategy.
bool StepInPlace(PopulationState& pop, const EvolutionParams& evo, const CompositionModel& model, Rng& rng,
                 EvolutionEvent* event) {
  const auto n = static_cast<std::uint64_t>(pop.size());
  if (rng.Bernoulli(evo.mutation_rate)) {
    const Strategy from = StrategyOfPlayer(pop, rng.Index(n));
    const Strategy to = Strategy::FromIndex(rng.Index(kNumStrategies));
    if (event) *event = {0, EventKind::kMutation, from, to};
    if (from == to) return false;
    pop.Move(from, to);
    return true;
  }
  const std::uint64_t learner_idx = rng.Index(n);
  std::uint64_t model_idx = rng.Index(n - 1);
  if (model_idx >= learner_idx) ++model_idx;
  const Strategy learner = StrategyOfPlayer(pop, learner_idx);
  const Strategy teacher = StrategyOfPlayer(pop, model_idx);
  if (event) *event = {0, EventKind::kImitation, learner, learner};
  if (learner == teacher) return false;
  const double gap = AveragePayoff(teacher, pop, model.payoffs) - AveragePayoff(learner, pop, model.payoffs);
  if (!rng.Bernoulli(ImitationProbability(gap, evo.selection_strength))) return false;
  if (event) event->to = teacher;
  pop.Move(learner, teacher);
  return true;
}

}  // namespace

void EvolutionParams::Validate() const {
  if (population_size < 2) throw std::invalid_argument("population_size must be >= 2");
  if (turns < 0) throw std::invalid_argument("turns must be >= 0");
  if (!(mutation_rate >= 0.0 && mutation_rate <= 1.0)) throw std::invalid_argument("mutation_rate must lie in [0, 1]");
  if (!(selection_strength >= 0.0) || !std::isfinite(selection_strength)) {
    throw std::invalid_argument("selection_strength must be finite and >= 0");
  }
  if (snapshot_stride < 1) throw std::invalid_argument("snapshot_stride must be >= 1");
  if (!(tail_fraction >= 0.0 && tail_fraction <= 1.0)) throw std::invalid_argument("tail_fraction must lie in [0, 1]");
}

double CooperationFrequency(const PopulationState& pop, const GameParams& params) {
  const auto reps = RegimeReputations(pop, params);
  const double n = static_cast<double>(pop.size());
  double total = 0.0;
  for (auto i : AllStrategies()) {
    if (!pop.contains(i)) continue;
    const double rep_i = *reps[i.index()];
    double row = 0.0;
    for (auto j : AllStrategies()) {
      std::int64_t others = pop.count(j);
      if (j == i) --others;
      if (others <= 0) continue;
      const double rep_j = *reps[j.index()];
      const double arrangement = CommitProbability(i, rep_j) * CommitProbability(j, rep_i);
      row += CooperationProbability(i, arrangement) * static_cast<double>(others);
    }
    total += static_cast<double>(pop.count(i)) / n * row / (n - 1.0);
  }
  return total;
}

double ImitationProbability(double payoff_gap, double selection_strength) {
  return 1.0 / (1.0 + std::exp(-selection_strength * payoff_gap));
}

PopulationState EvolutionStep(const PopulationState& pop, const GameParams& game, const EvolutionParams& evo,
                              Rng& rng) {
  PopulationState next = pop;
  const CompositionModel model(pop, game);
  StepInPlace(next, evo, model, rng, nullptr);
  return next;
}

PopulationState InitialPopulation(std::int64_t population_size) {
  return PopulationState::Homogeneous(strategies::k0Minus, population_size);
}

Trajectory RunEvolution(const GameParams& game, const EvolutionParams& evo) {
  evo.Validate();
  game.Validate();
  Rng rng(evo.seed);
  PopulationState pop = InitialPopulation(evo.population_size);
  auto model = std::make_unique<CompositionModel>(pop, game);

  Trajectory traj;
  traj.snapshots.push_back({0, pop, model->cooperation});
  if (evo.turns == 0) {
    traj.mean_cooperation = model->cooperation;
    for (auto s : AllStrategies()) traj.tail_frequency[s.index()] = pop.frequency(s);
    return traj;
  }
  if (evo.record_cooperation) traj.cooperation.reserve(static_cast<std::size_t>(evo.turns));

  traj.tail_turns = evo.tail_fraction > 0.0
                        ? std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(evo.tail_fraction * evo.turns)))
                        : 0;
  const std::int64_t tail_start = evo.turns - traj.tail_turns;
  PerStrategy<std::int64_t> tail_counts{};
  double cooperation_sum = 0.0;

  for (std::int64_t t = 1; t <= evo.turns; ++t) {
    EvolutionEvent event;
    const bool changed = StepInPlace(pop, evo, *model, rng, evo.record_events ? &event : nullptr);
    if (changed) model = std::make_unique<CompositionModel>(pop, game);
    if (evo.record_events && changed) {
      event.turn = t;
      traj.events.push_back(event);
    }
    cooperation_sum += model->cooperation;
    if (evo.record_cooperation) traj.cooperation.push_back(model->cooperation);
    if (t > tail_start) {
      for (std::size_t i = 0; i < kNumStrategies; ++i) tail_counts[i] += pop.counts()[i];
    }
    if (t % evo.snapshot_stride == 0 || t == evo.turns) traj.snapshots.push_back({t, pop, model->cooperation});
  }
  traj.mean_cooperation = cooperation_sum / static_cast<double>(evo.turns);
  if (traj.tail_turns > 0) {
    const double denom = static_cast<double>(traj.tail_turns) * static_cast<double>(pop.size());
    for (std::size_t i = 0; i < kNumStrategies; ++i) traj.tail_frequency[i] = static_cast<double>(tail_counts[i]) / denom;
  }
  return traj;
}

void Trajectory::WriteCsv(std::ostream& os) const {
  std::ostringstream line;
  os << "# schema: commitrep.trajectory/1\n";
  os << "turn";
  for (auto s : AllStrategies()) os << ",n_" << s.name();
  os << ",cooperation\n";
  for (const auto& snap : snapshots) {
    line.str("");
    line << snap.turn;
    for (auto c : snap.state.counts()) line << ',' << c;
    line << ',' << FormatDouble(snap.cooperation);
    os << line.str() << '\n';
  }
}

std::vector<double> SweepResult::CostsWithDeclineAtHighBenefit() const {
  std::vector<double> out;
  if (benefits.size() < 2) return out;
  for (std::size_t c = 0; c < arrangement_costs.size(); ++c) {
    double peak = 0.0;
    for (std::size_t b = 0; b < benefits.size(); ++b) peak = std::max(peak, at(b, c).mean_cooperation);
    if (at(benefits.size() - 1, c).mean_cooperation < peak) out.push_back(arrangement_costs[c]);
  }
  return out;
}

void SweepResult::WriteCsv(std::ostream& os) const {
  std::ostringstream line;
  os << "# schema: commitrep.sweep/1\n";
  os << "b,c_a,mean_cooperation,replicates,seed_base\n";
  for (const auto& p : points) {
    line.str("");
    line << FormatDouble(p.benefit) << ',' << FormatDouble(p.arrangement_cost) << ',' << FormatDouble(p.mean_cooperation) << ',' << p.replicates << ','
         << p.seed_base;
    os << line.str() << '\n';
  }
}

SweepResult Sweep(std::span<const double> benefits, std::span<const double> arrangement_costs,
                  const GameParams& game_template, const EvolutionParams& evo, std::int64_t replicates,
                  unsigned threads) {
  if (benefits.empty() || arrangement_costs.empty()) throw std::invalid_argument("sweep grid must be non-empty");
  if (replicates < 1) throw std::invalid_argument("replicates must be >= 1");
  evo.Validate();

  SweepResult result;
  result.benefits.assign(benefits.begin(), benefits.end());
  result.arrangement_costs.assign(arrangement_costs.begin(), arrangement_costs.end());
  const std::size_t num_points = benefits.size() * arrangement_costs.size();
  const auto reps = static_cast<std::size_t>(replicates);

  std::vector<double> task_cooperation(num_points * reps);
  std::vector<double> task_seconds(num_points * reps);
  ParallelFor(num_points * reps, threads, [&](std::size_t task) {
    const std::size_t point = task / reps;
    const std::size_t replicate = task % reps;
    GameParams game = game_template;
    game.benefit = benefits[point / arrangement_costs.size()];
    game.arrangement_cost = arrangement_costs[point % arrangement_costs.size()];
    EvolutionParams run = evo;
    run.seed = evo.seed + replicate;
    run.record_cooperation = false;
    run.record_events = false;
    run.snapshot_stride = std::max<std::int64_t>(run.turns, 1);
    const auto start = std::chrono::steady_clock::now();
    task_cooperation[task] = RunEvolution(game, run).mean_cooperation;
    task_seconds[task] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  });

  result.points.reserve(num_points);
  for (std::size_t point = 0; point < num_points; ++point) {
    SweepPoint p;
    p.benefit = benefits[point / arrangement_costs.size()];
    p.arrangement_cost = arrangement_costs[point % arrangement_costs.size()];
    p.replicates = replicates;
    p.seed_base = evo.seed;
    double sum = 0.0;
    for (std::size_t r = 0; r < reps; ++r) {
      sum += task_cooperation[point * reps + r];
      p.seconds += task_seconds[point * reps + r];
    }
    p.mean_cooperation = sum / static_cast<double>(reps);
    result.points.push_back(p);
  }
  return result;
}

}  // namespace commitrep
