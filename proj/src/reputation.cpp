#include "commitrep/reputation.hpp"
#include "commitrep/format.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace commitrep {

ImageMatrix::ImageMatrix(std::span<const Strategy> players)
    : players_(players.begin(), players.end()),
      opinions_(players.size() * players.size(), static_cast<std::uint8_t>(Opinion::kGood)) {
  for (std::size_t i = 0; i < players_.size(); ++i) {
    if (players_[i].is_observer()) observers_.push_back(i);
  }
  good_counts_.assign(players_.size(), static_cast<std::int64_t>(observers_.size()));
}

void ImageMatrix::set_opinion(std::size_t observer, std::size_t target, Opinion value) {
  if (!is_observer(observer)) throw std::logic_error("only observers hold opinions that can change");
  auto& cell = opinions_[observer * size() + target];
  good_counts_[target] += static_cast<int>(value) - static_cast<int>(cell);
  cell = static_cast<std::uint8_t>(value);
}

std::optional<double> ImageMatrix::reputation(std::size_t target) const {
  if (observers_.empty()) return std::nullopt;
  return static_cast<double>(good_counts_[target]) / static_cast<double>(observers_.size());
}

RoundRecord PlayRound(ImageMatrix& matrix, const Norm& norm, double epsilon, Rng& rng) {
  const std::size_t n = matrix.size();
  if (n < 2) throw std::invalid_argument("a round needs at least two players");
  RoundRecord rec;
  rec.x = rng.Index(n);
  rec.y = rng.Index(n - 1);
  if (rec.y >= rec.x) ++rec.y;

  const Strategy sx = matrix.players_[rec.x];
  const Strategy sy = matrix.players_[rec.y];
  rec.offer_x = CommitOffer(sx, matrix.opinion(rec.x, rec.y));
  rec.offer_y = CommitOffer(sy, matrix.opinion(rec.y, rec.x));
  rec.arrangement = FormArrangement(rec.offer_x, rec.offer_y);
  rec.cooperate_x = ChooseAction(sx, rec.arrangement);
  rec.cooperate_y = ChooseAction(sy, rec.arrangement);

  if (norm.is_silent(rec.arrangement)) return rec;

  // Misperceiving observers are located by geometric jumps over the observer
  // list instead of one Bernoulli draw per assessment.
  const std::size_t targets[2] = {rec.x, rec.y};
  const bool actions[2] = {rec.cooperate_x, rec.cooperate_y};
  const auto& observers = matrix.observers_;
  for (int k = 0; k < 2; ++k) {
    const std::size_t target = targets[k];
    std::uint64_t next_error = rng.Geometric(epsilon);
    for (std::size_t idx = 0; idx < observers.size(); ++idx) {
      bool perceived = actions[k];
      if (idx == next_error) {
        perceived = !perceived;
        const std::uint64_t gap = rng.Geometric(epsilon);
        next_error = gap == UINT64_MAX ? UINT64_MAX : next_error + 1 + gap;
      }
      auto& cell = matrix.opinions_[observers[idx] * n + target];
      const auto current = static_cast<Opinion>(cell);
      const Opinion updated = Assess(norm, rec.arrangement, perceived, current);
      if (updated != current) {
        cell = static_cast<std::uint8_t>(updated);
        matrix.good_counts_[target] += updated == Opinion::kGood ? 1 : -1;
      }
    }
  }
  return rec;
}

const StrategyReputation* ReputationReport::find(Strategy s) const {
  for (const auto& entry : strategies) {
    if (entry.strategy == s) return &entry;
  }
  return nullptr;
}

ReputationReport SimulateReputations(const PopulationState& composition, const GameParams& params, const Norm& norm,
                                     std::int64_t rounds, std::uint64_t seed) {
  if (rounds < 2 || rounds % 2 != 0) throw std::invalid_argument("rounds must be a positive even number");
  params.Validate();

  std::vector<Strategy> players;
  players.reserve(static_cast<std::size_t>(composition.size()));
  for (auto s : AllStrategies()) players.insert(players.end(), static_cast<std::size_t>(composition.count(s)), s);

  ReputationReport report;
  report.composition = composition;
  report.rounds = rounds;
  report.seed = seed;
  report.params = params;
  report.num_observers = composition.count_observers();
  report.reputations_defined = report.num_observers > 0;
  if (!report.reputations_defined) return report;

  ImageMatrix matrix(players);
  Rng rng(seed);

  // Per strategy: good opinions observers hold about its players, and the part
  // of those that are observers' opinions of themselves. Kept incrementally
  // from per-player caches since a round only touches the two players' columns.
  std::vector<std::int64_t> player_good(players.size());
  std::vector<std::int64_t> player_self(players.size());
  PerStrategy<std::int64_t> good{};
  PerStrategy<std::int64_t> self_good{};
  for (std::size_t p = 0; p < players.size(); ++p) {
    player_good[p] = matrix.good_count(p);
    player_self[p] = matrix.is_observer(p) ? 1 : 0;
    good[players[p].index()] += player_good[p];
    self_good[players[p].index()] += player_self[p];
  }
  const auto refresh = [&](std::size_t p) {
    const std::size_t s = players[p].index();
    const std::int64_t now_good = matrix.good_count(p);
    good[s] += now_good - player_good[p];
    player_good[p] = now_good;
    if (matrix.is_observer(p)) {
      const std::int64_t now_self = matrix.opinion(p, p) == Opinion::kGood ? 1 : 0;
      self_good[s] += now_self - player_self[p];
      player_self[p] = now_self;
    }
  };

  PerStrategy<std::int64_t> good_total{};
  PerStrategy<std::int64_t> self_total{};
  const std::int64_t burn_in = rounds / 2;
  for (std::int64_t t = 1; t <= rounds; ++t) {
    const RoundRecord rec = PlayRound(matrix, norm, params.epsilon, rng);
    refresh(rec.x);
    refresh(rec.y);
    if (t > burn_in) {
      for (std::size_t i = 0; i < kNumStrategies; ++i) {
        good_total[i] += good[i];
        self_total[i] += self_good[i];
      }
    }
  }

  const auto sampled = static_cast<double>(rounds - burn_in);
  const auto observers = static_cast<double>(report.num_observers);
  for (auto s : AllStrategies()) {
    const std::int64_t count = composition.count(s);
    if (count == 0) continue;
    StrategyReputation entry;
    entry.strategy = s;
    entry.count = count;
    entry.mean = static_cast<double>(good_total[s.index()]) / (sampled * static_cast<double>(count) * observers);
    const double other_opinions = static_cast<double>(count) * (observers - (s.is_observer() ? 1.0 : 0.0));
    if (other_opinions > 0) {
      entry.mean_excluding_self =
          static_cast<double>(good_total[s.index()] - self_total[s.index()]) / (sampled * other_opinions);
    }
    entry.redemption = RedemptionPossible(composition, s);
    entry.prediction = PredictReputation(s, params, entry.redemption);
    report.strategies.push_back(entry);
  }
  return report;
}

CompositionSample SampleCompositions(std::span<const Trajectory> store, std::size_t count, Rng& rng) {
  std::vector<const PopulationState*> pool;
  for (const auto& traj : store) {
    for (const auto& snap : traj.snapshots) pool.push_back(&snap.state);
  }
  if (pool.empty()) throw std::invalid_argument("composition store holds no snapshots");

  CompositionSample sample;
  sample.compositions.reserve(count);
  if (count > pool.size()) {
    sample.with_replacement = true;
    for (std::size_t i = 0; i < count; ++i) sample.compositions.push_back(*pool[rng.Index(pool.size())]);
    return sample;
  }
  // Partial Fisher-Yates over snapshot indices.
  std::vector<std::size_t> idx(pool.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + rng.Index(idx.size() - i);
    std::swap(idx[i], idx[j]);
    sample.compositions.push_back(*pool[idx[i]]);
  }
  return sample;
}

void WriteReputationCsvHeader(std::ostream& os) {
  os << "# schema: commitrep.reputation/1\n";
  os << "scenario,composition,strategy,mean_reputation,mean_reputation_excluding_self,num_observers,redemption,"
        "prediction_kind,prediction,epsilon,regime,rounds,seed\n";
}

void WriteReputationCsvRows(std::ostream& os, const std::string& scenario, const ReputationReport& report) {
  std::ostringstream line;
  for (const auto& entry : report.strategies) {
    line.str("");
    line << scenario << ",\"" << report.composition.to_string() << "\"," << entry.strategy.name() << ','
         << FormatDouble(entry.mean) << ',';
    if (entry.mean_excluding_self) line << FormatDouble(*entry.mean_excluding_self);
    line << ',' << report.num_observers << ',' << (entry.redemption ? 1 : 0) << ','
         << to_string(entry.prediction.kind) << ',' << FormatDouble(entry.prediction.value) << ',';
    line << FormatDouble(report.params.epsilon) << ',' << to_string(report.params.regime) << ',' << report.rounds << ','
         << report.seed;
    os << line.str() << '\n';
  }
}

}  // namespace commitrep
