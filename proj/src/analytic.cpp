#include "commitrep/analytic.hpp"
#include "commitrep/format.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace commitrep {

std::string to_string(Regime regime) {
  switch (regime) {
    case Regime::kShortHorizon: return "2a";
    case Regime::kLongHorizon: return "2b";
    case Regime::kInfiniteHorizon: return "2c";
  }
  return "?";
}

Regime ParseRegime(std::string_view text) {
  if (text == "2a" || text == "2.a" || text == "a") return Regime::kShortHorizon;
  if (text == "2b" || text == "2.b" || text == "b") return Regime::kLongHorizon;
  if (text == "2c" || text == "2.c" || text == "c") return Regime::kInfiniteHorizon;
  throw std::invalid_argument("unknown regime '" + std::string(text) + "' (expected 2a, 2b or 2c)");
}

std::vector<std::string> GameParams::Validate() const {
  if (!std::isfinite(benefit)) throw std::invalid_argument("benefit must be finite");
  if (!(arrangement_cost >= 0.0) || !std::isfinite(arrangement_cost)) {
    throw std::invalid_argument("arrangement_cost must be finite and >= 0");
  }
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw std::invalid_argument("epsilon must lie in [0, 1]");
  std::vector<std::string> warnings;
  if (benefit <= kCooperationCost) {
    warnings.push_back("benefit <= cooperation cost: the game is not a Prisoner's Dilemma");
  }
  return warnings;
}

std::string to_string(PredictionKind kind) {
  switch (kind) {
    case PredictionKind::kNone: return "none";
    case PredictionKind::kLow: return "low";
    case PredictionKind::kHigh: return "high";
    case PredictionKind::kZero: return "zero";
  }
  return "?";
}

PopulationState::PopulationState(const PerStrategy<std::int64_t>& counts) : counts_(counts) {
  for (auto c : counts_) {
    if (c < 0) throw std::invalid_argument("strategy counts must be nonnegative");
    size_ += c;
  }
  if (size_ < 2) throw std::invalid_argument("population needs at least 2 players");
}

PopulationState PopulationState::FromMap(const std::map<Strategy, std::int64_t>& counts) {
  PerStrategy<std::int64_t> arr{};
  for (const auto& [s, n] : counts) arr[s.index()] += n;
  return PopulationState(arr);
}

PopulationState PopulationState::Homogeneous(Strategy s, std::int64_t n) {
  PerStrategy<std::int64_t> arr{};
  arr[s.index()] = n;
  return PopulationState(arr);
}

PopulationState PopulationState::Parse(std::string_view text) {
  PerStrategy<std::int64_t> arr{};
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find(',', pos);
    if (end == std::string_view::npos) end = text.size();
    auto item = text.substr(pos, end - pos);
    auto colon = item.find(':');
    if (colon == std::string_view::npos) {
      throw std::invalid_argument("composition entry '" + std::string(item) + "' is not NAME:COUNT");
    }
    auto s = Strategy::Parse(item.substr(0, colon));
    std::string count_text(item.substr(colon + 1));
    std::size_t used = 0;
    long long n = 0;
    try {
      n = std::stoll(count_text, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != count_text.size() || count_text.empty()) {
      throw std::invalid_argument("bad count in composition entry '" + std::string(item) + "'");
    }
    arr[s.index()] += n;
    pos = end + 1;
  }
  return PopulationState(arr);
}

std::int64_t PopulationState::count_observers() const {
  std::int64_t n = 0;
  for (std::size_t i = 0; i < kNumStrategies; ++i) {
    if (Strategy::FromIndex(i).is_observer()) n += counts_[i];
  }
  return n;
}

void PopulationState::Move(Strategy from, Strategy to) {
  if (counts_[from.index()] < 1) throw std::logic_error("cannot move a player out of an absent strategy");
  --counts_[from.index()];
  ++counts_[to.index()];
}

std::string PopulationState::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < kNumStrategies; ++i) {
    if (counts_[i] == 0) continue;
    if (!out.empty()) out += ',';
    out += Strategy::FromIndex(i).name() + ":" + std::to_string(counts_[i]);
  }
  return out;
}

bool RedemptionPossible(const PopulationState& pop, Strategy focal) {
  if (!pop.contains(focal)) throw std::invalid_argument("focal strategy " + focal.name() + " is absent");
  std::int64_t committers = 0;
  for (auto s : AllStrategies()) {
    if (s.commitment == CommitmentRule::kAlways) committers += pop.count(s);
  }
  if (focal.commitment == CommitmentRule::kAlways) --committers;
  return committers >= 1;
}

ReputationPrediction PredictReputation(Strategy strategy, const GameParams& params, bool redemption) {
  const double eps = params.epsilon;
  if (strategy.commitment == CommitmentRule::kNever) return {PredictionKind::kNone, 1.0};
  const bool defector = strategy.cooperation == CooperationRule::kAlwaysDefect;
  if (!redemption) {
    if (params.regime == Regime::kInfiniteHorizon) return {PredictionKind::kZero, 0.0};
    if (params.regime == Regime::kLongHorizon && defector) return {PredictionKind::kZero, 0.0};
  }
  if (defector) return {PredictionKind::kLow, eps};
  return {PredictionKind::kHigh, 1.0 - eps};
}

double AbsorptionProbability(std::int64_t num_observers, double epsilon) {
  if (num_observers < 1) throw std::invalid_argument("num_observers must be positive");
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw std::invalid_argument("epsilon must lie in [0, 1]");
  return std::pow(1.0 - epsilon, static_cast<double>(num_observers));
}

double CommitProbability(Strategy strategy, double partner_reputation) {
  switch (strategy.commitment) {
    case CommitmentRule::kAlways: return 1.0;
    case CommitmentRule::kReputationConditional: return partner_reputation;
    case CommitmentRule::kNever: return 0.0;
  }
  return 0.0;
}

double CooperationProbability(Strategy strategy, double arrangement_probability) {
  switch (strategy.cooperation) {
    case CooperationRule::kAlwaysCooperate: return 1.0;
    case CooperationRule::kCooperateInArrangement: return arrangement_probability;
    case CooperationRule::kAlwaysDefect: return 0.0;
  }
  return 0.0;
}

double PairwisePayoff(Strategy i, Strategy j, double rep_i, double rep_j, const GameParams& params) {
  const double arrangement = CommitProbability(i, rep_j) * CommitProbability(j, rep_i);
  const double x_i = CooperationProbability(i, arrangement);
  const double x_j = CooperationProbability(j, arrangement);
  return -params.arrangement_cost * arrangement - GameParams::kCooperationCost * x_i + params.benefit * x_j;
}

PerStrategy<std::optional<double>> RegimeReputations(const PopulationState& pop, const GameParams& params) {
  PerStrategy<std::optional<double>> reps{};
  for (auto s : AllStrategies()) {
    if (!pop.contains(s)) continue;
    reps[s.index()] = PredictReputation(s, params, RedemptionPossible(pop, s)).value;
  }
  return reps;
}

double PayoffMatrix::at(Strategy i, Strategy j) const {
  if (!contains(i) || !contains(j)) {
    throw std::out_of_range("payoff matrix has no entry for (" + i.name() + ", " + j.name() + ")");
  }
  return (*this)(i.index(), j.index());
}

std::vector<Strategy> PayoffMatrix::strategies() const {
  std::vector<Strategy> out;
  for (auto s : AllStrategies()) {
    if (contains(s)) out.push_back(s);
  }
  return out;
}

void PayoffMatrix::WriteCsv(std::ostream& os) const {
  const auto set = strategies();
  std::ostringstream line;
  os << "# schema: commitrep.payoff_matrix/1\n";
  os << "strategy";
  for (auto s : set) os << ',' << s.name();
  os << '\n';
  for (auto i : set) {
    line.str("");
    line << i.name();
    for (auto j : set) line << ',' << FormatDouble(at(i, j));
    os << line.str() << '\n';
  }
}

PayoffMatrix BuildPayoffMatrix(std::span<const Strategy> strategy_set,
                               const PerStrategy<std::optional<double>>& reputations, const GameParams& params) {
  PayoffMatrix m;
  for (auto s : strategy_set) {
    if (!reputations[s.index()]) throw std::invalid_argument("missing reputation for strategy " + s.name());
    m.included_[s.index()] = true;
  }
  for (auto i : strategy_set) {
    for (auto j : strategy_set) {
      m.values_[i.index() * kNumStrategies + j.index()] =
          PairwisePayoff(i, j, *reputations[i.index()], *reputations[j.index()], params);
    }
  }
  return m;
}

PayoffMatrix PopulationPayoffMatrix(const PopulationState& pop, const GameParams& params) {
  std::vector<Strategy> present;
  for (auto s : AllStrategies()) {
    if (pop.contains(s)) present.push_back(s);
  }
  return BuildPayoffMatrix(present, RegimeReputations(pop, params), params);
}

double AveragePayoff(Strategy i, const PopulationState& pop, const PayoffMatrix& payoffs) {
  if (!pop.contains(i)) throw std::invalid_argument("strategy " + i.name() + " is absent from the population");
  double total = 0.0;
  for (auto j : AllStrategies()) {
    std::int64_t n = pop.count(j);
    if (j == i) --n;
    if (n > 0) total += payoffs.at(i, j) * static_cast<double>(n);
  }
  return total / static_cast<double>(pop.size() - 1);
}

}  // namespace commitrep
