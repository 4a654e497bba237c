#include "commitrep/fixation.hpp"
#include "commitrep/format.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace commitrep {

std::string to_string(ProductOrder order) {
  return order == ProductOrder::kFromInvaderMinority ? "minority" : "majority";
}

ProductOrder ParseProductOrder(std::string_view text) {
  if (text == "minority") return ProductOrder::kFromInvaderMinority;
  if (text == "majority") return ProductOrder::kFromInvaderMajority;
  throw std::invalid_argument("unknown product order '" + std::string(text) + "' (expected minority or majority)");
}

void FixationQuery::Validate() const {
  if (invader == resident) throw std::invalid_argument("invader and resident must differ");
  if (population_size < 2) throw std::invalid_argument("population_size must be >= 2");
  if (!(selection_strength >= 0.0) || !std::isfinite(selection_strength)) {
    throw std::invalid_argument("selection_strength must be finite and >= 0");
  }
  game.Validate();
}

std::pair<double, double> StatePayoffs(Strategy invader, Strategy resident, std::int64_t k, std::int64_t population_size,
                                       const GameParams& game) {
  const std::int64_t n = population_size;
  if (k < 1 || k > n - 1) throw std::invalid_argument("invader count must lie in [1, N-1]");
  PerStrategy<std::int64_t> counts{};
  counts[invader.index()] = k;
  counts[resident.index()] = n - k;
  const PopulationState pop(counts);
  const auto reps = RegimeReputations(pop, game);
  const double ri = *reps[invader.index()];
  const double rj = *reps[resident.index()];
  const double p_ii = PairwisePayoff(invader, invader, ri, ri, game);
  const double p_ij = PairwisePayoff(invader, resident, ri, rj, game);
  const double p_ji = PairwisePayoff(resident, invader, rj, ri, game);
  const double p_jj = PairwisePayoff(resident, resident, rj, rj, game);
  const auto kd = static_cast<double>(k);
  const auto nd = static_cast<double>(n);
  const double pi_invader = (p_ii * (kd - 1.0) + p_ij * (nd - kd)) / (nd - 1.0);
  const double pi_resident = (p_ji * kd + p_jj * (nd - kd - 1.0)) / (nd - 1.0);
  return {pi_invader, pi_resident};
}

FixationResult FixationProbability(const FixationQuery& query) {
  query.Validate();
  const std::int64_t n = query.population_size;

  // log g(k) for k = 1..N-1
  std::vector<double> log_ratio(static_cast<std::size_t>(n - 1));
  for (std::int64_t k = 1; k < n; ++k) {
    const auto [pi_i, pi_j] = StatePayoffs(query.invader, query.resident, k, n, query.game);
    log_ratio[static_cast<std::size_t>(k - 1)] = -query.selection_strength * (pi_i - pi_j);
  }
  if (query.order == ProductOrder::kFromInvaderMajority) std::reverse(log_ratio.begin(), log_ratio.end());

  std::vector<double> partial(log_ratio.size());
  double running = 0.0;
  for (std::size_t m = 0; m < log_ratio.size(); ++m) {
    running += log_ratio[m];
    partial[m] = running;
  }
  const double peak = *std::max_element(partial.begin(), partial.end());
  double scaled_sum = 0.0;
  for (double l : partial) scaled_sum += std::exp(l - peak);

  double rho = 0.0;
  if (peak < 700.0) {
    rho = 1.0 / (1.0 + std::exp(peak) * scaled_sum);
  } else {
    const double log_sum = peak + std::log(scaled_sum);
    rho = std::exp(-log_sum) / (1.0 + std::exp(-log_sum));
  }
  if (!std::isfinite(rho)) throw std::runtime_error("fixation probability is not finite");
  return {rho, rho * static_cast<double>(n)};
}

std::optional<double> FixationTable::at(Strategy invader, Strategy resident) const {
  auto pos = [&](Strategy s) -> std::size_t {
    auto it = std::find(strategies.begin(), strategies.end(), s);
    if (it == strategies.end()) throw std::out_of_range("strategy " + s.name() + " is not in the table");
    return static_cast<std::size_t>(it - strategies.begin());
  };
  return rho[pos(invader)][pos(resident)];
}

bool FixationTable::RiskDominant(Strategy a, Strategy b) const {
  const auto ab = at(a, b);
  const auto ba = at(b, a);
  if (!ab || !ba) return false;
  return *ab > *ba;
}

void FixationTable::WriteCsv(std::ostream& os, bool header) const {
  std::ostringstream line;
  if (header) {
    os << "# schema: commitrep.fixation/1\n";
    os << "invader,resident,rho,drift_multiple,b,c_a,epsilon,regime,N,s,order\n";
  }
  for (std::size_t i = 0; i < strategies.size(); ++i) {
    for (std::size_t j = 0; j < strategies.size(); ++j) {
      if (!rho[i][j]) continue;
      line.str("");
      line << strategies[i].name() << ',' << strategies[j].name() << ',' << FormatDouble(*rho[i][j]) << ','
           << FormatDouble(*rho[i][j] * static_cast<double>(population_size)) << ',' << FormatDouble(game.benefit)
           << ',' << FormatDouble(game.arrangement_cost) << ',' << FormatDouble(game.epsilon) << ','
           << to_string(game.regime) << ',' << population_size << ',' << FormatDouble(selection_strength) << ','
           << to_string(order);
      os << line.str() << '\n';
    }
  }
}

void FixationTable::WriteText(std::ostream& os) const {
  char cell[32];
  os << "invader\\resident";
  for (auto s : strategies) {
    std::snprintf(cell, sizeof cell, " %8s", s.name().c_str());
    os << cell;
  }
  os << '\n';
  for (std::size_t i = 0; i < strategies.size(); ++i) {
    std::snprintf(cell, sizeof cell, "%-16s", strategies[i].name().c_str());
    os << cell;
    for (std::size_t j = 0; j < strategies.size(); ++j) {
      if (rho[i][j]) {
        std::snprintf(cell, sizeof cell, " %7.2f%%", 100.0 * *rho[i][j]);
      } else {
        std::snprintf(cell, sizeof cell, " %8s", "");
      }
      os << cell;
    }
    os << '\n';
  }
}

std::vector<Strategy> ReferenceTableOrder() {
  using namespace strategies;
  return {k1Minus, kRMinus, k0Minus, k1A, kRA, k0A, k1Plus, kRPlus};
}

FixationTable ComputeFixationTable(std::span<const Strategy> strategy_set, const GameParams& game,
                                   std::int64_t population_size, double selection_strength, ProductOrder order) {
  FixationTable table;
  table.strategies.assign(strategy_set.begin(), strategy_set.end());
  table.game = game;
  table.population_size = population_size;
  table.selection_strength = selection_strength;
  table.order = order;
  const std::size_t q = table.strategies.size();
  table.rho.assign(q, std::vector<std::optional<double>>(q));
  for (std::size_t i = 0; i < q; ++i) {
    for (std::size_t j = 0; j < q; ++j) {
      if (i == j) continue;
      FixationQuery query{table.strategies[i], table.strategies[j], game, population_size, selection_strength, order};
      table.rho[i][j] = FixationProbability(query).rho;
    }
  }
  return table;
}

}  // namespace commitrep
