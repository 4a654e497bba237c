#ifndef COMMITREP_FIXATION_HPP
#define COMMITREP_FIXATION_HPP

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <utility>
#include <vector>

#include "commitrep/analytic.hpp"

namespace commitrep {

// Which end of the invasion chain the ratio products T-(k)/T+(k) are
// accumulated from.
//
//   kFromInvaderMinority: rho = 1 / (1 + sum_{m=1}^{N-1} prod_{k=1}^{m} g(k))
//     the textbook absorption probability of the birth-death chain started
//     from a single invader.
//   kFromInvaderMajority: rho = 1 / (1 + sum_{m=1}^{N-1} prod_{k=N-m}^{N-1} g(k))
//     the convention of the reference rare-mutation fixation tables; all of
//     their entries are reproduced to the printed precision with it.
//
// with g(k) = exp(-s (pi_invader(k) - pi_resident(k))).
enum class ProductOrder : std::uint8_t { kFromInvaderMinority, kFromInvaderMajority };

std::string to_string(ProductOrder order);
ProductOrder ParseProductOrder(std::string_view text);

struct FixationQuery {
  Strategy invader;
  Strategy resident;
  GameParams game;
  std::int64_t population_size = 100;
  double selection_strength = 1.0;
  ProductOrder order = ProductOrder::kFromInvaderMajority;

  // Throws std::invalid_argument for invader == resident or N < 2.
  void Validate() const;
};

struct FixationResult {
  double rho = 0.0;
  // rho in units of neutral drift: rho * N.
  double drift_multiple = 0.0;
};

// Average payoffs of an invader and a resident player with k invaders among N,
// using regime-consistent reputations for that two-strategy composition.
// Requires 1 <= k <= N-1.
std::pair<double, double> StatePayoffs(Strategy invader, Strategy resident, std::int64_t k, std::int64_t population_size,
                                       const GameParams& game);

// Evaluated in log space. Throws std::runtime_error on a non-finite result.
FixationResult FixationProbability(const FixationQuery& query);

struct FixationTable {
  std::vector<Strategy> strategies;
  GameParams game;
  std::int64_t population_size = 100;
  double selection_strength = 1.0;
  ProductOrder order = ProductOrder::kFromInvaderMajority;
  // rho[invader][resident] indexed by position in `strategies`; diagonal empty.
  std::vector<std::vector<std::optional<double>>> rho;

  std::optional<double> at(Strategy invader, Strategy resident) const;
  // True if invader fixes in resident more easily than the reverse.
  bool RiskDominant(Strategy a, Strategy b) const;

  // Rows only when `header` is false, for concatenating several tables.
  void WriteCsv(std::ostream& os, bool header = true) const;
  // Percent grid with two decimals, invaders as rows and residents as columns.
  void WriteText(std::ostream& os) const;
};

// Strategy order of the reference tables (0+ omitted).
std::vector<Strategy> ReferenceTableOrder();

FixationTable ComputeFixationTable(std::span<const Strategy> strategy_set, const GameParams& game,
                                   std::int64_t population_size, double selection_strength,
                                   ProductOrder order = ProductOrder::kFromInvaderMajority);

}  // namespace commitrep

#endif  // COMMITREP_FIXATION_HPP
