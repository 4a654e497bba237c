// Brute-force reference implementations used only by tests.
#ifndef COMMITREP_TESTS_ORACLES_HPP
#define COMMITREP_TESTS_ORACLES_HPP

#include <cmath>
#include <cstdint>
#include <vector>

#include "commitrep/analytic.hpp"
#include "commitrep/fixation.hpp"
#include "commitrep/random.hpp"

namespace oracle {

using namespace commitrep;

// Probability that `s` offers to commit to a partner of reputation r.
inline double OfferProbability(Strategy s, double r) {
  switch (s.commitment) {
    case CommitmentRule::kAlways:
      return 1.0;
    case CommitmentRule::kReputationConditional:
      return r;
    case CommitmentRule::kNever:
      return 0.0;
  }
  return 0.0;
}

// Expected payoff of i against j, enumerating the four offer outcomes and
// running the per-round decision functions on each.
inline double PairwisePayoff(Strategy i, Strategy j, double ri, double rj, const GameParams& g) {
  double total = 0.0;
  for (int oi = 0; oi < 2; ++oi) {
    for (int oj = 0; oj < 2; ++oj) {
      const double pi = OfferProbability(i, rj);
      const double pj = OfferProbability(j, ri);
      const double weight = (oi ? pi : 1.0 - pi) * (oj ? pj : 1.0 - pj);
      if (weight == 0.0) continue;
      const bool a = FormArrangement(oi == 1, oj == 1);
      const double ci = ChooseAction(i, a) ? 1.0 : 0.0;
      const double cj = ChooseAction(j, a) ? 1.0 : 0.0;
      const double payoff = -(a ? g.arrangement_cost : 0.0) - ci * GameParams::kCooperationCost + g.benefit * cj;
      total += weight * payoff;
    }
  }
  return total;
}

// Direct simulation of the two-strategy invasion chain: from k invaders the
// next change is an increase with probability T+/(T+ + T-) = 1/(1 + g(k)),
// g(k) = exp(-s (pi_invader(k) - pi_resident(k))). Returns fixations/attempts.
inline double SimulatedFixation(Strategy invader, Strategy resident, const GameParams& g, std::int64_t n, double s,
                                std::int64_t attempts, std::uint64_t seed) {
  std::vector<double> up(static_cast<std::size_t>(n));
  for (std::int64_t k = 1; k < n; ++k) {
    const auto [pi_i, pi_j] = StatePayoffs(invader, resident, k, n, g);
    up[static_cast<std::size_t>(k)] = 1.0 / (1.0 + std::exp(-s * (pi_i - pi_j)));
  }
  Rng rng(seed);
  std::int64_t fixed = 0;
  for (std::int64_t a = 0; a < attempts; ++a) {
    std::int64_t k = 1;
    while (k > 0 && k < n) k += rng.Bernoulli(up[static_cast<std::size_t>(k)]) ? 1 : -1;
    if (k == n) ++fixed;
  }
  return static_cast<double>(fixed) / static_cast<double>(attempts);
}

}  // namespace oracle

#endif  // COMMITREP_TESTS_ORACLES_HPP
