#ifndef COMMITREP_STRATEGY_HPP
#define COMMITREP_STRATEGY_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

namespace commitrep {

// Commitment rule: whether a player offers to enter a joint commitment.
enum class CommitmentRule : std::uint8_t {
  kAlways,                 // '1'
  kReputationConditional,  // 'R'
  kNever,                  // '0'
};

// Cooperation rule: the action in the Prisoner's Dilemma.
enum class CooperationRule : std::uint8_t {
  kAlwaysCooperate,         // '+'
  kCooperateInArrangement,  // 'A'
  kAlwaysDefect,            // '-'
};

enum class Opinion : std::uint8_t { kBad = 0, kGood = 1 };

inline constexpr std::size_t kNumStrategies = 9;

// A (commitment rule, cooperation rule) pair. The nine combinations are
// indexed 0..8 in the canonical order 1+, 1A, 1-, R+, RA, R-, 0+, 0A, 0-.
struct Strategy {
  CommitmentRule commitment = CommitmentRule::kNever;
  CooperationRule cooperation = CooperationRule::kAlwaysDefect;

  constexpr std::size_t index() const {
    return static_cast<std::size_t>(commitment) * 3 + static_cast<std::size_t>(cooperation);
  }
  static constexpr Strategy FromIndex(std::size_t idx) {
    return Strategy{static_cast<CommitmentRule>(idx / 3), static_cast<CooperationRule>(idx % 3)};
  }

  // Two-character name such as "RA" or "0-" (ASCII hyphen-minus for defect).
  std::string name() const;
  // Accepts the ASCII names plus U+2212 as an alternative defect sign.
  // Throws std::invalid_argument on anything else.
  static Strategy Parse(std::string_view text);

  // Enters arrangements only with good partners and cooperates only inside them.
  constexpr bool is_observant_upholder() const {
    return commitment == CommitmentRule::kReputationConditional &&
           cooperation == CooperationRule::kCooperateInArrangement;
  }
  // 1A, 1+, R+, 0+
  constexpr bool is_nice() const {
    if (cooperation == CooperationRule::kAlwaysCooperate) return true;
    return commitment == CommitmentRule::kAlways && cooperation == CooperationRule::kCooperateInArrangement;
  }
  // 0-, 0A, R-, 1-
  constexpr bool is_mean() const { return !is_nice() && !is_observant_upholder(); }
  // Enters arrangements and defects anyway (R-, 1-).
  constexpr bool is_faker() const {
    return commitment != CommitmentRule::kNever && cooperation == CooperationRule::kAlwaysDefect;
  }
  // Only reputation-conditional players keep opinions that matter.
  constexpr bool is_observer() const { return commitment == CommitmentRule::kReputationConditional; }

  friend constexpr bool operator==(Strategy, Strategy) = default;
  friend constexpr auto operator<=>(const Strategy& a, const Strategy& b) { return a.index() <=> b.index(); }
};

// All nine strategies in canonical index order.
constexpr std::array<Strategy, kNumStrategies> AllStrategies() {
  std::array<Strategy, kNumStrategies> out{};
  for (std::size_t i = 0; i < kNumStrategies; ++i) out[i] = Strategy::FromIndex(i);
  return out;
}

namespace strategies {
inline constexpr Strategy k1Plus{CommitmentRule::kAlways, CooperationRule::kAlwaysCooperate};
inline constexpr Strategy k1A{CommitmentRule::kAlways, CooperationRule::kCooperateInArrangement};
inline constexpr Strategy k1Minus{CommitmentRule::kAlways, CooperationRule::kAlwaysDefect};
inline constexpr Strategy kRPlus{CommitmentRule::kReputationConditional, CooperationRule::kAlwaysCooperate};
inline constexpr Strategy kRA{CommitmentRule::kReputationConditional, CooperationRule::kCooperateInArrangement};
inline constexpr Strategy kRMinus{CommitmentRule::kReputationConditional, CooperationRule::kAlwaysDefect};
inline constexpr Strategy k0Plus{CommitmentRule::kNever, CooperationRule::kAlwaysCooperate};
inline constexpr Strategy k0A{CommitmentRule::kNever, CooperationRule::kCooperateInArrangement};
inline constexpr Strategy k0Minus{CommitmentRule::kNever, CooperationRule::kAlwaysDefect};
}  // namespace strategies

// Assessment rule outcome.
enum class Assessment : std::int8_t { kDisapprove = -1, kNeutral = 0, kApprove = 1 };

// Four assessment rules keyed by (arrangement present, assessed player cooperated):
// rules[0] = (1,1), rules[1] = (1,0), rules[2] = (0,1), rules[3] = (0,0).
struct Norm {
  std::array<Assessment, 4> rules{Assessment::kApprove, Assessment::kDisapprove, Assessment::kNeutral,
                                  Assessment::kNeutral};

  // Judges cooperation good and defection bad inside arrangements, ignores the rest.
  static constexpr Norm UpholdArrangements() { return Norm{}; }
  // Builds a norm from integer rules in {-1,0,1}; throws std::invalid_argument otherwise.
  static Norm FromInts(int g11, int g10, int g01, int g00);

  constexpr Assessment rule(bool arrangement, bool cooperated) const {
    return rules[(arrangement ? 0 : 2) + (cooperated ? 0 : 1)];
  }
  // True when nothing observed in this arrangement context can change an opinion.
  constexpr bool is_silent(bool arrangement) const {
    return rule(arrangement, true) == Assessment::kNeutral && rule(arrangement, false) == Assessment::kNeutral;
  }

  std::string to_string() const;

  friend constexpr bool operator==(const Norm&, const Norm&) = default;
};

// Per-round decisions. All pure.
constexpr bool CommitOffer(Strategy strategy, Opinion opinion_of_partner) {
  switch (strategy.commitment) {
    case CommitmentRule::kAlways: return true;
    case CommitmentRule::kNever: return false;
    case CommitmentRule::kReputationConditional: return opinion_of_partner == Opinion::kGood;
  }
  return false;
}

constexpr bool FormArrangement(bool offer_x, bool offer_y) { return offer_x && offer_y; }

constexpr bool ChooseAction(Strategy strategy, bool arrangement) {
  switch (strategy.cooperation) {
    case CooperationRule::kAlwaysCooperate: return true;
    case CooperationRule::kAlwaysDefect: return false;
    case CooperationRule::kCooperateInArrangement: return arrangement;
  }
  return false;
}

constexpr Opinion Assess(const Norm& norm, bool arrangement, bool perceived_cooperation, Opinion current) {
  switch (norm.rule(arrangement, perceived_cooperation)) {
    case Assessment::kApprove: return Opinion::kGood;
    case Assessment::kDisapprove: return Opinion::kBad;
    case Assessment::kNeutral: return current;
  }
  return current;
}

std::string to_string(Opinion opinion);

}  // namespace commitrep

#endif  // COMMITREP_STRATEGY_HPP
