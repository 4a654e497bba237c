#include "commitrep/strategy.hpp"

#include <stdexcept>

namespace commitrep {

namespace {

constexpr char kCommitChars[] = {'1', 'R', '0'};
constexpr char kCoopChars[] = {'+', 'A', '-'};

// UTF-8 encoding of U+2212 MINUS SIGN.
constexpr std::string_view kUnicodeMinus = "\xE2\x88\x92";

int ParseAssessment(int value) {
  if (value < -1 || value > 1) throw std::invalid_argument("norm rule must be -1, 0 or 1, got " + std::to_string(value));
  return value;
}

}  // namespace

std::string Strategy::name() const {
  return {kCommitChars[static_cast<int>(commitment)], kCoopChars[static_cast<int>(cooperation)]};
}

Strategy Strategy::Parse(std::string_view text) {
  std::string normalized(text);
  if (normalized.size() == 1 + kUnicodeMinus.size() && std::string_view(normalized).substr(1) == kUnicodeMinus) {
    normalized = std::string{normalized[0], '-'};
  }
  if (normalized.size() != 2) throw std::invalid_argument("unknown strategy name '" + std::string(text) + "'");
  Strategy s;
  switch (normalized[0]) {
    case '1': s.commitment = CommitmentRule::kAlways; break;
    case 'R': case 'r': s.commitment = CommitmentRule::kReputationConditional; break;
    case '0': s.commitment = CommitmentRule::kNever; break;
    default: throw std::invalid_argument("unknown commitment rule in '" + std::string(text) + "'");
  }
  switch (normalized[1]) {
    case '+': s.cooperation = CooperationRule::kAlwaysCooperate; break;
    case 'A': case 'a': s.cooperation = CooperationRule::kCooperateInArrangement; break;
    case '-': s.cooperation = CooperationRule::kAlwaysDefect; break;
    default: throw std::invalid_argument("unknown cooperation rule in '" + std::string(text) + "'");
  }
  return s;
}

Norm Norm::FromInts(int g11, int g10, int g01, int g00) {
  Norm n;
  n.rules = {static_cast<Assessment>(ParseAssessment(g11)), static_cast<Assessment>(ParseAssessment(g10)),
             static_cast<Assessment>(ParseAssessment(g01)), static_cast<Assessment>(ParseAssessment(g00))};
  return n;
}

std::string Norm::to_string() const {
  std::string out = "(";
  for (std::size_t i = 0; i < rules.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(static_cast<int>(rules[i]));
  }
  return out + ")";
}

std::string to_string(Opinion opinion) { return opinion == Opinion::kGood ? "good" : "bad"; }

}  // namespace commitrep
