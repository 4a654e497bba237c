#include <doctest.h>

#include <set>
#include <stdexcept>

#include "commitrep/strategy.hpp"

using namespace commitrep;
using namespace commitrep::strategies;

TEST_SUITE("strategy") {

TEST_CASE("nine strategies in canonical order") {
  const auto all = AllStrategies();
  const char* names[] = {"1+", "1A", "1-", "R+", "RA", "R-", "0+", "0A", "0-"};
  std::set<std::string> seen;
  for (std::size_t i = 0; i < kNumStrategies; ++i) {
    CHECK(all[i].index() == i);
    CHECK(all[i].name() == names[i]);
    CHECK(Strategy::FromIndex(i) == all[i]);
    seen.insert(all[i].name());
  }
  CHECK(seen.size() == 9);
}

TEST_CASE("parse and format round trip") {
  for (auto s : AllStrategies()) CHECK(Strategy::Parse(s.name()) == s);
  CHECK(Strategy::Parse("R\xE2\x88\x92") == kRMinus);
  CHECK(Strategy::Parse("0\xE2\x88\x92") == k0Minus);
  CHECK(Strategy::Parse("ra") == kRA);
  CHECK_THROWS_AS(Strategy::Parse("RB"), std::invalid_argument);
  CHECK_THROWS_AS(Strategy::Parse("2A"), std::invalid_argument);
  CHECK_THROWS_AS(Strategy::Parse(""), std::invalid_argument);
  CHECK_THROWS_AS(Strategy::Parse("RA+"), std::invalid_argument);
}

TEST_CASE("category tags") {
  std::set<std::string> nice, mean, fakers, observers;
  for (auto s : AllStrategies()) {
    if (s.is_nice()) nice.insert(s.name());
    if (s.is_mean()) mean.insert(s.name());
    if (s.is_faker()) fakers.insert(s.name());
    if (s.is_observer()) observers.insert(s.name());
    CHECK(int(s.is_nice()) + int(s.is_mean()) + int(s.is_observant_upholder()) == 1);
  }
  CHECK(nice == std::set<std::string>{"1A", "1+", "R+", "0+"});
  CHECK(mean == std::set<std::string>{"0-", "0A", "R-", "1-"});
  CHECK(fakers == std::set<std::string>{"R-", "1-"});
  CHECK(observers == std::set<std::string>{"R+", "RA", "R-"});
  CHECK(kRA.is_observant_upholder());
}

TEST_CASE("commit offer") {
  CHECK(CommitOffer(k1A, Opinion::kBad));
  CHECK_FALSE(CommitOffer(k0Plus, Opinion::kGood));
  CHECK(CommitOffer(kRA, Opinion::kGood));
  CHECK_FALSE(CommitOffer(kRA, Opinion::kBad));
  for (auto s : AllStrategies()) {
    if (s.commitment != CommitmentRule::kReputationConditional) {
      CHECK(CommitOffer(s, Opinion::kGood) == CommitOffer(s, Opinion::kBad));
    }
  }
}

TEST_CASE("form arrangement") {
  CHECK(FormArrangement(true, true));
  CHECK_FALSE(FormArrangement(true, false));
  CHECK_FALSE(FormArrangement(false, true));
  CHECK_FALSE(FormArrangement(false, false));
}

TEST_CASE("choose action") {
  CHECK_FALSE(ChooseAction(kRMinus, true));
  CHECK(ChooseAction(k1Plus, false));
  CHECK(ChooseAction(kRA, true));
  CHECK_FALSE(ChooseAction(kRA, false));
  for (auto s : AllStrategies()) {
    if (s.cooperation == CooperationRule::kCooperateInArrangement) {
      CHECK(ChooseAction(s, true));
      CHECK_FALSE(ChooseAction(s, false));
    }
  }
}

TEST_CASE("assess: study norm exhaustively") {
  const Norm norm = Norm::UpholdArrangements();
  CHECK(norm == Norm::FromInts(1, -1, 0, 0));
  CHECK(norm.to_string() == "(1,-1,0,0)");
  int cases = 0;
  for (bool a : {false, true}) {
    for (bool coop : {false, true}) {
      for (auto cur : {Opinion::kBad, Opinion::kGood}) {
        const Opinion got = Assess(norm, a, coop, cur);
        Opinion want = cur;
        if (a) want = coop ? Opinion::kGood : Opinion::kBad;
        CHECK(got == want);
        // idempotent
        CHECK(Assess(norm, a, coop, got) == got);
        ++cases;
      }
    }
  }
  CHECK(cases == 8);
  CHECK(Assess(norm, true, true, Opinion::kBad) == Opinion::kGood);
  CHECK(Assess(norm, true, false, Opinion::kGood) == Opinion::kBad);
  CHECK(Assess(norm, false, false, Opinion::kGood) == Opinion::kGood);
  CHECK(norm.is_silent(false));
  CHECK_FALSE(norm.is_silent(true));
}

TEST_CASE("assess: every norm follows the rule table") {
  int cases = 0;
  for (int g11 = -1; g11 <= 1; ++g11)
    for (int g10 = -1; g10 <= 1; ++g10)
      for (int g01 = -1; g01 <= 1; ++g01)
        for (int g00 = -1; g00 <= 1; ++g00) {
          const Norm norm = Norm::FromInts(g11, g10, g01, g00);
          const int g[2][2] = {{g00, g01}, {g10, g11}};
          for (bool a : {false, true})
            for (bool coop : {false, true})
              for (auto cur : {Opinion::kBad, Opinion::kGood}) {
                const int rule = g[a][coop];
                const Opinion want = rule == 1 ? Opinion::kGood : rule == -1 ? Opinion::kBad : cur;
                CHECK(Assess(norm, a, coop, cur) == want);
                ++cases;
              }
        }
  CHECK(cases == 81 * 8);
  CHECK_THROWS_AS(Norm::FromInts(2, 0, 0, 0), std::invalid_argument);
}

}  // TEST_SUITE
