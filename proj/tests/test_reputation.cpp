#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "commitrep/reputation.hpp"

using namespace commitrep;
using namespace commitrep::strategies;

namespace {

std::vector<Strategy> Players(const PopulationState& pop) {
  std::vector<Strategy> out;
  for (auto s : AllStrategies()) out.insert(out.end(), static_cast<std::size_t>(pop.count(s)), s);
  return out;
}

GameParams Eps(double eps) {
  GameParams g;
  g.epsilon = eps;
  return g;
}

}  // namespace

TEST_SUITE("reputation") {

TEST_CASE("image matrix starts all good") {
  const auto players = Players(PopulationState::Parse("RA:3,1A:2,0-:1"));
  ImageMatrix m(players);
  CHECK(m.observers().size() == 3);
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < m.size(); ++j) CHECK(m.opinion(i, j) == Opinion::kGood);
    CHECK(m.reputation(i) == 1.0);
  }
  CHECK_THROWS_AS(m.set_opinion(5, 0, Opinion::kBad), std::logic_error);
  const std::size_t obs = m.observers().front();
  m.set_opinion(obs, 0, Opinion::kBad);
  CHECK(m.good_count(0) == 2);
}

TEST_CASE("no observers: reputation undefined") {
  const auto players = Players(PopulationState::Parse("1A:3,0-:2"));
  ImageMatrix m(players);
  CHECK_FALSE(m.reputation(0).has_value());
  const auto report = SimulateReputations(PopulationState::Parse("1A:3,0-:2"), Eps(0.05), Norm{}, 100, 1);
  CHECK_FALSE(report.reputations_defined);
  CHECK(report.strategies.empty());
}

TEST_CASE("two RA players without errors stay good") {
  const std::vector<Strategy> players = {kRA, kRA};
  ImageMatrix m(players);
  Rng rng(1);
  for (int t = 0; t < 50; ++t) {
    const auto rec = PlayRound(m, Norm{}, 0.0, rng);
    CHECK(rec.arrangement);
    CHECK(rec.cooperate_x);
    CHECK(rec.cooperate_y);
    CHECK(rec.x != rec.y);
  }
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) CHECK(m.opinion(i, j) == Opinion::kGood);
}

TEST_CASE("R- and 1A hand trace") {
  // players laid out as [R-, 1A]; only R- observes
  const std::vector<Strategy> players = {kRMinus, k1A};
  ImageMatrix m(players);
  Rng rng(3);
  const auto rec = PlayRound(m, Norm{}, 0.0, rng);
  CHECK(rec.offer_x);
  CHECK(rec.offer_y);
  CHECK(rec.arrangement);
  const bool x_is_faker = rec.x == 0;
  CHECK(rec.cooperate_x == !x_is_faker);
  CHECK(rec.cooperate_y == x_is_faker);
  CHECK(m.opinion(0, 0) == Opinion::kBad);
  CHECK(m.opinion(0, 1) == Opinion::kGood);
  // the 1A row never changes
  CHECK(m.opinion(1, 0) == Opinion::kGood);
  CHECK(m.opinion(1, 1) == Opinion::kGood);
  CHECK(m.reputation(0) == 0.0);
  CHECK(m.reputation(1) == 1.0);
}

TEST_CASE("perception error 1 flips every assessment") {
  const std::vector<Strategy> players = {kRA, kRA, kRA};
  ImageMatrix m(players);
  Rng rng(5);
  const auto rec = PlayRound(m, Norm{}, 1.0, rng);
  CHECK(rec.arrangement);
  for (auto obs : m.observers()) {
    CHECK(m.opinion(obs, rec.x) == Opinion::kBad);
    CHECK(m.opinion(obs, rec.y) == Opinion::kBad);
  }
}

TEST_CASE("non-observer rows never change; no change without arrangement") {
  const auto pop = PopulationState::Parse("1+:3,1A:4,1-:3,R+:4,RA:6,R-:4,0+:2,0A:2,0-:2");
  const auto players = Players(pop);
  ImageMatrix m(players);
  const auto initial = m.raw();
  Rng rng(11);
  const std::size_t n = m.size();
  for (int t = 0; t < 20000; ++t) {
    const auto before = m.raw();
    const auto rec = PlayRound(m, Norm{}, 0.1, rng);
    CHECK(rec.arrangement == (rec.offer_x && rec.offer_y));
    if (!rec.arrangement) {
      REQUIRE(m.raw() == before);
    } else {
      // only the columns of x and y may change
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          if (j == rec.x || j == rec.y) continue;
          REQUIRE(m.opinion(i, j) == static_cast<Opinion>(before[i * n + j]));
        }
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (m.is_observer(i)) continue;
    for (std::size_t j = 0; j < n; ++j) CHECK(m.opinion(i, j) == static_cast<Opinion>(initial[i * n + j]));
  }
}

TEST_CASE("single observer: instantaneous reputations are 0 or 1") {
  const auto players = Players(PopulationState::Parse("RA:1,1A:3,1-:2"));
  ImageMatrix m(players);
  Rng rng(13);
  for (int t = 0; t < 5000; ++t) {
    PlayRound(m, Norm{}, 0.2, rng);
    for (std::size_t p = 0; p < m.size(); ++p) {
      const double r = *m.reputation(p);
      REQUIRE((r == 0.0 || r == 1.0));
    }
  }
  const auto report = SimulateReputations(PopulationState::Parse("RA:1,1A:3,1-:2"), Eps(0.2), Norm{}, 20000, 2);
  for (const auto& e : report.strategies) {
    CHECK(e.mean >= 0.0);
    CHECK(e.mean <= 1.0);
  }
}

TEST_CASE("no errors with redemption: exact long-run values") {
  const auto report = SimulateReputations(PopulationState::Parse("RA:5,R-:3,1A:2"), Eps(0.0), Norm{}, 100000, 4);
  REQUIRE(report.reputations_defined);
  CHECK(report.find(kRA)->mean == 1.0);
  CHECK(report.find(k1A)->mean == 1.0);
  CHECK(report.find(kRMinus)->mean == 0.0);
  CHECK(report.num_observers == 8);
}

TEST_CASE("simulation is deterministic per seed") {
  const auto pop = PopulationState::Parse("RA:20,1A:6,R-:4");
  const auto a = SimulateReputations(pop, Eps(0.05), Norm{}, 20000, 77);
  const auto b = SimulateReputations(pop, Eps(0.05), Norm{}, 20000, 77);
  const auto c = SimulateReputations(pop, Eps(0.05), Norm{}, 20000, 78);
  REQUIRE(a.strategies.size() == b.strategies.size());
  bool differs = false;
  for (std::size_t i = 0; i < a.strategies.size(); ++i) {
    CHECK(a.strategies[i].mean == b.strategies[i].mean);
    differs = differs || a.strategies[i].mean != c.strategies[i].mean;
  }
  CHECK(differs);
}

TEST_CASE("mixed composition near predictions") {
  const auto pop = PopulationState::Parse("RA:60,1A:30,R-:10");
  const auto report = SimulateReputations(pop, Eps(0.05), Norm{}, 200000, 9);
  for (const auto& e : report.strategies) {
    CAPTURE(e.strategy.name());
    CHECK(e.redemption);
    CHECK(std::abs(e.mean - e.prediction.value) < 0.03);
    REQUIRE(e.mean_excluding_self.has_value());
  }
}

TEST_CASE("rounds must be even and positive") {
  const auto pop = PopulationState::Parse("RA:3");
  CHECK_THROWS_AS(SimulateReputations(pop, Eps(0.05), Norm{}, 11, 1), std::invalid_argument);
  CHECK_THROWS_AS(SimulateReputations(pop, Eps(0.05), Norm{}, 0, 1), std::invalid_argument);
}

TEST_CASE("composition sampling") {
  Trajectory constant;
  const auto pop = PopulationState::Parse("RA:7,0-:3");
  for (int t = 0; t < 10; ++t) constant.snapshots.push_back({t, pop, 0.0});
  Rng rng(1);
  const Trajectory store[] = {constant};
  auto sample = SampleCompositions(store, 5, rng);
  CHECK_FALSE(sample.with_replacement);
  CHECK(sample.compositions.size() == 5);
  for (const auto& c : sample.compositions) CHECK(c == pop);

  sample = SampleCompositions(store, 25, rng);
  CHECK(sample.with_replacement);
  CHECK(sample.compositions.size() == 25);

  // without replacement every snapshot is drawn at most once
  Trajectory distinct;
  for (int t = 0; t < 10; ++t) {
    distinct.snapshots.push_back({t, PopulationState::Parse("RA:" + std::to_string(t + 2)), 0.0});
  }
  const Trajectory store2[] = {distinct};
  sample = SampleCompositions(store2, 10, rng);
  std::vector<std::int64_t> seen;
  for (const auto& c : sample.compositions) seen.push_back(c.count(kRA));
  std::sort(seen.begin(), seen.end());
  for (int t = 0; t < 10; ++t) CHECK(seen[static_cast<std::size_t>(t)] == t + 2);

  const std::vector<Trajectory> empty;
  CHECK_THROWS_AS(SampleCompositions(empty, 3, rng), std::invalid_argument);
}

TEST_CASE("report CSV") {
  const auto report = SimulateReputations(PopulationState::Parse("RA:4,1-:2"), Eps(0.05), Norm{}, 1000, 3);
  std::ostringstream os;
  WriteReputationCsvHeader(os);
  WriteReputationCsvRows(os, "demo", report);
  const std::string text = os.str();
  CHECK(text.rfind("# schema: commitrep.reputation/1\n", 0) == 0);
  CHECK(text.find("demo,\"1-:2,RA:4\",1-,") != std::string::npos);
}

}  // TEST_SUITE
