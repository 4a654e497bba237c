#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>

#include "commitrep/analytic.hpp"
#include "commitrep/evolution.hpp"
#include "commitrep/experiment.hpp"
#include "commitrep/fixation.hpp"
#include "commitrep/reputation.hpp"

namespace py = pybind11;
using namespace commitrep;

namespace {

GameParams Game(double benefit, double arrangement_cost, double epsilon, const std::string& regime) {
  GameParams g;
  g.benefit = benefit;
  g.arrangement_cost = arrangement_cost;
  g.epsilon = epsilon;
  g.regime = ParseRegime(regime);
  g.Validate();
  return g;
}

std::map<std::string, std::int64_t> CountMap(const PopulationState& pop) {
  std::map<std::string, std::int64_t> out;
  for (auto s : AllStrategies()) {
    if (pop.count(s) > 0) out[s.name()] = pop.count(s);
  }
  return out;
}

PopulationState Composition(const std::map<std::string, std::int64_t>& counts) {
  std::map<Strategy, std::int64_t> parsed;
  for (const auto& [name, n] : counts) parsed[Strategy::Parse(name)] += n;
  return PopulationState::FromMap(parsed);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "commitrep core: commitment, reputation and evolution";
  m.attr("__version__") = COMMITREP_VERSION;

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  m.def("strategy_names", [] {
    std::vector<std::string> names;
    for (auto s : AllStrategies()) names.push_back(s.name());
    return names;
  }, "The nine strategy names in canonical order.");

  m.def("parse_strategy", [](const std::string& text) { return Strategy::Parse(text).name(); }, py::arg("text"),
        "Canonical name of a strategy; raises ValueError on unknown text.");

  m.def("predict_reputation",
        [](const std::string& strategy, double epsilon, const std::string& regime, bool redemption) {
          GameParams g;
          g.epsilon = epsilon;
          g.regime = ParseRegime(regime);
          const auto p = PredictReputation(Strategy::Parse(strategy), g, redemption);
          return py::make_tuple(to_string(p.kind), p.value);
        },
        py::arg("strategy"), py::arg("epsilon"), py::arg("regime"), py::arg("redemption"),
        "(kind, value) of the predicted long-run reputation.");

  m.def("redemption_possible", [](const std::map<std::string, std::int64_t>& counts, const std::string& focal) {
    return RedemptionPossible(Composition(counts), Strategy::Parse(focal));
  }, py::arg("composition"), py::arg("focal"));

  m.def("absorption_probability", &AbsorptionProbability, py::arg("num_observers"), py::arg("epsilon"));

  m.def("pairwise_payoff",
        [](const std::string& i, const std::string& j, double rep_i, double rep_j, double benefit,
           double arrangement_cost) {
          GameParams g;
          g.benefit = benefit;
          g.arrangement_cost = arrangement_cost;
          return PairwisePayoff(Strategy::Parse(i), Strategy::Parse(j), rep_i, rep_j, g);
        },
        py::arg("i"), py::arg("j"), py::arg("rep_i"), py::arg("rep_j"), py::arg("benefit") = 5.5,
        py::arg("arrangement_cost") = 1.0);

  m.def("payoff_matrix",
        [](const std::map<std::string, std::int64_t>& counts, double benefit, double arrangement_cost, double epsilon,
           const std::string& regime) {
          const auto pop = Composition(counts);
          const auto matrix = PopulationPayoffMatrix(pop, Game(benefit, arrangement_cost, epsilon, regime));
          std::map<std::string, std::map<std::string, double>> out;
          for (auto i : matrix.strategies()) {
            for (auto j : matrix.strategies()) out[i.name()][j.name()] = matrix.at(i, j);
          }
          return out;
        },
        py::arg("composition"), py::arg("benefit") = 5.5, py::arg("arrangement_cost") = 1.0,
        py::arg("epsilon") = 0.01, py::arg("regime") = "2b",
        "Payoff of row strategy against column strategy for the strategies present.");

  m.def("average_payoffs",
        [](const std::map<std::string, std::int64_t>& counts, double benefit, double arrangement_cost, double epsilon,
           const std::string& regime) {
          const auto pop = Composition(counts);
          const auto matrix = PopulationPayoffMatrix(pop, Game(benefit, arrangement_cost, epsilon, regime));
          std::map<std::string, double> out;
          for (auto s : matrix.strategies()) out[s.name()] = AveragePayoff(s, pop, matrix);
          return out;
        },
        py::arg("composition"), py::arg("benefit") = 5.5, py::arg("arrangement_cost") = 1.0,
        py::arg("epsilon") = 0.01, py::arg("regime") = "2b");

  m.def("imitation_probability", &ImitationProbability, py::arg("payoff_gap"), py::arg("selection_strength") = 1.0);

  m.def("fixation_probability",
        [](const std::string& invader, const std::string& resident, double benefit, double arrangement_cost,
           double epsilon, const std::string& regime, std::int64_t population_size, double selection_strength,
           const std::string& order) {
          FixationQuery q{Strategy::Parse(invader), Strategy::Parse(resident),
                          Game(benefit, arrangement_cost, epsilon, regime), population_size, selection_strength,
                          ParseProductOrder(order)};
          return FixationProbability(q).rho;
        },
        py::arg("invader"), py::arg("resident"), py::arg("benefit") = 5.5, py::arg("arrangement_cost") = 1.0,
        py::arg("epsilon") = 0.01, py::arg("regime") = "2b", py::arg("population_size") = 100,
        py::arg("selection_strength") = 1.0, py::arg("order") = "majority");

  m.def("run_evolution",
        [](double benefit, double arrangement_cost, double epsilon, const std::string& regime,
           std::int64_t population_size, std::int64_t turns, double mutation_rate, double selection_strength,
           std::uint64_t seed, std::int64_t snapshot_stride) {
          EvolutionParams evo;
          evo.population_size = population_size;
          evo.turns = turns;
          evo.mutation_rate = mutation_rate;
          evo.selection_strength = selection_strength;
          evo.seed = seed;
          evo.snapshot_stride = snapshot_stride;
          Trajectory traj;
          {
            py::gil_scoped_release release;
            traj = RunEvolution(Game(benefit, arrangement_cost, epsilon, regime), evo);
          }
          py::list snapshots;
          for (const auto& snap : traj.snapshots) {
            py::dict d;
            d["turn"] = snap.turn;
            d["counts"] = CountMap(snap.state);
            d["cooperation"] = snap.cooperation;
            snapshots.append(d);
          }
          std::map<std::string, double> tail;
          for (auto s : AllStrategies()) tail[s.name()] = traj.tail_frequency[s.index()];
          py::dict out;
          out["snapshots"] = snapshots;
          out["mean_cooperation"] = traj.mean_cooperation;
          out["tail_frequency"] = tail;
          out["tail_turns"] = traj.tail_turns;
          return out;
        },
        py::arg("benefit") = 5.5, py::arg("arrangement_cost") = 1.0, py::arg("epsilon") = 0.01,
        py::arg("regime") = "2b", py::arg("population_size") = 100, py::arg("turns") = 100000,
        py::arg("mutation_rate") = 0.01, py::arg("selection_strength") = 1.0, py::arg("seed") = 1,
        py::arg("snapshot_stride") = 100);

  m.def("simulate_reputations",
        [](const std::map<std::string, std::int64_t>& counts, double epsilon, std::int64_t rounds, std::uint64_t seed,
           const std::string& regime) {
          GameParams g;
          g.epsilon = epsilon;
          g.regime = ParseRegime(regime);
          ReputationReport report;
          const auto pop = Composition(counts);
          {
            py::gil_scoped_release release;
            report = SimulateReputations(pop, g, Norm::UpholdArrangements(), rounds, seed);
          }
          py::dict out;
          out["num_observers"] = report.num_observers;
          py::dict per;
          for (const auto& e : report.strategies) {
            py::dict d;
            d["mean"] = e.mean;
            d["mean_excluding_self"] = e.mean_excluding_self ? py::cast(*e.mean_excluding_self) : py::none();
            d["redemption"] = e.redemption;
            d["prediction"] = py::make_tuple(to_string(e.prediction.kind), e.prediction.value);
            per[py::str(e.strategy.name())] = d;
          }
          out["strategies"] = per;
          return out;
        },
        py::arg("composition"), py::arg("epsilon") = 0.05, py::arg("rounds") = 1000000, py::arg("seed") = 1,
        py::arg("regime") = "2b");

  m.def("_config_defaults", [] { return ToJson(ExperimentConfig{}).dump(); });
  m.def("_normalize_config", [](const std::string& text) { return ToJson(FromJson(nlohmann::json::parse(text))).dump(); });
  m.def("_run_config", [](const std::string& text) {
    const auto config = FromJson(nlohmann::json::parse(text));
    RunSummary summary;
    {
      py::gil_scoped_release release;
      summary = RunConfig(config);
    }
    return summary.manifest.dump();
  });
}
