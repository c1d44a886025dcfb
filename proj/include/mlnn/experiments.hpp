#pragma once

// End-to-end runs of the built-in scenarios: build, train or propagate,
// evaluate. Shared by the command line tool and the acceptance suite.

#include <map>
#include <optional>
#include <string>

#include "mlnn/oracle.hpp"
#include "mlnn/results.hpp"
#include "mlnn/scenarios.hpp"

namespace mlnn {

struct ToyOutcome {
    explicit ToyOutcome(BuiltModel b) : built(std::move(b)) {}

    BuiltModel built;
    TrainHistory history;
    Matrix<double> epistemic;  // learned weights
    // formula name -> state label -> bounds after training (upward evaluation)
    std::map<std::string, std::map<std::string, Interval>> bounds;
    double initial_contradiction = 0.0;
    double final_contradiction = 0.0;
};

ToyOutcome run_epistemic_toy(const ModelSpec& spec = scenario_epistemic_toy());

struct RingOutcome {
    explicit RingOutcome(BuiltModel b) : built(std::move(b)) {}

    BuiltModel built;
    TrainHistory history;
    Matrix<double> learned;
    Matrix<double> truth;
    double mse = 0.0;
    double contradiction = 0.0;
};

RingOutcome run_ring(const RingOptions& options);
RingOutcome run_ring(const ModelSpec& spec);

struct RoyalOutcome {
    explicit RoyalOutcome(BuiltModel b) : built(std::move(b)) {}

    BuiltModel built;
    std::optional<TrainHistory> history;  // learnable heirs only
    FixpointResult fixpoint;
    Interval heir_W, heir_H;
    Interval alive_W, alive_H;  // necessarily alive, at the present
    std::optional<bool> oracle_heir_W, oracle_heir_H;
    std::size_t oracle_models = 0;
};

RoyalOutcome run_royal(bool learnable_heirs = false);

}  // namespace mlnn
