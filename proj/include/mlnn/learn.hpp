#pragma once

// Joint objective (task + contradiction + relational regularizers) and the
// epoch loop that learns accessibility weights and proposition values.

#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "mlnn/inference.hpp"

namespace mlnn {

struct RegWeights {
    double reflexive = 0.0;   // lambda_T
    double transitive = 0.0;  // lambda_4
    double symmetric = 0.0;   // lambda_S
    double sparsity = 0.0;    // L1 on the materialized weights

    bool operator==(const RegWeights&) const = default;
};

struct WatchEntry {
    std::string relation;
    std::size_t row = 0;
    std::size_t col = 0;

    bool operator==(const WatchEntry&) const = default;
};

struct TrainConfig {
    double beta = 1.0;
    RegWeights reg;                                        // every learnable relation
    std::map<std::string, RegWeights, std::less<>> reg_for;  // per-relation overrides
    double learning_rate = 0.01;
    std::size_t epochs = 100;
    std::uint64_t seed = 0;
    double tau = 0.1;
    InferenceConfig inference;
    AxiomMode axiom_mode = AxiomMode::consistency;
    bool downward_in_loop = false;
    std::vector<WatchEntry> watch;  // empty: every learnable cell when |S| <= 32

    void validate() const;
    const RegWeights& weights_for(std::string_view relation) const;
    bool operator==(const TrainConfig&) const = default;
};

// What the objective needs besides the model: the formulas whose intervals are
// tracked for L > U, the axioms, and optional scenario task penalties.
struct Objective {
    std::vector<TrackedCell> tracked;
    AxiomSet axioms;
    std::function<std::vector<Var>(Evaluator&)> task;
};

struct LossTerms {
    Var total;
    Var task;
    Var contradiction;
    Var reflexive;
    Var transitive;
    Var symmetric;
    Var sparsity;
};

// L_task + beta L_contra + sum over learnable relations of the weighted
// regularizers.
LossTerms total_loss(Evaluator& ev, const Objective& objective, const TrainConfig& cfg);

struct EpochRecord {
    double total = 0.0;
    double task = 0.0;
    double contradiction = 0.0;
    double reflexive = 0.0;
    double transitive = 0.0;
    double symmetric = 0.0;
    double sparsity = 0.0;
    std::vector<double> watched;
};

struct TrainHistory {
    std::vector<WatchEntry> watch;
    std::vector<EpochRecord> epochs;  // losses from each epoch's forward pass, before its update
    EpochRecord final;                // one more evaluation after the last update

    void write_csv(std::ostream& out) const;
};

std::vector<WatchEntry> default_watch(const KripkeModel& model);

// Per epoch: refresh top-k masks, evaluate, backpropagate, one Adam step.
// Throws std::runtime_error when the loss stops being finite.
TrainHistory train(KripkeModel& model, const FormulaPool& pool, const Objective& objective, const TrainConfig& cfg);

// Mean over all cells of the squared difference.
double structure_mse(const Matrix<double>& learned, const Matrix<double>& truth);

// Six significant digits, the format used for every printed number.
std::string format_number(double v);

}  // namespace mlnn
