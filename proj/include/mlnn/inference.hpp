#pragma once

// Upward-downward bound propagation to a fixed point, plus the differentiable
// contradiction measure used for training.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mlnn/logic.hpp"

namespace mlnn {

struct InferenceConfig {
    std::size_t max_iterations = 100;
    double epsilon = 1e-6;
    double access_threshold = 0.5;  // downward rules only cross links above this weight

    void validate() const;
    bool operator==(const InferenceConfig&) const = default;
};

// A formula asserted to lie in [lower, upper] at one state, or at every state
// when `state` is empty.
struct Axiom {
    FormulaId formula = no_formula;
    std::optional<StateIndex> state;
    double lower = 1.0;
    double upper = 1.0;
};
using AxiomSet = std::vector<Axiom>;

void validate_axiom(const Axiom& axiom, std::size_t states);

// consistency: the asserted and computed intervals must overlap,
//   max0(L0 - U) + max0(L - U0).
// satisfaction: the computed interval must sit inside the asserted one,
//   max0(L0 - L) + max0(U - U0).
enum class AxiomMode { consistency, satisfaction };

std::string_view axiom_mode_name(AxiomMode mode);
AxiomMode parse_axiom_mode(std::string_view name);

struct TrackedCell {
    FormulaId formula;
    StateIndex state;
};

// Every formula in `roots` at every state.
std::vector<TrackedCell> track_all_states(std::span<const FormulaId> roots, std::size_t states);

// Sum over tracked cells of max0(L - U) plus the axiom hinges. Zero exactly
// when every tracked interval is consistent and every axiom is met.
Var contradiction_loss(Evaluator& ev, std::span<const TrackedCell> tracked, const AxiomSet& axioms,
                       AxiomMode mode = AxiomMode::consistency);

// Atoms from the model, every other formula [0, 1], then the axioms asserted.
BoundStore initial_store(const KripkeModel& model, const FormulaPool& pool, std::span<const FormulaId> formulas,
                         const AxiomSet& axioms);

// One upward sweep (children first) intersecting computed bounds into the
// store. `formulas` must be closed under subformulas and ascending. Returns
// the largest bound change.
double upward_pass(const KripkeModel& model, const FormulaPool& pool, std::span<const FormulaId> formulas,
                   BoundStore& store, SoftConfig soft = {});

// One downward sweep (parents first) applying the inverse rules. Never
// loosens a bound. Returns the largest bound change.
double downward_pass(const KripkeModel& model, const FormulaPool& pool, std::span<const FormulaId> formulas,
                     BoundStore& store, const InferenceConfig& cfg = {});

struct FixpointResult {
    BoundStore bounds;
    std::vector<FormulaId> formulas;  // closure of roots and axiom formulas
    std::size_t iterations = 0;
    bool converged = false;
    double last_change = 0.0;
    std::vector<BoundStore> trace;  // initial store plus one entry per iteration, if requested
};

// Alternates upward and downward passes until the largest change drops below
// epsilon or the iteration cap is hit. Non-convergence is reported in the
// result, never thrown. `start` resumes from an earlier store.
FixpointResult run_to_fixpoint(const KripkeModel& model, const FormulaPool& pool, std::span<const FormulaId> roots,
                               const AxiomSet& axioms, SoftConfig soft = {}, const InferenceConfig& cfg = {},
                               bool keep_trace = false, const BoundStore* start = nullptr);

}  // namespace mlnn
