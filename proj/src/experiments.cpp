#include "mlnn/experiments.hpp"

#include <stdexcept>

namespace mlnn {

ToyOutcome run_epistemic_toy(const ModelSpec& spec) {
    ToyOutcome out(build(spec));
    BuiltModel& b = out.built;
    out.history = train(b.model, b.pool, b.objective(), b.train);
    out.epistemic = b.model.relations.at("epistemic").values(b.model.parameters);
    for (const BoundRow& r : formula_bounds(b)) out.bounds[r.formula][r.state] = r.bounds;
    out.initial_contradiction = out.history.epochs.front().contradiction;
    out.final_contradiction = out.history.final.contradiction;
    return out;
}

RingOutcome run_ring(const ModelSpec& spec) {
    RingOutcome out(build(spec));
    BuiltModel& b = out.built;
    out.history = train(b.model, b.pool, b.objective(), b.train);
    out.learned = b.model.relations.at("trust").values(b.model.parameters);
    out.truth = ring_ground_truth(b.model.states.size());
    out.mse = structure_mse(out.learned, out.truth);
    out.contradiction = out.history.final.contradiction;
    return out;
}

RingOutcome run_ring(const RingOptions& options) { return run_ring(scenario_ring(options)); }

RoyalOutcome run_royal(bool learnable_heirs) {
    RoyalOutcome out(build(scenario_royal_succession(learnable_heirs)));
    BuiltModel& b = out.built;
    if (learnable_heirs) out.history = train(b.model, b.pool, b.objective(), b.train);

    out.fixpoint = run_to_fixpoint(b.model, b.pool, b.roots, b.axioms, {b.train.tau}, b.train.inference);
    const StateIndex now = b.model.states.index("w_Present");
    out.heir_W = out.fixpoint.bounds.get(b.formula("heir_W"), now);
    out.heir_H = out.fixpoint.bounds.get(b.formula("heir_H"), now);
    out.alive_W = out.fixpoint.bounds.get(b.formula("necessarily_alive_W"), now);
    out.alive_H = out.fixpoint.bounds.get(b.formula("necessarily_alive_H"), now);

    const CrispProblem problem = crisp_problem(b.model);
    std::vector<CrispAxiom> axioms;
    for (const Axiom& a : b.axioms) {
        if (a.lower == 1.0) {
            axioms.push_back({a.formula, a.state, true});
        } else if (a.upper == 0.0) {
            axioms.push_back({a.formula, a.state, false});
        } else {
            throw std::logic_error("royal succession axioms must be crisp");
        }
    }
    const CrispEntailment e = crisp_entailment(problem, b.pool, axioms);
    out.oracle_models = e.models;
    for (std::size_t c = 0; c < problem.unknown.size(); ++c) {
        if (problem.unknown[c].state != now) continue;
        if (problem.unknown[c].proposition == "isHeir_W") out.oracle_heir_W = e.forced[c];
        if (problem.unknown[c].proposition == "isHeir_H") out.oracle_heir_H = e.forced[c];
    }
    return out;
}

}  // namespace mlnn
