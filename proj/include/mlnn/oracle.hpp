#pragma once

// Two-valued Kripke model checking, used as ground truth for the soft engine.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mlnn/formula.hpp"
#include "mlnn/kripke.hpp"

namespace mlnn {

struct CrispModel {
    std::size_t states = 0;
    std::map<std::string, Matrix<std::uint8_t>, std::less<>> relations;
    std::map<std::string, std::vector<std::uint8_t>, std::less<>> valuation;
};

// Classical satisfaction by recursion. Box is the conjunction over successors
// (true when there are none), diamond the disjunction. Product implication is
// read classically. Throws std::invalid_argument on unresolved names.
bool crisp_check(const CrispModel& model, const FormulaPool& pool, FormulaId f, StateIndex s);

// The same model as a soft one: fixed 0/1 relations and point bounds.
KripkeModel to_kripke(const CrispModel& model);

struct CrispCell {
    std::string proposition;
    StateIndex state;
};

// A KripkeModel read crisply: every fixed relation entry and every proposition
// bound must be 0 or 1, except cells bounded by [0, 1], which are reported as
// unknown. Throws std::invalid_argument for anything else.
struct CrispProblem {
    CrispModel model;
    std::vector<CrispCell> unknown;
};
CrispProblem crisp_problem(const KripkeModel& model);

struct CrispAxiom {
    FormulaId formula;
    std::optional<StateIndex> state;  // every state when empty
    bool value = true;
};

// Enumerates every assignment of the unknown cells, keeps those satisfying all
// axioms, and reports per cell the value shared by all of them (empty when
// they disagree). `satisfiable` is false when no assignment survives.
struct CrispEntailment {
    bool satisfiable = false;
    std::size_t models = 0;
    std::vector<std::optional<bool>> forced;  // parallel to the unknown cells
};
CrispEntailment crisp_entailment(const CrispProblem& problem, const FormulaPool& pool,
                                 const std::vector<CrispAxiom>& axioms);

}  // namespace mlnn
