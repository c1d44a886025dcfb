#pragma once

// Soft aggregators, the box/diamond neurons, Lukasiewicz connectives and the
// upward evaluator that turns a formula into [L, U] nodes on a tape.

#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "mlnn/autodiff.hpp"
#include "mlnn/formula.hpp"
#include "mlnn/kripke.hpp"

namespace mlnn {

struct SoftConfig {
    double tau = 0.1;
};

void check_tau(double tau);

// -tau log sum exp(-x/tau), shifted by min(x) for stability.
Var softmin(std::span<const Var> xs, double tau);
// tau log sum exp(x/tau) == 1 - softmin(1 - x).
Var softmax(std::span<const Var> xs, double tau);
// sum_i w_i x_i with w = softmax(z / tau).
Var conv_pool(std::span<const Var> xs, std::span<const Var> zs, double tau);

// Bounds of box/diamond phi at one state from the child bounds at every state
// and that state's row of the accessibility matrix. Every state enters the
// aggregate; inaccessible ones contribute neutral terms.
BoundNodes box_bounds(std::span<const BoundNodes> child, std::span<const Var> access_row, double tau);
BoundNodes diamond_bounds(std::span<const BoundNodes> child, std::span<const Var> access_row, double tau);

// Connectives on bounds. `b` is ignored for negation. Atoms and modal kinds
// throw std::invalid_argument.
BoundNodes connective(FormulaKind kind, BoundNodes a, BoundNodes b = {});

// Tightened bounds per (formula, state), kept by the fixpoint procedure.
class BoundStore {
public:
    BoundStore() = default;
    BoundStore(std::size_t formulas, std::size_t states)
        : states_(states), cells_(formulas * states), known_(formulas * states, 0) {}

    std::size_t formulas() const { return states_ ? cells_.size() / states_ : 0; }
    std::size_t states() const { return states_; }

    bool has(FormulaId f, StateIndex s) const { return known_.at(slot(f, s)) != 0; }
    const Interval& get(FormulaId f, StateIndex s) const { return cells_.at(slot(f, s)); }

    // Intersects with what is stored (or sets it on first use). Returns the
    // largest absolute change of either bound; a first assignment counts as 0.
    double tighten(FormulaId f, StateIndex s, Interval b);

    // Forgets nothing, but grows to cover more formulas of the same pool.
    void resize(std::size_t formulas);

private:
    std::size_t slot(FormulaId f, StateIndex s) const { return static_cast<std::size_t>(f) * states_ + s; }

    std::size_t states_ = 0;
    std::vector<Interval> cells_;
    std::vector<std::uint8_t> known_;
};

// Lazily evaluates (formula, state) pairs on a tape, memoizing each one.
// Accessibility matrices are materialized once per relation. With a store,
// computed bounds are intersected with the stored ones and atoms read their
// stored bounds.
class Evaluator {
public:
    Evaluator(const KripkeModel& model, const FormulaPool& pool, Tape& tape, SoftConfig soft = {},
              const BoundStore* store = nullptr);

    BoundNodes eval(FormulaId f, StateIndex s);
    Interval value(FormulaId f, StateIndex s);

    const Matrix<Var>& access(const std::string& relation);

    Tape& tape() { return tape_; }
    const KripkeModel& model() const { return model_; }
    const FormulaPool& pool() const { return pool_; }
    double tau() const { return soft_.tau; }

private:
    BoundNodes compute(FormulaId f, StateIndex s);

    const KripkeModel& model_;
    const FormulaPool& pool_;
    Tape& tape_;
    SoftConfig soft_;
    const BoundStore* store_;
    std::unordered_map<std::uint64_t, BoundNodes> memo_;
    std::map<std::string, Matrix<Var>, std::less<>> access_;
};

// Checks that every atom and relation used by `f` exists in `model`; throws
// std::invalid_argument naming the first unresolved one.
void validate_formula(const FormulaPool& pool, FormulaId f, const KripkeModel& model);

}  // namespace mlnn
