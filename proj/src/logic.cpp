#include "mlnn/logic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mlnn {

void check_tau(double tau) {
    if (!(std::isfinite(tau) && tau > 0.0)) throw std::invalid_argument("temperature must be finite and positive");
}

namespace {

void require_nonempty(std::span<const Var> xs, const char* what) {
    if (xs.empty()) throw std::invalid_argument(std::string(what) + ": empty input");
}

// x capped at 1, keeping x itself (bit for bit) when it is already below.
Var cap1(Var x) { return x - max0(x - 1.0); }

}  // namespace

Var softmin(std::span<const Var> xs, double tau) {
    check_tau(tau);
    require_nonempty(xs, "softmin");
    if (xs.size() == 1) return xs[0];
    double m = xs[0].value();
    for (Var x : xs) m = std::min(m, x.value());
    // The shift is a constant: its exact derivative through both terms cancels.
    std::vector<Var> e;
    e.reserve(xs.size());
    for (Var x : xs) e.push_back(exp(scale(x - m, -1.0 / tau)));
    return scale(log(sum(e)), -tau) + m;
}

Var softmax(std::span<const Var> xs, double tau) {
    check_tau(tau);
    require_nonempty(xs, "softmax");
    if (xs.size() == 1) return xs[0];
    double m = xs[0].value();
    for (Var x : xs) m = std::max(m, x.value());
    std::vector<Var> e;
    e.reserve(xs.size());
    for (Var x : xs) e.push_back(exp(scale(x - m, 1.0 / tau)));
    return scale(log(sum(e)), tau) + m;
}

Var conv_pool(std::span<const Var> xs, std::span<const Var> zs, double tau) {
    check_tau(tau);
    require_nonempty(xs, "conv_pool");
    if (xs.size() != zs.size()) throw std::invalid_argument("conv_pool: length mismatch");
    if (xs.size() == 1) return xs[0];
    double zmax = zs[0].value();
    double xmin = xs[0].value();
    for (Var z : zs) zmax = std::max(zmax, z.value());
    for (Var x : xs) xmin = std::min(xmin, x.value());
    // xmin + sum w_i (x_i - xmin): equal inputs come back unchanged.
    std::vector<Var> e, num;
    e.reserve(xs.size());
    num.reserve(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        e.push_back(exp(scale(zs[i] - zmax, 1.0 / tau)));
        num.push_back(e.back() * (xs[i] - xmin));
    }
    return sum(num) / sum(e) + xmin;
}

BoundNodes box_bounds(std::span<const BoundNodes> child, std::span<const Var> row, double tau) {
    if (child.size() != row.size() || child.empty()) throw std::invalid_argument("box: shape mismatch");
    const std::size_t n = child.size();
    std::vector<Var> lo(n), hi(n), sel(n);
    for (std::size_t j = 0; j < n; ++j) {
        Var miss = 1.0 - row[j];
        lo[j] = miss + child[j].lower;
        hi[j] = miss + child[j].upper;
        sel[j] = -hi[j];
    }
    return {clamp01(softmin(lo, tau)), clamp01(conv_pool(hi, sel, tau))};
}

BoundNodes diamond_bounds(std::span<const BoundNodes> child, std::span<const Var> row, double tau) {
    if (child.size() != row.size() || child.empty()) throw std::invalid_argument("diamond: shape mismatch");
    const std::size_t n = child.size();
    std::vector<Var> lo(n), hi(n);
    for (std::size_t j = 0; j < n; ++j) {
        lo[j] = (row[j] + child[j].lower) - 1.0;
        hi[j] = (row[j] + child[j].upper) - 1.0;
    }
    return {clamp01(conv_pool(lo, lo, tau)), clamp01(softmax(hi, tau))};
}

BoundNodes connective(FormulaKind kind, BoundNodes a, BoundNodes b) {
    switch (kind) {
    case FormulaKind::negation:
        return {1.0 - a.upper, 1.0 - a.lower};
    case FormulaKind::conjunction:
        return {max0(a.lower + b.lower - 1.0), max0(a.upper + b.upper - 1.0)};
    case FormulaKind::disjunction:
        return {cap1(a.lower + b.lower), cap1(a.upper + b.upper)};
    case FormulaKind::implication:
        return {cap1(1.0 - a.upper + b.lower), cap1(1.0 - a.lower + b.upper)};
    case FormulaKind::product_implication:
        // 1 - a + ab falls in a and rises in b
        return {1.0 - a.upper + a.upper * b.lower, 1.0 - a.lower + a.lower * b.upper};
    default:
        throw std::invalid_argument("connective: unsupported kind '" + std::string(kind_name(kind)) + "'");
    }
}

double BoundStore::tighten(FormulaId f, StateIndex s, Interval b) {
    const std::size_t k = slot(f, s);
    Interval& c = cells_.at(k);
    if (!known_[k]) {
        known_[k] = 1;
        c = b;
        return 0.0;
    }
    const Interval next{std::max(c.lower, b.lower), std::min(c.upper, b.upper)};
    const double change = std::max(std::abs(next.lower - c.lower), std::abs(next.upper - c.upper));
    c = next;
    return change;
}

void BoundStore::resize(std::size_t formulas) {
    if (formulas * states_ < cells_.size()) return;
    cells_.resize(formulas * states_);
    known_.resize(formulas * states_, 0);
}

Evaluator::Evaluator(const KripkeModel& model, const FormulaPool& pool, Tape& tape, SoftConfig soft,
                     const BoundStore* store)
    : model_(model), pool_(pool), tape_(tape), soft_(soft), store_(store) {
    check_tau(soft_.tau);
    if (store_ && store_->states() != model_.states.size()) {
        throw std::invalid_argument("bound store does not match the state space");
    }
}

const Matrix<Var>& Evaluator::access(const std::string& relation) {
    auto it = access_.find(relation);
    if (it != access_.end()) return it->second;
    const Accessibility& a = model_.relations.at(relation);
    if (a.size() != model_.states.size()) {
        throw std::invalid_argument("relation '" + relation + "' does not match the state space");
    }
    return access_.emplace(relation, a.materialize(tape_)).first->second;
}

BoundNodes Evaluator::eval(FormulaId f, StateIndex s) {
    if (s >= model_.states.size()) throw std::out_of_range("state index out of range");
    const std::uint64_t key = static_cast<std::uint64_t>(f) * model_.states.size() + s;
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;

    BoundNodes b = compute(f, s);
    if (store_ && f < store_->formulas() && store_->has(f, s)) {
        // intersect with the tightened bounds; the tighter side wins
        const Interval& t = store_->get(f, s);
        if (t.lower > b.lower.value()) b.lower = tape_.lift(t.lower);
        if (t.upper < b.upper.value()) b.upper = tape_.lift(t.upper);
    }
    memo_.emplace(key, b);
    return b;
}

Interval Evaluator::value(FormulaId f, StateIndex s) {
    const BoundNodes b = eval(f, s);
    return {b.lower.value(), b.upper.value()};
}

BoundNodes Evaluator::compute(FormulaId f, StateIndex s) {
    const FormulaNode& n = pool_.node(f);
    switch (n.kind) {
    case FormulaKind::atom: {
        auto prop = model_.propositions.find(n.symbol);
        if (!prop) throw std::invalid_argument("unknown proposition '" + n.symbol + "'");
        return model_.propositions.on_tape(tape_, *prop, s);
    }
    case FormulaKind::box:
    case FormulaKind::diamond: {
        const Matrix<Var>& a = access(n.symbol);
        std::vector<BoundNodes> child(model_.states.size());
        for (StateIndex j = 0; j < child.size(); ++j) child[j] = eval(n.left, j);
        return n.kind == FormulaKind::box ? box_bounds(child, a.row(s), soft_.tau)
                                          : diamond_bounds(child, a.row(s), soft_.tau);
    }
    case FormulaKind::negation:
        return connective(n.kind, eval(n.left, s));
    default:
        return connective(n.kind, eval(n.left, s), eval(n.right, s));
    }
}

void validate_formula(const FormulaPool& pool, FormulaId f, const KripkeModel& model) {
    for (const auto& p : pool.atoms(f)) {
        if (!model.propositions.find(p)) throw std::invalid_argument("unknown proposition '" + p + "'");
    }
    for (const auto& r : pool.relations(f)) {
        if (!model.relations.contains(r)) throw std::invalid_argument("unknown relation '" + r + "'");
        if (model.relations.at(r).size() != model.states.size()) {
            throw std::invalid_argument("relation '" + r + "' does not match the state space");
        }
    }
}

}  // namespace mlnn
