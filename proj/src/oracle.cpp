#include "mlnn/oracle.hpp"

#include <stdexcept>

namespace mlnn {

bool crisp_check(const CrispModel& m, const FormulaPool& pool, FormulaId f, StateIndex s) {
    if (s >= m.states) throw std::out_of_range("state index out of range");
    const FormulaNode& n = pool.node(f);
    switch (n.kind) {
    case FormulaKind::atom: {
        auto it = m.valuation.find(n.symbol);
        if (it == m.valuation.end()) throw std::invalid_argument("unknown proposition '" + n.symbol + "'");
        return it->second.at(s) != 0;
    }
    case FormulaKind::negation:
        return !crisp_check(m, pool, n.left, s);
    case FormulaKind::conjunction:
        return crisp_check(m, pool, n.left, s) && crisp_check(m, pool, n.right, s);
    case FormulaKind::disjunction:
        return crisp_check(m, pool, n.left, s) || crisp_check(m, pool, n.right, s);
    case FormulaKind::implication:
    case FormulaKind::product_implication:
        return !crisp_check(m, pool, n.left, s) || crisp_check(m, pool, n.right, s);
    case FormulaKind::box:
    case FormulaKind::diamond: {
        auto it = m.relations.find(n.symbol);
        if (it == m.relations.end()) throw std::invalid_argument("unknown relation '" + n.symbol + "'");
        const bool box = n.kind == FormulaKind::box;
        for (StateIndex j = 0; j < m.states; ++j) {
            if (!it->second(s, j)) continue;
            if (crisp_check(m, pool, n.left, j) != box) return !box;
        }
        return box;
    }
    }
    throw std::invalid_argument("unknown formula kind");
}

KripkeModel to_kripke(const CrispModel& m) {
    std::vector<std::string> worlds;
    for (std::size_t i = 0; i < m.states; ++i) worlds.push_back("s" + std::to_string(i));
    KripkeModel k{StateSpace(worlds)};
    for (const auto& [name, values] : m.valuation) {
        if (values.size() != m.states) throw std::invalid_argument("valuation of '" + name + "' has the wrong length");
        std::vector<Interval> cells;
        for (auto v : values) cells.push_back({v ? 1.0 : 0.0, v ? 1.0 : 0.0});
        k.propositions.add(name, std::move(cells));
    }
    for (const auto& [name, r] : m.relations) {
        Matrix<double> w(r.rows(), r.cols());
        for (std::size_t i = 0; i < r.data().size(); ++i) w.data()[i] = r.data()[i] ? 1.0 : 0.0;
        k.relations.add(name, Accessibility::fixed(std::move(w)));
    }
    return k;
}

CrispProblem crisp_problem(const KripkeModel& k) {
    CrispProblem p;
    const std::size_t n = k.states.size();
    p.model.states = n;
    for (const auto& [name, rel] : k.relations) {
        if (rel.kind() != AccessKind::fixed) throw std::invalid_argument("relation '" + name + "' is not fixed");
        const Matrix<double> w = rel.values(k.parameters);
        Matrix<std::uint8_t> r(n, n, 0);
        for (std::size_t i = 0; i < w.data().size(); ++i) {
            const double v = w.data()[i];
            if (v != 0.0 && v != 1.0) throw std::invalid_argument("relation '" + name + "' is not crisp");
            r.data()[i] = v == 1.0;
        }
        p.model.relations.emplace(name, std::move(r));
    }
    for (std::size_t prop = 0; prop < k.propositions.size(); ++prop) {
        const std::string& name = k.propositions.name(prop);
        std::vector<std::uint8_t> values(n, 0);
        for (StateIndex s = 0; s < n; ++s) {
            const Interval b = k.propositions.learnable(prop) ? Interval{0.0, 1.0}
                                                               : k.propositions.bounds(prop, s, k.parameters);
            if (b.lower == b.upper && (b.lower == 0.0 || b.lower == 1.0)) {
                values[s] = b.lower == 1.0;
            } else if (b.lower == 0.0 && b.upper == 1.0) {
                p.unknown.push_back({name, s});
            } else {
                throw std::invalid_argument("proposition '" + name + "' has non-crisp bounds");
            }
        }
        p.model.valuation.emplace(name, std::move(values));
    }
    return p;
}

CrispEntailment crisp_entailment(const CrispProblem& problem, const FormulaPool& pool,
                                 const std::vector<CrispAxiom>& axioms) {
    const std::size_t u = problem.unknown.size();
    if (u > 20) throw std::invalid_argument("too many unknown cells to enumerate");
    CrispEntailment out;
    out.forced.assign(u, std::nullopt);
    std::vector<std::uint8_t> seen_true(u, 0), seen_false(u, 0);
    CrispModel m = problem.model;

    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << u); ++bits) {
        for (std::size_t c = 0; c < u; ++c) {
            const CrispCell& cell = problem.unknown[c];
            m.valuation.at(cell.proposition).at(cell.state) = (bits >> c) & 1;
        }
        bool ok = true;
        for (const CrispAxiom& ax : axioms) {
            const StateIndex first = ax.state ? *ax.state : 0;
            const StateIndex last = ax.state ? *ax.state + 1 : m.states;
            for (StateIndex s = first; ok && s < last; ++s) ok = crisp_check(m, pool, ax.formula, s) == ax.value;
            if (!ok) break;
        }
        if (!ok) continue;
        ++out.models;
        for (std::size_t c = 0; c < u; ++c) ((bits >> c) & 1 ? seen_true : seen_false)[c] = 1;
    }
    out.satisfiable = out.models > 0;
    if (out.satisfiable) {
        for (std::size_t c = 0; c < u; ++c) {
            if (seen_true[c] != seen_false[c]) out.forced[c] = seen_true[c] != 0;
        }
    }
    return out;
}

}  // namespace mlnn
