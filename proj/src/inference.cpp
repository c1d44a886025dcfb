#include "mlnn/inference.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace mlnn {

void InferenceConfig::validate() const {
    if (max_iterations < 1) throw std::invalid_argument("max_iterations must be at least 1");
    if (!(epsilon > 0.0 && std::isfinite(epsilon))) throw std::invalid_argument("epsilon must be positive");
    if (!(access_threshold > 0.0 && access_threshold < 1.0)) {
        throw std::invalid_argument("access_threshold must lie in (0, 1)");
    }
}

void validate_axiom(const Axiom& axiom, std::size_t states) {
    if (!(axiom.lower >= 0.0 && axiom.lower <= 1.0 && axiom.upper >= 0.0 && axiom.upper <= 1.0)) {
        throw std::invalid_argument("axiom bounds must lie in [0,1]");
    }
    if (axiom.state && *axiom.state >= states) throw std::out_of_range("axiom state out of range");
}

std::string_view axiom_mode_name(AxiomMode mode) {
    return mode == AxiomMode::consistency ? "consistency" : "satisfaction";
}

AxiomMode parse_axiom_mode(std::string_view name) {
    if (name == "consistency") return AxiomMode::consistency;
    if (name == "satisfaction") return AxiomMode::satisfaction;
    throw std::invalid_argument("unknown axiom mode '" + std::string(name) + "'");
}

std::vector<TrackedCell> track_all_states(std::span<const FormulaId> roots, std::size_t states) {
    std::vector<TrackedCell> out;
    out.reserve(roots.size() * states);
    for (FormulaId f : roots) {
        for (StateIndex s = 0; s < states; ++s) out.push_back({f, s});
    }
    return out;
}

Var contradiction_loss(Evaluator& ev, std::span<const TrackedCell> tracked, const AxiomSet& axioms, AxiomMode mode) {
    Tape& tape = ev.tape();
    const std::size_t n = ev.model().states.size();
    std::vector<Var> terms{tape.lift(0.0)};
    for (const TrackedCell& c : tracked) {
        const BoundNodes b = ev.eval(c.formula, c.state);
        terms.push_back(max0(b.lower - b.upper));
    }
    for (const Axiom& ax : axioms) {
        validate_axiom(ax, n);
        const StateIndex first = ax.state ? *ax.state : 0;
        const StateIndex last = ax.state ? *ax.state + 1 : n;
        for (StateIndex s = first; s < last; ++s) {
            const BoundNodes b = ev.eval(ax.formula, s);
            if (mode == AxiomMode::consistency) {
                terms.push_back(max0(ax.lower - b.upper));
                terms.push_back(max0(b.lower - ax.upper));
            } else {
                terms.push_back(max0(ax.lower - b.lower));
                terms.push_back(max0(b.upper - ax.upper));
            }
        }
    }
    return sum(terms);
}

BoundStore initial_store(const KripkeModel& model, const FormulaPool& pool, std::span<const FormulaId> formulas,
                         const AxiomSet& axioms) {
    const std::size_t n = model.states.size();
    BoundStore store(pool.size(), n);
    for (FormulaId f : formulas) {
        const FormulaNode& node = pool.node(f);
        std::optional<std::size_t> prop;
        if (node.kind == FormulaKind::atom) {
            prop = model.propositions.find(node.symbol);
            if (!prop) throw std::invalid_argument("unknown proposition '" + node.symbol + "'");
        }
        for (StateIndex s = 0; s < n; ++s) {
            store.tighten(f, s, prop ? model.propositions.bounds(*prop, s, model.parameters) : Interval{0.0, 1.0});
        }
    }
    for (const Axiom& ax : axioms) {
        validate_axiom(ax, n);
        if (ax.formula >= pool.size() || !store.has(ax.formula, 0)) {
            throw std::invalid_argument("axiom formula is not among the propagated formulas");
        }
        const StateIndex first = ax.state ? *ax.state : 0;
        const StateIndex last = ax.state ? *ax.state + 1 : n;
        for (StateIndex s = first; s < last; ++s) store.tighten(ax.formula, s, {ax.lower, ax.upper});
    }
    return store;
}

double upward_pass(const KripkeModel& model, const FormulaPool& pool, std::span<const FormulaId> formulas,
                   BoundStore& store, SoftConfig soft) {
    Tape tape(&model.parameters);
    Evaluator ev(model, pool, tape, soft, &store);
    double change = 0.0;
    for (FormulaId f : formulas) {
        for (StateIndex s = 0; s < model.states.size(); ++s) {
            change = std::max(change, store.tighten(f, s, ev.value(f, s)));
        }
    }
    return change;
}

namespace {

double unit(double v) { return std::clamp(v, 0.0, 1.0); }

class Down {
public:
    explicit Down(BoundStore& store) : store_(store) {}

    void raise_lower(FormulaId f, StateIndex s, double v) {
        change_ = std::max(change_, store_.tighten(f, s, {unit(v), 1.0}));
    }
    void cut_upper(FormulaId f, StateIndex s, double v) {
        change_ = std::max(change_, store_.tighten(f, s, {0.0, unit(v)}));
    }
    const Interval& at(FormulaId f, StateIndex s) const { return store_.get(f, s); }
    double change() const { return change_; }

private:
    BoundStore& store_;
    double change_ = 0.0;
};

}  // namespace

double downward_pass(const KripkeModel& model, const FormulaPool& pool, std::span<const FormulaId> formulas,
                     BoundStore& store, const InferenceConfig& cfg) {
    cfg.validate();
    const std::size_t n = model.states.size();
    std::map<std::string, Matrix<double>, std::less<>> access;
    Down d(store);

    for (auto it = formulas.rbegin(); it != formulas.rend(); ++it) {
        const FormulaId f = *it;
        const FormulaNode& node = pool.node(f);
        const FormulaId a = node.left;
        const FormulaId b = node.right;
        for (StateIndex s = 0; s < n; ++s) {
            const Interval p = d.at(f, s);
            switch (node.kind) {
            case FormulaKind::atom:
            case FormulaKind::product_implication:
                break;
            case FormulaKind::negation:
                d.raise_lower(a, s, 1.0 - p.upper);
                d.cut_upper(a, s, 1.0 - p.lower);
                break;
            case FormulaKind::conjunction:
                if (p.lower > 0.0) {
                    d.raise_lower(a, s, p.lower + 1.0 - d.at(b, s).upper);
                    d.raise_lower(b, s, p.lower + 1.0 - d.at(a, s).upper);
                }
                d.cut_upper(a, s, p.upper + 1.0 - d.at(b, s).lower);
                d.cut_upper(b, s, p.upper + 1.0 - d.at(a, s).lower);
                break;
            case FormulaKind::disjunction:
                d.raise_lower(a, s, p.lower - d.at(b, s).upper);
                d.raise_lower(b, s, p.lower - d.at(a, s).upper);
                if (p.upper < 1.0) {
                    d.cut_upper(a, s, p.upper - d.at(b, s).lower);
                    d.cut_upper(b, s, p.upper - d.at(a, s).lower);
                }
                break;
            case FormulaKind::implication:
                d.raise_lower(b, s, p.lower + d.at(a, s).lower - 1.0);
                d.cut_upper(a, s, 1.0 - p.lower + d.at(b, s).upper);
                if (p.upper < 1.0) {
                    d.raise_lower(a, s, 1.0 - p.upper + d.at(b, s).lower);
                    d.cut_upper(b, s, p.upper + d.at(a, s).upper - 1.0);
                }
                break;
            case FormulaKind::box:
            case FormulaKind::diamond: {
                auto m = access.find(node.symbol);
                if (m == access.end()) {
                    m = access.emplace(node.symbol, model.relations.at(node.symbol).values(model.parameters)).first;
                }
                for (StateIndex j = 0; j < n; ++j) {
                    if (!(m->second(s, j) > cfg.access_threshold)) continue;
                    if (node.kind == FormulaKind::box) {
                        d.raise_lower(a, j, p.lower);
                    } else {
                        d.cut_upper(a, j, p.upper);
                    }
                }
                break;
            }
            }
        }
    }
    return d.change();
}

FixpointResult run_to_fixpoint(const KripkeModel& model, const FormulaPool& pool, std::span<const FormulaId> roots,
                               const AxiomSet& axioms, SoftConfig soft, const InferenceConfig& cfg, bool keep_trace,
                               const BoundStore* start) {
    cfg.validate();
    FixpointResult r;
    std::vector<FormulaId> seeds(roots.begin(), roots.end());
    for (const Axiom& ax : axioms) seeds.push_back(ax.formula);
    r.formulas = pool.closure(seeds);
    for (FormulaId f : r.formulas) validate_formula(pool, f, model);

    if (start) {
        r.bounds = *start;
        r.bounds.resize(pool.size());
        const BoundStore fresh = initial_store(model, pool, r.formulas, axioms);
        for (FormulaId f : r.formulas) {
            for (StateIndex s = 0; s < model.states.size(); ++s) r.bounds.tighten(f, s, fresh.get(f, s));
        }
    } else {
        r.bounds = initial_store(model, pool, r.formulas, axioms);
    }
    if (keep_trace) r.trace.push_back(r.bounds);

    for (std::size_t it = 1; it <= cfg.max_iterations; ++it) {
        const double up = upward_pass(model, pool, r.formulas, r.bounds, soft);
        const double down = downward_pass(model, pool, r.formulas, r.bounds, cfg);
        r.iterations = it;
        r.last_change = std::max(up, down);
        if (keep_trace) r.trace.push_back(r.bounds);
        if (r.last_change < cfg.epsilon) {
            r.converged = true;
            break;
        }
    }
    return r;
}

}  // namespace mlnn
