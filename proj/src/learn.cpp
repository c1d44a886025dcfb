#include "mlnn/learn.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace mlnn {

namespace {

void check_weights(const RegWeights& w, const std::string& where) {
    for (double v : {w.reflexive, w.transitive, w.symmetric, w.sparsity}) {
        if (!(v >= 0.0 && std::isfinite(v))) throw std::invalid_argument(where + ": regularizer weights must be >= 0");
    }
}

}  // namespace

void TrainConfig::validate() const {
    if (!(beta >= 0.0 && std::isfinite(beta))) throw std::invalid_argument("beta must be >= 0");
    check_weights(reg, "train");
    for (const auto& [name, w] : reg_for) check_weights(w, "relation '" + name + "'");
    if (!(learning_rate > 0.0 && std::isfinite(learning_rate))) throw std::invalid_argument("learning rate must be > 0");
    if (epochs < 1) throw std::invalid_argument("epochs must be at least 1");
    check_tau(tau);
    inference.validate();
}

const RegWeights& TrainConfig::weights_for(std::string_view relation) const {
    auto it = reg_for.find(relation);
    return it == reg_for.end() ? reg : it->second;
}

LossTerms total_loss(Evaluator& ev, const Objective& objective, const TrainConfig& cfg) {
    Tape& tape = ev.tape();
    LossTerms t;

    std::vector<Var> task{tape.lift(0.0)};
    if (objective.task) {
        for (Var v : objective.task(ev)) task.push_back(v);
    }
    t.task = sum(task);
    t.contradiction = contradiction_loss(ev, objective.tracked, objective.axioms, cfg.axiom_mode);

    std::vector<Var> refl{tape.lift(0.0)}, trans{tape.lift(0.0)}, symm{tape.lift(0.0)}, sparse{tape.lift(0.0)};
    std::vector<Var> total{t.task, cfg.beta * t.contradiction};
    for (const auto& [name, rel] : ev.model().relations) {
        if (!rel.learnable()) continue;
        const Matrix<Var>& a = ev.access(name);
        const RegWeights& w = cfg.weights_for(name);
        const Var r_t = reg_reflexive(a);
        const Var r_4 = reg_transitive(a);
        const Var r_s = reg_symmetric(a);
        const Var r_l = l1_norm(a);
        refl.push_back(r_t);
        trans.push_back(r_4);
        symm.push_back(r_s);
        sparse.push_back(r_l);
        if (w.reflexive > 0.0) total.push_back(w.reflexive * r_t);
        if (w.transitive > 0.0) total.push_back(w.transitive * r_4);
        if (w.symmetric > 0.0) total.push_back(w.symmetric * r_s);
        if (w.sparsity > 0.0) total.push_back(w.sparsity * r_l);
    }
    t.reflexive = sum(refl);
    t.transitive = sum(trans);
    t.symmetric = sum(symm);
    t.sparsity = sum(sparse);
    t.total = sum(total);
    return t;
}

std::vector<WatchEntry> default_watch(const KripkeModel& model) {
    std::vector<WatchEntry> out;
    if (model.states.size() > 32) return out;
    for (const auto& [name, rel] : model.relations) {
        if (!rel.learnable()) continue;
        for (std::size_t i = 0; i < rel.size(); ++i) {
            for (std::size_t j = 0; j < rel.size(); ++j) {
                if (!rel.mask() || (*rel.mask())(i, j)) out.push_back({name, i, j});
            }
        }
    }
    return out;
}

void TrainHistory::write_csv(std::ostream& out) const {
    out << "epoch,total,task,contradiction,reg_T,reg_4,reg_S,sparsity";
    for (const WatchEntry& w : watch) out << ',' << w.relation << '[' << w.row << "][" << w.col << ']';
    out << '\n';
    auto row = [&](const std::string& label, const EpochRecord& r) {
        out << label;
        for (double v : {r.total, r.task, r.contradiction, r.reflexive, r.transitive, r.symmetric, r.sparsity}) {
            out << ',' << format_number(v);
        }
        for (double v : r.watched) out << ',' << format_number(v);
        out << '\n';
    };
    for (std::size_t e = 0; e < epochs.size(); ++e) row(std::to_string(e + 1), epochs[e]);
    row("final", final);
}

namespace {

std::vector<FormulaId> objective_roots(const Objective& objective) {
    std::vector<FormulaId> roots;
    for (const TrackedCell& c : objective.tracked) roots.push_back(c.formula);
    return roots;
}

EpochRecord record(Evaluator& ev, const LossTerms& t, const std::vector<WatchEntry>& watch) {
    EpochRecord r;
    r.total = t.total.value();
    r.task = t.task.value();
    r.contradiction = t.contradiction.value();
    r.reflexive = t.reflexive.value();
    r.transitive = t.transitive.value();
    r.symmetric = t.symmetric.value();
    r.sparsity = t.sparsity.value();
    for (const WatchEntry& w : watch) r.watched.push_back(ev.access(w.relation).at(w.row, w.col).value());
    return r;
}

}  // namespace

TrainHistory train(KripkeModel& model, const FormulaPool& pool, const Objective& objective, const TrainConfig& cfg) {
    cfg.validate();
    TrainHistory history;
    history.watch = cfg.watch.empty() ? default_watch(model) : cfg.watch;
    for (const WatchEntry& w : history.watch) {
        const Accessibility& rel = model.relations.at(w.relation);
        if (w.row >= rel.size() || w.col >= rel.size()) throw std::out_of_range("watched entry out of range");
    }

    Adam adam(AdamConfig{cfg.learning_rate});
    const std::vector<FormulaId> roots = objective_roots(objective);

    Tape tape(&model.parameters);  // reused so its storage survives across epochs
    auto evaluate = [&](auto&& use) {
        for (auto& [name, rel] : model.relations) rel.refresh_top_k(model.parameters);
        std::optional<BoundStore> store;
        if (cfg.downward_in_loop) {
            store = run_to_fixpoint(model, pool, roots, objective.axioms, {cfg.tau}, cfg.inference).bounds;
        }
        tape.clear();
        Evaluator ev(model, pool, tape, {cfg.tau}, store ? &*store : nullptr);
        const LossTerms t = total_loss(ev, objective, cfg);
        if (!std::isfinite(t.total.value())) throw std::runtime_error("non-finite loss");
        use(ev, tape, t);
    };

    for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
        try {
            evaluate([&](Evaluator& ev, Tape& tape, const LossTerms& t) {
                history.epochs.push_back(record(ev, t, history.watch));
                const std::vector<double> grads = tape.backward(t.total);
                adam.step(model.parameters, grads);
            });
        } catch (const std::domain_error& e) {
            throw std::runtime_error("training diverged at epoch " + std::to_string(epoch) + ": " + e.what());
        } catch (const std::runtime_error& e) {
            throw std::runtime_error("training diverged at epoch " + std::to_string(epoch) + ": " + e.what());
        }
    }
    evaluate([&](Evaluator& ev, Tape&, const LossTerms& t) { history.final = record(ev, t, history.watch); });
    return history;
}

double structure_mse(const Matrix<double>& learned, const Matrix<double>& truth) {
    if (learned.rows() != truth.rows() || learned.cols() != truth.cols()) {
        throw std::invalid_argument("structure_mse: shape mismatch");
    }
    if (learned.data().empty()) throw std::invalid_argument("structure_mse: empty matrices");
    double acc = 0.0;
    for (std::size_t i = 0; i < learned.data().size(); ++i) {
        const double d = learned.data()[i] - truth.data()[i];
        acc += d * d;
    }
    return acc / static_cast<double>(learned.data().size());
}

std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v == 0.0 ? 0.0 : v);  // no "-0"
    return buf;
}

}  // namespace mlnn
