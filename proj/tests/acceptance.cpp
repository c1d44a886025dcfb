// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

#include "mlnn/experiments.hpp"
#include "mlnn/oracle.hpp"
#include "support/families.hpp"
#include "support/support.hpp"

using namespace mlnn;
using namespace mlnn::testing;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// Collects failed checks with a short reason; the first few are printed.
struct Verdict {
    std::size_t checks = 0;
    std::size_t failures = 0;
    std::ostringstream detail;
    std::ostringstream why;

    void expect(bool ok, const std::string& what) {
        ++checks;
        if (ok) return;
        if (failures < 3) why << (failures ? "; " : "") << what;
        ++failures;
    }
};

std::string fmt(double x) { return format_number(x); }

Verdict toy_reproduction() {
    Verdict v;
    const auto t0 = Clock::now();
    const ToyOutcome t = run_epistemic_toy();
    const double secs = seconds_since(t0);
    const Matrix<double>& a = t.epistemic;
    const TrainConfig& cfg = t.built.train;
    v.expect(cfg.learning_rate == 0.5, "learning rate is not 0.5");
    v.expect(t.history.epochs.size() <= 32, "more than 32 epochs");
    v.expect(a(0, 1) >= 0.95, "A[0,1] = " + fmt(a(0, 1)));
    double worst_off = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            if (i != j && !(i == 0 && j == 1)) worst_off = std::max(worst_off, a(i, j));
        }
    }
    v.expect(worst_off <= 0.05, "other off-diagonal max " + fmt(worst_off));
    v.expect(t.final_contradiction <= 0.05, "contradiction " + fmt(t.final_contradiction));
    v.expect(std::abs(a(0, 0) - 1.0) <= 0.02, "A[0,0] = " + fmt(a(0, 0)));
    v.expect(secs < 5.0, "runtime " + fmt(secs) + " s");
    v.detail << "A[0,1]=" << fmt(a(0, 1)) << " max other off-diag=" << fmt(worst_off) << " A[0,0]=" << fmt(a(0, 0))
             << " contradiction " << fmt(t.initial_contradiction) << " -> " << fmt(t.final_contradiction) << ", "
             << t.history.epochs.size() << " epochs, " << fmt(secs) << " s";
    return v;
}

Verdict toy_table() {
    Verdict v;
    const ToyOutcome t = run_epistemic_toy();
    // s-indices follow the time-major state order: s0 = A@t0,
    // s2 = A@t1, s4 = A@t2.
    auto at = [&](const char* f, const char* s) { return t.bounds.at(f).at(s); };
    const Interval dia = at("possible_online", "A@t0"), k0 = at("knows_online", "A@t0"),
                   g0 = at("always_online", "A@t0"), f0 = at("eventually_online", "A@t0"),
                   g4 = at("always_online", "A@t2"), kg = at("knows_always_online", "A@t0"),
                   k2 = at("knows_online", "A@t1");
    // Diamond-type entries are read on U, box-type entries on L: those are the
    // sides carried by the soft-max and soft-min neurons.
    v.expect(std::abs(dia.upper - 0.99) <= 0.05, "possible_online[s0] U = " + fmt(dia.upper));
    v.expect(k0.upper <= 0.05, "K[s0] U = " + fmt(k0.upper));
    v.expect(g0.upper <= 0.05, "G[s0] U = " + fmt(g0.upper));
    v.expect(f0.upper >= 0.95, "F[s0] U = " + fmt(f0.upper));
    v.expect(std::abs(g4.lower - 0.86) <= 0.05, "G[s4] L = " + fmt(g4.lower));
    v.expect(kg.upper <= 0.05, "K(G)[s0] U = " + fmt(kg.upper));
    v.expect(std::abs(k2.lower - 0.89) <= 0.05, "K[s2] L = " + fmt(k2.lower));
    v.detail << "diamond[s0]=" << fmt(dia.upper) << " K[s0]=" << fmt(k0.upper) << " G[s0]=" << fmt(g0.upper)
             << " F[s0]=" << fmt(f0.upper) << " G[s4]=" << fmt(g4.lower) << " K(G)[s0]=" << fmt(kg.upper)
             << " K[s2]=" << fmt(k2.lower);
    return v;
}

Verdict ring() {
    Verdict v;
    const auto t0 = Clock::now();
    const RingOutcome base = run_ring(RingOptions{});
    v.expect(base.mse < 0.01, "MSE " + fmt(base.mse));
    v.expect(base.contradiction < 0.05, "contradiction " + fmt(base.contradiction));
    v.detail << "learned: MSE " << fmt(base.mse) << " contra " << fmt(base.contradiction);

    RingOptions fixed;
    fixed.fixed_r = true;
    const RingOutcome frozen = run_ring(fixed);
    v.expect(frozen.mse > 0.1, "fixed-R MSE " + fmt(frozen.mse));
    v.expect(frozen.contradiction > 0.3, "fixed-R contradiction " + fmt(frozen.contradiction));
    v.detail << "; fixed-R: MSE " << fmt(frozen.mse) << " contra " << fmt(frozen.contradiction) << "; sweep";

    for (double tau : {0.05, 0.2}) {
        RingOptions o;
        o.tau = tau;
        const double mse = run_ring(o).mse;
        v.expect(mse < 0.01, "tau " + fmt(tau) + " MSE " + fmt(mse));
        v.detail << " tau=" << fmt(tau) << ":" << fmt(mse);
    }
    for (std::size_t k : {4, 16}) {
        RingOptions o;
        o.k = k;
        const double mse = run_ring(o).mse;
        v.expect(mse < 0.01, "k " + std::to_string(k) + " MSE " + fmt(mse));
        v.detail << " k=" << k << ":" << fmt(mse);
    }
    const double secs = seconds_since(t0);
    v.expect(secs < 120.0, "runtime " + fmt(secs) + " s");
    v.detail << "; " << fmt(secs) << " s total";
    return v;
}

Verdict royal() {
    Verdict v;
    const RoyalOutcome r = run_royal();
    v.expect(r.fixpoint.converged, "fixpoint did not converge");
    v.expect(r.heir_W.upper <= 0.1, "heir_W U = " + fmt(r.heir_W.upper));
    v.expect(r.heir_H.lower >= 0.9, "heir_H L = " + fmt(r.heir_H.lower));
    v.expect(r.oracle_heir_W == false, "oracle does not force heir_W false");
    v.expect(r.oracle_heir_H == true, "oracle does not force heir_H true");
    v.detail << "heir_W=[" << fmt(r.heir_W.lower) << "," << fmt(r.heir_W.upper) << "] heir_H=[" << fmt(r.heir_H.lower)
             << "," << fmt(r.heir_H.upper) << "] after " << r.fixpoint.iterations << " iterations; oracle over "
             << r.oracle_models << " models agrees";
    return v;
}

Verdict soundness() {
    Verdict v;
    Rng rng(101);
    const std::vector<std::string> props = {"p", "q"}, rels = {"r", "s"};
    double worst = 0.0;
    std::size_t cells = 0;
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 1 + pick(rng, 4);
        const CrispModel crisp = random_crisp_model(rng, n, props, rels, uniform(rng, 0.1, 0.9));
        const KripkeModel soft = to_kripke(crisp);
        FormulaPool pool;
        const FormulaId f = random_formula(rng, pool, 1 + pick(rng, 3), props, rels);
        Tape tape;
        Evaluator ev(soft, pool, tape, {1e-3});
        for (StateIndex s = 0; s < n; ++s) {
            const double truth = crisp_check(crisp, pool, f, s);
            const Interval b = ev.value(f, s);
            const double miss = std::max({0.0, b.lower - truth, truth - b.upper});
            worst = std::max(worst, miss);
            v.expect(miss <= 1e-2, pool.to_string(f) + " misses by " + fmt(miss));
            ++cells;
        }
    }

    std::size_t vectors = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        Tape t;
        const std::size_t n = 1 + pick(rng, 8);
        std::vector<Var> xs, zs;
        for (std::size_t i = 0; i < n; ++i) {
            xs.push_back(t.lift(uniform(rng, -1.0, 2.0)));
            zs.push_back(t.lift(uniform(rng, -1.0, 2.0)));
        }
        double lo = xs[0].value(), hi = lo;
        for (Var x : xs) {
            lo = std::min(lo, x.value());
            hi = std::max(hi, x.value());
        }
        const double tau = uniform(rng, 0.01, 0.5);
        const double c = conv_pool(xs, zs, tau).value();
        v.expect(softmin(xs, tau).value() <= lo, "softmin above min");
        v.expect(softmax(xs, tau).value() >= hi, "softmax below max");
        v.expect(c >= lo && c <= hi, "conv-pool outside [min, max]");
        ++vectors;
    }
    v.detail << "300 models, " << cells << " cells, worst miss " << fmt(worst) << "; " << vectors
             << " aggregator vectors exact";
    return v;
}

Verdict duality() {
    Verdict v;
    Rng rng(102);
    const std::vector<std::string> props = {"p", "q"}, rels = {"r"};
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 1 + pick(rng, 5);
        const KripkeModel m = random_soft_model(rng, n, props, rels);
        FormulaPool pool;
        const FormulaId phi = random_formula(rng, pool, 2, props, rels);
        const FormulaId dia = pool.diamond("r", phi);
        const FormulaId dual = pool.negation(pool.box("r", pool.negation(phi)));
        Tape tape;
        Evaluator ev(m, pool, tape, {0.1});
        for (StateIndex s = 0; s < n; ++s) {
            const Interval a = ev.value(dia, s), b = ev.value(dual, s);
            worst = std::max({worst, std::abs(a.lower - b.lower), std::abs(a.upper - b.upper)});
        }
    }
    v.expect(worst <= 1e-9, "modal duality gap " + fmt(worst));

    double agg = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        Tape t;
        std::vector<Var> xs, ys;
        const std::size_t n = 1 + pick(rng, 8);
        for (std::size_t i = 0; i < n; ++i) {
            const double x = uniform(rng);
            xs.push_back(t.lift(x));
            ys.push_back(t.lift(1.0 - x));
        }
        agg = std::max(agg, std::abs(softmax(xs, 0.1).value() - (1.0 - softmin(ys, 0.1).value())));
    }
    v.expect(agg <= 1e-12, "softmax/softmin gap " + fmt(agg));
    v.detail << "modal gap " << fmt(worst) << " over 100 models; aggregator gap " << fmt(agg);
    return v;
}

Verdict convergence() {
    Verdict v;
    Rng rng(103);
    const std::vector<std::string> props = {"p", "q"}, rels = {"r", "s"};
    std::size_t most = 0;
    double rerun = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 1 + pick(rng, 6);
        const KripkeModel m = random_soft_model(rng, n, props, rels);
        FormulaPool pool;
        std::vector<FormulaId> roots;
        AxiomSet axioms;
        for (int k = 0; k < 3; ++k) {
            roots.push_back(random_formula(rng, pool, 3, props, rels, false));
            axioms.push_back({roots.back(), pick(rng, n), uniform(rng, 0.5, 1.0), 1.0});
        }
        const InferenceConfig cfg;
        const FixpointResult r = run_to_fixpoint(m, pool, roots, axioms, {0.1}, cfg, true);
        v.expect(r.converged && r.iterations <= 100, "model " + std::to_string(trial) + " did not converge");
        most = std::max(most, r.iterations);
        for (std::size_t t = 1; t < r.trace.size(); ++t) {
            for (FormulaId f : r.formulas) {
                for (StateIndex s = 0; s < n; ++s) {
                    const Interval now = r.trace[t].get(f, s), before = r.trace[t - 1].get(f, s);
                    v.expect(now.lower >= before.lower && now.upper <= before.upper,
                             "trace not monotone in model " + std::to_string(trial));
                }
            }
        }
        const FixpointResult again = run_to_fixpoint(m, pool, roots, axioms, {0.1}, cfg, false, &r.bounds);
        for (FormulaId f : r.formulas) {
            for (StateIndex s = 0; s < n; ++s) {
                rerun = std::max({rerun, std::abs(again.bounds.get(f, s).lower - r.bounds.get(f, s).lower),
                                  std::abs(again.bounds.get(f, s).upper - r.bounds.get(f, s).upper)});
            }
        }
        v.expect(rerun <= cfg.epsilon, "rerun moved a bound by " + fmt(rerun));
    }
    v.detail << "50 models, at most " << most << " iterations, rerun change " << fmt(rerun);
    return v;
}

Verdict gradients() {
    Verdict v;
    Rng rng(104);
    for (const GradientFamily& family : gradient_families()) {
        const double worst = check_family(rng, family, 100);
        v.expect(worst < 1e-4, family.name + " relative error " + fmt(worst));
        v.detail << (v.checks > 1 ? " " : "") << family.name << ":" << fmt(worst);
    }
    return v;
}

Matrix<Var> lift_crisp(Tape& tape, const Matrix<std::uint8_t>& r) {
    Matrix<Var> out(r.rows(), r.cols());
    for (std::size_t k = 0; k < r.data().size(); ++k) out.data()[k] = tape.lift(r.data()[k]);
    return out;
}

Verdict regularizers() {
    Verdict v;
    Rng rng(105);
    std::size_t hits[3] = {0, 0, 0};
    for (int trial = 0; trial < 3000; ++trial) {
        Matrix<std::uint8_t> r = random_relation(rng, 4, uniform(rng, 0.05, 0.9));
        if (trial % 3 == 0) {
            for (std::size_t i = 0; i < 4; ++i) r(i, i) = 1;
        } else if (trial % 3 == 1) {
            for (std::size_t i = 0; i < 4; ++i) {
                for (std::size_t j = 0; j < i; ++j) r(i, j) = r(j, i);
            }
        }
        Tape tape;
        const Matrix<Var> a = lift_crisp(tape, r);
        v.expect((reg_reflexive(a).value() == 0.0) == is_reflexive(r), "reg_T zero set");
        v.expect((reg_transitive(a).value() == 0.0) == is_soft_transitive(r), "reg_4 zero set");
        v.expect((reg_symmetric(a).value() == 0.0) == is_symmetric(r), "reg_S zero set");
        hits[0] += is_reflexive(r);
        hits[1] += is_soft_transitive(r);
        hits[2] += is_symmetric(r);
    }

    KripkeModel m{StateSpace({"a", "b", "c", "d"})};
    Matrix<double> init(4, 4);
    for (double& x : init.data()) x = uniform(rng, -3.0, 0.0);
    m.relations.add("r", Accessibility::logits(m.parameters, init));
    FormulaPool pool;
    TrainConfig cfg;
    cfg.beta = 0.0;
    cfg.reg.reflexive = 1.0;
    cfg.learning_rate = 0.05;
    cfg.epochs = 200;
    train(m, pool, Objective{}, cfg);
    const Matrix<double> a = m.relations.at("r").values(m.parameters);
    double diag = 1.0;
    for (std::size_t i = 0; i < 4; ++i) diag = std::min(diag, a(i, i));
    v.expect(diag >= 0.95, "smallest diagonal " + fmt(diag));
    v.detail << "3000 matrices (" << hits[0] << " reflexive, " << hits[1] << " soft-transitive, " << hits[2]
             << " symmetric) agree; min diagonal after 200 epochs " << fmt(diag);
    return v;
}

}  // namespace

int main() {
    const std::pair<const char*, std::function<Verdict()>> criteria[] = {
        {"epistemic toy training", toy_reproduction},
        {"epistemic toy bounds table", toy_table},
        {"trust ring structure recovery", ring},
        {"royal succession", royal},
        {"soundness against the crisp checker", soundness},
        {"box/diamond duality", duality},
        {"fixpoint convergence", convergence},
        {"gradient correctness", gradients},
        {"regularizer semantics", regularizers},
    };
    int failed = 0;
    int index = 0;
    for (const auto& [name, run] : criteria) {
        ++index;
        bool ok = false;
        std::string text;
        try {
            const Verdict v = run();
            ok = v.failures == 0;
            text = v.detail.str();
            if (!ok) text += " | " + std::to_string(v.failures) + "/" + std::to_string(v.checks) + " failed: " + v.why.str();
        } catch (const std::exception& e) {
            text = std::string("exception: ") + e.what();
        }
        failed += !ok;
        std::printf("%s %d %s: %s\n", ok ? "PASS" : "FAIL", index, name, text.c_str());
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
