#include "mlnn/scenarios.hpp"

#include <random>

namespace mlnn {

namespace {

PropositionSpec prop(std::string name, Interval fallback, std::map<std::string, Interval> bounds = {},
                     bool learnable = false) {
    return {std::move(name), fallback, std::move(bounds), learnable};
}

}  // namespace

ModelSpec scenario_royal_succession(bool learnable_heirs) {
    ModelSpec s;
    s.description = "Royal succession: who can be heir when one candidate may not survive every future";
    s.worlds = {"w_Present", "w_FutureA", "w_FutureB"};

    const Interval yes{1.0, 1.0};
    s.propositions = {
        prop("isAlive_W", yes, {{"w_FutureA", {0.0, 0.0}}}),
        prop("isAlive_H", yes),
        prop("isMonarch_C", yes),
        prop("childOf_W_C", yes),
        prop("childOf_H_C", yes),
        prop("isHeir_W", {0.0, 1.0}, {}, learnable_heirs),
        prop("isHeir_H", {0.0, 1.0}, {}, learnable_heirs),
    };

    RelationSpec r;
    r.name = "temporal";
    r.edges = {{"w_Present", "w_Present"}, {"w_Present", "w_FutureA"}, {"w_Present", "w_FutureB"}};
    s.relations = {r};

    s.formulas = {
        {"necessarily_alive_W", "(box temporal isAlive_W)"},
        {"necessarily_alive_H", "(box temporal isAlive_H)"},
        // some child of the monarch inherits
        {"succession", "(implies (and isMonarch_C (or childOf_W_C childOf_H_C)) (or isHeir_W isHeir_H))"},
        {"heir_survives_W", "(implies isHeir_W (box temporal isAlive_W))"},
        {"heir_survives_H", "(implies isHeir_H (box temporal isAlive_H))"},
        {"heir_W", "isHeir_W"},
        {"heir_H", "isHeir_H"},
    };
    for (const char* f : {"succession", "heir_survives_W", "heir_survives_H"}) {
        s.axioms.push_back({f, "w_Present", 1.0, 1.0});
    }

    s.train.beta = 1.0;
    s.train.learning_rate = 0.05;
    s.train.epochs = 200;
    return s;
}

ModelSpec scenario_epistemic_toy() {
    ModelSpec s;
    s.description = "Two agents over three time steps; agent A at t0 must learn to consider B's view";
    s.worlds = {"A", "B"};
    s.times = {"t0", "t1", "t2"};
    const StateSpace states(s.worlds, s.times);
    const std::size_t n = states.size();

    s.propositions = {prop("isOnline", {1.0, 1.0}, {{"A@t0", {0.0, 0.0}}, {"B@t1", {0.0, 0.0}}})};

    // i sees j when j is not in i's past
    RelationSpec temporal;
    temporal.name = "temporal";
    temporal.matrix = Matrix<double>(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            (*temporal.matrix)(i, j) = states.time_of(j) >= states.time_of(i) ? 1.0 : 0.0;
        }
    }

    // siloed start; agents only ever consider states at their own time step
    RelationSpec epistemic;
    epistemic.name = "epistemic";
    epistemic.kind = AccessKind::logits;
    epistemic.matrix = Matrix<double>(n, n, -10.0);
    epistemic.mask = Matrix<std::uint8_t>(n, n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        (*epistemic.matrix)(i, i) = 10.0;
        for (std::size_t j = 0; j < n; ++j) {
            (*epistemic.mask)(i, j) = states.time_of(i) == states.time_of(j) ? 1 : 0;
        }
    }
    s.relations = {temporal, epistemic};

    s.formulas = {
        {"possible_online", "(diamond epistemic isOnline)"},
        {"knows_online", "(K isOnline)"},
        {"always_online", "(G isOnline)"},
        {"eventually_online", "(F isOnline)"},
        {"knows_always_online", "(K (G isOnline))"},
    };
    s.axioms = {{"possible_online", "A@t0", 1.0, 1.0}};

    s.train.beta = 1.0;
    s.train.learning_rate = 0.5;
    s.train.epochs = 32;
    s.train.tau = 0.1;
    return s;
}

std::string ring_agent(std::size_t i) { return "a" + std::to_string(i); }

Matrix<double> ring_ground_truth(std::size_t n) {
    if (n < 3) throw std::invalid_argument("the ring needs at least 3 agents");
    Matrix<double> g(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        g(i, i) = 1.0;
        g(i, (i + 1) % n) = 1.0;
    }
    return g;
}

ModelSpec scenario_ring(const RingOptions& o) {
    if (o.n < 3) throw std::invalid_argument("the ring needs at least 3 agents");
    if (o.k < 1 || o.k > o.n) throw std::invalid_argument("top-k must lie in [1, n]");
    ModelSpec s;
    s.description = "Trust ring: each agent must trust someone holding its beacon and nobody who disputes its facts";
    for (std::size_t i = 0; i < o.n; ++i) s.worlds.push_back(ring_agent(i));

    for (std::size_t i = 0; i < o.n; ++i) {
        const std::string id = std::to_string(i);
        const std::string self = ring_agent(i);
        const std::string next = ring_agent((i + 1) % o.n);
        s.propositions.push_back(prop("Facts_" + id, {1.0, 1.0}));
        // only i and its successor agree with i's facts
        s.propositions.push_back(prop("Agreement_" + id, {0.0, 0.0}, {{self, {1.0, 1.0}}, {next, {1.0, 1.0}}}));
        s.propositions.push_back(prop("Beacon_" + id, {0.0, 0.0}, {{next, {1.0, 1.0}}}));
    }

    RelationSpec trust;
    trust.name = "trust";
    if (o.fixed_r) {
        std::mt19937_64 rng(o.seed);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        trust.matrix = Matrix<double>(o.n, o.n);
        for (double& v : trust.matrix->data()) v = u(rng);
    } else {
        trust.kind = AccessKind::logits;
        trust.init = LogitInit{3.0, -2.0, 0.5};
        trust.top_k = o.k;
    }
    s.relations = {trust};

    for (std::size_t i = 0; i < o.n; ++i) {
        const std::string id = std::to_string(i);
        s.formulas.push_back({"consistency_" + id, "(box trust (implies Facts_" + id + " Agreement_" + id + "))"});
        s.formulas.push_back({"expansion_" + id, "(diamond trust Beacon_" + id + ")"});
        s.axioms.push_back({"consistency_" + id, ring_agent(i), 0.9, 1.0});
        s.axioms.push_back({"expansion_" + id, ring_agent(i), 0.9, 1.0});
    }

    s.train.beta = 1.0;
    s.train.tau = o.tau;
    s.train.seed = o.seed;
    s.train.learning_rate = o.learning_rate;
    s.train.epochs = o.fixed_r ? 1 : o.epochs;
    if (!o.fixed_r) {
        s.train.reg.reflexive = 0.1;
        s.train.reg.sparsity = 0.01;
    }
    return s;
}

}  // namespace mlnn
