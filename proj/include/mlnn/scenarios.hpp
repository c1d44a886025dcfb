#pragma once

// Built-in models: the royal succession deduction, the two-agent epistemic
// toy, and the synthetic trust ring.

#include <cstdint>

#include "mlnn/model_spec.hpp"

namespace mlnn {

// Three worlds (present plus two futures) over a fixed "temporal" relation.
// The heir propositions are unknown [0,1]; with `learnable_heirs` they become
// trainable point values at 0.5 instead.
ModelSpec scenario_royal_succession(bool learnable_heirs = false);

// Agents A, B at times t0..t2 (six states). isOnline is false at A@t0 and
// B@t1 (states 0 and 3), true elsewhere. "temporal" is fixed, "epistemic" is
// a learnable logit relation starting at the identity.
ModelSpec scenario_epistemic_toy();

struct RingOptions {
    std::size_t n = 20;
    std::size_t k = 8;
    double tau = 0.1;
    bool fixed_r = false;  // frozen i.i.d. uniform [0,1] relation instead of learnable logits
    std::uint64_t seed = 7;
    std::size_t epochs = 400;
    double learning_rate = 0.1;
};

ModelSpec scenario_ring(const RingOptions& options = {});

// Identity plus the successor link i -> (i+1) mod n.
Matrix<double> ring_ground_truth(std::size_t n);

// Agent labels used by the ring: a0 .. a{n-1}.
std::string ring_agent(std::size_t i);

}  // namespace mlnn
