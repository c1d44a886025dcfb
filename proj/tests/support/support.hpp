#pragma once

// Independent oracles and generators shared by the unit tests and the
// acceptance binary. Nothing here reuses engine code paths it is meant to check.

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "mlnn/oracle.hpp"

namespace mlnn::testing {

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo = 0.0, double hi = 1.0);
std::size_t pick(Rng& rng, std::size_t n);  // uniform in [0, n)

// Central differences of f over every parameter, restoring the values after.
std::vector<double> finite_difference(Parameters& params, const std::function<double()>& f, double h = 1e-5);

// Largest |a - n| / max(|a|, |n|, floor) over the entries.
double worst_relative_error(const std::vector<double>& analytic, const std::vector<double>& numeric,
                            double floor = 1e-6);

struct GradientCheck {
    std::size_t accepted = 0;
    std::size_t rejected = 0;  // sample points too close to a kink
    double worst = 0.0;
};

// Builds `root` on fresh tapes at `points` random parameter settings drawn by
// `sample`, compares its tape gradient with central differences and skips
// points whose tape reports a non-smooth op within `kink_margin` of its kink.
GradientCheck check_gradients(Rng& rng, Parameters& params, const std::function<void(Rng&, Parameters&)>& sample,
                              const std::function<Var(Tape&)>& root, std::size_t points = 100,
                              double kink_margin = 1e-3);

// Random crisp model with relations of the given names and propositions each
// true with probability 1/2.
CrispModel random_crisp_model(Rng& rng, std::size_t states, const std::vector<std::string>& props,
                              const std::vector<std::string>& relations, double density = 0.4);

// Soft model: fixed relations with uniform weights (a fraction set to exactly
// 0 or 1) and random proposition intervals with L <= U.
KripkeModel random_soft_model(Rng& rng, std::size_t states, const std::vector<std::string>& props,
                              const std::vector<std::string>& relations);

// Random formula whose depth is at most `depth`; every kind is reachable.
FormulaId random_formula(Rng& rng, FormulaPool& pool, std::size_t depth, const std::vector<std::string>& props,
                         const std::vector<std::string>& relations, bool product_implication = true);

// Every formula of depth <= `depth` over the given symbols (one relation
// keeps the count manageable).
std::vector<FormulaId> all_formulas(FormulaPool& pool, std::size_t depth, const std::vector<std::string>& props,
                                    const std::vector<std::string>& relations);

// Truth tables as state bitsets: each connective is a set operation and box
// is {s : succ(s) is a subset of the child's set}.
std::uint64_t truth_set(const CrispModel& model, const FormulaPool& pool, FormulaId f);

// Classical relation properties by brute force over index tuples.
bool is_reflexive(const Matrix<std::uint8_t>& r);
bool is_symmetric(const Matrix<std::uint8_t>& r);
bool is_transitive(const Matrix<std::uint8_t>& r);
// Counting form used by the soft transitivity penalty: the number of two-step
// paths i -> k -> j never exceeds r(i, j).
bool is_soft_transitive(const Matrix<std::uint8_t>& r);

Matrix<std::uint8_t> random_relation(Rng& rng, std::size_t n, double density);

}  // namespace mlnn::testing
