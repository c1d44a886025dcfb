#pragma once

// Reverse-mode scalar differentiation. Every truth bound, accessibility weight
// and loss in the engine is a Var recorded on a Tape; parameters persist
// across tapes in a Parameters store so a training loop can rebuild the
// forward graph each epoch.

#include <cstdint>
#include <initializer_list>
#include <span>
#include <string_view>
#include <vector>

namespace mlnn {

enum class Op : std::uint8_t {
    constant,
    parameter,
    add,
    sub,
    mul,
    div,
    neg,
    scale,
    exp,
    log,
    max0,
    clamp01,
    sigmoid,
    abs,
    sum,
};

std::string_view op_name(Op op);

using ParamId = std::uint32_t;

class Parameters {
public:
    ParamId add(double init);

    std::size_t size() const { return values_.size(); }
    double value(ParamId id) const { return values_.at(id); }
    void set(ParamId id, double v);

    std::span<double> values() { return values_; }
    std::span<const double> values() const { return values_; }

private:
    std::vector<double> values_;
};

class Tape;

// Handle to a node on a tape. Cheap to copy; only valid while its tape lives.
class Var {
public:
    Var() = default;

    double value() const;
    std::uint32_t index() const { return index_; }
    Tape* tape() const { return tape_; }
    bool valid() const { return tape_ != nullptr; }

private:
    friend class Tape;
    Var(Tape* tape, std::uint32_t index) : tape_(tape), index_(index) {}

    Tape* tape_ = nullptr;
    std::uint32_t index_ = 0;
};

class Tape {
public:
    explicit Tape(const Parameters* params = nullptr) : params_(params) {}

    Tape(const Tape&) = delete;
    Tape& operator=(const Tape&) = delete;

    Var lift(double v);
    Var param(ParamId id);

    // `scalar` is only read by Op::scale.
    Var apply(Op op, std::span<const Var> inputs, double scalar = 1.0);
    Var apply(Op op, std::initializer_list<Var> inputs, double scalar = 1.0) {
        return apply(op, std::span<const Var>(inputs.begin(), inputs.size()), scalar);
    }

    std::size_t size() const { return nodes_.size(); }
    // Drops every node but keeps the storage; earlier Vars become invalid.
    void clear() {
        nodes_.clear();
        edges_.clear();
        adjoints_.clear();
    }
    double value(Var v) const;
    Op op(Var v) const;

    // Accumulates d(root)/d(node) for every node and returns the gradient with
    // respect to each entry of the bound Parameters store (zeros for
    // parameters that never reached the tape).
    std::vector<double> backward(Var root);

    // Valid after backward().
    double adjoint(Var v) const;

    // Smallest distance from any recorded max0/clamp01/abs input to its kink.
    // Gradient checks use it to reject sample points on a non-smooth edge.
    double min_kink_distance() const;

    const Parameters* parameters() const { return params_; }

private:
    struct Node {
        double value = 0.0;
        Op op = Op::constant;
        std::uint32_t first_edge = 0;
        std::uint32_t edge_count = 0;
        std::int64_t param = -1;
        double kink_distance = 0.0;  // only meaningful for non-smooth ops
    };
    struct Edge {
        std::uint32_t parent;
        double partial;
    };

    Var push(double value, Op op, std::int64_t param = -1);
    void check_owned(Var v) const;

    const Parameters* params_;
    std::vector<Node> nodes_;
    std::vector<Edge> edges_;
    std::vector<double> adjoints_;
};

Var operator+(Var a, Var b);
Var operator-(Var a, Var b);
Var operator*(Var a, Var b);
Var operator/(Var a, Var b);
Var operator-(Var a);

Var operator+(Var a, double b);
Var operator+(double a, Var b);
Var operator-(Var a, double b);
Var operator-(double a, Var b);
Var operator*(double a, Var b);
Var operator*(Var a, double b);

Var exp(Var x);
Var log(Var x);
Var max0(Var x);
Var clamp01(Var x);
Var sigmoid(Var x);
Var abs(Var x);
Var scale(Var x, double factor);
Var sum(std::span<const Var> xs);

// Built from max0; subgradients follow.
Var max(Var a, Var b);
Var min(Var a, Var b);

struct AdamConfig {
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

class Adam {
public:
    explicit Adam(AdamConfig config = {}) : config_(config) {}

    // One bias-corrected update of every parameter in `params`.
    void step(Parameters& params, std::span<const double> grads);

    std::int64_t steps() const { return t_; }
    const AdamConfig& config() const { return config_; }
    std::span<const double> first_moment() const { return m_; }
    std::span<const double> second_moment() const { return v_; }

private:
    AdamConfig config_;
    std::vector<double> m_;
    std::vector<double> v_;
    std::int64_t t_ = 0;
};

}  // namespace mlnn
