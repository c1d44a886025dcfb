#include "mlnn/autodiff.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace mlnn {

namespace {

void require_finite(double v, std::string_view what) {
    if (!std::isfinite(v)) {
        throw std::domain_error(std::string(what) + ": non-finite value");
    }
}

std::size_t expected_arity(Op op) {
    switch (op) {
    case Op::add:
    case Op::sub:
    case Op::mul:
    case Op::div:
        return 2;
    case Op::neg:
    case Op::scale:
    case Op::exp:
    case Op::log:
    case Op::max0:
    case Op::clamp01:
    case Op::sigmoid:
    case Op::abs:
        return 1;
    default:
        return 0;
    }
}

constexpr double smooth = std::numeric_limits<double>::infinity();

}  // namespace

std::string_view op_name(Op op) {
    switch (op) {
    case Op::constant: return "constant";
    case Op::parameter: return "parameter";
    case Op::add: return "add";
    case Op::sub: return "sub";
    case Op::mul: return "mul";
    case Op::div: return "div";
    case Op::neg: return "neg";
    case Op::scale: return "scale";
    case Op::exp: return "exp";
    case Op::log: return "log";
    case Op::max0: return "max0";
    case Op::clamp01: return "clamp01";
    case Op::sigmoid: return "sigmoid";
    case Op::abs: return "abs";
    case Op::sum: return "sum";
    }
    return "unknown";
}

ParamId Parameters::add(double init) {
    require_finite(init, "parameter init");
    values_.push_back(init);
    return static_cast<ParamId>(values_.size() - 1);
}

void Parameters::set(ParamId id, double v) {
    require_finite(v, "parameter update");
    values_.at(id) = v;
}

double Var::value() const {
    if (!tape_) throw std::logic_error("value() on an unbound Var");
    return tape_->value(*this);
}

Var Tape::push(double value, Op op, std::int64_t param) {
    Node n;
    n.value = value;
    n.op = op;
    n.first_edge = static_cast<std::uint32_t>(edges_.size());
    n.param = param;
    n.kink_distance = smooth;
    nodes_.push_back(n);
    return Var(this, static_cast<std::uint32_t>(nodes_.size() - 1));
}

void Tape::check_owned(Var v) const {
    if (v.tape_ != this || v.index_ >= nodes_.size()) {
        throw std::invalid_argument("Var does not belong to this tape");
    }
}

Var Tape::lift(double v) {
    require_finite(v, "lift");
    return push(v, Op::constant);
}

Var Tape::param(ParamId id) {
    if (!params_) throw std::logic_error("tape has no parameter store");
    if (id >= params_->size()) throw std::out_of_range("unknown parameter id");
    return push(params_->value(id), Op::parameter, id);
}

Var Tape::apply(Op op, std::span<const Var> in, double scalar) {
    if (op == Op::constant || op == Op::parameter) {
        throw std::invalid_argument("apply: leaves are created with lift()/param()");
    }
    const std::size_t arity = expected_arity(op);
    if (op == Op::sum ? in.empty() : in.size() != arity) {
        throw std::invalid_argument("apply(" + std::string(op_name(op)) + "): arity mismatch, got " +
                                    std::to_string(in.size()));
    }
    for (Var v : in) check_owned(v);

    auto x = [&](std::size_t i) { return nodes_[in[i].index_].value; };
    auto edge = [&](std::size_t i, double partial) { edges_.push_back({in[i].index_, partial}); };

    double out = 0.0;
    double kink = smooth;
    const auto first = static_cast<std::uint32_t>(edges_.size());

    switch (op) {
    case Op::add:
        out = x(0) + x(1);
        edge(0, 1.0);
        edge(1, 1.0);
        break;
    case Op::sub:
        out = x(0) - x(1);
        edge(0, 1.0);
        edge(1, -1.0);
        break;
    case Op::mul:
        out = x(0) * x(1);
        edge(0, x(1));
        edge(1, x(0));
        break;
    case Op::div:
        if (x(1) == 0.0) throw std::domain_error("div: division by zero");
        out = x(0) / x(1);
        edge(0, 1.0 / x(1));
        edge(1, -x(0) / (x(1) * x(1)));
        break;
    case Op::neg:
        out = -x(0);
        edge(0, -1.0);
        break;
    case Op::scale:
        require_finite(scalar, "scale factor");
        out = scalar * x(0);
        edge(0, scalar);
        break;
    case Op::exp:
        out = std::exp(x(0));
        edge(0, out);
        break;
    case Op::log:
        if (!(x(0) > 0.0)) throw std::domain_error("log: non-positive input");
        out = std::log(x(0));
        edge(0, 1.0 / x(0));
        break;
    case Op::max0:
        out = x(0) > 0.0 ? x(0) : 0.0;
        edge(0, x(0) > 0.0 ? 1.0 : 0.0);
        kink = std::abs(x(0));
        break;
    case Op::clamp01: {
        // Subgradient 1 on the closed interval, 0 outside it.
        const bool inside = x(0) >= 0.0 && x(0) <= 1.0;
        out = std::clamp(x(0), 0.0, 1.0);
        edge(0, inside ? 1.0 : 0.0);
        kink = std::min(std::abs(x(0)), std::abs(x(0) - 1.0));
        break;
    }
    case Op::sigmoid: {
        const double v = x(0);
        out = v >= 0.0 ? 1.0 / (1.0 + std::exp(-v)) : std::exp(v) / (1.0 + std::exp(v));
        edge(0, out * (1.0 - out));
        break;
    }
    case Op::abs:
        out = std::abs(x(0));
        edge(0, x(0) > 0.0 ? 1.0 : (x(0) < 0.0 ? -1.0 : 0.0));
        kink = std::abs(x(0));
        break;
    case Op::sum:
        for (std::size_t i = 0; i < in.size(); ++i) {
            out += x(i);
            edge(i, 1.0);
        }
        break;
    default:
        throw std::invalid_argument("apply: unsupported op");
    }

    if (!std::isfinite(out)) {
        edges_.resize(first);
        throw std::domain_error("apply(" + std::string(op_name(op)) + "): non-finite result");
    }

    Node n;
    n.value = out;
    n.op = op;
    n.first_edge = first;
    n.edge_count = static_cast<std::uint32_t>(edges_.size() - first);
    n.kink_distance = kink;
    nodes_.push_back(n);
    return Var(this, static_cast<std::uint32_t>(nodes_.size() - 1));
}

double Tape::value(Var v) const {
    check_owned(v);
    return nodes_[v.index_].value;
}

Op Tape::op(Var v) const {
    check_owned(v);
    return nodes_[v.index_].op;
}

std::vector<double> Tape::backward(Var root) {
    check_owned(root);
    adjoints_.assign(nodes_.size(), 0.0);
    adjoints_[root.index_] = 1.0;
    // Parents always precede children, so a single reverse sweep suffices.
    for (std::size_t i = root.index_ + 1; i-- > 0;) {
        const double a = adjoints_[i];
        if (a == 0.0) continue;
        const Node& n = nodes_[i];
        for (std::uint32_t e = n.first_edge; e < n.first_edge + n.edge_count; ++e) {
            adjoints_[edges_[e].parent] += a * edges_[e].partial;
        }
    }

    std::vector<double> grads(params_ ? params_->size() : 0, 0.0);
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (nodes_[i].param >= 0) grads[static_cast<std::size_t>(nodes_[i].param)] += adjoints_[i];
    }
    for (double g : grads) require_finite(g, "backward");
    return grads;
}

double Tape::adjoint(Var v) const {
    check_owned(v);
    if (adjoints_.size() != nodes_.size()) throw std::logic_error("adjoint() before backward()");
    return adjoints_[v.index_];
}

double Tape::min_kink_distance() const {
    double d = smooth;
    for (const Node& n : nodes_) d = std::min(d, n.kink_distance);
    return d;
}

namespace {

Tape& tape_of(Var a) {
    if (!a.valid()) throw std::logic_error("operation on an unbound Var");
    return *a.tape();
}

}  // namespace

Var operator+(Var a, Var b) { return tape_of(a).apply(Op::add, {a, b}); }
Var operator-(Var a, Var b) { return tape_of(a).apply(Op::sub, {a, b}); }
Var operator*(Var a, Var b) { return tape_of(a).apply(Op::mul, {a, b}); }
Var operator/(Var a, Var b) { return tape_of(a).apply(Op::div, {a, b}); }
Var operator-(Var a) { return tape_of(a).apply(Op::neg, {a}); }

Var operator+(Var a, double b) { return a + tape_of(a).lift(b); }
Var operator+(double a, Var b) { return tape_of(b).lift(a) + b; }
Var operator-(Var a, double b) { return a - tape_of(a).lift(b); }
Var operator-(double a, Var b) { return tape_of(b).lift(a) - b; }
Var operator*(double a, Var b) { return scale(b, a); }
Var operator*(Var a, double b) { return scale(a, b); }

Var exp(Var x) { return tape_of(x).apply(Op::exp, {x}); }
Var log(Var x) { return tape_of(x).apply(Op::log, {x}); }
Var max0(Var x) { return tape_of(x).apply(Op::max0, {x}); }
Var clamp01(Var x) { return tape_of(x).apply(Op::clamp01, {x}); }
Var sigmoid(Var x) { return tape_of(x).apply(Op::sigmoid, {x}); }
Var abs(Var x) { return tape_of(x).apply(Op::abs, {x}); }
Var scale(Var x, double factor) { return tape_of(x).apply(Op::scale, {x}, factor); }

Var sum(std::span<const Var> xs) {
    if (xs.empty()) throw std::invalid_argument("sum of an empty list");
    return tape_of(xs.front()).apply(Op::sum, xs);
}

Var max(Var a, Var b) { return a + max0(b - a); }
Var min(Var a, Var b) { return a - max0(a - b); }

void Adam::step(Parameters& params, std::span<const double> grads) {
    if (grads.size() != params.size()) throw std::invalid_argument("adam: gradient size mismatch");
    for (double g : grads) require_finite(g, "adam gradient");
    m_.resize(params.size(), 0.0);
    v_.resize(params.size(), 0.0);
    ++t_;
    const double c1 = 1.0 - std::pow(config_.beta1, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(config_.beta2, static_cast<double>(t_));
    for (std::size_t i = 0; i < params.size(); ++i) {
        m_[i] = config_.beta1 * m_[i] + (1.0 - config_.beta1) * grads[i];
        v_[i] = config_.beta2 * v_[i] + (1.0 - config_.beta2) * grads[i] * grads[i];
        const double m_hat = m_[i] / c1;
        const double v_hat = v_[i] / c2;
        const double update = config_.learning_rate * m_hat / (std::sqrt(v_hat) + config_.epsilon);
        if (update != 0.0) params.set(static_cast<ParamId>(i), params.value(static_cast<ParamId>(i)) - update);
    }
}

}  // namespace mlnn
