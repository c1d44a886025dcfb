#include "mlnn/kripke.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace mlnn {

StateSpace::StateSpace(std::vector<std::string> worlds, std::vector<std::string> times)
    : worlds_(std::move(worlds)), times_(std::move(times)) {
    if (worlds_.empty()) throw std::invalid_argument("state space needs at least one world");
    const std::size_t steps = times_.empty() ? 1 : times_.size();
    for (std::size_t t = 0; t < steps; ++t) {
        for (const auto& w : worlds_) {
            std::string label = times_.empty() ? w : w + "@" + times_[t];
            if (!index_.emplace(label, labels_.size()).second) {
                throw std::invalid_argument("duplicate state label '" + label + "'");
            }
            labels_.push_back(std::move(label));
        }
    }
}

std::optional<StateIndex> StateSpace::find(std::string_view label) const {
    auto it = index_.find(std::string(label));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

StateIndex StateSpace::index(std::string_view label) const {
    if (auto s = find(label)) return *s;
    throw std::out_of_range("unknown state '" + std::string(label) + "'");
}

StateIndex StateSpace::at(std::size_t world, std::size_t time) const {
    const std::size_t steps = times_.empty() ? 1 : times_.size();
    if (world >= worlds_.size() || time >= steps) throw std::out_of_range("state coordinates out of range");
    return time * worlds_.size() + world;
}

namespace {

void check_interval(const Interval& b, const std::string& name) {
    if (!(b.lower >= 0.0 && b.lower <= 1.0 && b.upper >= 0.0 && b.upper <= 1.0)) {
        throw std::invalid_argument("bounds of '" + name + "' must lie in [0,1]");
    }
}

}  // namespace

std::size_t BoundsTensor::add(std::string name, std::vector<Interval> bounds) {
    if (bounds.size() != states_) throw std::invalid_argument("bounds of '" + name + "' do not cover every state");
    for (const auto& b : bounds) check_interval(b, name);
    if (index_.count(name)) throw std::invalid_argument("duplicate proposition '" + name + "'");
    index_.emplace(name, names_.size());
    names_.push_back(std::move(name));
    bounds_.push_back(std::move(bounds));
    params_.emplace_back();
    return names_.size() - 1;
}

std::size_t BoundsTensor::add_learnable(std::string name, std::vector<Interval> init, Parameters& params) {
    const std::size_t id = add(std::move(name), std::move(init));
    for (const auto& b : bounds_[id]) params_[id].push_back(params.add(0.5 * (b.lower + b.upper)));
    return id;
}

std::optional<std::size_t> BoundsTensor::find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

Interval BoundsTensor::bounds(std::size_t prop, StateIndex s, const Parameters& params) const {
    if (learnable(prop)) {
        const double v = std::clamp(params.value(params_[prop].at(s)), 0.0, 1.0);
        return {v, v};
    }
    return bounds_.at(prop).at(s);
}

BoundNodes BoundsTensor::on_tape(Tape& tape, std::size_t prop, StateIndex s) const {
    if (learnable(prop)) {
        Var v = clamp01(tape.param(params_[prop].at(s)));
        return {v, v};
    }
    const Interval& b = bounds_.at(prop).at(s);
    return {tape.lift(b.lower), tape.lift(b.upper)};
}

Accessibility Accessibility::fixed(Matrix<double> weights) {
    if (!weights.square()) throw std::invalid_argument("accessibility matrix must be square");
    for (double w : weights.data()) {
        if (!(w >= 0.0 && w <= 1.0)) throw std::invalid_argument("fixed accessibility weights must lie in [0,1]");
    }
    Accessibility a;
    a.kind_ = AccessKind::fixed;
    a.n_ = weights.rows();
    a.fixed_ = std::move(weights);
    return a;
}

Accessibility Accessibility::logits(Parameters& params, const Matrix<double>& init) {
    if (!init.square()) throw std::invalid_argument("logit matrix must be square");
    Accessibility a;
    a.kind_ = AccessKind::logits;
    a.n_ = init.rows();
    for (double v : init.data()) a.params_.push_back(params.add(v));
    return a;
}

Accessibility Accessibility::metric(Parameters& params, const Matrix<double>& embeddings) {
    if (embeddings.rows() == 0 || embeddings.cols() == 0) throw std::invalid_argument("empty embedding matrix");
    Accessibility a;
    a.kind_ = AccessKind::metric;
    a.n_ = embeddings.rows();
    a.dim_ = embeddings.cols();
    for (double v : embeddings.data()) a.params_.push_back(params.add(v));
    return a;
}

void Accessibility::set_mask(Matrix<std::uint8_t> mask) {
    if (mask.rows() != n_ || mask.cols() != n_) throw std::invalid_argument("mask dimensions do not match the state space");
    mask_ = std::move(mask);
    top_k_mask_.reset();
}

void Accessibility::set_top_k(std::optional<std::size_t> k) {
    if (k && (*k < 1 || *k > n_)) throw std::invalid_argument("top-k must lie in [1, |S|]");
    if (k && kind_ != AccessKind::logits) throw std::invalid_argument("top-k masking needs a logit relation");
    top_k_ = k;
    top_k_mask_.reset();
}

void Accessibility::refresh_top_k(const Parameters& params) {
    if (!top_k_) return;
    top_k_mask_ = topk_mask(logit_values(params), *top_k_, mask_ ? &*mask_ : nullptr);
}

bool Accessibility::allowed(std::size_t i, std::size_t j) const {
    if (mask_ && !(*mask_)(i, j)) return false;
    if (top_k_mask_ && !(*top_k_mask_)(i, j)) return false;
    return true;
}

ParamId Accessibility::logit_parameter(std::size_t i, std::size_t j) const {
    if (kind_ != AccessKind::logits) throw std::logic_error("not a logit relation");
    if (i >= n_ || j >= n_) throw std::out_of_range("logit index out of range");
    return params_[i * n_ + j];
}

Matrix<Var> Accessibility::materialize(Tape& tape) const {
    Matrix<Var> out(n_, n_);
    std::vector<Var> embed;
    if (kind_ == AccessKind::metric) {
        embed.reserve(params_.size());
        for (ParamId p : params_) embed.push_back(tape.param(p));
    }
    std::vector<Var> terms(dim_);
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = 0; j < n_; ++j) {
            if (!allowed(i, j)) {
                out(i, j) = tape.lift(0.0);
                continue;
            }
            switch (kind_) {
            case AccessKind::fixed:
                out(i, j) = tape.lift(fixed_(i, j));
                break;
            case AccessKind::logits:
                out(i, j) = sigmoid(tape.param(params_[i * n_ + j]));
                break;
            case AccessKind::metric:
                for (std::size_t k = 0; k < dim_; ++k) terms[k] = embed[i * dim_ + k] * embed[j * dim_ + k];
                out(i, j) = sigmoid(sum(terms));
                break;
            }
        }
    }
    return out;
}

Matrix<double> Accessibility::values(const Parameters& params) const {
    Tape tape(&params);
    const Matrix<Var> m = materialize(tape);
    Matrix<double> out(n_, n_);
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = 0; j < n_; ++j) out(i, j) = m(i, j).value();
    }
    return out;
}

Matrix<double> Accessibility::logit_values(const Parameters& params) const {
    if (kind_ != AccessKind::logits) throw std::logic_error("not a logit relation");
    Matrix<double> out(n_, n_);
    for (std::size_t i = 0; i < n_ * n_; ++i) out.data()[i] = params.value(params_[i]);
    return out;
}

Matrix<std::uint8_t> topk_mask(const Matrix<double>& logits, std::size_t k, const Matrix<std::uint8_t>* allowed) {
    if (!logits.square()) throw std::invalid_argument("top-k mask needs a square logit matrix");
    const std::size_t n = logits.rows();
    if (k < 1 || k > n) throw std::invalid_argument("top-k must lie in [1, |S|]");
    Matrix<std::uint8_t> mask(n, n, 0);
    std::vector<std::size_t> cols;
    for (std::size_t i = 0; i < n; ++i) {
        cols.clear();
        for (std::size_t j = 0; j < n; ++j) {
            if (!allowed || (*allowed)(i, j)) cols.push_back(j);
        }
        std::stable_sort(cols.begin(), cols.end(),
                         [&](std::size_t a, std::size_t b) { return logits(i, a) > logits(i, b); });
        for (std::size_t r = 0; r < std::min(k, cols.size()); ++r) mask(i, cols[r]) = 1;
        mask(i, i) = 1;
    }
    return mask;
}

Accessibility& RelationRegistry::add(std::string name, Accessibility relation) {
    if (name.empty()) throw std::invalid_argument("relation name must not be empty");
    auto [it, inserted] = relations_.emplace(std::move(name), std::move(relation));
    if (!inserted) throw std::invalid_argument("duplicate relation '" + it->first + "'");
    return it->second;
}

bool RelationRegistry::contains(std::string_view name) const { return relations_.find(name) != relations_.end(); }

const Accessibility& RelationRegistry::at(std::string_view name) const {
    auto it = relations_.find(name);
    if (it == relations_.end()) throw std::out_of_range("unknown relation '" + std::string(name) + "'");
    return it->second;
}

Accessibility& RelationRegistry::at(std::string_view name) {
    auto it = relations_.find(name);
    if (it == relations_.end()) throw std::out_of_range("unknown relation '" + std::string(name) + "'");
    return it->second;
}

namespace {

Tape& tape_of(const Matrix<Var>& a) {
    if (!a.square() || a.rows() == 0) throw std::invalid_argument("regularizer needs a non-empty square matrix");
    return *a(0, 0).tape();
}

}  // namespace

Var reg_reflexive(const Matrix<Var>& a) {
    tape_of(a);
    std::vector<Var> terms;
    for (std::size_t i = 0; i < a.rows(); ++i) terms.push_back(1.0 - a(i, i));
    return sum(terms);
}

Var reg_transitive(const Matrix<Var>& a) {
    tape_of(a);
    const std::size_t n = a.rows();
    std::vector<Var> hinges;
    std::vector<Var> paths(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t k = 0; k < n; ++k) paths[k] = a(i, k) * a(k, j);
            hinges.push_back(max0(sum(paths) - a(i, j)));
        }
    }
    return sum(hinges);
}

Var reg_symmetric(const Matrix<Var>& a) {
    Tape& tape = tape_of(a);
    std::vector<Var> terms{tape.lift(0.0)};
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = i + 1; j < a.cols(); ++j) terms.push_back(abs(a(i, j) - a(j, i)));
    }
    return sum(terms);
}

Var l1_norm(const Matrix<Var>& a) {
    tape_of(a);
    std::vector<Var> terms;
    for (const Var& v : a.data()) terms.push_back(abs(v));
    return sum(terms);
}

}  // namespace mlnn
