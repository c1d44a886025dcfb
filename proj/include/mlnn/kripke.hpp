#pragma once

// Worlds, spacetime states, proposition truth bounds and accessibility
// relations of a differentiable Kripke model.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mlnn/autodiff.hpp"
#include "mlnn/matrix.hpp"

namespace mlnn {

using StateIndex = std::size_t;

struct Interval {
    double lower = 0.0;
    double upper = 1.0;

    bool operator==(const Interval&) const = default;
};

// Lower/upper truth bounds recorded on a tape.
struct BoundNodes {
    Var lower;
    Var upper;
};

// S = W x T when time steps are given, otherwise S = W. States are ordered
// time-major: index = t * |W| + w, labelled "world@time".
class StateSpace {
public:
    StateSpace() = default;
    explicit StateSpace(std::vector<std::string> worlds, std::vector<std::string> times = {});

    std::size_t size() const { return labels_.size(); }
    bool temporal() const { return !times_.empty(); }

    const std::vector<std::string>& worlds() const { return worlds_; }
    const std::vector<std::string>& times() const { return times_; }
    const std::vector<std::string>& labels() const { return labels_; }
    const std::string& label(StateIndex s) const { return labels_.at(s); }

    std::optional<StateIndex> find(std::string_view label) const;
    StateIndex index(std::string_view label) const;  // throws std::out_of_range
    StateIndex at(std::size_t world, std::size_t time = 0) const;

    std::size_t world_of(StateIndex s) const { return s % worlds_.size(); }
    std::size_t time_of(StateIndex s) const { return s / worlds_.size(); }

private:
    std::vector<std::string> worlds_;
    std::vector<std::string> times_;
    std::vector<std::string> labels_;
    std::unordered_map<std::string, StateIndex> index_;
};

// Per proposition, per state truth bounds. A learnable proposition carries one
// parameter per state holding a point truth value (L = U = clamp01(p)).
class BoundsTensor {
public:
    explicit BoundsTensor(std::size_t states = 0) : states_(states) {}

    std::size_t add(std::string name, std::vector<Interval> bounds);
    std::size_t add_learnable(std::string name, std::vector<Interval> init, Parameters& params);

    std::size_t size() const { return names_.size(); }
    std::size_t states() const { return states_; }
    std::optional<std::size_t> find(std::string_view name) const;
    const std::string& name(std::size_t prop) const { return names_.at(prop); }
    bool learnable(std::size_t prop) const { return !params_.at(prop).empty(); }

    // Current numeric bounds (reads parameters for learnable propositions).
    Interval bounds(std::size_t prop, StateIndex s, const Parameters& params) const;
    BoundNodes on_tape(Tape& tape, std::size_t prop, StateIndex s) const;

    std::span<const ParamId> parameters(std::size_t prop) const { return params_.at(prop); }

private:
    std::size_t states_;
    std::vector<std::string> names_;
    std::vector<std::vector<Interval>> bounds_;
    std::vector<std::vector<ParamId>> params_;
    std::unordered_map<std::string, std::size_t> index_;
};

enum class AccessKind { fixed, logits, metric };

// Fixed weights (crisp 0/1 or any value in [0,1]), a learnable logit matrix
// passed through a sigmoid, or a metric embedding with A_ij = sigmoid(h_i . h_j).
// An optional static mask and an optional per-row top-k mask zero entries out.
class Accessibility {
public:
    static Accessibility fixed(Matrix<double> weights);
    static Accessibility logits(Parameters& params, const Matrix<double>& init);
    static Accessibility metric(Parameters& params, const Matrix<double>& embeddings);

    AccessKind kind() const { return kind_; }
    std::size_t size() const { return n_; }
    std::size_t embedding_dim() const { return dim_; }

    void set_mask(Matrix<std::uint8_t> mask);
    const std::optional<Matrix<std::uint8_t>>& mask() const { return mask_; }

    // Top-k applies to logit relations; the mask is refreshed by
    // refresh_top_k(), which training calls once per epoch.
    void set_top_k(std::optional<std::size_t> k);
    std::optional<std::size_t> top_k() const { return top_k_; }
    void refresh_top_k(const Parameters& params);

    bool allowed(std::size_t i, std::size_t j) const;
    bool learnable() const { return kind_ != AccessKind::fixed; }
    std::span<const ParamId> parameters() const { return params_; }

    // Parameter driving entry (i, j) of a logit relation.
    ParamId logit_parameter(std::size_t i, std::size_t j) const;

    Matrix<Var> materialize(Tape& tape) const;
    Matrix<double> values(const Parameters& params) const;
    Matrix<double> logit_values(const Parameters& params) const;

private:
    Accessibility() = default;

    AccessKind kind_ = AccessKind::fixed;
    std::size_t n_ = 0;
    std::size_t dim_ = 0;
    Matrix<double> fixed_;
    std::vector<ParamId> params_;
    std::optional<Matrix<std::uint8_t>> mask_;
    std::optional<Matrix<std::uint8_t>> top_k_mask_;
    std::optional<std::size_t> top_k_;
};

// Per row: 1 on the k largest logits among allowed entries (ties to the lower
// column index) plus the diagonal.
Matrix<std::uint8_t> topk_mask(const Matrix<double>& logits, std::size_t k,
                               const Matrix<std::uint8_t>* allowed = nullptr);

class RelationRegistry {
public:
    Accessibility& add(std::string name, Accessibility relation);

    bool contains(std::string_view name) const;
    const Accessibility& at(std::string_view name) const;
    Accessibility& at(std::string_view name);

    auto begin() const { return relations_.begin(); }
    auto end() const { return relations_.end(); }
    auto begin() { return relations_.begin(); }
    auto end() { return relations_.end(); }
    std::size_t size() const { return relations_.size(); }

private:
    std::map<std::string, Accessibility, std::less<>> relations_;
};

// M = <S, {A_r}, V> plus the parameter store backing every learnable piece.
struct KripkeModel {
    StateSpace states;
    BoundsTensor propositions;
    RelationRegistry relations;
    Parameters parameters;

    explicit KripkeModel(StateSpace s) : states(std::move(s)), propositions(states.size()) {}
};

// Relational regularizers. Reflexivity: sum_i (1 - A_ii). Soft transitivity:
// sum_ij max0((A^2)_ij - A_ij). Symmetry: sum_{i<j} |A_ij - A_ji|.
Var reg_reflexive(const Matrix<Var>& a);
Var reg_transitive(const Matrix<Var>& a);
Var reg_symmetric(const Matrix<Var>& a);
Var l1_norm(const Matrix<Var>& a);

}  // namespace mlnn
