#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mlnn::testing {

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

std::size_t pick(Rng& rng, std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }

std::vector<double> finite_difference(Parameters& params, const std::function<double()>& f, double h) {
    std::vector<double> g(params.size());
    for (ParamId id = 0; id < params.size(); ++id) {
        const double x = params.value(id);
        params.set(id, x + h);
        const double up = f();
        params.set(id, x - h);
        const double down = f();
        params.set(id, x);
        g[id] = (up - down) / (2.0 * h);
    }
    return g;
}

double worst_relative_error(const std::vector<double>& analytic, const std::vector<double>& numeric, double floor) {
    if (analytic.size() != numeric.size()) throw std::invalid_argument("gradient size mismatch");
    double worst = 0.0;
    for (std::size_t i = 0; i < analytic.size(); ++i) {
        const double scale = std::max({std::abs(analytic[i]), std::abs(numeric[i]), floor});
        worst = std::max(worst, std::abs(analytic[i] - numeric[i]) / scale);
    }
    return worst;
}

GradientCheck check_gradients(Rng& rng, Parameters& params, const std::function<void(Rng&, Parameters&)>& sample,
                              const std::function<Var(Tape&)>& root, std::size_t points, double kink_margin) {
    GradientCheck out;
    while (out.accepted < points) {
        if (out.rejected > 50 * points) throw std::runtime_error("gradient check: every sample lands on a kink");
        sample(rng, params);
        Tape tape(&params);
        const Var r = root(tape);
        if (tape.min_kink_distance() < kink_margin) {
            ++out.rejected;
            continue;
        }
        const std::vector<double> analytic = tape.backward(r);
        const std::vector<double> numeric = finite_difference(params, [&] {
            Tape t(&params);
            return root(t).value();
        });
        out.worst = std::max(out.worst, worst_relative_error(analytic, numeric));
        ++out.accepted;
    }
    return out;
}

CrispModel random_crisp_model(Rng& rng, std::size_t states, const std::vector<std::string>& props,
                              const std::vector<std::string>& relations, double density) {
    CrispModel m;
    m.states = states;
    for (const auto& r : relations) m.relations[r] = random_relation(rng, states, density);
    for (const auto& p : props) {
        std::vector<std::uint8_t> v(states);
        for (auto& b : v) b = uniform(rng) < 0.5;
        m.valuation[p] = v;
    }
    return m;
}

KripkeModel random_soft_model(Rng& rng, std::size_t states, const std::vector<std::string>& props,
                              const std::vector<std::string>& relations) {
    std::vector<std::string> labels;
    for (std::size_t s = 0; s < states; ++s) labels.push_back("s" + std::to_string(s));
    KripkeModel m{StateSpace(labels)};
    for (const auto& p : props) {
        std::vector<Interval> b(states);
        for (auto& iv : b) {
            double x = uniform(rng), y = uniform(rng);
            if (x > y) std::swap(x, y);
            iv = {x, y};
        }
        m.propositions.add(p, b);
    }
    for (const auto& r : relations) {
        Matrix<double> a(states, states);
        for (double& v : a.data()) {
            const double u = uniform(rng);
            v = u < 0.2 ? 0.0 : u > 0.8 ? 1.0 : uniform(rng);
        }
        m.relations.add(r, Accessibility::fixed(a));
    }
    return m;
}

FormulaId random_formula(Rng& rng, FormulaPool& pool, std::size_t depth, const std::vector<std::string>& props,
                         const std::vector<std::string>& relations, bool product_implication) {
    if (depth == 0 || uniform(rng) < 0.2) return pool.atom(props[pick(rng, props.size())]);
    auto sub = [&] { return random_formula(rng, pool, depth - 1, props, relations, product_implication); };
    const std::string& rel = relations[pick(rng, relations.size())];
    switch (pick(rng, product_implication ? 8 : 7)) {
        case 0: return pool.negation(sub());
        case 1: return pool.box(rel, sub());
        case 2: return pool.diamond(rel, sub());
        case 3: return pool.conjunction(sub(), sub());
        case 4: return pool.disjunction(sub(), sub());
        case 5: return pool.implication(sub(), sub());
        case 6: return pool.atom(props[pick(rng, props.size())]);
        default: return pool.product_implication(sub(), sub());
    }
}

std::vector<FormulaId> all_formulas(FormulaPool& pool, std::size_t depth, const std::vector<std::string>& props,
                                    const std::vector<std::string>& relations) {
    std::vector<FormulaId> level;
    for (const auto& p : props) level.push_back(pool.atom(p));
    for (std::size_t d = 0; d < depth; ++d) {
        std::vector<FormulaId> next = level;
        for (FormulaId a : level) {
            next.push_back(pool.negation(a));
            for (const auto& r : relations) {
                next.push_back(pool.box(r, a));
                next.push_back(pool.diamond(r, a));
            }
            for (FormulaId b : level) {
                next.push_back(pool.conjunction(a, b));
                next.push_back(pool.disjunction(a, b));
                next.push_back(pool.implication(a, b));
                next.push_back(pool.product_implication(a, b));
            }
        }
        std::sort(next.begin(), next.end());
        next.erase(std::unique(next.begin(), next.end()), next.end());
        level = std::move(next);
    }
    return level;
}

std::uint64_t truth_set(const CrispModel& model, const FormulaPool& pool, FormulaId f) {
    if (model.states > 64) throw std::invalid_argument("truth_set: at most 64 states");
    const std::uint64_t all = model.states == 64 ? ~0ull : (1ull << model.states) - 1;
    const FormulaNode& n = pool.node(f);
    auto set = [&](FormulaId g) { return truth_set(model, pool, g); };
    switch (n.kind) {
        case FormulaKind::atom: {
            std::uint64_t out = 0;
            const auto& v = model.valuation.at(n.symbol);
            for (std::size_t s = 0; s < model.states; ++s) out |= std::uint64_t{v[s] != 0} << s;
            return out;
        }
        case FormulaKind::negation: return all & ~set(n.left);
        case FormulaKind::conjunction: return set(n.left) & set(n.right);
        case FormulaKind::disjunction: return set(n.left) | set(n.right);
        case FormulaKind::implication:
        case FormulaKind::product_implication: return all & (~set(n.left) | set(n.right));
        case FormulaKind::box:
        case FormulaKind::diamond: {
            const std::uint64_t child = set(n.left);
            const auto& r = model.relations.at(n.symbol);
            std::uint64_t out = 0;
            for (std::size_t s = 0; s < model.states; ++s) {
                std::uint64_t succ = 0;
                for (std::size_t t = 0; t < model.states; ++t) succ |= std::uint64_t{r(s, t) != 0} << t;
                const bool holds = n.kind == FormulaKind::box ? (succ & ~child) == 0 : (succ & child) != 0;
                out |= std::uint64_t{holds} << s;
            }
            return out;
        }
    }
    throw std::logic_error("unknown formula kind");
}

bool is_reflexive(const Matrix<std::uint8_t>& r) {
    for (std::size_t i = 0; i < r.rows(); ++i) {
        if (!r(i, i)) return false;
    }
    return true;
}

bool is_symmetric(const Matrix<std::uint8_t>& r) {
    for (std::size_t i = 0; i < r.rows(); ++i) {
        for (std::size_t j = 0; j < r.cols(); ++j) {
            if (r(i, j) != r(j, i)) return false;
        }
    }
    return true;
}

bool is_transitive(const Matrix<std::uint8_t>& r) {
    const std::size_t n = r.rows();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            for (std::size_t j = 0; j < n; ++j) {
                if (r(i, k) && r(k, j) && !r(i, j)) return false;
            }
        }
    }
    return true;
}

bool is_soft_transitive(const Matrix<std::uint8_t>& r) {
    const std::size_t n = r.rows();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            int paths = 0;
            for (std::size_t k = 0; k < n; ++k) paths += r(i, k) && r(k, j);
            if (paths > r(i, j)) return false;
        }
    }
    return true;
}

Matrix<std::uint8_t> random_relation(Rng& rng, std::size_t n, double density) {
    Matrix<std::uint8_t> r(n, n, 0);
    for (auto& v : r.data()) v = uniform(rng) < density;
    return r;
}

}  // namespace mlnn::testing
