#include "mlnn/formula.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace mlnn {

std::string_view kind_name(FormulaKind kind) {
    switch (kind) {
    case FormulaKind::atom: return "atom";
    case FormulaKind::negation: return "not";
    case FormulaKind::conjunction: return "and";
    case FormulaKind::disjunction: return "or";
    case FormulaKind::implication: return "implies";
    case FormulaKind::product_implication: return "implies_prod";
    case FormulaKind::box: return "box";
    case FormulaKind::diamond: return "diamond";
    }
    return "unknown";
}

FormulaId FormulaPool::intern(FormulaNode node) {
    std::string key = std::to_string(static_cast<int>(node.kind)) + '|' + node.symbol + '|' +
                      std::to_string(node.left) + '|' + std::to_string(node.right);
    auto it = index_.find(key);
    if (it != index_.end()) return it->second;
    for (FormulaId c : {node.left, node.right}) {
        if (c != no_formula && c >= nodes_.size()) throw std::out_of_range("unknown child formula id");
    }
    const auto id = static_cast<FormulaId>(nodes_.size());
    nodes_.push_back(std::move(node));
    index_.emplace(std::move(key), id);
    return id;
}

FormulaId FormulaPool::atom(std::string_view prop) {
    if (prop.empty()) throw std::invalid_argument("empty proposition name");
    return intern({FormulaKind::atom, std::string(prop)});
}

FormulaId FormulaPool::negation(FormulaId f) { return intern({FormulaKind::negation, {}, f}); }
FormulaId FormulaPool::conjunction(FormulaId a, FormulaId b) { return intern({FormulaKind::conjunction, {}, a, b}); }
FormulaId FormulaPool::disjunction(FormulaId a, FormulaId b) { return intern({FormulaKind::disjunction, {}, a, b}); }
FormulaId FormulaPool::implication(FormulaId a, FormulaId b) { return intern({FormulaKind::implication, {}, a, b}); }

FormulaId FormulaPool::product_implication(FormulaId a, FormulaId b) {
    return intern({FormulaKind::product_implication, {}, a, b});
}

FormulaId FormulaPool::box(std::string_view relation, FormulaId f) {
    if (relation.empty()) throw std::invalid_argument("empty relation name");
    return intern({FormulaKind::box, std::string(relation), f});
}

FormulaId FormulaPool::diamond(std::string_view relation, FormulaId f) {
    if (relation.empty()) throw std::invalid_argument("empty relation name");
    return intern({FormulaKind::diamond, std::string(relation), f});
}

FormulaId FormulaPool::knows(std::string_view agent, FormulaId f) {
    return agent.empty() ? box("epistemic", f) : box("epistemic:" + std::string(agent), f);
}

namespace {

struct Token {
    enum Kind { open, close, symbol, end } kind;
    std::string_view text;
    std::size_t offset;
};

class Parser {
public:
    Parser(FormulaPool& pool, std::string_view src) : pool_(pool), src_(src) { advance(); }

    FormulaId parse_all() {
        FormulaId f = parse_formula();
        if (tok_.kind != Token::end) throw ParseError("trailing input '" + std::string(tok_.text) + "'", tok_.offset);
        return f;
    }

private:
    void advance() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        if (pos_ >= src_.size()) {
            tok_ = {Token::end, {}, pos_};
            return;
        }
        const char c = src_[pos_];
        if (c == '(' || c == ')') {
            tok_ = {c == '(' ? Token::open : Token::close, src_.substr(pos_, 1), pos_};
            ++pos_;
            return;
        }
        const std::size_t start = pos_;
        while (pos_ < src_.size() && !std::isspace(static_cast<unsigned char>(src_[pos_])) && src_[pos_] != '(' &&
               src_[pos_] != ')') {
            ++pos_;
        }
        tok_ = {Token::symbol, src_.substr(start, pos_ - start), start};
    }

    std::string_view expect_symbol(const char* what) {
        if (tok_.kind != Token::symbol) throw ParseError(std::string("expected ") + what, tok_.offset);
        std::string_view s = tok_.text;
        advance();
        return s;
    }

    void expect_close(std::string_view head) {
        if (tok_.kind != Token::close) {
            throw ParseError("expected ')' to close '" + std::string(head) + "'", tok_.offset);
        }
        advance();
    }

    FormulaId parse_formula() {
        if (tok_.kind == Token::symbol) return pool_.atom(expect_symbol("proposition"));
        if (tok_.kind != Token::open) throw ParseError("expected a formula", tok_.offset);
        advance();
        const std::size_t at = tok_.offset;
        const std::string_view head = expect_symbol("an operator");

        FormulaId out = no_formula;
        if (head == "atom") {
            out = pool_.atom(expect_symbol("proposition name"));
        } else if (head == "not") {
            out = pool_.negation(parse_formula());
        } else if (head == "and" || head == "or") {
            // n-ary, folded to the left
            out = parse_formula();
            std::size_t n = 1;
            while (tok_.kind != Token::close && tok_.kind != Token::end) {
                FormulaId rhs = parse_formula();
                out = head == "and" ? pool_.conjunction(out, rhs) : pool_.disjunction(out, rhs);
                ++n;
            }
            if (n < 2) throw ParseError("'" + std::string(head) + "' needs at least two operands", at);
        } else if (head == "implies" || head == "implies_prod") {
            FormulaId a = parse_formula();
            FormulaId b = parse_formula();
            out = head == "implies" ? pool_.implication(a, b) : pool_.product_implication(a, b);
        } else if (head == "box" || head == "diamond") {
            const std::string_view rel = expect_symbol("relation name");
            FormulaId f = parse_formula();
            out = head == "box" ? pool_.box(rel, f) : pool_.diamond(rel, f);
        } else if (head == "K") {
            // (K f) or (K agent f)
            if (tok_.kind == Token::symbol) {
                const std::string_view first = expect_symbol("agent");
                if (tok_.kind == Token::close) {
                    out = pool_.knows("", pool_.atom(first));
                } else {
                    out = pool_.knows(first, parse_formula());
                }
            } else {
                out = pool_.knows("", parse_formula());
            }
        } else if (head == "G") {
            out = pool_.always(parse_formula());
        } else if (head == "F") {
            out = pool_.eventually(parse_formula());
        } else {
            throw ParseError("unknown operator '" + std::string(head) + "'", at);
        }
        expect_close(head);
        return out;
    }

    FormulaPool& pool_;
    std::string_view src_;
    std::size_t pos_ = 0;
    Token tok_{Token::end, {}, 0};
};

}  // namespace

FormulaId FormulaPool::parse(std::string_view text) { return Parser(*this, text).parse_all(); }

std::string FormulaPool::to_string(FormulaId id) const {
    const FormulaNode& n = node(id);
    switch (n.kind) {
    case FormulaKind::atom:
        return n.symbol;
    case FormulaKind::negation:
        return "(not " + to_string(n.left) + ")";
    case FormulaKind::box:
    case FormulaKind::diamond:
        return "(" + std::string(kind_name(n.kind)) + " " + n.symbol + " " + to_string(n.left) + ")";
    default:
        return "(" + std::string(kind_name(n.kind)) + " " + to_string(n.left) + " " + to_string(n.right) + ")";
    }
}

std::size_t FormulaPool::depth(FormulaId id) const {
    const FormulaNode& n = node(id);
    if (n.kind == FormulaKind::atom) return 0;
    std::size_t d = depth(n.left);
    if (n.right != no_formula) d = std::max(d, depth(n.right));
    return d + 1;
}

std::vector<FormulaId> FormulaPool::closure(const std::vector<FormulaId>& roots) const {
    std::vector<std::uint8_t> seen(nodes_.size(), 0);
    std::vector<FormulaId> stack(roots.begin(), roots.end());
    while (!stack.empty()) {
        const FormulaId id = stack.back();
        stack.pop_back();
        if (seen.at(id)) continue;
        seen[id] = 1;
        const FormulaNode& n = nodes_[id];
        if (n.left != no_formula) stack.push_back(n.left);
        if (n.right != no_formula) stack.push_back(n.right);
    }
    std::vector<FormulaId> out;
    for (FormulaId id = 0; id < seen.size(); ++id) {
        if (seen[id]) out.push_back(id);
    }
    return out;
}

std::vector<std::string> FormulaPool::atoms(FormulaId id) const {
    std::set<std::string> names;
    for (FormulaId f : closure({id})) {
        if (nodes_[f].kind == FormulaKind::atom) names.insert(nodes_[f].symbol);
    }
    return {names.begin(), names.end()};
}

std::vector<std::string> FormulaPool::relations(FormulaId id) const {
    std::set<std::string> names;
    for (FormulaId f : closure({id})) {
        const FormulaKind k = nodes_[f].kind;
        if (k == FormulaKind::box || k == FormulaKind::diamond) names.insert(nodes_[f].symbol);
    }
    return {names.begin(), names.end()};
}

}  // namespace mlnn
