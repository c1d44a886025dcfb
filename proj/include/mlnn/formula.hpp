#pragma once

// Interned formula trees. Subformulas are shared: building the same node twice
// returns the same id, and children always get smaller ids than their parents.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace mlnn {

enum class FormulaKind : std::uint8_t {
    atom,
    negation,
    conjunction,
    disjunction,
    implication,
    product_implication,  // 1 - a + ab
    box,
    diamond,
};

std::string_view kind_name(FormulaKind kind);

using FormulaId = std::uint32_t;
inline constexpr FormulaId no_formula = ~FormulaId{0};

struct FormulaNode {
    FormulaKind kind = FormulaKind::atom;
    std::string symbol;  // proposition for atoms, relation for box/diamond
    FormulaId left = no_formula;
    FormulaId right = no_formula;

    bool operator==(const FormulaNode&) const = default;
};

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : std::runtime_error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

class FormulaPool {
public:
    FormulaId atom(std::string_view prop);
    FormulaId negation(FormulaId f);
    FormulaId conjunction(FormulaId a, FormulaId b);
    FormulaId disjunction(FormulaId a, FormulaId b);
    FormulaId implication(FormulaId a, FormulaId b);
    FormulaId product_implication(FormulaId a, FormulaId b);
    FormulaId box(std::string_view relation, FormulaId f);
    FormulaId diamond(std::string_view relation, FormulaId f);

    // K_a = box over "epistemic:a" ("epistemic" when no agent), G = box over
    // "temporal", F = diamond over "temporal".
    FormulaId knows(std::string_view agent, FormulaId f);
    FormulaId always(FormulaId f) { return box("temporal", f); }
    FormulaId eventually(FormulaId f) { return diamond("temporal", f); }

    // Prefix s-expressions, e.g. (box temporal (atom isOnline)) or
    // (implies p (K A (G q))). Throws ParseError.
    FormulaId parse(std::string_view text);

    std::size_t size() const { return nodes_.size(); }
    const FormulaNode& node(FormulaId id) const { return nodes_.at(id); }

    std::string to_string(FormulaId id) const;
    std::size_t depth(FormulaId id) const;  // atoms have depth 0

    // Every id reachable from `roots`, ascending (children before parents).
    std::vector<FormulaId> closure(const std::vector<FormulaId>& roots) const;
    std::vector<std::string> atoms(FormulaId id) const;
    std::vector<std::string> relations(FormulaId id) const;

private:
    FormulaId intern(FormulaNode node);

    std::vector<FormulaNode> nodes_;
    std::unordered_map<std::string, FormulaId> index_;
};

}  // namespace mlnn
