// Copyright 2026 The fogmig Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * \file fogmig/structure.hpp
 *
 * \brief Structured VNF forwarding graph: a tree whose leaves are VNFs and
 *  whose internal nodes are sequence, parallel, selection or loop
 *  substructures.
 *
 * The textual form accepted by parse_structure() is
 *
 *     expr := NAME | leaf(NAME)
 *           | seq(expr, ...) | par(expr, ...)
 *           | sel(expr, ...) | sel[h1, h2, ...](expr, ...)
 *           | loop[q](expr, ...)
 *
 * Selection weights default to equal probabilities.
 */

#ifndef FOGMIG_STRUCTURE_HPP
#define FOGMIG_STRUCTURE_HPP

#include <fogmig/core.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace fogmig {

enum class StructureKind
{
    leaf,
    sequence,
    parallel,
    selection,
    loop
};

inline constexpr double selection_weight_tolerance = 1e-9;

class StructureTree
{
public:
    static StructureTree leaf(VnfTypeId vnf)
    {
        StructureTree t;
        t.kind_ = StructureKind::leaf;
        t.vnf_ = vnf;
        return t;
    }

    static StructureTree sequence(std::vector<StructureTree> children)
    {
        return internal(StructureKind::sequence, std::move(children));
    }

    static StructureTree parallel(std::vector<StructureTree> children)
    {
        return internal(StructureKind::parallel, std::move(children));
    }

    /// Empty \p weights means equal probability for every child.
    static StructureTree selection(std::vector<StructureTree> children, std::vector<double> weights = {})
    {
        StructureTree t = internal(StructureKind::selection, std::move(children));
        if (weights.empty()) {
            weights.assign(t.children_.size(), 1.0 / static_cast<double>(t.children_.size()));
        }
        if (weights.size() != t.children_.size()) {
            throw InvariantError("selection: one weight per child required (got "
                                 + std::to_string(weights.size()) + " weights for "
                                 + std::to_string(t.children_.size()) + " children)");
        }
        double sum = 0;
        for (double h : weights) {
            if (!(h >= 0) || !std::isfinite(h)) {
                throw InvariantError("selection: weights must be non-negative");
            }
            sum += h;
        }
        if (std::abs(sum - 1.0) > selection_weight_tolerance) {
            std::ostringstream oss;
            oss << "selection: weights must satisfy sum(h) = 1, got " << sum;
            throw InvariantError(oss.str());
        }
        t.weights_ = std::move(weights);
        return t;
    }

    static StructureTree loop(std::vector<StructureTree> children, double repeat_probability)
    {
        if (!(repeat_probability >= 0.0 && repeat_probability < 1.0)) {
            std::ostringstream oss;
            oss << "loop: repeat probability must satisfy 0 <= q < 1 (divergent loop), got "
                << repeat_probability;
            throw InvariantError(oss.str());
        }
        StructureTree t = internal(StructureKind::loop, std::move(children));
        t.repeat_probability_ = repeat_probability;
        return t;
    }

    StructureKind kind() const { return kind_; }
    bool is_leaf() const { return kind_ == StructureKind::leaf; }
    VnfTypeId vnf() const { return vnf_; }
    const std::vector<StructureTree>& children() const { return children_; }
    const std::vector<double>& weights() const { return weights_; }
    double repeat_probability() const { return repeat_probability_; }

    /// Leaf VNFs, left to right.
    std::vector<VnfTypeId> leaves() const
    {
        std::vector<VnfTypeId> out;
        collect_leaves(out);
        return out;
    }

    /// Number of tree nodes, leaves included.
    std::size_t size() const
    {
        std::size_t n = 1;
        for (const auto& c : children_) {
            n += c.size();
        }
        return n;
    }

    friend bool operator==(const StructureTree&, const StructureTree&) = default;

private:
    static StructureTree internal(StructureKind kind, std::vector<StructureTree> children)
    {
        if (children.empty()) {
            throw InvariantError("internal structure node must have at least one child");
        }
        StructureTree t;
        t.kind_ = kind;
        t.children_ = std::move(children);
        return t;
    }

    void collect_leaves(std::vector<VnfTypeId>& out) const
    {
        if (is_leaf()) {
            out.push_back(vnf_);
            return;
        }
        for (const auto& c : children_) {
            c.collect_leaves(out);
        }
    }

    StructureKind kind_{StructureKind::leaf};
    VnfTypeId vnf_{};
    std::vector<StructureTree> children_;
    std::vector<double> weights_;
    double repeat_probability_{0.0};
};

/// Validates a whole tree: every VNF appears in exactly one leaf. Local
/// invariants are enforced by the StructureTree factories.
inline StructureTree build_structure_tree(StructureTree tree)
{
    std::set<VnfTypeId> seen;
    for (VnfTypeId v : tree.leaves()) {
        if (!seen.insert(v).second) {
            throw InvariantError("structure: VNF " + std::to_string(v.value)
                                 + " appears in more than one leaf");
        }
    }
    return tree;
}

/// Bottom-up evaluation of the structure: sequence sums, parallel takes the
/// maximum, selection takes the h-weighted sum and loop scales the sum of its
/// children by q/(1-q).
template <typename LeafValue>
double aggregate(const StructureTree& tree, LeafValue&& leaf_value)
{
    switch (tree.kind()) {
    case StructureKind::leaf:
        return leaf_value(tree.vnf());
    case StructureKind::sequence: {
        double sum = 0;
        for (const auto& c : tree.children()) {
            sum += aggregate(c, leaf_value);
        }
        return sum;
    }
    case StructureKind::parallel: {
        double best = aggregate(tree.children().front(), leaf_value);
        for (std::size_t i = 1; i < tree.children().size(); ++i) {
            best = std::max(best, aggregate(tree.children()[i], leaf_value));
        }
        return best;
    }
    case StructureKind::selection: {
        double sum = 0;
        for (std::size_t i = 0; i < tree.children().size(); ++i) {
            sum += tree.weights()[i] * aggregate(tree.children()[i], leaf_value);
        }
        return sum;
    }
    case StructureKind::loop: {
        double sum = 0;
        for (const auto& c : tree.children()) {
            sum += aggregate(c, leaf_value);
        }
        const double q = tree.repeat_probability();
        return q / (1.0 - q) * sum;
    }
    }
    return 0;
}

inline double aggregate_over_tree(const StructureTree& tree, const std::map<VnfTypeId, double>& leaf_values)
{
    return aggregate(tree, [&](VnfTypeId v) {
        auto it = leaf_values.find(v);
        if (it == leaf_values.end()) {
            throw DomainError("aggregate_over_tree: missing value for leaf VNF " + std::to_string(v.value));
        }
        return it->second;
    });
}

namespace detail {

class StructureParser
{
public:
    StructureParser(std::string_view text, const std::function<VnfTypeId(std::string_view)>& resolve)
    : text_(text), resolve_(resolve)
    {
    }

    StructureTree parse()
    {
        StructureTree t = expr();
        skip_ws();
        if (pos_ != text_.size()) {
            fail("trailing input");
        }
        return t;
    }

private:
    [[noreturn]] void fail(const std::string& what) const
    {
        throw SchemaError("structure at offset " + std::to_string(pos_), what + " in '" + std::string(text_) + "'");
    }

    void skip_ws()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }

    bool accept(char c)
    {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c)
    {
        if (!accept(c)) {
            fail(std::string("expected '") + c + "'");
        }
    }

    static bool name_char(char c)
    {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '&' || c == '-' || c == '.';
    }

    std::string_view name()
    {
        skip_ws();
        const std::size_t start = pos_;
        while (pos_ < text_.size() && name_char(text_[pos_])) {
            ++pos_;
        }
        if (start == pos_) {
            fail("expected a name");
        }
        return text_.substr(start, pos_ - start);
    }

    double number()
    {
        skip_ws();
        double v = 0;
        auto [ptr, ec] = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), v);
        if (ec != std::errc{}) {
            fail("expected a number");
        }
        pos_ = static_cast<std::size_t>(ptr - text_.data());
        return v;
    }

    std::vector<double> bracket_numbers()
    {
        std::vector<double> out;
        if (!accept('[')) {
            return out;
        }
        do {
            out.push_back(number());
        } while (accept(','));
        expect(']');
        return out;
    }

    std::vector<StructureTree> child_list()
    {
        expect('(');
        std::vector<StructureTree> out;
        if (accept(')')) {
            return out;
        }
        do {
            out.push_back(expr());
        } while (accept(','));
        expect(')');
        return out;
    }

    StructureTree expr()
    {
        const std::string_view word = name();
        skip_ws();
        const bool call = pos_ < text_.size() && (text_[pos_] == '(' || text_[pos_] == '[');
        if (!call) {
            return StructureTree::leaf(resolve_(word));
        }
        if (word == "leaf") {
            expect('(');
            StructureTree t = StructureTree::leaf(resolve_(name()));
            expect(')');
            return t;
        }
        std::vector<double> params = bracket_numbers();
        std::vector<StructureTree> kids = child_list();
        if (word == "seq") {
            return StructureTree::sequence(std::move(kids));
        }
        if (word == "par") {
            return StructureTree::parallel(std::move(kids));
        }
        if (word == "sel") {
            return StructureTree::selection(std::move(kids), std::move(params));
        }
        if (word == "loop") {
            if (params.size() != 1) {
                fail("loop requires exactly one repeat probability, e.g. loop[0.25](...)");
            }
            return StructureTree::loop(std::move(kids), params.front());
        }
        fail("unknown substructure '" + std::string(word) + "'");
    }

    std::string_view text_;
    const std::function<VnfTypeId(std::string_view)>& resolve_;
    std::size_t pos_{0};
};

inline void write_number(std::ostringstream& oss, double v)
{
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    oss.write(buf, ptr - buf);
}

inline void write_expression(std::ostringstream& oss, const StructureTree& t,
                             const std::function<std::string(VnfTypeId)>& name_of)
{
    switch (t.kind()) {
    case StructureKind::leaf:
        oss << name_of(t.vnf());
        return;
    case StructureKind::sequence: oss << "seq"; break;
    case StructureKind::parallel: oss << "par"; break;
    case StructureKind::selection:
        oss << "sel[";
        for (std::size_t i = 0; i < t.weights().size(); ++i) {
            if (i > 0) {
                oss << ", ";
            }
            write_number(oss, t.weights()[i]);
        }
        oss << "]";
        break;
    case StructureKind::loop:
        oss << "loop[";
        write_number(oss, t.repeat_probability());
        oss << "]";
        break;
    }
    oss << "(";
    for (std::size_t i = 0; i < t.children().size(); ++i) {
        if (i > 0) {
            oss << ", ";
        }
        write_expression(oss, t.children()[i], name_of);
    }
    oss << ")";
}

} // namespace detail

/// Parses a structure expression and validates leaf uniqueness. \p resolve
/// maps leaf names to VNF types and throws ReferenceError for unknown names.
inline StructureTree parse_structure(std::string_view text,
                                     const std::function<VnfTypeId(std::string_view)>& resolve)
{
    return build_structure_tree(detail::StructureParser(text, resolve).parse());
}

/// Inverse of parse_structure(); weights are always written explicitly.
inline std::string to_expression(const StructureTree& tree, const std::function<std::string(VnfTypeId)>& name_of)
{
    std::ostringstream oss;
    detail::write_expression(oss, tree, name_of);
    return oss.str();
}

} // namespace fogmig

#endif // FOGMIG_STRUCTURE_HPP
