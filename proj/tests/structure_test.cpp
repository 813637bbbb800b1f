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


#include "support.hpp"

#include <fogmig/structure.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace fogmig;

namespace {

const VnfTypeId a(0u), b(1u), c(2u), d(3u);

std::map<VnfTypeId, double> values(std::initializer_list<double> xs)
{
    std::map<VnfTypeId, double> out;
    std::uint32_t i = 0;
    for (double x : xs) {
        out[VnfTypeId(i++)] = x;
    }
    return out;
}

} // namespace

TEST(Structure, SequenceAndParallel)
{
    const auto v = values({2, 3});
    EXPECT_EQ(aggregate_over_tree(StructureTree::sequence({StructureTree::leaf(a), StructureTree::leaf(b)}), v), 5);
    EXPECT_EQ(aggregate_over_tree(StructureTree::parallel({StructureTree::leaf(a), StructureTree::leaf(b)}), v), 3);
}

TEST(Structure, SelectionWeightsOutcomes)
{
    const auto v = values({2, 4});
    const auto t = StructureTree::selection({StructureTree::leaf(a), StructureTree::leaf(b)}, {0.5, 0.5});
    EXPECT_DOUBLE_EQ(aggregate_over_tree(t, v), 3);
    // Omitted weights mean equal probability.
    EXPECT_DOUBLE_EQ(aggregate_over_tree(StructureTree::selection({StructureTree::leaf(a), StructureTree::leaf(b)}), v),
                     3);
}

TEST(Structure, LoopScalesByOddsOfRepeating)
{
    const auto v = values({2, 3});
    const auto body = StructureTree::sequence({StructureTree::leaf(a), StructureTree::leaf(b)});
    EXPECT_DOUBLE_EQ(aggregate_over_tree(StructureTree::loop({body}, 0.25), v), 5.0 / 3.0);
    EXPECT_EQ(aggregate_over_tree(StructureTree::loop({body}, 0.0), v), 0.0);
}

TEST(Structure, MissingLeafValueThrows)
{
    const auto t = StructureTree::sequence({StructureTree::leaf(a), StructureTree::leaf(c)});
    EXPECT_THROW(aggregate_over_tree(t, values({1, 1})), DomainError);
}

TEST(Structure, InvariantsEnforced)
{
    EXPECT_THROW(StructureTree::sequence({}), InvariantError);
    EXPECT_THROW(StructureTree::loop({StructureTree::leaf(a)}, 1.0), InvariantError);
    EXPECT_THROW(StructureTree::loop({StructureTree::leaf(a)}, -0.1), InvariantError);
    EXPECT_THROW(StructureTree::selection({StructureTree::leaf(a), StructureTree::leaf(b)}, {0.5, 0.4}),
                 InvariantError);
    EXPECT_THROW(StructureTree::selection({StructureTree::leaf(a)}, {0.5, 0.5}), InvariantError);
    EXPECT_THROW(build_structure_tree(StructureTree::sequence({StructureTree::leaf(a), StructureTree::leaf(a)})),
                 InvariantError);
}

TEST(Structure, EarthquakeShape)
{
    // EW, DA, then warning distribution alternatives next to rescue and storage.
    auto resolve = [](std::string_view n) {
        static const std::map<std::string, std::uint32_t, std::less<>> ids{
            {"EW", 0}, {"DA", 1}, {"WAI", 2}, {"VD", 3}, {"VR", 4}, {"HS", 5}};
        return VnfTypeId(ids.find(n)->second);
    };
    const auto t = build_structure_tree(parse_structure("seq(EW, DA, par(sel(WAI, VD), seq(VR, HS)))", resolve));
    EXPECT_EQ(t.kind(), StructureKind::sequence);
    EXPECT_EQ(t.leaves().size(), 6u);
    EXPECT_EQ(t.size(), 10u);
    const auto& par = t.children()[2];
    ASSERT_EQ(par.kind(), StructureKind::parallel);
    EXPECT_EQ(par.children()[0].kind(), StructureKind::selection);
    EXPECT_EQ(par.children()[1].leaves(), (std::vector<VnfTypeId>{VnfTypeId(4u), VnfTypeId(5u)}));
}

TEST(Structure, ExpressionRoundTrip)
{
    auto resolve = [](std::string_view n) { return VnfTypeId(static_cast<std::uint32_t>(n[1] - '0')); };
    auto name = [](VnfTypeId v) { return "v" + std::to_string(v.value); };
    const std::string text = "seq(v0, par(v1, v2), loop[0.25](seq(v3, v4)), sel[0.3,0.7](v5, v6))";
    const auto t = parse_structure(text, resolve);
    EXPECT_EQ(parse_structure(to_expression(t, name), resolve), t);
}

TEST(Structure, ParserRejectsMalformed)
{
    auto resolve = [](std::string_view) { return VnfTypeId(0u); };
    EXPECT_ANY_THROW(parse_structure("seq(a, b", resolve));
    EXPECT_ANY_THROW(parse_structure("seq()", resolve));
    EXPECT_ANY_THROW(parse_structure("loop[1.5](a)", resolve));
}

TEST(StructureProperty, AggregationAlgebraOnRandomTrees)
{
    std::mt19937_64 rng(20261014);
    std::size_t failures = 0;
    for (int i = 0; i < 1000; ++i) {
        std::uint32_t next = 0;
        const auto tree = fixtures::random_tree(rng, next);
        std::map<VnfTypeId, double> v;
        for (VnfTypeId leaf : tree.leaves()) {
            v[leaf] = std::uniform_real_distribution<double>(0, 50)(rng);
        }
        failures += fixtures::aggregation_failures(tree, v);
    }
    EXPECT_EQ(failures, 0u);
}
