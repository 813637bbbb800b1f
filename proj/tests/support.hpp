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


// Small scenario builders shared by the unit tests and the acceptance binary.

#ifndef FOGMIG_TESTS_SUPPORT_HPP
#define FOGMIG_TESTS_SUPPORT_HPP

#include <fogmig/harness.hpp>

#include <filesystem>
#include <random>
#include <string>
#include <vector>

namespace fogmig::fixtures {

#ifdef FOGMIG_SCENARIO_DIR
inline std::filesystem::path scenario_path(const std::string& name)
{
    return std::filesystem::path(FOGMIG_SCENARIO_DIR) / (name + ".scenario");
}
#endif

/// Empty scenario with round-number network parameters.
inline Scenario base_scenario()
{
    Scenario s;
    s.network.cloud_cloud_bandwidth = 8;
    s.network.fog_fog_bandwidth = 2;
    s.network.cloud_fog_bandwidth = 4;
    s.network.user_cloud_bandwidth = 4;
    s.network.user_fog_bandwidth = 2;
    s.network.min_propagation_delay = 0.25;
    s.network.max_propagation_delay = 0.75;
    s.network.link_max_utilization = 1;
    s.sim.area_side = 100;
    s.sim.slot_length = 0.5;
    s.sim.connection_rate = 0.5;
    return s;
}

inline VnfTypeId add_vnf(Scenario& s, const std::string& id, double capacity = 100, double image = 4,
                         int demand = 1, double mu = 1)
{
    s.catalog.push_back({id, capacity, mu, image, demand});
    for (auto& n : s.nodes) {
        n.processing_delay.push_back(n.processing_delay.empty() ? 1.0 : n.processing_delay.back());
    }
    return VnfTypeId(s.catalog.size() - 1);
}

/// Adds a node with the same processing delay for every VNF type. Cloud
/// nodes get \p location (or the origin), fog nodes none.
inline NodeId add_node(Scenario& s, const std::string& id, Domain domain, double capacity, double delay,
                       std::optional<Point> location = {}, double mu = 1)
{
    Node n;
    n.id = id;
    n.domain = domain;
    n.capacity = capacity;
    n.max_utilization = mu;
    n.processing_delay.assign(s.catalog.size(), delay);
    if (domain == Domain::cloud) {
        n.location = location.value_or(Point{0, 0});
    }
    s.nodes.push_back(std::move(n));
    return NodeId(s.nodes.size() - 1);
}

inline UserId add_user(Scenario& s, const std::string& id, Point location, double mu = 1)
{
    s.users.push_back({id, location, s.network.user_cloud_bandwidth, s.network.user_fog_bandwidth, mu});
    return UserId(s.users.size() - 1);
}

/// Chain request v0 -> v1 -> ... with a sequence structure.
inline RequestId add_chain(Scenario& s, const std::string& id, const std::vector<VnfTypeId>& vnfs,
                           double edge_rate)
{
    Request r;
    r.id = id;
    r.vnfs = vnfs;
    std::vector<StructureTree> leaves;
    for (std::size_t i = 0; i < vnfs.size(); ++i) {
        leaves.push_back(StructureTree::leaf(vnfs[i]));
        if (i > 0) {
            r.edges.push_back({vnfs[i - 1], vnfs[i], edge_rate});
        }
    }
    r.structure = vnfs.size() == 1 ? leaves.front() : StructureTree::sequence(std::move(leaves));
    s.requests.push_back(std::move(r));
    return RequestId(s.requests.size() - 1);
}

/// Fog nodes held at fixed points for the whole horizon.
inline MobilityTrace static_trace(const Scenario& s, const std::vector<Point>& fog_points, Slot horizon)
{
    std::map<NodeId, std::map<Slot, Point>> wps;
    std::size_t k = 0;
    for (NodeId n : s.fog_nodes()) {
        wps[n][0] = fog_points.at(k++);
    }
    return MobilityTrace::waypoints(std::move(wps), s.sim.area_side, horizon);
}

/// Slice with every position of every request on a fresh instance at the
/// given host.
inline Slice place_all(const Scenario& s, const std::vector<std::vector<NodeId>>& hosts)
{
    Slice slice(s);
    for (std::size_t r = 0; r < s.requests.size(); ++r) {
        for (std::size_t pos = 0; pos < s.requests[r].vnfs.size(); ++pos) {
            const NodeId n = hosts.at(r).at(pos);
            const InstanceIndex i = slice.deploy(s.requests[r].vnfs[pos], n);
            slice.assign(RequestId(r), pos, {i, n});
        }
    }
    return slice;
}

/// Random tiny instance for planner fuzzing: one cloud node, 1-3 fog nodes,
/// 1-2 users, 1-2 requests of 1-4 VNFs each with random structure-free
/// chains and user flows. Capacities are drawn tight enough that some
/// candidates are filtered out.
inline Scenario tiny_instance(std::mt19937_64& rng)
{
    auto uni = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    auto real = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
    Scenario s = base_scenario();
    s.sim.slot_length = 0.05;
    s.network.fog_fog_bandwidth = real(0.5, 3);
    s.network.user_fog_bandwidth = real(0.5, 3);
    const int requests = uni(1, 2);
    std::vector<std::vector<VnfTypeId>> chains;
    int vnf_count = 0;
    for (int r = 0; r < requests; ++r) {
        std::vector<VnfTypeId> chain;
        const int n = uni(1, 4);
        for (int k = 0; k < n; ++k) {
            chain.push_back(add_vnf(s, "f" + std::to_string(vnf_count++), real(0.5, 4), real(0.5, 4), uni(1, 2)));
        }
        chains.push_back(chain);
    }
    add_node(s, "cloud", Domain::cloud, 16, real(2, 6), Point{real(0, 100), real(0, 100)});
    const int fogs = uni(1, 3);
    for (int k = 0; k < fogs; ++k) {
        add_node(s, "fog" + std::to_string(k), Domain::fog, uni(2, 4), real(0.05, 1));
    }
    const int users = uni(1, 2);
    for (int k = 0; k < users; ++k) {
        add_user(s, "u" + std::to_string(k), {real(0, 100), real(0, 100)}, real(0.3, 1));
    }
    for (int r = 0; r < requests; ++r) {
        const RequestId rid = add_chain(s, "r" + std::to_string(r), chains[r], real(0.05, 0.6));
        Request& req = s.requests[rid.index()];
        for (auto& e : req.edges) {
            e.rate = real(0.05, 0.6);
        }
        for (int k = 0; k < users; ++k) {
            std::vector<VnfTypeId> ends{req.vnfs.front()};
            if (req.vnfs.size() > 1) {
                ends.push_back(req.vnfs.back());
            }
            for (VnfTypeId v : ends) {
                if (uni(0, 3) > 0) {
                    const bool on = uni(0, 4) > 0;
                    req.users.push_back({UserId(k), v, on, on ? real(0.05, 0.6) : 0.0});
                }
            }
        }
    }
    validate(s);
    return s;
}

/// Random structure tree over fresh VNF ids starting at \p next_id.
inline StructureTree random_tree(std::mt19937_64& rng, std::uint32_t& next_id, int depth = 0)
{
    auto uni = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    if (depth >= 3 || uni(0, 9) < 3 + depth * 2) {
        return StructureTree::leaf(VnfTypeId(next_id++));
    }
    std::vector<StructureTree> children;
    const int n = uni(1, 4);
    for (int i = 0; i < n; ++i) {
        children.push_back(random_tree(rng, next_id, depth + 1));
    }
    switch (uni(0, 3)) {
    case 0: return StructureTree::sequence(std::move(children));
    case 1: return StructureTree::parallel(std::move(children));
    case 2: {
        std::vector<double> w(children.size());
        double sum = 0;
        for (auto& x : w) {
            x = std::uniform_real_distribution<double>(0.05, 1)(rng);
            sum += x;
        }
        for (auto& x : w) {
            x /= sum;
        }
        return StructureTree::selection(std::move(children), std::move(w));
    }
    default: return StructureTree::loop(std::move(children), std::uniform_real_distribution<double>(0, 0.9)(rng));
    }
}

/// Checks the aggregation rules at every internal node of \p tree and
/// returns the number of nodes breaking one. Sums and maxima must hold
/// exactly; selection bounds and loop scaling allow 1e-9 relative slack.
inline std::size_t aggregation_failures(const StructureTree& tree, const std::map<VnfTypeId, double>& values)
{
    if (tree.is_leaf()) {
        return 0;
    }
    std::size_t failures = 0;
    std::vector<double> child;
    for (const auto& c : tree.children()) {
        failures += aggregation_failures(c, values);
        child.push_back(aggregate_over_tree(c, values));
    }
    const double v = aggregate_over_tree(tree, values);
    const double lo = *std::min_element(child.begin(), child.end());
    const double hi = *std::max_element(child.begin(), child.end());
    double sum = 0;
    for (double c : child) {
        sum += c;
    }
    auto near = [](double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(b)); };
    bool ok = true;
    switch (tree.kind()) {
    case StructureKind::sequence: ok = v == sum; break;
    case StructureKind::parallel:
        ok = v == hi && std::all_of(child.begin(), child.end(), [&](double c) { return v >= c; });
        break;
    case StructureKind::selection: ok = v >= lo - 1e-9 * std::max(1.0, lo) && v <= hi + 1e-9 * std::max(1.0, hi); break;
    case StructureKind::loop: {
        const double q = tree.repeat_probability();
        ok = near(v, q / (1 - q) * sum);
        // Linear in q/(1-q): another q rescales the result by the ratio.
        const double q2 = q / 2 + 0.3;
        const auto other = StructureTree::loop(tree.children(), q2);
        ok = ok && near(aggregate_over_tree(other, values) * (q / (1 - q)), v * (q2 / (1 - q2)));
        break;
    }
    case StructureKind::leaf: break;
    }
    return failures + (ok ? 0 : 1);
}

/// Outcome of running acm and the exhaustive step side by side.
struct EquivalenceTally
{
    int instances{0};
    std::size_t steps{0};
    std::size_t decisions{0};
    std::size_t moves{0};
    std::size_t mismatches{0};
};

/// Compares acm_step with exhaustive_step at every slot of \p instances
/// random tiny instances. Draws without a feasible initial placement are
/// replaced.
inline EquivalenceTally fuzz_acm_against_oracle(std::uint64_t seed, int instances, Slot slot_cap = 120)
{
    std::mt19937_64 rng(seed);
    EquivalenceTally out;
    while (out.instances < instances) {
        const Scenario s = tiny_instance(rng);
        OracleComparison cmp;
        try {
            cmp = compare_with_oracle(s, rng(), slot_cap);
        } catch (const PlacementError&) {
            continue;
        }
        ++out.instances;
        out.steps += cmp.steps;
        out.decisions += cmp.decisions;
        out.mismatches += cmp.mismatches;
        out.moves += cmp.moves;
    }
    return out;
}

/// A chain request on static nodes with a hand-made schedule of a few slots.
/// All rates, delays and bandwidths are small dyadic rationals, so every
/// per-slot increment is exact.
struct ChainCase
{
    Scenario s;
    std::vector<Point> fog_points;
    std::vector<std::vector<std::optional<NodeId>>> hosts;  ///< [slot][position]

    Slot slots() const { return static_cast<Slot>(hosts.size()); }
    MobilityTrace trace() const { return static_trace(s, fog_points, slots()); }

    Schedule schedule() const
    {
        Schedule out;
        for (const auto& row : hosts) {
            Slice slice(s);
            for (std::size_t pos = 0; pos < row.size(); ++pos) {
                if (row[pos]) {
                    slice.deploy(s.requests[0].vnfs[pos], 0, *row[pos]);
                    slice.assign(RequestId(0u), pos, {0, *row[pos]});
                }
            }
            if (out.empty()) {
                out = Schedule(std::move(slice));
            } else {
                out.push(std::move(slice));
            }
        }
        return out;
    }
};

inline ChainCase random_chain_case(std::mt19937_64& rng)
{
    auto uni = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    auto dyadic = [&](int lo, int hi) { return std::ldexp(1.0, uni(lo, hi)); };
    ChainCase c;
    Scenario& s = c.s;
    s = base_scenario();
    s.sim.slot_length = dyadic(-2, 0);
    s.network.cloud_cloud_bandwidth = dyadic(-1, 3);
    s.network.fog_fog_bandwidth = dyadic(-2, 2);
    s.network.cloud_fog_bandwidth = dyadic(-2, 2);
    s.network.user_cloud_bandwidth = dyadic(-2, 2);
    s.network.user_fog_bandwidth = dyadic(-2, 2);
    const int n_vnfs = uni(1, 5);
    std::vector<VnfTypeId> chain;
    for (int k = 0; k < n_vnfs; ++k) {
        chain.push_back(add_vnf(s, "v" + std::to_string(k), 100, dyadic(0, 4)));
    }
    const int n_nodes = uni(1, 4);
    for (int k = 0; k < n_nodes; ++k) {
        const bool fog = uni(0, 1) == 1;
        const NodeId n = add_node(s, "n" + std::to_string(k), fog ? Domain::fog : Domain::cloud, 16, 1,
                                  Point{static_cast<double>(uni(0, 100)), static_cast<double>(uni(0, 100))});
        for (auto& d : s.nodes[n.index()].processing_delay) {
            d = dyadic(-3, 1);
        }
        if (fog) {
            c.fog_points.push_back({static_cast<double>(uni(0, 100)), static_cast<double>(uni(0, 100))});
        }
    }
    const int n_users = uni(0, 2);
    for (int k = 0; k < n_users; ++k) {
        add_user(s, "u" + std::to_string(k), {static_cast<double>(uni(0, 100)), static_cast<double>(uni(0, 100))});
    }
    add_chain(s, "chain", chain, 0);
    Request& req = s.requests[0];
    for (auto& e : req.edges) {
        e.rate = 0.25 * uni(0, 8);
    }
    for (int u = 0; u < n_users; ++u) {
        for (VnfTypeId v : chain) {
            if (uni(0, 2) == 0) {
                const bool on = uni(0, 3) > 0;
                req.users.push_back({UserId(u), v, on, on ? 0.25 * uni(0, 8) : 0.0});
            }
        }
    }
    validate(s);

    const int slots = uni(1, 10);
    std::vector<std::optional<NodeId>> row(chain.size());
    for (auto& h : row) {
        h = NodeId(static_cast<std::size_t>(uni(0, n_nodes - 1)));
    }
    for (int t = 0; t < slots; ++t) {
        if (t > 0) {
            for (auto& h : row) {
                const int roll = uni(0, 9);
                if (roll == 0) {
                    h.reset();
                } else if (roll <= 3) {
                    h = NodeId(static_cast<std::size_t>(uni(0, n_nodes - 1)));
                }
            }
        }
        c.hosts.push_back(row);
    }
    return c;
}

/// Makespan of a chain case, accumulated slot by slot straight from the
/// case description.
struct BruteForceMakespan
{
    bool complete{true};
    double processing{0};
    double communication{0};
    double migration{0};
    double total{0};
};

inline BruteForceMakespan brute_force_makespan(const ChainCase& c)
{
    const Scenario& s = c.s;
    const Request& req = s.requests[0];
    const std::size_t n = req.vnfs.size();
    const double len = s.sim.slot_length;

    std::vector<Point> where(s.nodes.size());
    for (std::size_t i = 0, f = 0; i < s.nodes.size(); ++i) {
        where[i] = s.nodes[i].is_fog() ? c.fog_points[f++] : *s.nodes[i].location;
    }
    auto pd_between = [&](Point a, Point b) {
        const double ratio = std::min(1.0, std::hypot(a.x - b.x, a.y - b.y) / (s.sim.area_side * std::sqrt(2.0)));
        return s.network.min_propagation_delay
               + (s.network.max_propagation_delay - s.network.min_propagation_delay) * ratio;
    };
    auto link_bw = [&](NodeId a, NodeId b) {
        return s.network.bandwidth(s.nodes[a.index()].domain, s.nodes[b.index()].domain);
    };

    // Thresholds: FG edges in, plus every user flow in.
    std::vector<double> need(n, 0.0);
    for (std::size_t e = 0; e < req.edges.size(); ++e) {
        need[e + 1] += req.edges[e].rate;
    }
    for (const auto& u : req.users) {
        need[static_cast<std::size_t>(std::find(req.vnfs.begin(), req.vnfs.end(), u.vnf) - req.vnfs.begin())] += u.rate;
    }

    std::vector<double> done_proc(n, 0.0), done_edge(req.edges.size(), 0.0), done_user(req.users.size(), 0.0);
    std::vector<std::optional<Slot>> tp(n), te(req.edges.size()), tu(req.users.size());
    std::vector<double> pe(req.edges.size(), 0.0), pu(req.users.size(), 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        if (need[k] <= 0) {
            tp[k] = 0;
        }
    }
    for (std::size_t e = 0; e < req.edges.size(); ++e) {
        if (req.edges[e].rate <= 0) {
            te[e] = 0;
        }
    }
    for (std::size_t k = 0; k < req.users.size(); ++k) {
        if (req.users[k].rate <= 0) {
            tu[k] = 0;
        }
    }

    for (Slot t = 0; t < c.slots(); ++t) {
        const auto& row = c.hosts[static_cast<std::size_t>(t)];
        for (std::size_t k = 0; k < n; ++k) {
            if (tp[k] || !row[k]) {
                continue;
            }
            done_proc[k] += len / s.nodes[row[k]->index()].processing_delay[req.vnfs[k].index()];
            if (done_proc[k] >= need[k]) {
                tp[k] = t;
            }
        }
        for (std::size_t e = 0; e < req.edges.size(); ++e) {
            const auto& a = row[e];
            const auto& b = row[e + 1];
            if (te[e] || !a || !b) {
                continue;
            }
            if (*a == *b) {
                te[e] = t;
                continue;
            }
            done_edge[e] += len * link_bw(*a, *b);
            if (done_edge[e] >= req.edges[e].rate) {
                te[e] = t;
                pe[e] = pd_between(where[a->index()], where[b->index()]);
            }
        }
        for (std::size_t k = 0; k < req.users.size(); ++k) {
            const auto& att = req.users[k];
            const std::size_t pos =
                static_cast<std::size_t>(std::find(req.vnfs.begin(), req.vnfs.end(), att.vnf) - req.vnfs.begin());
            const auto& h = row[pos];
            if (tu[k] || !h) {
                continue;
            }
            const EndUser& eu = s.users[att.user.index()];
            done_user[k] += len * (s.nodes[h->index()].is_fog() ? eu.fog_bandwidth : eu.cloud_bandwidth);
            if (done_user[k] >= att.rate) {
                tu[k] = t;
                pu[k] = pd_between(eu.location, where[h->index()]);
            }
        }
    }

    BruteForceMakespan out;
    for (std::size_t k = 0; k < n; ++k) {
        if (!tp[k]) {
            out.complete = false;
            return out;
        }
        double com = 0;
        if (k > 0) {
            if (!te[k - 1]) {
                out.complete = false;
                return out;
            }
            com = std::max(com, static_cast<double>(*te[k - 1]) * len + pe[k - 1]);
        }
        for (std::size_t u = 0; u < req.users.size(); ++u) {
            if (req.users[u].vnf != req.vnfs[k] || !req.users[u].connected) {
                continue;
            }
            if (!tu[u]) {
                out.complete = false;
                return out;
            }
            com = std::max(com, static_cast<double>(*tu[u]) * len + pu[u]);
        }
        double mig = 0;
        for (Slot t = 1; t < c.slots(); ++t) {
            const auto& a = c.hosts[static_cast<std::size_t>(t - 1)][k];
            const auto& b = c.hosts[static_cast<std::size_t>(t)][k];
            if (a && b && *a != *b) {
                mig += pd_between(where[a->index()], where[b->index()])
                       + s.catalog[req.vnfs[k].index()].image_size / link_bw(*a, *b);
            }
        }
        out.processing += static_cast<double>(*tp[k]) * len;
        out.communication += com;
        out.migration += mig;
    }
    // Unfinished user flows into a VNF still count against completion.
    for (std::size_t u = 0; u < req.users.size(); ++u) {
        if (!tu[u]) {
            out.complete = false;
            return out;
        }
    }
    out.total = out.processing + out.communication + out.migration;
    return out;
}

} // namespace fogmig::fixtures

#endif // FOGMIG_TESTS_SUPPORT_HPP
