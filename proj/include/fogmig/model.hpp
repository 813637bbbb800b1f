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
 * \file fogmig/model.hpp
 *
 * \brief Applications, VNF catalog, cloud/fog nodes, end-user devices and the
 *  scenario aggregating them.
 *
 * All quantities are in internal units (see units.hpp).
 */

#ifndef FOGMIG_MODEL_HPP
#define FOGMIG_MODEL_HPP

#include <fogmig/core.hpp>
#include <fogmig/structure.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace fogmig {

/// VNF catalog entry.
struct VnfType
{
    std::string id;
    double processing_capacity{0};  ///< c_{f^k}, KB/ms
    double max_utilization{1};      ///< mu_{f^k}
    double image_size{0};           ///< s_{f^k}, KB
    int resource_demand{1};         ///< VCPUs an instance occupies on its host

    friend bool operator==(const VnfType&, const VnfType&) = default;
};

enum class Domain
{
    cloud,
    fog
};

inline constexpr std::string_view to_string(Domain d)
{
    return d == Domain::cloud ? "cloud" : "fog";
}

struct Point
{
    double x{0};
    double y{0};

    friend bool operator==(const Point&, const Point&) = default;
};

struct Node
{
    std::string id;
    Domain domain{Domain::cloud};
    double capacity{0};                   ///< c_{n^z}, VCPUs
    double max_utilization{1};            ///< mu_{n^z}
    std::vector<double> processing_delay; ///< D^{f^k}_{n^z} by VNF type, ms/KB
    std::optional<Point> location;        ///< cloud nodes only

    bool is_fog() const { return domain == Domain::fog; }

    friend bool operator==(const Node&, const Node&) = default;
};

struct EndUser
{
    std::string id;
    Point location;
    double cloud_bandwidth{0};  ///< access bandwidth towards cloud hosts, KB/ms
    double fog_bandwidth{0};    ///< access bandwidth towards fog hosts, KB/ms
    double max_utilization{1};  ///< mu_{e_{u,n^z}}

    double access_bandwidth(Domain d) const { return d == Domain::cloud ? cloud_bandwidth : fog_bandwidth; }

    friend bool operator==(const EndUser&, const EndUser&) = default;
};

/// FG edge ip(f^k) -> f^k with traffic A^R_{ip(f^k),f^k}.
struct FgEdge
{
    VnfTypeId from;
    VnfTypeId to;
    double rate{0};

    friend bool operator==(const FgEdge&, const FgEdge&) = default;
};

/// End-user attachment (omega^R_{u x f^k}, A^R_{u x f^k}).
struct UserAttachment
{
    UserId user;
    VnfTypeId vnf;
    bool connected{true};
    double rate{0};

    friend bool operator==(const UserAttachment&, const UserAttachment&) = default;
};

struct Request
{
    std::string id;
    std::vector<VnfTypeId> vnfs;  ///< vnf_R, in declaration order
    std::vector<FgEdge> edges;
    StructureTree structure;
    std::vector<UserAttachment> users;

    bool contains(VnfTypeId v) const { return std::find(vnfs.begin(), vnfs.end(), v) != vnfs.end(); }

    /// Position of \p v in vnfs; throws DomainError if \p v is not in the request.
    std::size_t position(VnfTypeId v) const
    {
        auto it = std::find(vnfs.begin(), vnfs.end(), v);
        if (it == vnfs.end()) {
            throw DomainError("VNF " + std::to_string(v.value) + " is not part of request '" + id + "'");
        }
        return static_cast<std::size_t>(it - vnfs.begin());
    }

    friend bool operator==(const Request&, const Request&) = default;
};

/// A^R_{f}: traffic from predecessors plus traffic from end-users.
inline double incoming_traffic(const Request& request, VnfTypeId vnf)
{
    if (!request.contains(vnf)) {
        throw DomainError("incoming_traffic: VNF " + std::to_string(vnf.value) + " is not part of request '"
                          + request.id + "'");
    }
    double a = 0;
    for (const auto& e : request.edges) {
        if (e.to == vnf) {
            a += e.rate;
        }
    }
    for (const auto& u : request.users) {
        if (u.vnf == vnf) {
            a += u.rate;
        }
    }
    return a;
}

/// Positions and incoming traffic of one request, resolved once so the
/// per-slot loops avoid searching vnfs.
struct RequestLayout
{
    std::vector<double> incoming;                             ///< A^R_f by position
    std::vector<std::pair<std::size_t, std::size_t>> edges;   ///< (from, to) positions
    std::vector<std::size_t> users;                           ///< attachment positions
};

inline RequestLayout make_layout(const Request& request)
{
    RequestLayout out;
    for (VnfTypeId v : request.vnfs) {
        out.incoming.push_back(incoming_traffic(request, v));
    }
    for (const auto& e : request.edges) {
        out.edges.emplace_back(request.position(e.from), request.position(e.to));
    }
    for (const auto& u : request.users) {
        out.users.push_back(request.position(u.vnf));
    }
    return out;
}

/// Bandwidths by domain pair and propagation delay range.
struct NetworkParams
{
    double cloud_cloud_bandwidth{0};  ///< KB/ms
    double fog_fog_bandwidth{0};
    double cloud_fog_bandwidth{0};
    double user_cloud_bandwidth{0};   ///< default for EndUser::cloud_bandwidth
    double user_fog_bandwidth{0};     ///< default for EndUser::fog_bandwidth
    double min_propagation_delay{0};  ///< ms
    double max_propagation_delay{0};  ///< ms
    double link_max_utilization{1};   ///< mu_{e^J_{lm}} for node-node links

    double bandwidth(Domain a, Domain b) const
    {
        if (a == Domain::cloud && b == Domain::cloud) {
            return cloud_cloud_bandwidth;
        }
        if (a == Domain::fog && b == Domain::fog) {
            return fog_fog_bandwidth;
        }
        return cloud_fog_bandwidth;
    }

    friend bool operator==(const NetworkParams&, const NetworkParams&) = default;
};

enum class MobilityMode
{
    uniform,  ///< uniform random relocation of every fog node in every slot
    trace     ///< waypoints read from a trace file
};

struct SimParams
{
    double area_side{1000};          ///< side of the square deployment area
    double slot_length{0.05};        ///< |T|, ms
    std::optional<Slot> slots;       ///< tau_Max cap; derived when absent
    std::uint64_t seed{1};
    MobilityMode mobility{MobilityMode::uniform};
    std::string trace_path;          ///< used when mobility == trace
    std::optional<std::pair<int, int>> demand_range;  ///< redraw VNF VCPU demands per run
    double connection_rate{0};       ///< per-connection user traffic used by sweeps, KB/ms
    double p_move{1.0};              ///< random-migration move probability
    // Carried from the parameter table for completeness; no computation reads them.
    double it{0};
    double p{0};

    friend bool operator==(const SimParams&, const SimParams&) = default;
};

struct Scenario
{
    std::vector<VnfType> catalog;
    std::vector<Node> nodes;
    std::vector<EndUser> users;
    std::vector<Request> requests;
    NetworkParams network;
    SimParams sim;

    const VnfType& vnf(VnfTypeId id) const { return catalog.at(id.index()); }
    const Node& node(NodeId id) const { return nodes.at(id.index()); }
    const EndUser& user(UserId id) const { return users.at(id.index()); }
    const Request& request(RequestId id) const { return requests.at(id.index()); }

    std::optional<VnfTypeId> find_vnf(std::string_view name) const { return find_id<VnfTypeId>(catalog, name); }
    std::optional<NodeId> find_node(std::string_view name) const { return find_id<NodeId>(nodes, name); }
    std::optional<UserId> find_user(std::string_view name) const { return find_id<UserId>(users, name); }

    std::vector<NodeId> node_ids() const
    {
        std::vector<NodeId> out;
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            out.emplace_back(i);
        }
        return out;
    }

    std::vector<NodeId> fog_nodes() const
    {
        std::vector<NodeId> out;
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            if (nodes[i].is_fog()) {
                out.emplace_back(i);
            }
        }
        return out;
    }

    std::size_t total_request_vnfs() const
    {
        std::size_t n = 0;
        for (const auto& r : requests) {
            n += r.vnfs.size();
        }
        return n;
    }

    friend bool operator==(const Scenario&, const Scenario&) = default;

private:
    template <typename IdT, typename T>
    static std::optional<IdT> find_id(const std::vector<T>& items, std::string_view name)
    {
        for (std::size_t i = 0; i < items.size(); ++i) {
            if (items[i].id == name) {
                return IdT(i);
            }
        }
        return std::nullopt;
    }
};

/// IP(f^k): sources of the FG edges pointing at \p vnf.
inline std::set<VnfTypeId> immediate_predecessors(const Request& request, VnfTypeId vnf)
{
    if (!request.contains(vnf)) {
        throw DomainError("immediate_predecessors: VNF " + std::to_string(vnf.value) + " is not part of request '"
                          + request.id + "'");
    }
    std::set<VnfTypeId> out;
    for (const auto& e : request.edges) {
        if (e.to == vnf) {
            out.insert(e.from);
        }
    }
    return out;
}

/// Kahn's algorithm over the FG edges; empty optional when a cycle exists.
inline std::optional<std::vector<VnfTypeId>> topological_order(const Request& request)
{
    std::vector<std::size_t> indegree(request.vnfs.size(), 0);
    for (const auto& e : request.edges) {
        ++indegree[request.position(e.to)];
    }
    std::vector<VnfTypeId> ready;
    for (std::size_t i = 0; i < request.vnfs.size(); ++i) {
        if (indegree[i] == 0) {
            ready.push_back(request.vnfs[i]);
        }
    }
    std::vector<VnfTypeId> order;
    while (!ready.empty()) {
        VnfTypeId v = ready.back();
        ready.pop_back();
        order.push_back(v);
        for (const auto& e : request.edges) {
            if (e.from == v && --indegree[request.position(e.to)] == 0) {
                ready.push_back(e.to);
            }
        }
    }
    if (order.size() != request.vnfs.size()) {
        return std::nullopt;
    }
    return order;
}

/// Checks every cross-reference and invariant of the scenario; throws
/// InvariantError or ReferenceError naming the first breach.
inline void validate(const Scenario& s)
{
    auto breach = [](const std::string& where, const std::string& what) {
        throw InvariantError(where + ": " + what);
    };

    if (s.catalog.empty()) {
        breach("catalog", "at least one VNF type required");
    }
    std::set<std::string> names;
    for (const auto& v : s.catalog) {
        const std::string where = "catalog['" + v.id + "']";
        if (!names.insert(v.id).second) {
            breach(where, "duplicate VNF id");
        }
        if (!(v.processing_capacity > 0)) {
            breach(where, "processing_capacity c_fk > 0 required");
        }
        if (!(v.max_utilization > 0 && v.max_utilization <= 1)) {
            breach(where, "max_utilization must satisfy 0 < mu_fk <= 1");
        }
        if (!(v.image_size > 0)) {
            breach(where, "image_size s_fk > 0 required");
        }
        if (v.resource_demand < 1) {
            breach(where, "resource_demand >= 1 required");
        }
    }

    if (s.nodes.empty()) {
        breach("nodes", "at least one node required");
    }
    names.clear();
    for (const auto& n : s.nodes) {
        const std::string where = "nodes['" + n.id + "']";
        if (!names.insert(n.id).second) {
            breach(where, "duplicate node id");
        }
        if (!(n.capacity > 0)) {
            breach(where, "capacity > 0 required");
        }
        if (!(n.max_utilization > 0 && n.max_utilization <= 1)) {
            breach(where, "max_utilization must satisfy 0 < mu_nz <= 1");
        }
        if (n.processing_delay.size() != s.catalog.size()) {
            breach(where, "processing_delay must be defined for every VNF type");
        }
        for (double d : n.processing_delay) {
            if (!(d > 0)) {
                breach(where, "processing_delay must be > 0");
            }
        }
        if (n.is_fog() && n.location) {
            breach(where, "fog nodes have no static location (it comes from the mobility trace)");
        }
        if (!n.is_fog() && !n.location) {
            breach(where, "cloud nodes require a static location");
        }
        if (n.location) {
            if (n.location->x < 0 || n.location->y < 0 || n.location->x > s.sim.area_side
                || n.location->y > s.sim.area_side) {
                breach(where, "location outside the deployment area");
            }
        }
    }

    names.clear();
    for (const auto& u : s.users) {
        const std::string where = "users['" + u.id + "']";
        if (!names.insert(u.id).second) {
            breach(where, "duplicate user id");
        }
        if (u.location.x < 0 || u.location.y < 0 || u.location.x > s.sim.area_side
            || u.location.y > s.sim.area_side) {
            breach(where, "location outside the deployment area");
        }
        if (!(u.cloud_bandwidth > 0 && u.fog_bandwidth > 0)) {
            breach(where, "access bandwidths must be > 0");
        }
        if (!(u.max_utilization > 0 && u.max_utilization <= 1)) {
            breach(where, "max_utilization must satisfy 0 < mu <= 1");
        }
    }

    const auto& net = s.network;
    if (!(net.cloud_cloud_bandwidth > 0 && net.fog_fog_bandwidth > 0 && net.cloud_fog_bandwidth > 0)) {
        breach("network", "all bandwidths must be > 0");
    }
    if (!(net.min_propagation_delay > 0 && net.min_propagation_delay <= net.max_propagation_delay)) {
        breach("network", "propagation delay range must satisfy 0 < min <= max");
    }
    if (!(net.link_max_utilization > 0 && net.link_max_utilization <= 1)) {
        breach("network", "link_max_utilization must satisfy 0 < mu <= 1");
    }

    if (!(s.sim.slot_length > 0)) {
        breach("sim", "slot_length |T| > 0 required");
    }
    if (s.sim.slots && *s.sim.slots < 1) {
        breach("sim", "slots tau_Max >= 1 required");
    }
    if (!(s.sim.area_side > 0)) {
        breach("sim", "area side > 0 required");
    }
    if (s.sim.demand_range
        && (s.sim.demand_range->first < 1 || s.sim.demand_range->first > s.sim.demand_range->second)) {
        breach("sim", "demand range must satisfy 1 <= lo <= hi");
    }
    if (!(s.sim.p_move >= 0 && s.sim.p_move <= 1)) {
        breach("sim", "p_move must lie in [0, 1]");
    }

    names.clear();
    for (const auto& r : s.requests) {
        const std::string where = "requests['" + r.id + "']";
        if (!names.insert(r.id).second) {
            breach(where, "duplicate request id");
        }
        if (r.vnfs.empty()) {
            breach(where, "at least one VNF required");
        }
        std::set<VnfTypeId> members;
        for (VnfTypeId v : r.vnfs) {
            if (v.index() >= s.catalog.size()) {
                throw ReferenceError(where + ": VNF index " + std::to_string(v.value) + " not in catalog");
            }
            if (!members.insert(v).second) {
                breach(where, "VNF '" + s.catalog[v.index()].id + "' listed twice");
            }
        }
        std::vector<VnfTypeId> leaves = r.structure.leaves();
        std::set<VnfTypeId> leaf_set(leaves.begin(), leaves.end());
        if (leaf_set.size() != leaves.size()) {
            breach(where, "each VNF must appear in exactly one structure leaf");
        }
        if (leaf_set != members) {
            breach(where, "structure leaves must equal the request's VNF set");
        }
        std::set<std::pair<VnfTypeId, VnfTypeId>> edge_set;
        for (const auto& e : r.edges) {
            if (!members.count(e.from) || !members.count(e.to)) {
                throw ReferenceError(where + ": FG edge endpoint outside the request's VNF set");
            }
            if (e.from == e.to) {
                breach(where, "FG edge relation must be acyclic (self loop)");
            }
            if (!edge_set.insert({e.from, e.to}).second) {
                breach(where, "duplicate FG edge");
            }
            if (!(e.rate >= 0)) {
                breach(where, "FG edge rate must be >= 0");
            }
        }
        if (!topological_order(r)) {
            breach(where, "FG edge relation must be acyclic");
        }
        std::set<std::pair<UserId, VnfTypeId>> att_set;
        for (const auto& a : r.users) {
            if (a.user.index() >= s.users.size()) {
                throw ReferenceError(where + ": user index " + std::to_string(a.user.value) + " does not resolve");
            }
            if (!members.count(a.vnf)) {
                throw ReferenceError(where + ": user attachment to a VNF outside the request");
            }
            if (!att_set.insert({a.user, a.vnf}).second) {
                breach(where, "duplicate user attachment");
            }
            if (!(a.rate >= 0)) {
                breach(where, "user traffic rate must be >= 0");
            }
            if (!a.connected && a.rate != 0) {
                breach(where, "omega = 0 implies A_{u x f} = 0");
            }
        }
    }
}

} // namespace fogmig

#endif // FOGMIG_MODEL_HPP
