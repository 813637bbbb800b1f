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
 * \file fogmig/network.hpp
 *
 * \brief Fog node mobility and location-dependent link characteristics.
 *
 * The topology is the complete graph over cloud/fog nodes plus one access
 * link per (end-user, node) pair. Propagation delay grows linearly with the
 * Euclidean distance between the endpoints, normalized by the diagonal of the
 * deployment square; per-unit transfer delay is the reciprocal of the
 * bandwidth. Propagation delay is charged separately, once per completed
 * transfer and once per migration.
 */

#ifndef FOGMIG_NETWORK_HPP
#define FOGMIG_NETWORK_HPP

#include <fogmig/core.hpp>
#include <fogmig/model.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace fogmig {

namespace detail {

inline constexpr std::uint64_t splitmix64(std::uint64_t z)
{
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Uniform in [0, 1) from a counter triple.
inline double counter_uniform(std::uint64_t seed, std::uint64_t a, std::uint64_t b)
{
    const std::uint64_t h = splitmix64(splitmix64(splitmix64(seed) ^ a) ^ b);
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

} // namespace detail

/// Location of every fog node in every slot of [0, horizon].
///
/// Uniform mode is a pure function of (seed, node, slot): no state is kept
/// and replays are bit-exact. Waypoint mode holds the most recent waypoint
/// at or before the queried slot.
class MobilityTrace
{
public:
    MobilityTrace() = default;

    static MobilityTrace uniform(std::uint64_t seed, double area_side, Slot horizon)
    {
        MobilityTrace t;
        t.mode_ = MobilityMode::uniform;
        t.seed_ = seed;
        t.area_side_ = area_side;
        t.horizon_ = horizon;
        return t;
    }

    /// \p waypoints maps node index to (slot, point) pairs; each fog node needs
    /// a waypoint at slot 0.
    static MobilityTrace waypoints(std::map<NodeId, std::map<Slot, Point>> waypoints, double area_side, Slot horizon)
    {
        MobilityTrace t;
        t.mode_ = MobilityMode::trace;
        t.area_side_ = area_side;
        t.horizon_ = horizon;
        for (const auto& [node, track] : waypoints) {
            if (track.empty() || track.begin()->first != 0) {
                throw InvariantError("mobility trace: node " + std::to_string(node.value)
                                     + " has no waypoint at slot 0");
            }
            for (const auto& [slot, p] : track) {
                if (p.x < 0 || p.y < 0 || p.x > area_side || p.y > area_side) {
                    throw InvariantError("mobility trace: waypoint outside the deployment area");
                }
            }
        }
        t.waypoints_ = std::move(waypoints);
        return t;
    }

    MobilityMode mode() const { return mode_; }
    Slot horizon() const { return horizon_; }
    double area_side() const { return area_side_; }

    bool covers(NodeId node) const { return mode_ == MobilityMode::uniform || waypoints_.count(node) > 0; }

    Point at(NodeId node, Slot slot) const
    {
        if (slot < 0 || slot > horizon_) {
            throw DomainError("location_at: slot " + std::to_string(slot) + " outside [0, "
                              + std::to_string(horizon_) + "]");
        }
        if (mode_ == MobilityMode::uniform) {
            const auto s = static_cast<std::uint64_t>(slot);
            const std::uint64_t key = (static_cast<std::uint64_t>(node.value) << 40) ^ (s << 1);
            return {area_side_ * detail::counter_uniform(seed_, key, 0),
                    area_side_ * detail::counter_uniform(seed_, key, 1)};
        }
        auto it = waypoints_.find(node);
        if (it == waypoints_.end()) {
            throw DomainError("location_at: no trace for node " + std::to_string(node.value));
        }
        auto wp = it->second.upper_bound(slot);
        --wp;
        return wp->second;
    }

private:
    MobilityMode mode_{MobilityMode::uniform};
    std::uint64_t seed_{0};
    double area_side_{0};
    Slot horizon_{0};
    std::map<NodeId, std::map<Slot, Point>> waypoints_;
};

/// Writes one "node,slot,x,y" record per fog node and slot; x and y use the
/// shortest representation that reads back to the same double.
inline void write_mobility_trace(std::ostream& os, const Scenario& s, const MobilityTrace& trace)
{
    os << "node,slot,x,y\n";
    for (NodeId n : s.fog_nodes()) {
        for (Slot t = 0; t <= trace.horizon(); ++t) {
            const Point p = trace.at(n, t);
            os << s.node(n).id << ',' << t << ',' << detail::format_double(p.x) << ','
               << detail::format_double(p.y) << '\n';
        }
    }
}

inline MobilityTrace read_mobility_trace(std::istream& is, const Scenario& s, Slot horizon)
{
    std::string line;
    if (!std::getline(is, line) || line.rfind("node,slot,x,y", 0) != 0) {
        throw SchemaError("trace:1", "expected header 'node,slot,x,y'");
    }
    std::map<NodeId, std::map<Slot, Point>> wps;
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) {
            continue;
        }
        std::vector<std::string> cols;
        std::stringstream ss(line);
        std::string col;
        while (std::getline(ss, col, ',')) {
            cols.push_back(col);
        }
        const std::string where = "trace:" + std::to_string(lineno);
        if (cols.size() != 4) {
            throw SchemaError(where, "expected 4 columns");
        }
        auto node = s.find_node(cols[0]);
        if (!node) {
            throw ReferenceError(where + ": unknown node '" + cols[0] + "'");
        }
        if (!s.node(*node).is_fog()) {
            throw InvariantError(where + ": cloud node locations are static and cannot be traced");
        }
        Slot slot = 0;
        double x = 0;
        double y = 0;
        auto parse_num = [&](const std::string& c, auto& out) {
            auto [p, ec] = std::from_chars(c.data(), c.data() + c.size(), out);
            if (ec != std::errc{} || p != c.data() + c.size()) {
                throw SchemaError(where, "malformed number '" + c + "'");
            }
        };
        parse_num(cols[1], slot);
        parse_num(cols[2], x);
        parse_num(cols[3], y);
        wps[*node][slot] = {x, y};
    }
    for (NodeId n : s.fog_nodes()) {
        if (!wps.count(n)) {
            throw InvariantError("trace: no waypoints for fog node '" + s.node(n).id + "'");
        }
    }
    return MobilityTrace::waypoints(std::move(wps), s.sim.area_side, horizon);
}

/// Link characteristics over the complete cloud/fog graph and the user access
/// links, evaluated at the node locations of a slot. Holds a reference to the
/// scenario, which must outlive the model.
class NetworkModel
{
public:
    NetworkModel(const Scenario& scenario, MobilityTrace trace) : scenario_(&scenario), trace_(std::move(trace))
    {
        for (NodeId n : scenario.fog_nodes()) {
            if (!trace_.covers(n)) {
                throw InvariantError("mobility trace does not cover fog node '" + scenario.node(n).id + "'");
            }
        }
        diagonal_ = scenario.sim.area_side * std::sqrt(2.0);
        for (const auto& req : scenario.requests) {
            layouts_.push_back(make_layout(req));
        }
    }

    const Scenario& scenario() const { return *scenario_; }
    const MobilityTrace& trace() const { return trace_; }
    Slot horizon() const { return trace_.horizon(); }
    const RequestLayout& layout(RequestId r) const { return layouts_.at(r.index()); }

    Point location_at(NodeId node, Slot slot) const
    {
        const Node& n = checked(node);
        if (slot < 0 || slot > trace_.horizon()) {
            throw DomainError("location_at: slot " + std::to_string(slot) + " outside [0, "
                              + std::to_string(trace_.horizon()) + "]");
        }
        if (!n.is_fog()) {
            return *n.location;
        }
        return trace_.at(node, slot);
    }

    double propagation_delay(NodeId a, NodeId b, Slot slot) const
    {
        if (a == b) {
            checked(a);
            return 0.0;
        }
        return delay_for_distance(location_at(a, slot), location_at(b, slot));
    }

    double propagation_delay(UserId u, NodeId n, Slot slot) const
    {
        return delay_for_distance(checked(u).location, location_at(n, slot));
    }

    /// Node-node bandwidth by domain pair; infinite for a node and itself.
    double bandwidth(NodeId a, NodeId b, Slot /*slot*/) const
    {
        const Node& na = checked(a);
        const Node& nb = checked(b);
        if (a == b) {
            return std::numeric_limits<double>::infinity();
        }
        return scenario_->network.bandwidth(na.domain, nb.domain);
    }

    double bandwidth(UserId u, NodeId n, Slot /*slot*/) const
    {
        return checked(u).access_bandwidth(checked(n).domain);
    }

    /// Delay per KB between two hosts: 1/BW, or 0 when co-located. The
    /// amortized form spreads the propagation delay over the traffic a link
    /// carries in one slot: (1/BW) * (1 + PD/|T|).
    double per_unit_transfer_delay(NodeId a, NodeId b, Slot slot, bool amortized = false) const
    {
        if (a == b) {
            checked(a);
            return 0.0;
        }
        const double d = 1.0 / bandwidth(a, b, slot);
        if (!amortized) {
            return d;
        }
        return d * (1.0 + propagation_delay(a, b, slot) / scenario_->sim.slot_length);
    }

    double per_unit_transfer_delay(UserId u, NodeId n, Slot slot, bool amortized = false) const
    {
        const double d = 1.0 / bandwidth(u, n, slot);
        if (!amortized) {
            return d;
        }
        return d * (1.0 + propagation_delay(u, n, slot) / scenario_->sim.slot_length);
    }

private:
    const Node& checked(NodeId n) const
    {
        if (n.index() >= scenario_->nodes.size()) {
            throw DomainError("unknown node index " + std::to_string(n.value));
        }
        return scenario_->nodes[n.index()];
    }

    const EndUser& checked(UserId u) const
    {
        if (u.index() >= scenario_->users.size()) {
            throw DomainError("unknown user index " + std::to_string(u.value));
        }
        return scenario_->users[u.index()];
    }

    double delay_for_distance(Point p, Point q) const
    {
        const auto& net = scenario_->network;
        const double ratio = std::min(1.0, std::hypot(p.x - q.x, p.y - q.y) / diagonal_);
        return net.min_propagation_delay + (net.max_propagation_delay - net.min_propagation_delay) * ratio;
    }

    const Scenario* scenario_;
    MobilityTrace trace_;
    double diagonal_{1};
    std::vector<RequestLayout> layouts_;
};

} // namespace fogmig

#endif // FOGMIG_NETWORK_HPP
