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
 * \file fogmig/feasibility.hpp
 *
 * \brief Per-slot capacity and consistency constraints.
 *
 * Five checks, each returning the violations it finds rather than throwing:
 *
 *  - node capacity: VCPUs of the instances deployed on a node
 *  - chain link: FG-edge traffic crossing a node-node link
 *  - access link: connected user traffic on a (user, node) link
 *  - VNF capacity: incoming traffic of the requests sharing an instance
 *  - deployment: every assignment refers to a deployed instance
 *
 * All limits are inclusive. LoadLedger answers the same questions for a
 * single hypothetical move, which is what the planners need.
 */

#ifndef FOGMIG_FEASIBILITY_HPP
#define FOGMIG_FEASIBILITY_HPP

#include <fogmig/core.hpp>
#include <fogmig/makespan.hpp>
#include <fogmig/model.hpp>
#include <fogmig/network.hpp>
#include <fogmig/schedule.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace fogmig {

enum class Constraint
{
    node_capacity,
    chain_link,
    access_link,
    vnf_capacity,
    deployment
};

inline constexpr std::string_view to_string(Constraint c)
{
    switch (c) {
    case Constraint::node_capacity: return "node-capacity";
    case Constraint::chain_link: return "chain-link";
    case Constraint::access_link: return "access-link";
    case Constraint::vnf_capacity: return "vnf-capacity";
    case Constraint::deployment: return "deployment";
    }
    return "";
}

struct Violation
{
    Slot slot{0};
    Constraint constraint{Constraint::node_capacity};
    std::string entities;
    double load{0};
    double limit{0};

    friend bool operator==(const Violation&, const Violation&) = default;
};

struct FeasibilityReport
{
    std::vector<Violation> violations;

    bool feasible() const { return violations.empty(); }
    explicit operator bool() const { return feasible(); }
};

/// Relative slack on every inclusive limit, absorbing rounding in sums of
/// decimal rates.
inline constexpr double feasibility_tolerance = 1e-9;

inline bool within(double load, double limit)
{
    return load <= limit + feasibility_tolerance * std::max(1.0, std::abs(limit));
}

namespace detail {

/// Traffic assigned to one instance.
struct InstanceLoad
{
    VnfTypeId vnf;
    InstanceIndex instance{0};
    double traffic{0};
};

/// Offered loads of one slice.
struct SliceLoads
{
    std::vector<double> node_vcpu;          ///< by node
    std::vector<InstanceLoad> instances;    ///< few entries; searched linearly
    std::vector<double> link;               ///< node x node, lower index first
    std::vector<double> access;             ///< user x node
    std::size_t nodes{0};

    double& link_at(NodeId a, NodeId b)
    {
        if (b < a) {
            std::swap(a, b);
        }
        return link[a.index() * nodes + b.index()];
    }
    double link_at(NodeId a, NodeId b) const { return const_cast<SliceLoads*>(this)->link_at(a, b); }
    double& access_at(UserId u, NodeId n) { return access[u.index() * nodes + n.index()]; }
    double access_at(UserId u, NodeId n) const { return access[u.index() * nodes + n.index()]; }

    double instance_traffic(VnfTypeId vnf, InstanceIndex i) const
    {
        for (const auto& l : instances) {
            if (l.vnf == vnf && l.instance == i) {
                return l.traffic;
            }
        }
        return 0.0;
    }

    SliceLoads(const NetworkModel& net, const Slice& slice)
    : node_vcpu(net.scenario().nodes.size(), 0.0),
      link(net.scenario().nodes.size() * net.scenario().nodes.size(), 0.0),
      access(net.scenario().users.size() * net.scenario().nodes.size(), 0.0),
      nodes(net.scenario().nodes.size())
    {
        const Scenario& s = net.scenario();
        instances.reserve(slice.deployments().size());
        for (const auto& d : slice.deployments()) {
            node_vcpu[d.node.index()] += s.vnf(d.vnf).resource_demand;
        }
        for (std::size_t r = 0; r < s.requests.size(); ++r) {
            const Request& req = s.requests[r];
            const RequestLayout& lay = net.layout(RequestId(r));
            const RequestId rid(r);
            for (std::size_t pos = 0; pos < req.vnfs.size(); ++pos) {
                const auto& a = slice.assignment(rid, pos);
                if (!a) {
                    continue;
                }
                auto it = std::find_if(instances.begin(), instances.end(), [&](const InstanceLoad& l) {
                    return l.vnf == req.vnfs[pos] && l.instance == a->instance;
                });
                if (it == instances.end()) {
                    instances.push_back({req.vnfs[pos], a->instance, lay.incoming[pos]});
                } else {
                    it->traffic += lay.incoming[pos];
                }
            }
            for (std::size_t e = 0; e < req.edges.size(); ++e) {
                auto ha = slice.host(rid, lay.edges[e].first);
                auto hb = slice.host(rid, lay.edges[e].second);
                if (ha && hb && *ha != *hb) {
                    link_at(*ha, *hb) += req.edges[e].rate;
                }
            }
            for (std::size_t k = 0; k < req.users.size(); ++k) {
                const auto& u = req.users[k];
                auto h = slice.host(rid, lay.users[k]);
                if (h && u.connected) {
                    access_at(u.user, *h) += u.rate;
                }
            }
        }
    }
};

inline std::string request_list(const NetworkModel& net, const Slice& slice, NodeId a, NodeId b)
{
    const Scenario& s = net.scenario();
    std::string out;
    for (std::size_t r = 0; r < s.requests.size(); ++r) {
        for (auto [from, to] : net.layout(RequestId(r)).edges) {
            auto ha = slice.host(RequestId(r), from);
            auto hb = slice.host(RequestId(r), to);
            if (ha && hb && ((*ha == a && *hb == b) || (*ha == b && *hb == a))) {
                out += out.empty() ? s.requests[r].id : "," + s.requests[r].id;
                break;
            }
        }
    }
    return out;
}

} // namespace detail

/// Sum of deployed VCPU demands per node against mu_n * c_n.
inline std::vector<Violation> check_node_capacity(const Slice& slice, const Scenario& s, Slot t)
{
    std::vector<Violation> out;
    std::vector<double> load(s.nodes.size(), 0.0);
    for (const auto& d : slice.deployments()) {
        load.at(d.node.index()) += s.vnf(d.vnf).resource_demand;
    }
    for (std::size_t n = 0; n < s.nodes.size(); ++n) {
        const double limit = s.nodes[n].max_utilization * s.nodes[n].capacity;
        if (!within(load[n], limit)) {
            out.push_back({t, Constraint::node_capacity, "node=" + s.nodes[n].id, load[n], limit});
        }
    }
    return out;
}

/// FG-edge traffic per node-node link against mu_e * BW_e.
inline std::vector<Violation> check_chain_link_utilization(const Slice& slice, const NetworkModel& net, Slot t)
{
    const Scenario& s = net.scenario();
    const detail::SliceLoads loads(net, slice);
    std::vector<Violation> out;
    for (std::size_t i = 0; i < s.nodes.size(); ++i) {
        for (std::size_t j = i + 1; j < s.nodes.size(); ++j) {
            const NodeId a(i), b(j);
            const double l = loads.link_at(a, b);
            if (l <= 0) {
                continue;
            }
            const double limit = s.network.link_max_utilization * net.bandwidth(a, b, t);
            if (!within(l, limit)) {
                out.push_back({t, Constraint::chain_link,
                               "link=" + s.node(a).id + "|" + s.node(b).id
                                   + " requests=" + detail::request_list(net, slice, a, b),
                               l, limit});
            }
        }
    }
    return out;
}

/// Connected user traffic per (user, node) link against mu_u * BW_u.
inline std::vector<Violation> check_access_link_utilization(const Slice& slice, const NetworkModel& net, Slot t)
{
    const Scenario& s = net.scenario();
    const detail::SliceLoads loads(net, slice);
    std::vector<Violation> out;
    for (std::size_t u = 0; u < s.users.size(); ++u) {
        for (std::size_t n = 0; n < s.nodes.size(); ++n) {
            const UserId user(u);
            const NodeId node(n);
            const double l = loads.access_at(user, node);
            if (l <= 0) {
                continue;
            }
            const double limit = s.users[u].max_utilization * net.bandwidth(user, node, t);
            if (!within(l, limit)) {
                out.push_back({t, Constraint::access_link, "user=" + s.users[u].id + " node=" + s.nodes[n].id, l,
                               limit});
            }
        }
    }
    return out;
}

/// Incoming traffic of all requests assigned to an instance against mu_f * c_f.
inline std::vector<Violation> check_vnf_capacity(const Slice& slice, const Scenario& s, Slot t)
{
    std::vector<Violation> out;
    std::map<std::pair<VnfTypeId, InstanceIndex>, double> load;
    for (std::size_t r = 0; r < s.requests.size(); ++r) {
        const Request& req = s.requests[r];
        for (std::size_t pos = 0; pos < req.vnfs.size(); ++pos) {
            const auto& a = slice.assignment(RequestId(r), pos);
            if (a) {
                load[{req.vnfs[pos], a->instance}] += incoming_traffic(req, req.vnfs[pos]);
            }
        }
    }
    for (const auto& [inst, l] : load) {
        const VnfType& f = s.vnf(inst.first);
        const double limit = f.max_utilization * f.processing_capacity;
        if (!within(l, limit)) {
            out.push_back({t, Constraint::vnf_capacity,
                           "vnf=" + f.id + " instance=" + std::to_string(inst.second), l, limit});
        }
    }
    return out;
}

/// Every assignment names an instance deployed on the assigned node.
inline std::vector<Violation> check_assignment_deployed(const Slice& slice, const Scenario& s, Slot t)
{
    std::vector<Violation> out;
    for (std::size_t r = 0; r < s.requests.size(); ++r) {
        const Request& req = s.requests[r];
        for (std::size_t pos = 0; pos < req.vnfs.size(); ++pos) {
            const auto& a = slice.assignment(RequestId(r), pos);
            if (a && !slice.is_deployed(req.vnfs[pos], a->instance, a->node)) {
                out.push_back({t, Constraint::deployment,
                               "request=" + req.id + " vnf=" + s.vnf(req.vnfs[pos]).id + " instance="
                                   + std::to_string(a->instance) + " node=" + s.node(a->node).id,
                               1, 0});
            }
        }
    }
    return out;
}

inline FeasibilityReport is_feasible(const Slice& slice, const NetworkModel& net, Slot t)
{
    const Scenario& s = net.scenario();
    FeasibilityReport report;
    auto add = [&](std::vector<Violation> v) {
        report.violations.insert(report.violations.end(), v.begin(), v.end());
    };
    add(check_node_capacity(slice, s, t));
    add(check_chain_link_utilization(slice, net, t));
    add(check_access_link_utilization(slice, net, t));
    add(check_vnf_capacity(slice, s, t));
    add(check_assignment_deployed(slice, s, t));
    return report;
}

inline FeasibilityReport is_feasible(const Schedule& schedule, const NetworkModel& net, Slot t)
{
    return is_feasible(schedule.at(t), net, t);
}

inline void write_feasibility_csv(std::ostream& os, const FeasibilityReport& report)
{
    os << "slot,constraint,entities,load,limit\n";
    for (const auto& v : report.violations) {
        os << v.slot << ',' << to_string(v.constraint) << ",\"" << v.entities << "\","
           << detail::format_double(v.load) << ',' << detail::format_double(v.limit) << '\n';
    }
}

/// Loads of one feasible slice, queried for single-VNF moves.
class LoadLedger
{
public:
    LoadLedger(const NetworkModel& net, const Slice& slice, Slot t)
    : net_(&net), slice_(&slice), t_(t), loads_(net, slice)
    {
    }

    /// Would the slice stay feasible if position \p pos of request \p r
    /// moved to \p node, joining \p instance there (nullopt: a new instance)?
    /// Checks node and instance capacity plus every chain and access link the
    /// VNF touches, incoming and outgoing.
    bool can_host(RequestId r, std::size_t pos, NodeId node, std::optional<InstanceIndex> instance) const
    {
        const Scenario& s = net_->scenario();
        const Request& req = s.request(r);
        const VnfTypeId vnf = req.vnfs[pos];
        const VnfType& f = s.vnf(vnf);
        const auto& current = slice_->assignment(r, pos);
        if (current && current->node == node && instance && current->instance == *instance) {
            return true;
        }
        const RequestLayout& lay = net_->layout(r);
        const double a = lay.incoming[pos];
        const double inst_limit = f.max_utilization * f.processing_capacity;
        if (instance) {
            if (!slice_->is_deployed(vnf, *instance, node)) {
                return false;
            }
            if (!within(loads_.instance_traffic(vnf, *instance) + a, inst_limit)) {
                return false;
            }
        } else {
            const Node& n = s.node(node);
            if (!within(loads_.node_vcpu[node.index()] + f.resource_demand, n.max_utilization * n.capacity)) {
                return false;
            }
            if (!within(a, inst_limit)) {
                return false;
            }
        }
        const std::optional<NodeId> from = current ? std::optional<NodeId>(current->node) : std::nullopt;
        // Net change per link; a VNF has few edges, so a flat list will do.
        std::vector<std::pair<std::pair<NodeId, NodeId>, double>> delta;
        auto bump = [&delta](NodeId x, NodeId y, double d) {
            const std::pair<NodeId, NodeId> key = std::minmax(x, y);
            for (auto& [k, v] : delta) {
                if (k == key) {
                    v += d;
                    return;
                }
            }
            delta.emplace_back(key, d);
        };
        for (std::size_t e = 0; e < req.edges.size(); ++e) {
            const auto [ef, et] = lay.edges[e];
            std::size_t other = 0;
            if (ef == pos) {
                other = et;
            } else if (et == pos) {
                other = ef;
            } else {
                continue;
            }
            auto h = slice_->host(r, other);
            if (!h) {
                continue;
            }
            if (from && *from != *h) {
                bump(*from, *h, -req.edges[e].rate);
            }
            if (node != *h) {
                bump(node, *h, req.edges[e].rate);
            }
        }
        for (const auto& [link, d] : delta) {
            if (d <= 0) {
                continue;
            }
            const double limit = s.network.link_max_utilization * net_->bandwidth(link.first, link.second, t_);
            if (!within(loads_.link_at(link.first, link.second) + d, limit)) {
                return false;
            }
        }
        if (!from || *from != node) {
            // Each user link is checked with everything this VNF would add to it.
            for (std::size_t k = 0; k < req.users.size(); ++k) {
                const auto& u = req.users[k];
                if (lay.users[k] != pos || !u.connected) {
                    continue;
                }
                double d = 0;
                for (std::size_t j = 0; j < req.users.size(); ++j) {
                    if (lay.users[j] == pos && req.users[j].connected && req.users[j].user == u.user) {
                        d += req.users[j].rate;
                    }
                }
                const double limit = s.user(u.user).max_utilization * net_->bandwidth(u.user, node, t_);
                if (!within(loads_.access_at(u.user, node) + d, limit)) {
                    return false;
                }
            }
        }
        return true;
    }

    /// Instances of the VNF at \p pos on \p node that could absorb its traffic.
    std::vector<InstanceIndex> instances_with_room(RequestId r, std::size_t pos, NodeId node) const
    {
        const Scenario& s = net_->scenario();
        const VnfTypeId vnf = s.request(r).vnfs[pos];
        std::vector<InstanceIndex> out;
        for (InstanceIndex i : slice_->instances_on(vnf, node)) {
            if (can_host(r, pos, node, i)) {
                out.push_back(i);
            }
        }
        return out;
    }

private:
    const NetworkModel* net_;
    const Slice* slice_;
    Slot t_;
    detail::SliceLoads loads_;
};

} // namespace fogmig

#endif // FOGMIG_FEASIBILITY_HPP
