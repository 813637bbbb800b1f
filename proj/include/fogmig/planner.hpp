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
 * \file fogmig/planner.hpp
 *
 * \brief Per-slot placement policies.
 *
 * Each step consumes the slice of slot t-1 and returns the slice of slot t.
 *
 *  - acm: greedy argmin over fog nodes for every VNF whose incoming
 *    transfers have not arrived yet
 *  - none: keeps the initial placement
 *  - random: every VNF jumps to a uniformly drawn feasible node
 *  - exact: brute-force reference for the acm argmin on tiny instances
 *
 * Ties in the argmin go to the lowest node id.
 */

#ifndef FOGMIG_PLANNER_HPP
#define FOGMIG_PLANNER_HPP

#include <fogmig/core.hpp>
#include <fogmig/feasibility.hpp>
#include <fogmig/makespan.hpp>
#include <fogmig/model.hpp>
#include <fogmig/network.hpp>
#include <fogmig/schedule.hpp>

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace fogmig {

/// No feasible initial placement within the retry budget.
class PlacementError : public Error
{
public:
    using Error::Error;
};

enum class PlannerKind
{
    acm,
    none,
    random,
    exact
};

inline constexpr std::string_view to_string(PlannerKind k)
{
    switch (k) {
    case PlannerKind::acm: return "acm";
    case PlannerKind::none: return "none";
    case PlannerKind::random: return "random";
    case PlannerKind::exact: return "exact";
    }
    return "";
}

inline PlannerKind parse_planner(std::string_view name)
{
    for (auto k : {PlannerKind::acm, PlannerKind::none, PlannerKind::random, PlannerKind::exact}) {
        if (to_string(k) == name) {
            return k;
        }
    }
    throw DomainError("unknown planner '" + std::string(name) + "' (expected acm|none|random|exact)");
}

/// Independent random streams derived from one seed, so that planners and
/// sweep points see the same initial placement and mobility for a seed.
enum class Stream : std::uint32_t
{
    placement = 1,
    planner = 2,
    mobility = 3,
    demands = 4
};

inline std::mt19937_64 make_rng(std::uint64_t seed, Stream stream)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream)};
    return std::mt19937_64(seq);
}

inline constexpr int initial_placement_retries = 1000;
inline constexpr int random_migration_retries = 64;

/// One per-VNF decision of a step.
struct Decision
{
    Slot slot{0};
    RequestId request;
    std::size_t position{0};
    NodeId from;
    NodeId to;
    bool stalled{false};  ///< no candidate; the VNF stayed put

    bool moved() const { return !stalled && from != to; }

    friend bool operator==(const Decision&, const Decision&) = default;
};

struct PlannerState
{
    const NetworkModel* network{nullptr};
    Slice slice;                                ///< slot t-1
    const ProgressState* progress{nullptr};     ///< accumulated over slots < t
    std::mt19937_64 rng;
    double p_move{1.0};
    std::vector<Decision> decisions;            ///< filled by the last step

    const Scenario& scenario() const { return network->scenario(); }
};

/// Moves position \p pos of request \p r to \p node in \p slice. Joins a
/// random instance of the type with room there, or deploys a new one when
/// the type is absent or full. The old instance is removed once no request
/// uses it.
inline void apply_move(Slice& slice, const NetworkModel& net, Slot t, RequestId r, std::size_t pos, NodeId node,
                       std::mt19937_64& rng)
{
    const Scenario& s = net.scenario();
    const VnfTypeId vnf = s.request(r).vnfs[pos];
    const auto old = slice.assignment(r, pos);
    if (old && old->node == node) {
        return;
    }
    std::optional<InstanceIndex> target;
    if (!slice.instances_on(vnf, node).empty()) {
        const auto room = LoadLedger(net, slice, t).instances_with_room(r, pos, node);
        if (!room.empty()) {
            std::uniform_int_distribution<std::size_t> pick(0, room.size() - 1);
            target = room[pick(rng)];
        }
    }
    const InstanceIndex i = target ? *target : slice.deploy(vnf, node);
    slice.assign(r, pos, {i, node});
    if (old && !slice.in_use(vnf, old->instance, s)) {
        slice.undeploy(vnf, old->instance);
    }
}

/// Feasible for the acm rule: an instance with room exists on \p node, or a
/// new one fits.
inline bool acm_can_host(const LoadLedger& ledger, const Slice& slice, RequestId r, std::size_t pos, NodeId node)
{
    const auto& cur = slice.assignment(r, pos);
    if (cur && cur->node == node) {
        return true;
    }
    return !ledger.instances_with_room(r, pos, node).empty() || ledger.can_host(r, pos, node, std::nullopt);
}

/// True while some incoming FG-edge transfer or connected user transfer of
/// the VNF has not arrived by the start of slot \p t.
inline bool has_pending_interactions(const ProgressState& progress, const Scenario& s, RequestId r, std::size_t pos,
                                     Slot t)
{
    const Request& req = s.request(r);
    const VnfTypeId vnf = req.vnfs[pos];
    const double now = static_cast<double>(t) * s.sim.slot_length;
    auto pending = [&](const FlowProgress& f) { return !f.done() || f.arrival(s.sim.slot_length) > now; };
    for (std::size_t e = 0; e < req.edges.size(); ++e) {
        if (req.edges[e].to == vnf && pending(progress.edge(r, e))) {
            return true;
        }
    }
    for (std::size_t k = 0; k < req.users.size(); ++k) {
        if (req.users[k].vnf == vnf && req.users[k].connected && pending(progress.user_flow(r, k))) {
            return true;
        }
    }
    return false;
}

/// The acm cost of hosting position \p pos on \p node at slot \p t:
/// latency of the transfers still to come (remaining/BW + PD, latest one),
/// remaining processing on \p node, and the migration overhead from the
/// current host.
inline double acm_cost(const PlannerState& state, const Slice& slice, RequestId r, std::size_t pos, NodeId node,
                       Slot t)
{
    const NetworkModel& net = *state.network;
    const Scenario& s = net.scenario();
    const Request& req = s.request(r);
    const VnfTypeId vnf = req.vnfs[pos];
    const ProgressState& prog = *state.progress;

    double comm = 0;
    for (std::size_t e = 0; e < req.edges.size(); ++e) {
        const auto& f = prog.edge(r, e);
        if (req.edges[e].to != vnf || f.done()) {
            continue;
        }
        auto h = slice.host(r, prog.edge_ends(r, e).from);
        if (!h || *h == node) {
            continue;
        }
        const double rem = std::max(0.0, f.threshold - f.transferred);
        comm = std::max(comm, rem * net.per_unit_transfer_delay(*h, node, t) + net.propagation_delay(*h, node, t));
    }
    for (std::size_t k = 0; k < req.users.size(); ++k) {
        const auto& att = req.users[k];
        const auto& f = prog.user_flow(r, k);
        if (att.vnf != vnf || !att.connected || f.done()) {
            continue;
        }
        const double rem = std::max(0.0, f.threshold - f.transferred);
        comm = std::max(comm, rem * net.per_unit_transfer_delay(att.user, node, t)
                                  + net.propagation_delay(att.user, node, t));
    }

    const auto& p = prog.vnf(r, pos);
    const double proc = p.done() ? 0.0
                                 : std::max(0.0, p.threshold - p.processed)
                                       * s.node(node).processing_delay[vnf.index()];

    double mig = 0;
    const auto from = slice.host(r, pos);
    if (from && *from != node) {
        const Slot prev = std::max<Slot>(0, t - 1);
        mig = net.propagation_delay(*from, node, prev) + s.vnf(vnf).image_size / net.bandwidth(*from, node, prev);
    }
    return comm + proc + mig;
}

/// Fog nodes able to take position \p pos in \p slice, ascending.
inline std::vector<NodeId> acm_candidates(const PlannerState& state, const Slice& slice, RequestId r,
                                          std::size_t pos, Slot t)
{
    const LoadLedger ledger(*state.network, slice, t);
    std::vector<NodeId> out;
    for (NodeId n : state.scenario().fog_nodes()) {
        if (acm_can_host(ledger, slice, r, pos, n)) {
            out.push_back(n);
        }
    }
    return out;
}

/// Random uniform placement of every VNF, redrawn until the slot-0 slice is
/// feasible.
inline Slice initial_placement(const NetworkModel& net, std::uint64_t seed)
{
    const Scenario& s = net.scenario();
    if (s.nodes.empty()) {
        throw PlacementError("initial placement: scenario has no nodes");
    }
    auto rng = make_rng(seed, Stream::placement);
    std::uniform_int_distribution<std::size_t> pick(0, s.nodes.size() - 1);
    for (int attempt = 0; attempt < initial_placement_retries; ++attempt) {
        Slice slice(s);
        for (std::size_t r = 0; r < s.requests.size(); ++r) {
            for (std::size_t pos = 0; pos < s.requests[r].vnfs.size(); ++pos) {
                apply_move(slice, net, 0, RequestId(r), pos, NodeId(pick(rng)), rng);
            }
        }
        if (is_feasible(slice, net, 0)) {
            return slice;
        }
    }
    throw PlacementError("initial placement: no feasible placement in " + std::to_string(initial_placement_retries)
                         + " draws");
}

inline Slice no_migration_step(PlannerState& state, Slot /*t*/)
{
    state.decisions.clear();
    return state.slice;
}

inline Slice acm_step(PlannerState& state, Slot t)
{
    state.decisions.clear();
    const NetworkModel& net = *state.network;
    const Scenario& s = net.scenario();
    Slice next = state.slice;
    for (std::size_t r = 0; r < s.requests.size(); ++r) {
        const RequestId rid(r);
        for (std::size_t pos = 0; pos < s.requests[r].vnfs.size(); ++pos) {
            if (!has_pending_interactions(*state.progress, s, rid, pos, t)) {
                continue;
            }
            const auto from = next.host(rid, pos);
            if (!from) {
                continue;
            }
            const auto candidates = acm_candidates(state, next, rid, pos, t);
            if (candidates.empty()) {
                state.decisions.push_back({t, rid, pos, *from, *from, true});
                continue;
            }
            NodeId best = candidates.front();
            double best_cost = std::numeric_limits<double>::infinity();
            for (NodeId n : candidates) {
                const double c = acm_cost(state, next, rid, pos, n, t);
                if (c < best_cost) {
                    best_cost = c;
                    best = n;
                }
            }
            apply_move(next, net, t, rid, pos, best, state.rng);
            state.decisions.push_back({t, rid, pos, *from, best, false});
        }
    }
    return next;
}

inline Slice random_migration_step(PlannerState& state, Slot t)
{
    state.decisions.clear();
    const NetworkModel& net = *state.network;
    const Scenario& s = net.scenario();
    Slice next = state.slice;
    std::uniform_int_distribution<std::size_t> pick(0, s.nodes.size() - 1);
    std::bernoulli_distribution move(std::clamp(state.p_move, 0.0, 1.0));
    for (std::size_t r = 0; r < s.requests.size(); ++r) {
        const RequestId rid(r);
        for (std::size_t pos = 0; pos < s.requests[r].vnfs.size(); ++pos) {
            const auto from = next.host(rid, pos);
            if (!from || !move(state.rng)) {
                continue;
            }
            bool placed = false;
            // next only changes when a draw succeeds, which ends the loop.
            const LoadLedger ledger(net, next, t);
            for (int k = 0; k < random_migration_retries && !placed; ++k) {
                const NodeId n(pick(state.rng));
                if (n == *from) {
                    placed = true;
                    break;
                }
                if (acm_can_host(ledger, next, rid, pos, n)) {
                    apply_move(next, net, t, rid, pos, n, state.rng);
                    state.decisions.push_back({t, rid, pos, *from, n, false});
                    placed = true;
                }
            }
            if (!placed) {
                state.decisions.push_back({t, rid, pos, *from, *from, true});
            }
        }
    }
    return next;
}

/// Largest instance exhaustive_step accepts.
inline constexpr std::size_t exhaustive_max_fog_nodes = 4;
inline constexpr std::size_t exhaustive_max_nodes = 6;
inline constexpr std::size_t exhaustive_max_vnfs = 8;

namespace detail {

/// Cost of the acm rule, written out from the progress state without the
/// planner helpers.
inline double reference_cost(const NetworkModel& net, const ProgressState& prog, const Slice& slice, RequestId r,
                             std::size_t pos, NodeId node, Slot t)
{
    const Scenario& s = net.scenario();
    const Request& req = s.request(r);
    const VnfTypeId vnf = req.vnfs[pos];
    const Node& target = s.node(node);
    std::vector<double> arrivals{0.0};
    for (std::size_t e = 0; e < req.edges.size(); ++e) {
        const FlowProgress& f = prog.edge(r, e);
        if (req.edges[e].to != vnf || f.completed_slot) {
            continue;
        }
        const NodeId src = *slice.host(r, req.position(req.edges[e].from));
        if (src == node) {
            arrivals.push_back(0.0);
            continue;
        }
        const double left = f.threshold > f.transferred ? f.threshold - f.transferred : 0.0;
        const Point a = net.location_at(src, t);
        const Point b = net.location_at(node, t);
        const double dist = std::hypot(a.x - b.x, a.y - b.y) / (s.sim.area_side * std::sqrt(2.0));
        const double pd = s.network.min_propagation_delay
                          + (s.network.max_propagation_delay - s.network.min_propagation_delay) * std::min(1.0, dist);
        arrivals.push_back(left * (1.0 / s.network.bandwidth(s.node(src).domain, target.domain)) + pd);
    }
    for (std::size_t k = 0; k < req.users.size(); ++k) {
        const UserAttachment& att = req.users[k];
        const FlowProgress& f = prog.user_flow(r, k);
        if (att.vnf != vnf || !att.connected || f.completed_slot) {
            continue;
        }
        const double left = f.threshold > f.transferred ? f.threshold - f.transferred : 0.0;
        arrivals.push_back(left * (1.0 / s.user(att.user).access_bandwidth(target.domain))
                           + net.propagation_delay(att.user, node, t));
    }
    double cost = *std::max_element(arrivals.begin(), arrivals.end());
    const VnfProgress& p = prog.vnf(r, pos);
    if (!p.completed_slot && p.threshold > p.processed) {
        cost += (p.threshold - p.processed) * target.processing_delay[vnf.index()];
    }
    const NodeId from = *slice.host(r, pos);
    if (from != node) {
        const Slot prev = t > 0 ? t - 1 : 0;
        cost += net.propagation_delay(from, node, prev)
                + s.vnf(vnf).image_size / s.network.bandwidth(s.node(from).domain, target.domain);
    }
    return cost;
}

} // namespace detail

/// Same decisions as acm_step, reached by checking every hypothetical slice
/// with the full constraint system and scoring with an independent cost.
inline Slice exhaustive_step(PlannerState& state, Slot t)
{
    const NetworkModel& net = *state.network;
    const Scenario& s = net.scenario();
    if (s.fog_nodes().size() > exhaustive_max_fog_nodes || s.nodes.size() > exhaustive_max_nodes
        || s.total_request_vnfs() > exhaustive_max_vnfs) {
        throw DomainError("exhaustive_step: instance too large (at most "
                          + std::to_string(exhaustive_max_fog_nodes) + " fog nodes, "
                          + std::to_string(exhaustive_max_nodes) + " nodes, "
                          + std::to_string(exhaustive_max_vnfs) + " VNFs)");
    }
    state.decisions.clear();
    Slice next = state.slice;
    for (std::size_t r = 0; r < s.requests.size(); ++r) {
        const RequestId rid(r);
        const Request& req = s.request(rid);
        for (std::size_t pos = 0; pos < req.vnfs.size(); ++pos) {
            if (!has_pending_interactions(*state.progress, s, rid, pos, t)) {
                continue;
            }
            const auto cur = next.assignment(rid, pos);
            if (!cur) {
                continue;
            }
            const VnfTypeId vnf = req.vnfs[pos];
            std::optional<NodeId> best;
            double best_cost = 0;
            for (NodeId n : s.fog_nodes()) {
                bool ok = n == cur->node;
                std::vector<std::optional<InstanceIndex>> options{std::nullopt};
                for (InstanceIndex i : next.instances_on(vnf, n)) {
                    options.emplace_back(i);
                }
                for (std::size_t o = 0; o < options.size() && !ok; ++o) {
                    Slice trial = next;
                    InstanceIndex i = options[o] ? *options[o] : trial.deploy(vnf, n);
                    trial.assign(rid, pos, {i, n});
                    if (!trial.in_use(vnf, cur->instance, s)) {
                        trial.undeploy(vnf, cur->instance);
                    }
                    ok = is_feasible(trial, net, t).feasible();
                }
                if (!ok) {
                    continue;
                }
                const double c = detail::reference_cost(net, *state.progress, next, rid, pos, n, t);
                if (!best || c < best_cost) {
                    best = n;
                    best_cost = c;
                }
            }
            if (!best) {
                state.decisions.push_back({t, rid, pos, cur->node, cur->node, true});
                continue;
            }
            apply_move(next, net, t, rid, pos, *best, state.rng);
            state.decisions.push_back({t, rid, pos, cur->node, *best, false});
        }
    }
    return next;
}

inline Slice planner_step(PlannerKind kind, PlannerState& state, Slot t)
{
    switch (kind) {
    case PlannerKind::acm: return acm_step(state, t);
    case PlannerKind::none: return no_migration_step(state, t);
    case PlannerKind::random: return random_migration_step(state, t);
    case PlannerKind::exact: return exhaustive_step(state, t);
    }
    throw DomainError("unknown planner");
}

} // namespace fogmig

#endif // FOGMIG_PLANNER_HPP
