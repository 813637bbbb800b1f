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
 * \file fogmig/makespan.hpp
 *
 * \brief Slot-threshold makespan calculus.
 *
 * Every VNF of a request accumulates processed traffic from slot 0 on, at
 * |T|/D per slot on its current host; every FG edge and user flow accumulates
 * transferred traffic at |T|/D_e over the link between the current hosts.
 * A quantity completes in the first slot whose inclusive accumulated sum
 * reaches its threshold. Thresholds of zero complete at slot 0.
 *
 * Per-VNF processing, communication and migration times are aggregated over
 * the request's structure tree; the request makespan is their sum.
 */

#ifndef FOGMIG_MAKESPAN_HPP
#define FOGMIG_MAKESPAN_HPP

#include <fogmig/core.hpp>
#include <fogmig/model.hpp>
#include <fogmig/network.hpp>
#include <fogmig/schedule.hpp>
#include <fogmig/structure.hpp>

#include <algorithm>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace fogmig {

struct VnfProgress
{
    double threshold{0};  ///< A^R_f
    double processed{0};
    std::optional<Slot> completed_slot;  ///< tau_p

    bool done() const { return completed_slot.has_value(); }
};

struct FlowProgress
{
    double threshold{0};
    double transferred{0};
    std::optional<Slot> completed_slot;  ///< tau_cp or tau_cu
    double completion_pd{0};  ///< propagation delay at the completion slot

    bool done() const { return completed_slot.has_value(); }

    /// Completion time in ms: tau_c * |T| + PD.
    double arrival(double slot_length) const
    {
        if (!completed_slot) {
            throw IncompleteError("transfer has not completed");
        }
        return static_cast<double>(*completed_slot) * slot_length + completion_pd;
    }
};

/// Endpoints of an FG edge, as positions in the request.
struct EdgeEnds
{
    std::size_t from{0};
    std::size_t to{0};
};

class ProgressState
{
public:
    ProgressState() = default;

    explicit ProgressState(const Scenario& s)
    {
        requests_.resize(s.requests.size());
        for (std::size_t r = 0; r < s.requests.size(); ++r) {
            const Request& req = s.requests[r];
            auto& rp = requests_[r];
            for (VnfTypeId v : req.vnfs) {
                VnfProgress p;
                p.threshold = incoming_traffic(req, v);
                rp.vnfs.push_back(p);
            }
            for (const auto& e : req.edges) {
                FlowProgress f;
                f.threshold = e.rate;
                rp.edges.push_back(f);
                rp.edge_ends.push_back({req.position(e.from), req.position(e.to)});
            }
            for (const auto& u : req.users) {
                FlowProgress f;
                f.threshold = u.rate;
                rp.users.push_back(f);
                rp.user_pos.push_back(req.position(u.vnf));
            }
            for (auto& p : rp.vnfs) {
                if (p.threshold <= 0) {
                    p.completed_slot = 0;
                }
                remaining_ += p.done() ? 0 : 1;
            }
            for (auto* flows : {&rp.edges, &rp.users}) {
                for (auto& f : *flows) {
                    if (f.threshold <= 0) {
                        f.completed_slot = 0;
                    }
                    remaining_ += f.done() ? 0 : 1;
                }
            }
        }
    }

    /// First slot not yet accumulated.
    Slot next_slot() const { return next_slot_; }

    /// True once every processing and transfer threshold has been crossed.
    bool all_complete() const { return remaining_ == 0; }

    const VnfProgress& vnf(RequestId r, std::size_t position) const
    {
        return requests_.at(r.index()).vnfs.at(position);
    }
    const FlowProgress& edge(RequestId r, std::size_t edge_index) const
    {
        return requests_.at(r.index()).edges.at(edge_index);
    }
    const FlowProgress& user_flow(RequestId r, std::size_t attachment_index) const
    {
        return requests_.at(r.index()).users.at(attachment_index);
    }
    const EdgeEnds& edge_ends(RequestId r, std::size_t edge_index) const
    {
        return requests_.at(r.index()).edge_ends.at(edge_index);
    }
    std::size_t user_position(RequestId r, std::size_t attachment_index) const
    {
        return requests_.at(r.index()).user_pos.at(attachment_index);
    }

    /// Accumulates slot \p t under \p slice. Slots must be advanced in order.
    void advance(const NetworkModel& net, const Slice& slice, Slot t)
    {
        if (t != next_slot_) {
            throw DomainError("advance_slot: expected slot " + std::to_string(next_slot_) + ", got "
                              + std::to_string(t));
        }
        const Scenario& s = net.scenario();
        const double len = s.sim.slot_length;
        for (std::size_t r = 0; r < requests_.size(); ++r) {
            const RequestId rid(r);
            const Request& req = s.requests[r];
            auto& rp = requests_[r];
            for (std::size_t pos = 0; pos < rp.vnfs.size(); ++pos) {
                auto& p = rp.vnfs[pos];
                if (p.done()) {
                    continue;
                }
                auto h = slice.host(rid, pos);
                if (!h) {
                    continue;
                }
                const double d = s.node(*h).processing_delay[req.vnfs[pos].index()];
                p.processed += d > 0 ? len / d : std::numeric_limits<double>::infinity();
                if (p.processed >= p.threshold) {
                    p.completed_slot = t;
                    --remaining_;
                }
            }
            for (std::size_t e = 0; e < rp.edges.size(); ++e) {
                auto& f = rp.edges[e];
                if (f.done()) {
                    continue;
                }
                auto a = slice.host(rid, rp.edge_ends[e].from);
                auto b = slice.host(rid, rp.edge_ends[e].to);
                if (!a || !b) {
                    continue;
                }
                if (*a == *b) {
                    f.transferred = std::max(f.transferred, f.threshold);
                    f.completed_slot = t;
                    f.completion_pd = 0;
                    --remaining_;
                    continue;
                }
                f.transferred += len / net.per_unit_transfer_delay(*a, *b, t);
                if (f.transferred >= f.threshold) {
                    f.completed_slot = t;
                    f.completion_pd = net.propagation_delay(*a, *b, t);
                    --remaining_;
                }
            }
            for (std::size_t k = 0; k < rp.users.size(); ++k) {
                auto& f = rp.users[k];
                if (f.done()) {
                    continue;
                }
                auto h = slice.host(rid, rp.user_pos[k]);
                if (!h) {
                    continue;
                }
                const UserId u = req.users[k].user;
                f.transferred += len / net.per_unit_transfer_delay(u, *h, t);
                if (f.transferred >= f.threshold) {
                    f.completed_slot = t;
                    f.completion_pd = net.propagation_delay(u, *h, t);
                    --remaining_;
                }
            }
        }
        ++next_slot_;
    }

private:
    struct RequestProgress
    {
        std::vector<VnfProgress> vnfs;
        std::vector<FlowProgress> edges;
        std::vector<EdgeEnds> edge_ends;
        std::vector<FlowProgress> users;
        std::vector<std::size_t> user_pos;
    };

    std::vector<RequestProgress> requests_;
    Slot next_slot_{0};
    std::size_t remaining_{0};
};

/// Returns \p state advanced by slot \p t of \p schedule.
inline ProgressState advance_slot(ProgressState state, const NetworkModel& net, const Schedule& schedule, Slot t)
{
    state.advance(net, schedule.at(t), t);
    return state;
}

/// M_proc(R, f) = tau_p * |T|.
inline double processing_time(const ProgressState& state, const Scenario& s, RequestId r, VnfTypeId vnf)
{
    const auto& p = state.vnf(r, s.request(r).position(vnf));
    if (!p.done()) {
        throw IncompleteError("processing of VNF '" + s.vnf(vnf).id + "' in request '" + s.request(r).id
                              + "' did not complete within the horizon");
    }
    return static_cast<double>(*p.completed_slot) * s.sim.slot_length;
}

/// M_com(R, f): latest arrival over incoming FG edges and connected user flows.
inline double communication_time(const ProgressState& state, const Scenario& s, RequestId r, VnfTypeId vnf)
{
    const Request& req = s.request(r);
    req.position(vnf);
    const double len = s.sim.slot_length;
    double m = 0;
    auto fail = [&]() {
        throw IncompleteError("transfer into VNF '" + s.vnf(vnf).id + "' in request '" + req.id
                              + "' did not complete within the horizon");
    };
    for (std::size_t e = 0; e < req.edges.size(); ++e) {
        if (req.edges[e].to != vnf) {
            continue;
        }
        const auto& f = state.edge(r, e);
        if (!f.done()) {
            fail();
        }
        m = std::max(m, f.arrival(len));
    }
    for (std::size_t k = 0; k < req.users.size(); ++k) {
        const auto& att = req.users[k];
        if (att.vnf != vnf || !att.connected) {
            continue;
        }
        const auto& f = state.user_flow(r, k);
        if (!f.done()) {
            fail();
        }
        m = std::max(m, f.arrival(len));
    }
    return m;
}

/// M_mig(R, f): PD + s/BW for every host change between consecutive slots,
/// evaluated at the locations of the earlier slot.
inline double migration_time(const NetworkModel& net, const Schedule& schedule, RequestId r, VnfTypeId vnf)
{
    const Scenario& s = net.scenario();
    const std::size_t pos = s.request(r).position(vnf);
    const double size = s.vnf(vnf).image_size;
    double total = 0;
    const auto& runs = schedule.runs();
    for (std::size_t i = 1; i < runs.size(); ++i) {
        auto from = runs[i - 1].second.host(r, pos);
        auto to = runs[i].second.host(r, pos);
        if (!from || !to || *from == *to) {
            continue;
        }
        const Slot t = runs[i].first - 1;
        total += net.propagation_delay(*from, *to, t) + size / net.bandwidth(*from, *to, t);
    }
    return total;
}

/// Number of host changes of one request position over the schedule.
inline std::size_t migration_count(const Schedule& schedule, RequestId r, std::size_t position)
{
    std::size_t n = 0;
    const auto& runs = schedule.runs();
    for (std::size_t i = 1; i < runs.size(); ++i) {
        auto from = runs[i - 1].second.host(r, position);
        auto to = runs[i].second.host(r, position);
        if (from && to && *from != *to) {
            ++n;
        }
    }
    return n;
}

/// Host changes summed over every request position.
inline std::size_t migration_count(const Scenario& s, const Schedule& schedule)
{
    std::size_t n = 0;
    for (std::size_t r = 0; r < s.requests.size(); ++r) {
        for (std::size_t pos = 0; pos < s.requests[r].vnfs.size(); ++pos) {
            n += migration_count(schedule, RequestId(r), pos);
        }
    }
    return n;
}

struct RequestMakespan
{
    std::string request;
    double processing{0};     ///< M_proc(R, root)
    double communication{0};  ///< M_com(R, root)
    double migration{0};      ///< M_mig(R, root)
    double total{0};          ///< M(R)

    friend bool operator==(const RequestMakespan&, const RequestMakespan&) = default;
};

struct MakespanReport
{
    std::vector<RequestMakespan> requests;
    double objective{0};  ///< sum of M(R)
    /// False when some threshold was still open at the end of the schedule;
    /// open quantities are then valued at the horizon, a lower bound.
    bool complete{true};

    friend bool operator==(const MakespanReport&, const MakespanReport&) = default;
};

/// Builds the report from an accumulated state. With \p allow_partial unset,
/// any open threshold raises IncompleteError.
inline MakespanReport makespan_report(const ProgressState& state, const NetworkModel& net, const Schedule& schedule,
                                      bool allow_partial = false)
{
    const Scenario& s = net.scenario();
    const double horizon_ms = static_cast<double>(state.next_slot()) * s.sim.slot_length;
    MakespanReport report;
    report.complete = state.all_complete();
    if (!report.complete && !allow_partial) {
        throw IncompleteError("makespan: open thresholds after " + std::to_string(state.next_slot())
                              + " slots; increase the horizon");
    }
    auto guarded = [&](auto&& f) {
        try {
            return f();
        } catch (const IncompleteError&) {
            if (!allow_partial) {
                throw;
            }
            return horizon_ms;
        }
    };
    for (std::size_t r = 0; r < s.requests.size(); ++r) {
        const RequestId rid(r);
        const Request& req = s.requests[r];
        RequestMakespan m;
        m.request = req.id;
        m.processing = aggregate(req.structure, [&](VnfTypeId v) {
            return guarded([&] { return processing_time(state, s, rid, v); });
        });
        m.communication = aggregate(req.structure, [&](VnfTypeId v) {
            return guarded([&] { return communication_time(state, s, rid, v); });
        });
        m.migration = aggregate(req.structure, [&](VnfTypeId v) { return migration_time(net, schedule, rid, v); });
        m.total = m.processing + m.communication + m.migration;
        report.objective += m.total;
        report.requests.push_back(std::move(m));
    }
    return report;
}

/// Accumulates every slot of \p schedule and reports M(R) per request.
inline MakespanReport request_makespan(const NetworkModel& net, const Schedule& schedule, bool allow_partial = false)
{
    ProgressState state(net.scenario());
    const auto& runs = schedule.runs();
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const Slot stop = i + 1 < runs.size() ? runs[i + 1].first : schedule.end();
        for (Slot t = runs[i].first; t < stop; ++t) {
            state.advance(net, runs[i].second, t);
        }
    }
    return makespan_report(state, net, schedule, allow_partial);
}

/// One row per request and a final "total" row.
inline void write_makespan_csv(std::ostream& os, const MakespanReport& report)
{
    os << "request,M_proc,M_com,M_mig,M\n";
    double p = 0;
    double c = 0;
    double g = 0;
    for (const auto& m : report.requests) {
        os << m.request << ',' << detail::format_double(m.processing) << ','
           << detail::format_double(m.communication) << ',' << detail::format_double(m.migration) << ','
           << detail::format_double(m.total) << '\n';
        p += m.processing;
        c += m.communication;
        g += m.migration;
    }
    os << "total," << detail::format_double(p) << ',' << detail::format_double(c) << ','
       << detail::format_double(g) << ',' << detail::format_double(report.objective) << '\n';
}

} // namespace fogmig

#endif // FOGMIG_MAKESPAN_HPP
