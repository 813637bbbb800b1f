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
 * \file fogmig/schedule.hpp
 *
 * \brief Deployment and assignment variables over time.
 *
 * A Slice holds the variables of one slot: the deployed instances
 * x_{i,f,n} and, per request and request position, the assigned instance
 * x^R_{i,f,n}. A Schedule is the sequence of slices for slots 0..end-1,
 * stored run-length encoded since placements change rarely.
 */

#ifndef FOGMIG_SCHEDULE_HPP
#define FOGMIG_SCHEDULE_HPP

#include <fogmig/core.hpp>
#include <fogmig/model.hpp>

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace fogmig {

struct Placement
{
    InstanceIndex instance{0};
    NodeId node;

    friend bool operator==(const Placement&, const Placement&) = default;
};

struct Deployment
{
    VnfTypeId vnf;
    InstanceIndex instance{0};
    NodeId node;

    friend auto operator<=>(const Deployment&, const Deployment&) = default;
};

/// Schedule variables of a single slot.
class Slice
{
public:
    Slice() = default;

    explicit Slice(const Scenario& s) : next_instance_(s.catalog.size(), 0)
    {
        assignments_.reserve(s.requests.size());
        for (const auto& r : s.requests) {
            assignments_.emplace_back(r.vnfs.size());
        }
    }

    /// Deployed instances, ordered by (type, instance).
    const std::vector<Deployment>& deployments() const { return deployments_; }

    std::size_t request_count() const { return assignments_.size(); }
    std::size_t vnf_count(RequestId r) const { return assignments_.at(r.index()).size(); }

    const std::optional<Placement>& assignment(RequestId r, std::size_t position) const
    {
        return assignments_.at(r.index()).at(position);
    }

    std::optional<NodeId> host(RequestId r, std::size_t position) const
    {
        const auto& a = assignment(r, position);
        return a ? std::optional<NodeId>(a->node) : std::nullopt;
    }

    /// Node hosting instance \p instance of \p vnf, if deployed.
    std::optional<NodeId> deployed_on(VnfTypeId vnf, InstanceIndex instance) const
    {
        auto it = find(vnf, instance);
        if (it == deployments_.end()) {
            return std::nullopt;
        }
        return it->node;
    }

    bool is_deployed(VnfTypeId vnf, InstanceIndex instance, NodeId node) const
    {
        auto n = deployed_on(vnf, instance);
        return n && *n == node;
    }

    /// Instances of \p vnf deployed on \p node, ascending.
    std::vector<InstanceIndex> instances_on(VnfTypeId vnf, NodeId node) const
    {
        std::vector<InstanceIndex> out;
        for (const auto& d : deployments_) {
            if (d.vnf == vnf && d.node == node) {
                out.push_back(d.instance);
            }
        }
        return out;
    }

    /// Creates a fresh instance of \p vnf on \p node.
    InstanceIndex deploy(VnfTypeId vnf, NodeId node)
    {
        if (vnf.index() >= next_instance_.size()) {
            next_instance_.resize(vnf.index() + 1, 0);
        }
        const InstanceIndex i = next_instance_[vnf.index()]++;
        insert({vnf, i, node});
        return i;
    }

    /// Deploys a specific instance; used by tests and hand-built schedules.
    void deploy(VnfTypeId vnf, InstanceIndex instance, NodeId node)
    {
        if (find(vnf, instance) != deployments_.end()) {
            throw InvariantError("instance " + std::to_string(instance) + " of VNF " + std::to_string(vnf.value)
                                 + " is already deployed");
        }
        if (vnf.index() >= next_instance_.size()) {
            next_instance_.resize(vnf.index() + 1, 0);
        }
        next_instance_[vnf.index()] = std::max(next_instance_[vnf.index()], instance + 1);
        insert({vnf, instance, node});
    }

    void undeploy(VnfTypeId vnf, InstanceIndex instance)
    {
        auto it = find(vnf, instance);
        if (it != deployments_.end()) {
            deployments_.erase(it);
        }
    }

    void assign(RequestId r, std::size_t position, Placement p) { assignments_.at(r.index()).at(position) = p; }
    void unassign(RequestId r, std::size_t position) { assignments_.at(r.index()).at(position).reset(); }

    /// True when some request is assigned to this instance.
    bool in_use(VnfTypeId vnf, InstanceIndex instance, const Scenario& s) const
    {
        for (std::size_t r = 0; r < assignments_.size(); ++r) {
            const auto& req = s.requests[r];
            for (std::size_t pos = 0; pos < assignments_[r].size(); ++pos) {
                const auto& a = assignments_[r][pos];
                if (a && req.vnfs[pos] == vnf && a->instance == instance) {
                    return true;
                }
            }
        }
        return false;
    }

    friend bool operator==(const Slice& a, const Slice& b)
    {
        return a.deployments_ == b.deployments_ && a.assignments_ == b.assignments_;
    }

private:
    std::vector<Deployment>::const_iterator find(VnfTypeId vnf, InstanceIndex instance) const
    {
        auto it = std::lower_bound(deployments_.begin(), deployments_.end(), Deployment{vnf, instance, NodeId{}},
                                   [](const Deployment& a, const Deployment& b) {
                                       return std::pair(a.vnf, a.instance) < std::pair(b.vnf, b.instance);
                                   });
        if (it != deployments_.end() && it->vnf == vnf && it->instance == instance) {
            return it;
        }
        return deployments_.end();
    }

    void insert(Deployment d)
    {
        auto it = std::lower_bound(deployments_.begin(), deployments_.end(), d);
        deployments_.insert(it, d);
    }

    std::vector<Deployment> deployments_;
    std::vector<std::vector<std::optional<Placement>>> assignments_;
    std::vector<InstanceIndex> next_instance_;
};

/// Slices for slots 0..end()-1, one entry per run of identical slices.
class Schedule
{
public:
    Schedule() = default;

    explicit Schedule(Slice initial) { runs_.push_back({0, std::move(initial)}); end_ = 1; }

    /// Number of slots the schedule defines.
    Slot end() const { return end_; }
    bool empty() const { return end_ == 0; }
    bool defined_at(Slot t) const { return t >= 0 && t < end_; }

    /// Appends the slice of slot end().
    void push(Slice slice)
    {
        if (runs_.empty() || !(runs_.back().second == slice)) {
            runs_.push_back({end_, std::move(slice)});
        }
        ++end_;
    }

    const Slice& at(Slot t) const
    {
        if (!defined_at(t)) {
            throw DomainError("schedule undefined at slot " + std::to_string(t));
        }
        auto it = std::upper_bound(runs_.begin(), runs_.end(), t,
                                   [](Slot v, const auto& run) { return v < run.first; });
        return std::prev(it)->second;
    }

    const Slice& back() const
    {
        if (runs_.empty()) {
            throw DomainError("schedule is empty");
        }
        return runs_.back().second;
    }

    /// (first slot, slice) per run of identical slices.
    const std::vector<std::pair<Slot, Slice>>& runs() const { return runs_; }

    friend bool operator==(const Schedule&, const Schedule&) = default;

private:
    std::vector<std::pair<Slot, Slice>> runs_;
    Slot end_{0};
};

} // namespace fogmig

#endif // FOGMIG_SCHEDULE_HPP
