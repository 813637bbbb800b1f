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
 * \file fogmig/harness.hpp
 *
 * \brief Simulation loop, replications, sweeps and result files.
 *
 * A run places every VNF at random in slot 0, then for t = 1, 2, ... asks
 * the planner for the slice of slot t, asserts the constraints, and
 * accumulates the slot. It stops once every threshold has been crossed, or
 * at the horizon cap: four times a bound on the completion slot of any
 * schedule, or the configured slot count if that is smaller.
 */

#ifndef FOGMIG_HARNESS_HPP
#define FOGMIG_HARNESS_HPP

#include <fogmig/core.hpp>
#include <fogmig/feasibility.hpp>
#include <fogmig/makespan.hpp>
#include <fogmig/model.hpp>
#include <fogmig/network.hpp>
#include <fogmig/planner.hpp>
#include <fogmig/plot.hpp>
#include <fogmig/scenario_io.hpp>
#include <fogmig/schedule.hpp>
#include <fogmig/stats.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <tuple>
#include <vector>

namespace fogmig {

enum class SweepParam
{
    connections,     ///< user flows into the first and last VNF of each request
    connected_vnfs   ///< how many VNFs of each request receive user traffic
};

inline constexpr std::string_view to_string(SweepParam p)
{
    return p == SweepParam::connections ? "connections" : "connected-vnfs";
}

inline SweepParam parse_sweep_param(std::string_view name)
{
    if (name == "connections") {
        return SweepParam::connections;
    }
    if (name == "connected-vnfs") {
        return SweepParam::connected_vnfs;
    }
    throw DomainError("unknown sweep parameter '" + std::string(name) + "' (expected connections|connected-vnfs)");
}

struct SweepSpec
{
    SweepParam param{SweepParam::connections};
    std::vector<int> values;
};

struct RunConfig
{
    std::vector<std::filesystem::path> scenarios;
    std::vector<PlannerKind> planners{PlannerKind::acm};
    std::uint64_t seed{1};
    std::optional<Slot> slots;
    int replications{1};
    std::optional<SweepSpec> sweep;
    std::optional<double> p_move;
    bool check{false};  ///< run every check in every slot and keep the reports
    std::filesystem::path output_dir;
};

inline void validate(const RunConfig& c)
{
    if (c.scenarios.empty()) {
        throw DomainError("run config: no scenario");
    }
    if (c.planners.empty()) {
        throw DomainError("run config: no planner");
    }
    if (c.replications < 1) {
        throw DomainError("run config: replication count must be at least 1");
    }
    if (c.sweep && c.sweep->values.empty()) {
        throw DomainError("run config: sweep needs at least one value");
    }
    if (c.slots && *c.slots < 1) {
        throw DomainError("run config: slot count must be at least 1");
    }
}

/// Metrics of one run.
struct RunMetrics
{
    std::string scenario;
    PlannerKind planner{PlannerKind::acm};
    std::uint64_t seed{0};
    std::optional<SweepParam> sweep_param;
    int sweep_value{0};
    MakespanReport makespan;
    Slot slots{0};                 ///< slots simulated, slot 0 included
    std::size_t migrations{0};
    double migrations_per_slot{0};
    std::size_t stalls{0};
    std::vector<std::pair<Slot, std::uint32_t>> migrations_by_slot;  ///< nonzero slots only
    std::vector<Violation> violations;  ///< collected with RunConfig::check

    double processing() const { return sum(&RequestMakespan::processing); }
    double communication() const { return sum(&RequestMakespan::communication); }
    double migration() const { return sum(&RequestMakespan::migration); }

    friend bool operator==(const RunMetrics&, const RunMetrics&) = default;

private:
    double sum(double RequestMakespan::*field) const
    {
        double v = 0;
        for (const auto& r : makespan.requests) {
            v += r.*field;
        }
        return v;
    }
};

/// Redraws VNF VCPU demands when the scenario asks for it.
inline Scenario prepare_scenario(Scenario s, std::uint64_t seed)
{
    if (s.sim.demand_range) {
        auto rng = make_rng(seed, Stream::demands);
        std::uniform_int_distribution<int> demand(s.sim.demand_range->first, s.sim.demand_range->second);
        for (auto& f : s.catalog) {
            f.resource_demand = demand(rng);
        }
    }
    return s;
}

/// Rewrites user attachments for one sweep point.
///
/// connections c: the first and last leaf VNF of each request receive c
/// flows of connection_rate, dealt round-robin over the users.
/// connected-vnfs k: the first k VNFs in the order (first leaf, last leaf,
/// remaining leaves) receive one flow from every user; the rest none.
inline Scenario apply_sweep(Scenario s, SweepParam param, int value)
{
    if (value < 0) {
        throw DomainError("sweep value must be non-negative");
    }
    if (s.users.empty()) {
        throw DomainError("sweep over user traffic needs at least one user");
    }
    const double rate = s.sim.connection_rate;
    if (rate <= 0) {
        throw DomainError("sweep needs sim.connection_rate > 0");
    }
    for (auto& req : s.requests) {
        const auto leaves = req.structure.leaves();
        std::vector<VnfTypeId> order;
        order.push_back(leaves.front());
        if (leaves.size() > 1) {
            order.push_back(leaves.back());
        }
        for (std::size_t i = 1; i + 1 < leaves.size(); ++i) {
            order.push_back(leaves[i]);
        }
        std::vector<VnfTypeId> targets;
        std::vector<int> flows_per_user(s.users.size(), 0);
        if (param == SweepParam::connections) {
            targets.assign(order.begin(), order.begin() + std::min<std::size_t>(2, order.size()));
            for (int j = 0; j < value; ++j) {
                ++flows_per_user[static_cast<std::size_t>(j) % s.users.size()];
            }
        } else {
            if (static_cast<std::size_t>(value) > order.size()) {
                throw DomainError("connected-vnfs " + std::to_string(value) + " exceeds the "
                                  + std::to_string(order.size()) + " VNFs of request '" + req.id + "'");
            }
            targets.assign(order.begin(), order.begin() + value);
            std::fill(flows_per_user.begin(), flows_per_user.end(), 1);
        }
        std::vector<UserAttachment> kept;
        for (const auto& a : req.users) {
            if (param == SweepParam::connections
                && std::find(targets.begin(), targets.end(), a.vnf) == targets.end()) {
                kept.push_back(a);
            }
        }
        for (VnfTypeId v : param == SweepParam::connections ? targets : order) {
            const bool on = std::find(targets.begin(), targets.end(), v) != targets.end();
            for (std::size_t u = 0; u < s.users.size(); ++u) {
                if (on && flows_per_user[u] > 0) {
                    kept.push_back({UserId(u), v, true, rate * flows_per_user[u]});
                } else if (param == SweepParam::connected_vnfs) {
                    kept.push_back({UserId(u), v, false, 0.0});
                }
            }
        }
        req.users = std::move(kept);
    }
    validate(s);
    return s;
}

/// Slot by which every threshold is crossed under any schedule that keeps
/// each VNF placed: each quantity advances at least at its slowest rate.
inline Slot completion_bound(const Scenario& s)
{
    const double len = s.sim.slot_length;
    double worst_node_bw = INFINITY;
    for (const auto& a : s.nodes) {
        for (const auto& b : s.nodes) {
            if (&a != &b) {
                worst_node_bw = std::min(worst_node_bw, s.network.bandwidth(a.domain, b.domain));
            }
        }
    }
    double worst = 0;
    auto slots_for = [&](double amount, double per_unit) {
        if (amount <= 0) {
            return 0.0;
        }
        return std::ceil(amount * per_unit / len);
    };
    for (const auto& req : s.requests) {
        for (VnfTypeId v : req.vnfs) {
            double d = 0;
            for (const auto& n : s.nodes) {
                d = std::max(d, n.processing_delay[v.index()]);
            }
            worst = std::max(worst, slots_for(incoming_traffic(req, v), d));
        }
        for (const auto& e : req.edges) {
            worst = std::max(worst, slots_for(e.rate, std::isfinite(worst_node_bw) ? 1.0 / worst_node_bw : 0.0));
        }
        for (const auto& u : req.users) {
            const EndUser& eu = s.user(u.user);
            const double bw = std::min(eu.cloud_bandwidth, eu.fog_bandwidth);
            worst = std::max(worst, slots_for(u.rate, 1.0 / bw));
        }
    }
    return static_cast<Slot>(worst) + 1;
}

inline constexpr Slot horizon_safety_factor = 4;

/// Largest slot index a run may reach.
inline Slot horizon_cap(const Scenario& s, std::optional<Slot> override_slots)
{
    Slot cap = horizon_safety_factor * completion_bound(s);
    if (override_slots) {
        cap = std::min(cap, *override_slots - 1);
    } else if (s.sim.slots) {
        cap = std::min(cap, *s.sim.slots - 1);
    }
    return std::max<Slot>(cap, 0);
}

inline MobilityTrace make_trace(const Scenario& s, std::uint64_t seed, Slot horizon)
{
    if (s.sim.mobility == MobilityMode::trace) {
        std::ifstream in(s.sim.trace_path);
        if (!in) {
            throw Error("cannot open mobility trace '" + s.sim.trace_path + "'");
        }
        return read_mobility_trace(in, s, horizon);
    }
    return MobilityTrace::uniform(make_rng(seed, Stream::mobility)(), s.sim.area_side, horizon);
}

struct RunOptions
{
    std::optional<Slot> slots;
    std::optional<double> p_move;
    bool check{false};
};

/// One simulation of \p base (before demand redraw) under \p planner.
inline RunMetrics run_simulation(const Scenario& base, PlannerKind planner, std::uint64_t seed,
                                 const RunOptions& opts = {})
{
    const Scenario s = prepare_scenario(base, seed);
    const Slot cap = horizon_cap(s, opts.slots);
    const NetworkModel net(s, make_trace(s, seed, cap));

    RunMetrics m;
    m.planner = planner;
    m.seed = seed;

    auto assert_feasible = [&](const Slice& slice, Slot t) {
        auto report = is_feasible(slice, net, t);
        if (opts.check) {
            m.violations.insert(m.violations.end(), report.violations.begin(), report.violations.end());
        }
        if (!report.feasible()) {
            std::ostringstream os;
            write_feasibility_csv(os, report);
            throw FeasibilityAssertion("planner " + std::string(to_string(planner)) + " produced an infeasible slot "
                                       + std::to_string(t) + "\n" + os.str());
        }
    };

    ProgressState progress(s);
    Schedule schedule(initial_placement(net, seed));
    assert_feasible(schedule.back(), 0);
    progress.advance(net, schedule.back(), 0);

    PlannerState state;
    state.network = &net;
    state.progress = &progress;
    state.rng = make_rng(seed, Stream::planner);
    state.p_move = opts.p_move.value_or(s.sim.p_move);

    for (Slot t = 1; t <= cap && !progress.all_complete(); ++t) {
        state.slice = schedule.back();
        Slice next = planner_step(planner, state, t);
        std::uint32_t moved = 0;
        for (const auto& d : state.decisions) {
            moved += d.moved() ? 1 : 0;
            m.stalls += d.stalled ? 1 : 0;
        }
        const bool changed = !(next == schedule.back());
        if (changed || opts.check) {
            assert_feasible(next, t);
        }
        if (moved > 0) {
            m.migrations_by_slot.emplace_back(t, moved);
        }
        schedule.push(std::move(next));
        progress.advance(net, schedule.back(), t);
    }

    m.slots = schedule.end();
    m.makespan = makespan_report(progress, net, schedule, true);
    m.migrations = migration_count(s, schedule);
    m.migrations_per_slot = static_cast<double>(m.migrations) / static_cast<double>(m.slots);
    return m;
}

struct OracleComparison
{
    std::size_t steps{0};
    std::size_t decisions{0};
    std::size_t moves{0};       ///< decisions that changed the host
    std::size_t mismatches{0};
    std::vector<std::string> details;
};

/// Runs the acm planner and, at every slot, the exhaustive step from the same
/// state, comparing the node each VNF is sent to.
inline OracleComparison compare_with_oracle(const Scenario& base, std::uint64_t seed, std::optional<Slot> slots = {})
{
    const Scenario s = prepare_scenario(base, seed);
    const Slot cap = horizon_cap(s, slots);
    const NetworkModel net(s, make_trace(s, seed, cap));
    ProgressState progress(s);
    Schedule schedule(initial_placement(net, seed));
    progress.advance(net, schedule.back(), 0);
    PlannerState state;
    state.network = &net;
    state.progress = &progress;
    state.rng = make_rng(seed, Stream::planner);
    OracleComparison out;
    for (Slot t = 1; t <= cap && !progress.all_complete(); ++t) {
        state.slice = schedule.back();
        PlannerState shadow = state;
        Slice next = acm_step(state, t);
        exhaustive_step(shadow, t);
        ++out.steps;
        out.decisions += state.decisions.size();
        for (const auto& d : state.decisions) {
            out.moves += d.moved() ? 1 : 0;
        }
        if (state.decisions != shadow.decisions) {
            ++out.mismatches;
            out.details.push_back("slot " + std::to_string(t) + ": acm and exhaustive choices differ");
        }
        schedule.push(std::move(next));
        progress.advance(net, schedule.back(), t);
    }
    return out;
}

namespace detail {

/// Runs jobs(i) for i in [0, n) on the available cores; rethrows the
/// exception of the lowest failing index.
template <typename Job>
void parallel_for(std::size_t n, Job&& job)
{
    const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(n, std::thread::hardware_concurrency()));
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto work = [&]() {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                job(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back(work);
        }
    }
    for (auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

} // namespace detail

struct NamedScenario
{
    std::string name;
    Scenario scenario;
};

/// Every (scenario, planner, sweep value, replication) combination; seeds
/// are seed, seed+1, ... and shared across planners and sweep values.
inline std::vector<RunMetrics> run_batch(const std::vector<NamedScenario>& scenarios,
                                         const std::vector<PlannerKind>& planners, std::uint64_t seed,
                                         int replications, const std::optional<SweepSpec>& sweep,
                                         const RunOptions& opts = {})
{
    struct Job
    {
        std::size_t scenario;
        PlannerKind planner;
        std::size_t point;
        std::uint64_t seed;
    };
    const std::size_t points = sweep ? sweep->values.size() : 1;
    std::vector<std::vector<Scenario>> variants(scenarios.size());
    for (std::size_t i = 0; i < scenarios.size(); ++i) {
        for (std::size_t p = 0; p < points; ++p) {
            variants[i].push_back(sweep ? apply_sweep(scenarios[i].scenario, sweep->param, sweep->values[p])
                                        : scenarios[i].scenario);
        }
    }
    std::vector<Job> jobs;
    for (std::size_t i = 0; i < scenarios.size(); ++i) {
        for (PlannerKind k : planners) {
            for (std::size_t p = 0; p < points; ++p) {
                for (int r = 0; r < replications; ++r) {
                    jobs.push_back({i, k, p, seed + static_cast<std::uint64_t>(r)});
                }
            }
        }
    }
    std::vector<RunMetrics> out(jobs.size());
    detail::parallel_for(jobs.size(), [&](std::size_t j) {
        const Job& job = jobs[j];
        RunMetrics m = run_simulation(variants[job.scenario][job.point], job.planner, job.seed, opts);
        m.scenario = scenarios[job.scenario].name;
        if (sweep) {
            m.sweep_param = sweep->param;
            m.sweep_value = sweep->values[job.point];
        }
        out[j] = std::move(m);
    });
    return out;
}

inline std::vector<RunMetrics> run_config(const RunConfig& c)
{
    validate(c);
    std::vector<NamedScenario> scenarios;
    for (const auto& p : c.scenarios) {
        scenarios.push_back({p.stem().string(), load_scenario(p)});
    }
    return run_batch(scenarios, c.planners, c.seed, c.replications, c.sweep, {c.slots, c.p_move, c.check});
}

/// Alias of run_batch keyed by a sweep spec.
inline std::vector<RunMetrics> sweep(const std::vector<NamedScenario>& scenarios,
                                     const std::vector<PlannerKind>& planners, const SweepSpec& spec,
                                     std::uint64_t seed, int replications, const RunOptions& opts = {})
{
    return run_batch(scenarios, planners, seed, replications, spec, opts);
}

/// Mean and standard deviation over the replications of one sweep point.
struct SummaryRow
{
    std::string scenario;
    PlannerKind planner{PlannerKind::acm};
    std::optional<SweepParam> sweep_param;
    int sweep_value{0};
    std::size_t runs{0};
    double makespan_mean{0};
    double makespan_sd{0};
    double migrations_per_slot_mean{0};
    double migrations_per_slot_sd{0};
};

inline void sort_runs(std::vector<RunMetrics>& runs)
{
    std::stable_sort(runs.begin(), runs.end(), [](const RunMetrics& a, const RunMetrics& b) {
        return std::tuple(to_string(a.planner), a.sweep_value, a.seed, a.scenario)
               < std::tuple(to_string(b.planner), b.sweep_value, b.seed, b.scenario);
    });
}

inline std::vector<SummaryRow> summarize(const std::vector<RunMetrics>& runs)
{
    std::map<std::tuple<std::string, std::string_view, int>, std::vector<const RunMetrics*>> groups;
    for (const auto& r : runs) {
        groups[{r.scenario, to_string(r.planner), r.sweep_value}].push_back(&r);
    }
    std::vector<SummaryRow> out;
    for (const auto& [key, members] : groups) {
        std::vector<double> ms;
        std::vector<double> mig;
        for (const auto* r : members) {
            ms.push_back(r->makespan.objective);
            mig.push_back(r->migrations_per_slot);
        }
        SummaryRow row;
        row.scenario = std::get<0>(key);
        row.planner = members.front()->planner;
        row.sweep_param = members.front()->sweep_param;
        row.sweep_value = std::get<2>(key);
        row.runs = members.size();
        row.makespan_mean = stats::mean(ms);
        row.makespan_sd = stats::stddev(ms);
        row.migrations_per_slot_mean = stats::mean(mig);
        row.migrations_per_slot_sd = stats::stddev(mig);
        out.push_back(row);
    }
    return out;
}

inline void write_results_csv(std::ostream& os, std::vector<RunMetrics> runs)
{
    sort_runs(runs);
    using detail::format_double;
    os << "planner,sweep_param,sweep_value,seed,scenario,M_proc,M_com,M_mig,M,migrations,slots,"
          "mean_migrations_per_slot,stalls,complete\n";
    for (const auto& r : runs) {
        os << to_string(r.planner) << ',' << (r.sweep_param ? to_string(*r.sweep_param) : "") << ','
           << r.sweep_value << ',' << r.seed << ',' << r.scenario << ',' << format_double(r.processing()) << ','
           << format_double(r.communication()) << ',' << format_double(r.migration()) << ','
           << format_double(r.makespan.objective) << ',' << r.migrations << ',' << r.slots << ','
           << format_double(r.migrations_per_slot) << ',' << r.stalls << ',' << (r.makespan.complete ? 1 : 0)
           << '\n';
    }
}

inline void write_summary_csv(std::ostream& os, const std::vector<SummaryRow>& rows)
{
    using detail::format_double;
    os << "scenario,planner,sweep_param,sweep_value,runs,M_mean,M_sd,migrations_per_slot_mean,"
          "migrations_per_slot_sd\n";
    for (const auto& r : rows) {
        os << r.scenario << ',' << to_string(r.planner) << ',' << (r.sweep_param ? to_string(*r.sweep_param) : "")
           << ',' << r.sweep_value << ',' << r.runs << ',' << format_double(r.makespan_mean) << ','
           << format_double(r.makespan_sd) << ',' << format_double(r.migrations_per_slot_mean) << ','
           << format_double(r.migrations_per_slot_sd) << '\n';
    }
}

/// Writes results.csv, summary.csv, makespan.svg and migrations.svg.
inline void emit_results(const std::vector<RunMetrics>& runs, const std::filesystem::path& dir)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    auto open = [&](const char* name) {
        std::ofstream f(dir / name, std::ios::binary);
        if (!f) {
            throw Error("cannot write '" + (dir / name).string() + "'");
        }
        return f;
    };
    {
        auto f = open("results.csv");
        write_results_csv(f, runs);
    }
    const auto rows = summarize(runs);
    {
        auto f = open("summary.csv");
        write_summary_csv(f, rows);
    }
    std::set<std::string> scenario_names;
    for (const auto& r : rows) {
        scenario_names.insert(r.scenario);
    }
    const std::string x_label = !runs.empty() && runs.front().sweep_param
                                    ? std::string(to_string(*runs.front().sweep_param))
                                    : std::string("sweep value");
    auto chart = [&](const char* title, const char* y_label, double SummaryRow::*field) {
        plot::Chart c{title, x_label, y_label, {}};
        std::map<std::string, plot::Series> by_name;
        for (const auto& r : rows) {
            const std::string name = scenario_names.size() > 1
                                         ? r.scenario + " " + std::string(to_string(r.planner))
                                         : std::string(to_string(r.planner));
            auto& s = by_name[name];
            s.name = name;
            s.points.emplace_back(r.sweep_value, r.*field);
        }
        for (auto& [name, s] : by_name) {
            c.series.push_back(std::move(s));
        }
        return c;
    };
    {
        auto f = open("makespan.svg");
        plot::write_svg(f, chart("Mean makespan", "makespan (ms)", &SummaryRow::makespan_mean));
    }
    {
        auto f = open("migrations.svg");
        plot::write_svg(f, chart("Mean migrations per slot", "migrations per slot",
                                 &SummaryRow::migrations_per_slot_mean));
    }
}

} // namespace fogmig

#endif // FOGMIG_HARNESS_HPP
