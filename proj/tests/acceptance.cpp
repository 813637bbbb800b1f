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


// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails. Pass criterion numbers to run a subset.

#include "support.hpp"

#include <fogmig/stats.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <map>
#include <set>
#include <sstream>

using namespace fogmig;
using namespace fogmig::fixtures;

namespace {

// Pinned parameters.
constexpr int seeds_table = 30;
constexpr int seeds_trend = 30;
constexpr double confidence = 0.95;
constexpr double trend_slack = 0.0;     // non-decreasing means exactly that
constexpr int oracle_instances = 200;
constexpr int chain_cases = 500;
constexpr int random_trees = 1000;
constexpr double budget_table_s = 120;
constexpr double budget_sweep_s = 120;

const std::vector<std::string> apps{"app1", "app2", "app3"};
const std::vector<PlannerKind> baselines{PlannerKind::acm, PlannerKind::none, PlannerKind::random};

struct Verdict
{
    bool pass{false};
    std::string detail;
};

std::string fmt(double v, int precision = 4)
{
    std::ostringstream os;
    os.precision(precision);
    os << v;
    return os.str();
}

NamedScenario preset(const std::string& name) { return {name, load_scenario(scenario_path(name))}; }

/// Values of \p field per seed, for one planner in \p runs.
std::vector<double> per_seed(const std::vector<RunMetrics>& runs, PlannerKind k, double (*field)(const RunMetrics&))
{
    std::map<std::uint64_t, double> by_seed;
    for (const auto& r : runs) {
        if (r.planner == k) {
            by_seed[r.seed] = field(r);
        }
    }
    std::vector<double> out;
    for (const auto& [seed, v] : by_seed) {
        out.push_back(v);
    }
    return out;
}

double objective(const RunMetrics& r) { return r.makespan.objective; }
double mig_rate(const RunMetrics& r) { return r.migrations_per_slot; }

Verdict table_ordering()
{
    const auto start = std::chrono::steady_clock::now();
    Verdict v{true, ""};
    double critical = 0;
    for (const auto& app : apps) {
        const auto runs = run_batch({preset(app)}, baselines, 1, seeds_table, std::nullopt);
        const auto acm = per_seed(runs, PlannerKind::acm, objective);
        const auto none = per_seed(runs, PlannerKind::none, objective);
        const auto rnd = per_seed(runs, PlannerKind::random, objective);
        const auto t1 = stats::paired_greater(acm, none, confidence);
        const auto t2 = stats::paired_greater(none, rnd, confidence);
        const auto t3 = stats::paired_greater(per_seed(runs, PlannerKind::acm, mig_rate),
                                              per_seed(runs, PlannerKind::random, mig_rate), confidence);
        critical = t1.critical;
        v.pass = v.pass && t1.significant && t2.significant && t3.significant;
        v.detail += app + " M " + fmt(stats::mean(acm)) + "/" + fmt(stats::mean(none)) + "/" + fmt(stats::mean(rnd))
                    + " t " + fmt(t1.t, 3) + "," + fmt(t2.t, 3) + "," + fmt(t3.t, 3) + "; ";
        if (!v.pass) {
            break;
        }
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    v.detail += "one-sided critical t " + fmt(critical) + ", " + fmt(secs, 3) + " s";
    if (secs > budget_table_s) {
        v.pass = false;
    }
    return v;
}

/// Mean of \p field per (planner, sweep value).
std::map<PlannerKind, std::vector<std::pair<int, double>>> sweep_means(const std::vector<RunMetrics>& runs,
                                                                        double (*field)(const RunMetrics&))
{
    std::map<std::pair<PlannerKind, int>, std::vector<double>> groups;
    for (const auto& r : runs) {
        groups[{r.planner, r.sweep_value}].push_back(field(r));
    }
    std::map<PlannerKind, std::vector<std::pair<int, double>>> out;
    for (const auto& [key, xs] : groups) {
        out[key.first].emplace_back(key.second, stats::mean(xs));
    }
    return out;
}

bool non_decreasing(const std::vector<std::pair<int, double>>& xs)
{
    for (std::size_t i = 1; i < xs.size(); ++i) {
        if (xs[i].second < xs[i - 1].second - trend_slack) {
            return false;
        }
    }
    return true;
}

Verdict connection_trend()
{
    const auto start = std::chrono::steady_clock::now();
    SweepSpec spec{SweepParam::connections, {}};
    for (int c = 1; c <= 15; ++c) {
        spec.values.push_back(c);
    }
    const auto runs = sweep({preset("app1")}, baselines, spec, 1, seeds_trend);
    const auto means = sweep_means(runs, objective);
    Verdict v{true, ""};
    std::map<PlannerKind, double> slopes;
    for (PlannerKind k : baselines) {
        std::vector<double> x, y;
        for (auto [c, m] : means.at(k)) {
            x.push_back(c);
            y.push_back(m);
        }
        slopes[k] = stats::slope(x, y);
        const bool mono = non_decreasing(means.at(k));
        v.pass = v.pass && mono;
        v.detail += std::string(to_string(k)) + (mono ? " monotone" : " NOT monotone") + " slope "
                    + fmt(slopes[k]) + "; ";
    }
    v.pass = v.pass && slopes[PlannerKind::acm] < slopes[PlannerKind::none]
             && slopes[PlannerKind::acm] < slopes[PlannerKind::random];
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    v.detail += fmt(secs, 3) + " s";
    if (secs > budget_sweep_s) {
        v.pass = false;
    }
    return v;
}

Verdict connected_vnf_trend()
{
    Verdict v{true, ""};
    for (const auto& app : apps) {
        const auto runs = sweep({preset(app)}, {PlannerKind::acm}, {SweepParam::connected_vnfs, {2, 3, 4, 5, 6}}, 1,
                                seeds_trend);
        const auto means = sweep_means(runs, mig_rate).at(PlannerKind::acm);
        const bool mono = non_decreasing(means);
        v.pass = v.pass && mono;
        v.detail += app + (mono ? "" : " NOT") + " monotone [";
        for (std::size_t i = 0; i < means.size(); ++i) {
            v.detail += (i ? " " : "") + fmt(means[i].second, 3);
        }
        v.detail += "]; ";
    }
    return v;
}

Verdict oracle_equivalence()
{
    const auto t = fuzz_acm_against_oracle(4, oracle_instances);
    Verdict v;
    v.pass = t.instances >= oracle_instances && t.mismatches == 0 && t.decisions > 0;
    v.detail = std::to_string(t.instances) + " instances, " + std::to_string(t.decisions) + " decisions ("
               + std::to_string(t.moves) + " moves), " + std::to_string(t.mismatches) + " mismatches";
    return v;
}

Verdict makespan_oracle()
{
    std::mt19937_64 rng(5);
    int complete = 0;
    int incomplete = 0;
    int mismatches = 0;
    while (complete < chain_cases) {
        const ChainCase c = random_chain_case(rng);
        const NetworkModel net(c.s, c.trace());
        const auto want = brute_force_makespan(c);
        if (!want.complete) {
            try {
                request_makespan(net, c.schedule());
                ++mismatches;  // should have refused
            } catch (const IncompleteError&) {
            }
            ++incomplete;
            continue;
        }
        const auto& m = request_makespan(net, c.schedule()).requests.at(0);
        if (m.processing != want.processing || m.communication != want.communication
            || m.migration != want.migration || m.total != want.total) {
            ++mismatches;
        }
        ++complete;
    }
    return {mismatches == 0, std::to_string(complete) + " complete and " + std::to_string(incomplete)
                                 + " incomplete chains, " + std::to_string(mismatches) + " mismatches"};
}

Verdict aggregation_suite()
{
    std::mt19937_64 rng(6);
    std::size_t failures = 0;
    for (int i = 0; i < random_trees; ++i) {
        std::uint32_t next = 0;
        const auto tree = random_tree(rng, next);
        std::map<VnfTypeId, double> values;
        for (VnfTypeId leaf : tree.leaves()) {
            values[leaf] = std::uniform_real_distribution<double>(0, 50)(rng);
        }
        failures += aggregation_failures(tree, values);
    }
    return {failures == 0, std::to_string(random_trees) + " trees, " + std::to_string(failures) + " failures"};
}

Verdict baseline_degeneracies()
{
    Verdict v{true, ""};
    for (const auto& app : apps) {
        const auto s = preset(app).scenario;
        double mig = 0;
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            mig += run_simulation(s, PlannerKind::none, seed).migration();
        }
        v.pass = v.pass && mig == 0;
        v.detail += app + " No-M M_mig " + fmt(mig) + "; ";
    }
    Scenario single = preset("app1").scenario;
    std::erase_if(single.nodes, [](const Node& n) { return n.domain != Domain::cloud; });
    single.nodes.resize(1);
    single.nodes[0].capacity = 1e6;
    validate(single);
    std::size_t moves = 0;
    for (PlannerKind k : {PlannerKind::acm, PlannerKind::none, PlannerKind::random}) {
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            moves += run_simulation(single, k, seed).migrations;
        }
    }
    v.pass = v.pass && moves == 0;
    v.detail += "single node migrations " + std::to_string(moves);
    return v;
}

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Verdict determinism()
{
    const auto base = std::filesystem::temp_directory_path() / "fogmig-acceptance";
    std::filesystem::remove_all(base);
    const std::vector<std::string> invocations{
        "run --scenario " + scenario_path("app1").string() + " --planner random --seed 9 --reps 3",
        "sweep --scenario " + scenario_path("app2").string()
            + " --param connections --values 1..4 --planners acm,none,random --reps 3 --seed 5",
    };
    Verdict v{true, ""};
    for (std::size_t i = 0; i < invocations.size(); ++i) {
        std::string outputs[2];
        for (int rep = 0; rep < 2; ++rep) {
            const auto dir = base / (std::to_string(i) + "-" + std::to_string(rep));
            const std::string cmd = std::string(FOGMIG_CLI) + " " + invocations[i] + " --out " + dir.string()
                                    + " > /dev/null";
            if (std::system(cmd.c_str()) != 0) {
                return {false, "command failed: " + cmd};
            }
            outputs[rep] = slurp(dir / "results.csv");
        }
        const bool same = !outputs[0].empty() && outputs[0] == outputs[1];
        v.pass = v.pass && same;
        v.detail += invocations[i].substr(0, invocations[i].find(' ')) + (same ? " identical" : " DIFFERS") + " ("
                    + std::to_string(outputs[0].size()) + " bytes); ";
    }
    std::filesystem::remove_all(base);
    return v;
}

} // namespace

int main(int argc, char** argv)
{
    const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
        {"table ordering", table_ordering},
        {"connection sweep trend", connection_trend},
        {"connected-VNF sweep trend", connected_vnf_trend},
        {"acm equals exhaustive argmin", oracle_equivalence},
        {"makespan equals brute force", makespan_oracle},
        {"aggregation algebra", aggregation_suite},
        {"baseline degeneracies", baseline_degeneracies},
        {"CLI determinism", determinism},
    };
    std::set<int> wanted;
    for (int i = 1; i < argc; ++i) {
        wanted.insert(std::atoi(argv[i]));
    }
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int n = static_cast<int>(i) + 1;
        if (!wanted.empty() && !wanted.contains(n)) {
            continue;
        }
        Verdict v;
        try {
            v = criteria[i].second();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        std::cout << (v.pass ? "PASS" : "FAIL") << " [" << n << "] " << criteria[i].first << ": " << v.detail
                  << std::endl;
        failed += v.pass ? 0 : 1;
    }
    return failed == 0 ? 0 : 1;
}
