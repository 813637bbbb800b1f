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

// fogmig: run, sweep and oracle-check placement simulations.

#include <fogmig/harness.hpp>

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

std::filesystem::path default_output_dir()
{
    if (const char* env = std::getenv("FOGMIG_OUTPUT_DIR"); env && *env) {
        return env;
    }
    return "fogmig-out";
}

// "1..15", "2,3,4" or a mix: "1..3,7".
std::vector<int> parse_values(const std::string& text)
{
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) {
            continue;
        }
        if (auto dots = item.find(".."); dots != std::string::npos) {
            const int lo = std::stoi(item.substr(0, dots));
            const int hi = std::stoi(item.substr(dots + 2));
            if (hi < lo) {
                throw fogmig::DomainError("empty range '" + item + "'");
            }
            for (int v = lo; v <= hi; ++v) {
                out.push_back(v);
            }
        } else {
            out.push_back(std::stoi(item));
        }
    }
    if (out.empty()) {
        throw fogmig::DomainError("no sweep values in '" + text + "'");
    }
    return out;
}

std::vector<fogmig::PlannerKind> parse_planners(const std::string& text)
{
    std::vector<fogmig::PlannerKind> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) {
            out.push_back(fogmig::parse_planner(item));
        }
    }
    return out;
}

void print_summary(const std::vector<fogmig::RunMetrics>& runs)
{
    fogmig::write_summary_csv(std::cout, fogmig::summarize(runs));
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Fog placement and migration simulator"};
    app.require_subcommand(1);

    std::vector<std::string> scenarios;
    std::string planner = "acm";
    std::string planners = "acm,none,random";
    std::uint64_t seed = 1;
    std::optional<fogmig::Slot> slots;
    bool check = false;
    std::optional<double> p_move;
    int reps = 1;
    std::string out;
    std::string param;
    std::string values;

    auto* run = app.add_subcommand("run", "simulate one scenario under one planner");
    run->add_option("--scenario", scenarios, "scenario file")->required();
    run->add_option("--planner", planner, "acm|none|random|exact")->capture_default_str();
    run->add_option("--seed", seed, "first seed")->capture_default_str();
    run->add_option("--slots", slots, "slot count cap");
    run->add_flag("--check", check, "check every constraint in every slot and write feasibility.csv");
    run->add_option("--p-move", p_move, "move probability of the random planner");
    run->add_option("--reps", reps, "replications (seeds seed, seed+1, ...)")->capture_default_str();
    run->add_option("--out", out, "output directory (default $FOGMIG_OUTPUT_DIR or ./fogmig-out)");

    auto* sw = app.add_subcommand("sweep", "sweep user traffic over planners and replications");
    sw->add_option("--scenario", scenarios, "scenario files")->required();
    sw->add_option("--param", param, "connections|connected-vnfs")->required();
    sw->add_option("--values", values, "e.g. 1..15 or 2,4,6")->required();
    sw->add_option("--planners", planners, "comma-separated planners")->capture_default_str();
    sw->add_option("--reps", reps, "replications per point")->capture_default_str();
    sw->add_option("--seed", seed, "first seed")->capture_default_str();
    sw->add_option("--slots", slots, "slot count cap");
    sw->add_option("--p-move", p_move, "move probability of the random planner");
    sw->add_option("--out", out, "output directory (default $FOGMIG_OUTPUT_DIR or ./fogmig-out)");

    auto* oracle = app.add_subcommand("oracle", "compare acm against the exhaustive step on a tiny scenario");
    oracle->add_option("--scenario", scenarios, "scenario file")->required();
    oracle->add_option("--seed", seed, "first seed")->capture_default_str();
    oracle->add_option("--reps", reps, "seeds to try")->capture_default_str();
    oracle->add_option("--slots", slots, "slot count cap");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*oracle) {
            const auto s = fogmig::load_scenario(scenarios.front());
            std::size_t mismatches = 0;
            for (int r = 0; r < reps; ++r) {
                const auto cmp = fogmig::compare_with_oracle(s, seed + static_cast<std::uint64_t>(r), slots);
                std::cout << "seed " << seed + static_cast<std::uint64_t>(r) << ": " << cmp.steps << " steps, "
                          << cmp.decisions << " decisions, " << cmp.mismatches << " mismatches\n";
                for (const auto& d : cmp.details) {
                    std::cout << "  " << d << '\n';
                }
                mismatches += cmp.mismatches;
            }
            return mismatches == 0 ? 0 : 1;
        }

        fogmig::RunConfig cfg;
        for (const auto& p : scenarios) {
            cfg.scenarios.emplace_back(p);
        }
        cfg.seed = seed;
        cfg.slots = slots;
        cfg.replications = reps;
        cfg.p_move = p_move;
        cfg.output_dir = out.empty() ? default_output_dir() : std::filesystem::path(out);
        if (*run) {
            cfg.planners = {fogmig::parse_planner(planner)};
            cfg.check = check;
        } else {
            cfg.planners = parse_planners(planners);
            cfg.sweep = fogmig::SweepSpec{fogmig::parse_sweep_param(param), parse_values(values)};
        }
        const auto results = fogmig::run_config(cfg);
        fogmig::emit_results(results, cfg.output_dir);
        if (cfg.check) {
            std::ofstream f(cfg.output_dir / "feasibility.csv", std::ios::binary);
            fogmig::FeasibilityReport all;
            for (const auto& r : results) {
                all.violations.insert(all.violations.end(), r.violations.begin(), r.violations.end());
            }
            fogmig::write_feasibility_csv(f, all);
        }
        print_summary(results);
        return 0;
    } catch (const fogmig::FeasibilityAssertion& e) {
        std::cerr << "fogmig: feasibility assertion failed: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "fogmig: " << e.what() << '\n';
        return 2;
    }
}
