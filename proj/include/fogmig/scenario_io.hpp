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
 * \file fogmig/scenario_io.hpp
 *
 * \brief Scenario documents (JSON) to and from Scenario values.
 *
 * Top-level keys: catalog, nodes, users, requests, network, sim. Quantities
 * are either bare numbers in the internal unit of the field or unit strings
 * such as "100 Mbps", "13 MB", "0.03 s/KB", "0.05 ms". Unknown keys are
 * rejected. emit_scenario() always writes bare internal-unit numbers, so
 * parse_scenario(emit_scenario(s)) == s.
 */

#ifndef FOGMIG_SCENARIO_IO_HPP
#define FOGMIG_SCENARIO_IO_HPP

#include <fogmig/core.hpp>
#include <fogmig/model.hpp>
#include <fogmig/structure.hpp>
#include <fogmig/units.hpp>

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>
#include <string>
#include <string_view>

namespace fogmig {

namespace detail {

using json = nlohmann::json;

class DocumentReader
{
public:
    explicit DocumentReader(const json& root) : root_(root) {}

    Scenario read()
    {
        require_object(root_, "");
        only_keys(root_, "", {"catalog", "nodes", "users", "requests", "network", "sim"});
        Scenario s;
        // sim and network first: node/user defaults depend on them.
        if (root_.contains("sim")) {
            s.sim = read_sim(root_["sim"], "/sim");
        }
        s.network = read_network(field(root_, "", "network"), "/network");
        const json& catalog = field(root_, "", "catalog");
        require_array(catalog, "/catalog");
        for (std::size_t i = 0; i < catalog.size(); ++i) {
            s.catalog.push_back(read_vnf(catalog[i], "/catalog/" + std::to_string(i)));
        }
        const json& nodes = field(root_, "", "nodes");
        require_array(nodes, "/nodes");
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            s.nodes.push_back(read_node(s, nodes[i], "/nodes/" + std::to_string(i)));
        }
        if (root_.contains("users")) {
            const json& users = root_["users"];
            require_array(users, "/users");
            for (std::size_t i = 0; i < users.size(); ++i) {
                s.users.push_back(read_user(s, users[i], "/users/" + std::to_string(i)));
            }
        }
        const json& requests = field(root_, "", "requests");
        require_array(requests, "/requests");
        for (std::size_t i = 0; i < requests.size(); ++i) {
            s.requests.push_back(read_request(s, requests[i], "/requests/" + std::to_string(i)));
        }
        validate(s);
        return s;
    }

private:
    static void require_object(const json& j, const std::string& at)
    {
        if (!j.is_object()) {
            throw SchemaError(at.empty() ? "/" : at, "expected an object");
        }
    }

    static void require_array(const json& j, const std::string& at)
    {
        if (!j.is_array()) {
            throw SchemaError(at, "expected an array");
        }
    }

    static void only_keys(const json& j, const std::string& at, std::initializer_list<std::string_view> allowed)
    {
        for (auto it = j.begin(); it != j.end(); ++it) {
            bool ok = false;
            for (auto a : allowed) {
                ok = ok || it.key() == a;
            }
            if (!ok) {
                throw SchemaError(at + "/" + it.key(), "unknown field");
            }
        }
    }

    static const json& field(const json& j, const std::string& at, const char* key)
    {
        if (!j.contains(key)) {
            throw SchemaError(at + "/" + key, "required field missing");
        }
        return j[key];
    }

    static std::string string_field(const json& j, const std::string& at, const char* key)
    {
        const json& v = field(j, at, key);
        if (!v.is_string()) {
            throw SchemaError(at + "/" + key, "expected a string");
        }
        return v.get<std::string>();
    }

    static double number(const json& v, const std::string& at)
    {
        if (!v.is_number()) {
            throw SchemaError(at, "expected a number");
        }
        return v.get<double>();
    }

    static double quantity(const json& v, const std::string& at, units::Dimension d)
    {
        if (v.is_number()) {
            return v.get<double>();
        }
        if (v.is_string()) {
            try {
                return units::parse(v.get<std::string>(), d);
            } catch (const DomainError& e) {
                throw SchemaError(at, e.what());
            }
        }
        throw SchemaError(at, "expected a number or a unit string (" + std::string(units::internal_unit(d)) + ")");
    }

    static double quantity_field(const json& j, const std::string& at, const char* key, units::Dimension d)
    {
        return quantity(field(j, at, key), at + "/" + key, d);
    }

    static double optional_number(const json& j, const std::string& at, const char* key, double fallback)
    {
        return j.contains(key) ? number(j[key], at + "/" + key) : fallback;
    }

    static Point point(const json& v, const std::string& at)
    {
        if (!v.is_array() || v.size() != 2) {
            throw SchemaError(at, "expected [x, y]");
        }
        return {number(v[0], at + "/0"), number(v[1], at + "/1")};
    }

    static SimParams read_sim(const json& j, const std::string& at)
    {
        require_object(j, at);
        only_keys(j, at,
                  {"area_side", "slot_length", "slots", "seed", "mobility", "vcpu_demand_range", "connection_rate",
                   "p_move", "it", "p"});
        SimParams p;
        p.area_side = optional_number(j, at, "area_side", p.area_side);
        if (j.contains("slot_length")) {
            p.slot_length = quantity(j["slot_length"], at + "/slot_length", units::Dimension::time);
        }
        if (j.contains("slots") && !j["slots"].is_null()) {
            if (!j["slots"].is_number_integer()) {
                throw SchemaError(at + "/slots", "expected an integer");
            }
            p.slots = j["slots"].get<Slot>();
        }
        if (j.contains("seed")) {
            if (!j["seed"].is_number_unsigned() && !j["seed"].is_number_integer()) {
                throw SchemaError(at + "/seed", "expected an integer");
            }
            p.seed = j["seed"].get<std::uint64_t>();
        }
        if (j.contains("mobility")) {
            const json& m = j["mobility"];
            if (m.is_string() && m.get<std::string>() == "uniform") {
                p.mobility = MobilityMode::uniform;
            } else if (m.is_object() && m.contains("trace") && m["trace"].is_string()) {
                only_keys(m, at + "/mobility", {"trace"});
                p.mobility = MobilityMode::trace;
                p.trace_path = m["trace"].get<std::string>();
            } else {
                throw SchemaError(at + "/mobility", "expected \"uniform\" or {\"trace\": <path>}");
            }
        }
        if (j.contains("vcpu_demand_range") && !j["vcpu_demand_range"].is_null()) {
            const json& r = j["vcpu_demand_range"];
            if (!r.is_array() || r.size() != 2 || !r[0].is_number_integer() || !r[1].is_number_integer()) {
                throw SchemaError(at + "/vcpu_demand_range", "expected [lo, hi] integers");
            }
            p.demand_range = std::pair<int, int>{r[0].get<int>(), r[1].get<int>()};
        }
        if (j.contains("connection_rate")) {
            p.connection_rate = quantity(j["connection_rate"], at + "/connection_rate", units::Dimension::rate);
        }
        p.p_move = optional_number(j, at, "p_move", p.p_move);
        p.it = optional_number(j, at, "it", p.it);
        p.p = optional_number(j, at, "p", p.p);
        return p;
    }

    static NetworkParams read_network(const json& j, const std::string& at)
    {
        require_object(j, at);
        only_keys(j, at, {"bandwidth", "propagation_delay", "link_max_utilization"});
        NetworkParams n;
        const json& bw = field(j, at, "bandwidth");
        const std::string bw_at = at + "/bandwidth";
        require_object(bw, bw_at);
        only_keys(bw, bw_at, {"cloud-cloud", "fog-fog", "cloud-fog", "user-cloud", "user-fog"});
        n.cloud_cloud_bandwidth = quantity_field(bw, bw_at, "cloud-cloud", units::Dimension::rate);
        n.fog_fog_bandwidth = quantity_field(bw, bw_at, "fog-fog", units::Dimension::rate);
        n.cloud_fog_bandwidth = quantity_field(bw, bw_at, "cloud-fog", units::Dimension::rate);
        if (bw.contains("user-cloud")) {
            n.user_cloud_bandwidth = quantity(bw["user-cloud"], bw_at + "/user-cloud", units::Dimension::rate);
        }
        if (bw.contains("user-fog")) {
            n.user_fog_bandwidth = quantity(bw["user-fog"], bw_at + "/user-fog", units::Dimension::rate);
        }
        const json& pd = field(j, at, "propagation_delay");
        const std::string pd_at = at + "/propagation_delay";
        require_object(pd, pd_at);
        only_keys(pd, pd_at, {"min", "max"});
        n.min_propagation_delay = quantity_field(pd, pd_at, "min", units::Dimension::time);
        n.max_propagation_delay = quantity_field(pd, pd_at, "max", units::Dimension::time);
        n.link_max_utilization = optional_number(j, at, "link_max_utilization", n.link_max_utilization);
        return n;
    }

    static VnfType read_vnf(const json& j, const std::string& at)
    {
        require_object(j, at);
        only_keys(j, at, {"id", "processing_capacity", "max_utilization", "image_size", "resource_demand"});
        VnfType v;
        v.id = string_field(j, at, "id");
        v.processing_capacity = quantity_field(j, at, "processing_capacity", units::Dimension::rate);
        v.max_utilization = optional_number(j, at, "max_utilization", v.max_utilization);
        v.image_size = quantity_field(j, at, "image_size", units::Dimension::data);
        if (j.contains("resource_demand")) {
            if (!j["resource_demand"].is_number_integer()) {
                throw SchemaError(at + "/resource_demand", "expected an integer VCPU count");
            }
            v.resource_demand = j["resource_demand"].get<int>();
        }
        return v;
    }

    static Node read_node(const Scenario& s, const json& j, const std::string& at)
    {
        require_object(j, at);
        only_keys(j, at, {"id", "domain", "capacity", "max_utilization", "processing_delay", "location"});
        Node n;
        n.id = string_field(j, at, "id");
        const std::string domain = string_field(j, at, "domain");
        if (domain == "cloud") {
            n.domain = Domain::cloud;
        } else if (domain == "fog") {
            n.domain = Domain::fog;
        } else {
            throw SchemaError(at + "/domain", "expected \"cloud\" or \"fog\"");
        }
        n.capacity = number(field(j, at, "capacity"), at + "/capacity");
        n.max_utilization = optional_number(j, at, "max_utilization", n.max_utilization);
        const json& pd = field(j, at, "processing_delay");
        const std::string pd_at = at + "/processing_delay";
        n.processing_delay.assign(s.catalog.size(), 0.0);
        if (pd.is_object()) {
            std::optional<double> fallback;
            if (pd.contains("default")) {
                fallback = quantity(pd["default"], pd_at + "/default", units::Dimension::unit_delay);
            }
            std::vector<char> given(s.catalog.size(), 0);
            for (auto it = pd.begin(); it != pd.end(); ++it) {
                if (it.key() == "default") {
                    continue;
                }
                auto v = s.find_vnf(it.key());
                if (!v) {
                    throw ReferenceError(pd_at + "/" + it.key() + ": unknown VNF type");
                }
                n.processing_delay[v->index()] =
                    quantity(it.value(), pd_at + "/" + it.key(), units::Dimension::unit_delay);
                given[v->index()] = 1;
            }
            for (std::size_t k = 0; k < s.catalog.size(); ++k) {
                if (!given[k]) {
                    if (!fallback) {
                        throw SchemaError(pd_at, "no delay for VNF '" + s.catalog[k].id + "' and no default");
                    }
                    n.processing_delay[k] = *fallback;
                }
            }
        } else {
            n.processing_delay.assign(s.catalog.size(), quantity(pd, pd_at, units::Dimension::unit_delay));
        }
        if (j.contains("location")) {
            n.location = point(j["location"], at + "/location");
        }
        return n;
    }

    static EndUser read_user(const Scenario& s, const json& j, const std::string& at)
    {
        require_object(j, at);
        only_keys(j, at, {"id", "location", "max_utilization", "access_bandwidth"});
        EndUser u;
        u.id = string_field(j, at, "id");
        u.location = point(field(j, at, "location"), at + "/location");
        u.max_utilization = optional_number(j, at, "max_utilization", u.max_utilization);
        u.cloud_bandwidth = s.network.user_cloud_bandwidth;
        u.fog_bandwidth = s.network.user_fog_bandwidth;
        if (j.contains("access_bandwidth")) {
            const json& bw = j["access_bandwidth"];
            const std::string bw_at = at + "/access_bandwidth";
            require_object(bw, bw_at);
            only_keys(bw, bw_at, {"cloud", "fog"});
            if (bw.contains("cloud")) {
                u.cloud_bandwidth = quantity(bw["cloud"], bw_at + "/cloud", units::Dimension::rate);
            }
            if (bw.contains("fog")) {
                u.fog_bandwidth = quantity(bw["fog"], bw_at + "/fog", units::Dimension::rate);
            }
        }
        return u;
    }

    static VnfTypeId resolve_vnf(const Scenario& s, std::string_view name, const std::string& at)
    {
        auto v = s.find_vnf(name);
        if (!v) {
            throw ReferenceError(at + ": unknown VNF type '" + std::string(name) + "'");
        }
        return *v;
    }

    static Request read_request(const Scenario& s, const json& j, const std::string& at)
    {
        require_object(j, at);
        only_keys(j, at, {"id", "vnfs", "structure", "edges", "users"});
        Request r;
        r.id = string_field(j, at, "id");
        const std::string structure_at = at + "/structure";
        const std::string expr = string_field(j, at, "structure");
        r.structure = parse_structure(expr, [&](std::string_view name) { return resolve_vnf(s, name, structure_at); });
        if (j.contains("vnfs")) {
            const json& vs = j["vnfs"];
            require_array(vs, at + "/vnfs");
            for (std::size_t i = 0; i < vs.size(); ++i) {
                const std::string vat = at + "/vnfs/" + std::to_string(i);
                if (!vs[i].is_string()) {
                    throw SchemaError(vat, "expected a VNF id");
                }
                r.vnfs.push_back(resolve_vnf(s, vs[i].get<std::string>(), vat));
            }
        } else {
            r.vnfs = r.structure.leaves();
        }
        if (j.contains("edges")) {
            const json& es = j["edges"];
            require_array(es, at + "/edges");
            for (std::size_t i = 0; i < es.size(); ++i) {
                const std::string eat = at + "/edges/" + std::to_string(i);
                require_object(es[i], eat);
                only_keys(es[i], eat, {"from", "to", "rate"});
                FgEdge e;
                e.from = resolve_vnf(s, string_field(es[i], eat, "from"), eat + "/from");
                e.to = resolve_vnf(s, string_field(es[i], eat, "to"), eat + "/to");
                e.rate = quantity_field(es[i], eat, "rate", units::Dimension::rate);
                r.edges.push_back(e);
            }
        }
        if (j.contains("users")) {
            const json& us = j["users"];
            require_array(us, at + "/users");
            for (std::size_t i = 0; i < us.size(); ++i) {
                const std::string uat = at + "/users/" + std::to_string(i);
                require_object(us[i], uat);
                only_keys(us[i], uat, {"user", "vnf", "connected", "rate"});
                UserAttachment a;
                const std::string uname = string_field(us[i], uat, "user");
                auto uid = s.find_user(uname);
                if (!uid) {
                    throw ReferenceError(uat + "/user: unknown user '" + uname + "'");
                }
                a.user = *uid;
                a.vnf = resolve_vnf(s, string_field(us[i], uat, "vnf"), uat + "/vnf");
                if (us[i].contains("connected")) {
                    if (!us[i]["connected"].is_boolean()) {
                        throw SchemaError(uat + "/connected", "expected a boolean");
                    }
                    a.connected = us[i]["connected"].get<bool>();
                }
                a.rate = quantity_field(us[i], uat, "rate", units::Dimension::rate);
                r.users.push_back(a);
            }
        }
        return r;
    }

    const json& root_;
};

inline json point_json(const Point& p)
{
    return json::array({p.x, p.y});
}

} // namespace detail

/// Parses and validates a scenario document.
inline Scenario parse_scenario(std::string_view text)
{
    detail::json root;
    try {
        root = detail::json::parse(text.begin(), text.end());
    } catch (const detail::json::parse_error& e) {
        throw SchemaError("/", std::string("malformed document: ") + e.what());
    }
    return detail::DocumentReader(root).read();
}

inline Scenario load_scenario(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open scenario file '" + path.string() + "'");
    }
    std::ostringstream oss;
    oss << in.rdbuf();
    Scenario s = parse_scenario(oss.str());
    if (s.sim.mobility == MobilityMode::trace && !s.sim.trace_path.empty()
        && std::filesystem::path(s.sim.trace_path).is_relative()) {
        s.sim.trace_path = (path.parent_path() / s.sim.trace_path).string();
    }
    return s;
}

/// Serializes \p s in internal units.
inline std::string emit_scenario(const Scenario& s)
{
    using detail::json;
    json root;
    auto vnf_name = [&](VnfTypeId v) { return s.vnf(v).id; };

    json catalog = json::array();
    for (const auto& v : s.catalog) {
        catalog.push_back({{"id", v.id},
                           {"processing_capacity", v.processing_capacity},
                           {"max_utilization", v.max_utilization},
                           {"image_size", v.image_size},
                           {"resource_demand", v.resource_demand}});
    }
    root["catalog"] = catalog;

    json nodes = json::array();
    for (const auto& n : s.nodes) {
        json pd = json::object();
        for (std::size_t k = 0; k < s.catalog.size(); ++k) {
            pd[s.catalog[k].id] = n.processing_delay[k];
        }
        json jn = {{"id", n.id},
                   {"domain", std::string(to_string(n.domain))},
                   {"capacity", n.capacity},
                   {"max_utilization", n.max_utilization},
                   {"processing_delay", pd}};
        if (n.location) {
            jn["location"] = detail::point_json(*n.location);
        }
        nodes.push_back(jn);
    }
    root["nodes"] = nodes;

    json users = json::array();
    for (const auto& u : s.users) {
        users.push_back({{"id", u.id},
                         {"location", detail::point_json(u.location)},
                         {"max_utilization", u.max_utilization},
                         {"access_bandwidth", {{"cloud", u.cloud_bandwidth}, {"fog", u.fog_bandwidth}}}});
    }
    root["users"] = users;

    json requests = json::array();
    for (const auto& r : s.requests) {
        json vnfs = json::array();
        for (VnfTypeId v : r.vnfs) {
            vnfs.push_back(vnf_name(v));
        }
        json edges = json::array();
        for (const auto& e : r.edges) {
            edges.push_back({{"from", vnf_name(e.from)}, {"to", vnf_name(e.to)}, {"rate", e.rate}});
        }
        json atts = json::array();
        for (const auto& a : r.users) {
            atts.push_back(
                {{"user", s.user(a.user).id}, {"vnf", vnf_name(a.vnf)}, {"connected", a.connected}, {"rate", a.rate}});
        }
        requests.push_back({{"id", r.id},
                            {"vnfs", vnfs},
                            {"structure", to_expression(r.structure, vnf_name)},
                            {"edges", edges},
                            {"users", atts}});
    }
    root["requests"] = requests;

    const auto& n = s.network;
    root["network"] = {{"bandwidth",
                        {{"cloud-cloud", n.cloud_cloud_bandwidth},
                         {"fog-fog", n.fog_fog_bandwidth},
                         {"cloud-fog", n.cloud_fog_bandwidth},
                         {"user-cloud", n.user_cloud_bandwidth},
                         {"user-fog", n.user_fog_bandwidth}}},
                       {"propagation_delay", {{"min", n.min_propagation_delay}, {"max", n.max_propagation_delay}}},
                       {"link_max_utilization", n.link_max_utilization}};

    const auto& p = s.sim;
    json sim = {{"area_side", p.area_side},
                {"slot_length", p.slot_length},
                {"seed", p.seed},
                {"connection_rate", p.connection_rate},
                {"p_move", p.p_move},
                {"it", p.it},
                {"p", p.p}};
    sim["slots"] = p.slots ? json(*p.slots) : json(nullptr);
    if (p.mobility == MobilityMode::uniform) {
        sim["mobility"] = "uniform";
    } else {
        sim["mobility"] = {{"trace", p.trace_path}};
    }
    sim["vcpu_demand_range"] =
        p.demand_range ? json::array({p.demand_range->first, p.demand_range->second}) : json(nullptr);
    root["sim"] = sim;

    return root.dump(2) + "\n";
}

} // namespace fogmig

#endif // FOGMIG_SCENARIO_IO_HPP
