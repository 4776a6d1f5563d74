#include "htn/json_io.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

namespace htn {

namespace {

using nlohmann::json;

void check_keys(const json& obj, const std::string& where,
                const std::set<std::string>& allowed) {
    if (!obj.is_object()) throw ParseError(where + " must be an object");
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key()))
            throw ParseError("unknown field \"" + it.key() + "\" in " + where);
}

std::vector<std::string> string_list(const json& j, const std::string& where) {
    if (!j.is_array()) throw ParseError(where + " must be an array of strings");
    std::vector<std::string> out;
    for (const json& item : j) {
        if (!item.is_string()) throw ParseError(where + " must contain only strings");
        out.push_back(item.get<std::string>());
    }
    return out;
}

const json& require(const json& obj, const std::string& key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) throw ParseError(where + " is missing field \"" + key + "\"");
    return *it;
}

TaskNetwork parse_network(const json& j, const std::string& where) {
    check_keys(j, where, {"tasks", "order", "order_kind"});
    const json& jtasks = require(j, "tasks", where);
    if (!jtasks.is_array()) throw ParseError(where + ".tasks must be an array");
    std::vector<std::string> names, labels;
    std::map<std::string, int> id_of;
    for (const json& jt : jtasks) {
        check_keys(jt, where + ".tasks[]", {"id", "label"});
        std::string id = require(jt, "id", where + ".tasks[]").get<std::string>();
        std::string label = require(jt, "label", where + ".tasks[]").get<std::string>();
        if (id_of.count(id)) throw ParseError("duplicate task id \"" + id + "\" in " + where);
        id_of[id] = static_cast<int>(names.size());
        names.push_back(id);
        labels.push_back(label);
    }
    const json& jorder = require(j, "order", where);
    if (!jorder.is_array()) throw ParseError(where + ".order must be an array of pairs");
    std::vector<std::pair<int, int>> arcs;
    for (const json& jp : jorder) {
        if (!jp.is_array() || jp.size() != 2 || !jp[0].is_string() || !jp[1].is_string())
            throw ParseError(where + ".order entries must be [from, to] id pairs");
        auto a = id_of.find(jp[0].get<std::string>());
        auto b = id_of.find(jp[1].get<std::string>());
        if (a == id_of.end() || b == id_of.end())
            throw ParseError(where + ".order references an unknown task id");
        arcs.emplace_back(a->second, b->second);
    }
    if (j.contains("order_kind")) {
        std::string kind = j["order_kind"].get<std::string>();
        if (kind != "cover" && kind != "closure")
            throw ParseError(where + ".order_kind must be \"cover\" or \"closure\"");
    }
    return TaskNetwork(names, labels, arcs);
}

} // namespace

PrimitiveInstance load_instance(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    check_keys(j, "instance", {"format", "version", "domain", "network", "s0", "query"});
    if (require(j, "format", "instance").get<std::string>() != "htn-instance")
        throw ParseError("format must be \"htn-instance\"");
    if (!require(j, "version", "instance").is_number_integer() ||
        j["version"].get<int>() != 1)
        throw ParseError("unsupported version (expected 1)");

    const json& jd = require(j, "domain", "instance");
    check_keys(jd, "domain", {"propositions", "actions", "compounds", "methods"});
    std::vector<std::string> props =
        string_list(require(jd, "propositions", "domain"), "domain.propositions");
    const json& jactions = require(jd, "actions", "domain");
    if (!jactions.is_array()) throw ParseError("domain.actions must be an array");
    std::vector<ActionDef> actions;
    for (const json& ja : jactions) {
        check_keys(ja, "domain.actions[]", {"name", "pre", "del", "add"});
        ActionDef a;
        a.name = require(ja, "name", "domain.actions[]").get<std::string>();
        a.pre = string_list(require(ja, "pre", "domain.actions[]"), "action pre");
        a.del = string_list(require(ja, "del", "domain.actions[]"), "action del");
        a.add = string_list(require(ja, "add", "domain.actions[]"), "action add");
        actions.push_back(std::move(a));
    }
    std::vector<std::string> compounds;
    if (jd.contains("compounds"))
        compounds = string_list(jd["compounds"], "domain.compounds");
    Domain d(props, actions, compounds);
    if (jd.contains("methods")) {
        const json& jm = jd["methods"];
        if (!jm.is_array()) throw ParseError("domain.methods must be an array");
        for (const json& m : jm) {
            check_keys(m, "domain.methods[]", {"compound", "network"});
            std::string compound =
                require(m, "compound", "domain.methods[]").get<std::string>();
            d.add_method(compound,
                         parse_network(require(m, "network", "domain.methods[]"),
                                       "method network"));
        }
    }

    PrimitiveInstance inst;
    inst.domain = d;
    inst.network = parse_network(require(j, "network", "instance"), "network");
    for (const std::string& label : inst.network.labels)
        if (!d.is_action(label) && !d.is_compound(label))
            throw ParseError("task label \"" + label + "\" is neither an action nor a compound");
    inst.s0 = d.make_state(string_list(require(j, "s0", "instance"), "s0"));
    inst.goal = Bitset(d.num_propositions());

    const json& jq = require(j, "query", "instance");
    std::string type = require(jq, "type", "query").get<std::string>();
    inst.query = query_from_name(type);
    switch (inst.query) {
        case Query::Verify: {
            check_keys(jq, "query", {"type", "plan"});
            inst.plan = string_list(require(jq, "plan", "query"), "query.plan");
            for (const std::string& a : inst.plan)
                if (!d.is_action(a))
                    throw ParseError("plan step \"" + a + "\" is not an action");
            break;
        }
        case Query::Exists:
            check_keys(jq, "query", {"type"});
            break;
        case Query::Executable: {
            check_keys(jq, "query", {"type", "demand"});
            const json& jdem = require(jq, "demand", "query");
            if (!jdem.is_object()) throw ParseError("query.demand must be an object");
            for (auto it = jdem.begin(); it != jdem.end(); ++it) {
                if (!d.is_action(it.key()))
                    throw ParseError("demanded name \"" + it.key() + "\" is not an action");
                if (!it.value().is_number_integer() || it.value().get<long long>() < 0)
                    throw ParseError("demand counts must be nonnegative integers");
                inst.demand[it.key()] = it.value().get<int>();
            }
            break;
        }
        case Query::Reach:
            check_keys(jq, "query", {"type", "goal"});
            inst.goal = d.make_state(string_list(require(jq, "goal", "query"), "query.goal"));
            break;
    }
    return inst;
}

PrimitiveInstance load_instance_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_instance(buf.str());
}

namespace {

json network_to_json(const TaskNetwork& tn) {
    json jn;
    jn["tasks"] = json::array();
    for (int t = 0; t < tn.size(); ++t)
        jn["tasks"].push_back({{"id", tn.names[t]}, {"label", tn.labels[t]}});
    jn["order"] = json::array();
    for (auto [a, b] : tn.cover_arcs())
        jn["order"].push_back(json::array({tn.names[a], tn.names[b]}));
    jn["order_kind"] = "cover";
    return jn;
}

} // namespace

std::string save_instance(const PrimitiveInstance& inst) {
    const Domain& d = inst.domain;
    json j;
    j["format"] = "htn-instance";
    j["version"] = 1;
    json jd;
    jd["propositions"] = d.propositions();
    jd["actions"] = json::array();
    for (const ActionDef& a : d.actions())
        jd["actions"].push_back(
            {{"name", a.name}, {"pre", a.pre}, {"del", a.del}, {"add", a.add}});
    if (!d.compounds().empty()) jd["compounds"] = d.compounds();
    if (!d.methods().empty()) {
        jd["methods"] = json::array();
        for (const Method& m : d.methods())
            jd["methods"].push_back(
                {{"compound", m.compound},
                 {"network", network_to_json(d.method_network(m.network_index))}});
    }
    j["domain"] = std::move(jd);
    j["network"] = network_to_json(inst.network);
    j["s0"] = d.state_names(inst.s0);
    json jq;
    jq["type"] = query_name(inst.query);
    switch (inst.query) {
        case Query::Verify: jq["plan"] = inst.plan; break;
        case Query::Exists: break;
        case Query::Executable: {
            json jdem = json::object();
            for (const auto& [a, c] : inst.demand) jdem[a] = c;
            jq["demand"] = std::move(jdem);
            break;
        }
        case Query::Reach: jq["goal"] = d.state_names(inst.goal); break;
    }
    j["query"] = std::move(jq);
    return j.dump(2) + "\n";
}

void save_instance_file(const PrimitiveInstance& inst, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out << save_instance(inst);
}

} // namespace htn
