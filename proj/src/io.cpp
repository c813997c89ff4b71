#include "mls/io.hpp"

#include <cmath>
#include <limits>

namespace mls {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ParseError((path.empty() ? std::string("document") : path) + ": " + what);
}

const json& field(const json& j, const std::string& path, const char* key) {
    if (!j.is_object()) fail(path, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) fail(path, std::string("missing field '") + key + "'");
    return *it;
}

std::string sub(const std::string& path, const char* key) { return path.empty() ? key : path + "." + key; }
std::string sub(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

double as_number(const json& j, const std::string& path) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
    }
    fail(path, "expected a number");
}

std::int64_t as_int(const json& j, const std::string& path) {
    if (j.is_number_integer()) return j.get<std::int64_t>();
    if (j.is_number_float()) {
        const double v = j.get<double>();
        if (std::floor(v) == v && std::abs(v) < 9.0e15) return static_cast<std::int64_t>(v);
    }
    fail(path, "expected an integer");
}

const json& as_array(const json& j, const std::string& path) {
    if (!j.is_array()) fail(path, "expected an array");
    return j;
}

double num_field(const json& j, const std::string& path, const char* key) {
    return as_number(field(j, path, key), sub(path, key));
}
std::int64_t int_field(const json& j, const std::string& path, const char* key) {
    return as_int(field(j, path, key), sub(path, key));
}

Point point_field(const json& j, const std::string& path) {
    const double x = num_field(j, path, "x");
    const double y = num_field(j, path, "y");
    try {
        return Point::from_decimal(x, y);
    } catch (const InputError& e) {
        fail(path, e.what());
    }
}

GridPoint grid_pair(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 2) fail(path, "expected [x, y]");
    return {as_int(j[0], sub(path, std::size_t{0})), as_int(j[1], sub(path, 1))};
}

}  // namespace

json number(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    return v;
}

json parse_json(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t line = 1;
        std::size_t col = 1;
        const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
        for (std::size_t i = 0; i < end; ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        std::string what = e.what();
        if (auto p = what.find("column"); p != std::string::npos) {
            if (auto q = what.find(": ", p); q != std::string::npos) what = what.substr(q + 2);
        }
        throw ParseError("line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + what);
    }
}

// ---------------------------------------------------------------------------
// Drawings, instances, schedules
// ---------------------------------------------------------------------------

json to_json(const GridDrawing& d) {
    json nodes = json::array();
    for (const auto& n : d.nodes) nodes.push_back({{"id", n.id}, {"x", n.pos.x}, {"y", n.pos.y}});
    json edges = json::array();
    for (const auto& e : d.edges) {
        json path = json::array();
        for (const auto& p : e.path) path.push_back({p.x, p.y});
        edges.push_back({{"u", e.u}, {"v", e.v}, {"path", path}});
    }
    return {{"nodes", nodes}, {"edges", edges}};
}

GridDrawing drawing_from_json(const json& j) {
    GridDrawing d;
    const auto& nodes = as_array(field(j, "", "nodes"), "nodes");
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const auto p = sub("nodes", i);
        d.nodes.push_back({static_cast<int>(int_field(nodes[i], p, "id")),
                           {int_field(nodes[i], p, "x"), int_field(nodes[i], p, "y")}});
    }
    const auto& edges = as_array(field(j, "", "edges"), "edges");
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const auto p = sub("edges", i);
        DrawingEdge e;
        e.u = static_cast<int>(int_field(edges[i], p, "u"));
        e.v = static_cast<int>(int_field(edges[i], p, "v"));
        const auto pp = sub(p, "path");
        const auto& path = as_array(field(edges[i], p, "path"), pp);
        for (std::size_t k = 0; k < path.size(); ++k) e.path.push_back(grid_pair(path[k], sub(pp, k)));
        d.edges.push_back(std::move(e));
    }
    return d;
}

json to_json(const ModelParams& m) {
    json j = {{"alpha", m.alpha}, {"noise", m.noise}, {"beta", m.beta}};
    if (!m.node_noise.empty()) {
        json a = json::array();
        for (const auto& [id, v] : m.node_noise) a.push_back({{"id", id}, {"noise", v}});
        j["node_noise"] = a;
    }
    if (!m.node_beta.empty()) {
        json a = json::array();
        for (const auto& [id, v] : m.node_beta) a.push_back({{"id", id}, {"beta", v}});
        j["node_beta"] = a;
    }
    return j;
}

ModelParams model_from_json(const json& j) {
    ModelParams m;
    const std::string path = "model";
    if (!j.is_object()) fail(path, "expected an object");
    if (j.contains("alpha")) m.alpha = num_field(j, path, "alpha");
    if (j.contains("noise")) m.noise = num_field(j, path, "noise");
    if (j.contains("beta")) m.beta = num_field(j, path, "beta");
    for (const char* key : {"node_noise", "node_beta"}) {
        if (!j.contains(key)) continue;
        const auto p = sub(path, key);
        const auto& a = as_array(j.at(key), p);
        const bool noise = std::string(key) == "node_noise";
        for (std::size_t i = 0; i < a.size(); ++i) {
            const auto ip = sub(p, i);
            const auto id = int_field(a[i], ip, "id");
            (noise ? m.node_noise : m.node_beta)[id] = num_field(a[i], ip, noise ? "noise" : "beta");
        }
    }
    try {
        m.validate();
    } catch (const InputError& e) {
        fail(path, e.what());
    }
    return m;
}

json to_json(const Instance& inst) {
    json nodes = json::array();
    for (const auto& n : inst.nodes()) nodes.push_back({{"id", n.id}, {"x", n.pos.x()}, {"y", n.pos.y()}});
    json msgs = json::array();
    for (const auto& m : inst.messages()) msgs.push_back({{"s", m.sender}, {"r", m.receiver}, {"copies", m.copies}});
    return {{"model", to_json(inst.model())}, {"nodes", nodes}, {"messages", msgs}};
}

Instance instance_from_json(const json& j) {
    ModelParams model;
    if (j.is_object() && j.contains("model")) model = model_from_json(j.at("model"));
    std::vector<Node> nodes;
    const auto& jn = as_array(field(j, "", "nodes"), "nodes");
    nodes.reserve(jn.size());
    for (std::size_t i = 0; i < jn.size(); ++i) {
        const auto p = sub("nodes", i);
        nodes.push_back({int_field(jn[i], p, "id"), point_field(jn[i], p)});
    }
    std::vector<Message> msgs;
    const auto& jm = as_array(field(j, "", "messages"), "messages");
    msgs.reserve(jm.size());
    for (std::size_t i = 0; i < jm.size(); ++i) {
        const auto p = sub("messages", i);
        int copies = 1;
        if (jm[i].is_object() && jm[i].contains("copies")) copies = static_cast<int>(int_field(jm[i], p, "copies"));
        msgs.push_back({int_field(jm[i], p, "s"), int_field(jm[i], p, "r"), copies});
    }
    return Instance(std::move(model), std::move(nodes), std::move(msgs));
}

json to_json(const Schedule& s) {
    json rounds = json::array();
    for (const auto& r : s.rounds) {
        json round = json::array();
        for (const auto& c : r) round.push_back({{"msg", c.msg}, {"copy", c.copy}, {"power", c.power}});
        rounds.push_back(round);
    }
    return {{"rounds", rounds}};
}

Schedule schedule_from_json(const json& j) {
    Schedule s;
    const auto& rounds = as_array(field(j, "", "rounds"), "rounds");
    for (std::size_t r = 0; r < rounds.size(); ++r) {
        const auto rp = sub("rounds", r);
        const auto& round = as_array(rounds[r], rp);
        Round out;
        for (std::size_t k = 0; k < round.size(); ++k) {
            const auto p = sub(rp, k);
            const auto msg = int_field(round[k], p, "msg");
            if (msg < 0) fail(sub(p, "msg"), "must be nonnegative");
            int copy = 0;
            double power = 1.0;
            if (round[k].contains("copy")) copy = static_cast<int>(int_field(round[k], p, "copy"));
            if (round[k].contains("power")) power = num_field(round[k], p, "power");
            out.push_back({static_cast<std::size_t>(msg), copy, power});
        }
        s.rounds.push_back(std::move(out));
    }
    return s;
}

json to_json(const GadgetMap& m) {
    json gadgets = json::array();
    for (const auto& g : m.gadgets) {
        json j = {{"id", g.id}, {"type", g.is_node ? "node" : "edge"}};
        if (g.is_node) {
            j["owner"] = g.owner;
            j["columns"] = g.columns;
            j["attachments"] = g.attachments;
        } else {
            j["u"] = g.u;
            j["v"] = g.v;
            j["cls"] = g.cls;
            j["lane"] = g.lane;
        }
        gadgets.push_back(j);
    }
    json msgs = json::array();
    for (const auto& t : m.messages) msgs.push_back({t.gadget, to_string(t.kind), t.cls, t.column});
    return {{"gadgets", gadgets}, {"messages", msgs}};
}

GadgetMap gadget_map_from_json(const json& j) {
    GadgetMap m;
    const std::string root = "gadget_map";
    const auto& gs = as_array(field(j, root, "gadgets"), sub(root, "gadgets"));
    for (std::size_t i = 0; i < gs.size(); ++i) {
        const auto p = sub(sub(root, "gadgets"), i);
        GadgetInfo g;
        g.id = static_cast<int>(int_field(gs[i], p, "id"));
        const auto& type = field(gs[i], p, "type");
        if (type != "node" && type != "edge") fail(sub(p, "type"), "expected \"node\" or \"edge\"");
        g.is_node = type == "node";
        if (g.is_node) {
            g.owner = static_cast<int>(int_field(gs[i], p, "owner"));
            g.columns = static_cast<int>(int_field(gs[i], p, "columns"));
            const auto ap = sub(p, "attachments");
            const auto& a = as_array(field(gs[i], p, "attachments"), ap);
            for (std::size_t k = 0; k < a.size(); ++k) g.attachments.push_back(static_cast<int>(as_int(a[k], sub(ap, k))));
        } else {
            g.u = static_cast<int>(int_field(gs[i], p, "u"));
            g.v = static_cast<int>(int_field(gs[i], p, "v"));
            g.cls = static_cast<int>(int_field(gs[i], p, "cls"));
            g.lane = static_cast<int>(int_field(gs[i], p, "lane"));
        }
        m.gadgets.push_back(std::move(g));
    }
    const auto mp = sub(root, "messages");
    const auto& ms = as_array(field(j, root, "messages"), mp);
    for (std::size_t i = 0; i < ms.size(); ++i) {
        const auto p = sub(mp, i);
        if (!ms[i].is_array() || ms[i].size() != 4 || !ms[i][1].is_string()) {
            fail(p, "expected [gadget, kind, cls, column]");
        }
        MessageTag t;
        t.gadget = static_cast<int>(as_int(ms[i][0], sub(p, std::size_t{0})));
        try {
            t.kind = message_kind_from_string(ms[i][1].get<std::string>());
        } catch (const InputError& e) {
            fail(sub(p, 1), e.what());
        }
        t.cls = static_cast<int>(as_int(ms[i][2], sub(p, 2)));
        t.column = static_cast<int>(as_int(ms[i][3], sub(p, 3)));
        m.messages.push_back(t);
    }
    return m;
}

json to_json(const std::map<int, int>& coloring) {
    json a = json::array();
    for (const auto& [id, c] : coloring) a.push_back({{"id", id}, {"color", c}});
    return a;
}

std::map<int, int> coloring_from_json(const json& j) {
    std::map<int, int> out;
    const auto& a = as_array(j, "coloring");
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto p = sub("coloring", i);
        out[static_cast<int>(int_field(a[i], p, "id"))] = static_cast<int>(int_field(a[i], p, "color"));
    }
    return out;
}

GridDrawing load_grid_drawing(const std::string& text) { return drawing_from_json(parse_json(text)); }
std::string save_grid_drawing(const GridDrawing& d) { return to_json(d).dump(2); }
Instance load_instance(const std::string& text) { return instance_from_json(parse_json(text)); }
std::string save_instance(const Instance& inst) { return to_json(inst).dump(2); }
Schedule load_schedule(const std::string& text) { return schedule_from_json(parse_json(text)); }
std::string save_schedule(const Schedule& s) { return to_json(s).dump(2); }

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

namespace {

json to_json(const TransmissionReport& t, std::size_t index) {
    json j = {{"index", index},
              {"signal", t.signal},
              {"interference", t.interference},
              {"noise", t.noise},
              {"beta", t.beta},
              {"margin", number(t.margin)},
              {"margin_lo", number(t.margin_bounds.lo)},
              {"margin_hi", number(t.margin_bounds.hi)},
              {"certainty", to_string(t.certainty)},
              {"success", t.success},
              {"precision_bits", t.precision_bits}};
    if (!t.reason.empty()) j["reason"] = t.reason;
    return j;
}

}  // namespace

json to_json(const RoundReport& r, bool detail) {
    json viol = json::array();
    for (const auto& v : r.violations) {
        viol.push_back({{"node", v.node}, {"transmissions", v.transmissions}, {"detail", v.detail}});
    }
    json trans = json::array();
    for (std::size_t i = 0; i < r.transmissions.size(); ++i) {
        if (detail || !r.transmissions[i].success) trans.push_back(to_json(r.transmissions[i], i));
    }
    return {{"transmissions", r.transmissions.size()},
            {"success", r.success()},
            {"failures", r.failures()},
            {"undecided", r.undecided()},
            {"worst_margin", number(r.worst_margin())},
            {"violations", viol},
            {detail ? "details" : "failing", trans}};
}

json to_json(const VerifyReport& r, bool detail) {
    json rounds = json::array();
    for (const auto& rr : r.rounds) rounds.push_back(to_json(rr, detail));
    json missing = json::array();
    for (const auto& c : r.partition.missing) missing.push_back({{"msg", c.msg}, {"copy", c.copy}});
    json dup = json::array();
    for (const auto& c : r.partition.duplicated) dup.push_back({{"msg", c.msg}, {"copy", c.copy}});
    return {{"success", r.success},
            {"worst_margin", number(r.worst_margin())},
            {"partition", {{"exact", r.partition.exact}, {"missing", missing}, {"duplicated", dup}}},
            {"rounds", rounds}};
}

json to_json(const FeasibilityResult& r) {
    json j = {{"feasible", r.feasible},
              {"status", to_string(r.status)},
              {"rho", number(r.spectrum.rho)},
              {"rho_lower", number(r.spectrum.lower)},
              {"rho_upper", number(r.spectrum.upper)},
              {"iterations", r.spectrum.iterations},
              {"converged", r.spectrum.converged}};
    if (!r.reason.empty()) j["reason"] = r.reason;
    return j;
}

json to_json(const SearchResult& r) {
    json j = {{"status", to_string(r.status)}, {"rounds", r.rounds}, {"explored", r.explored}};
    if (r.schedule) {
        j["schedule"] = to_json(*r.schedule);
        j["latency"] = r.schedule->rounds.size();
    }
    if (!r.solutions.empty()) j["solutions"] = r.solutions.size();
    return j;
}

json to_json(const LayoutPlan& p) {
    const auto& a = p.audit;
    json nodes = json::array();
    for (const auto& n : p.nodes) {
        nodes.push_back({{"id", n.id},
                         {"center", {n.cx, n.cy}},
                         {"x_left", n.x_left},
                         {"x_right", n.x_right},
                         {"y_top", n.y_top},
                         {"columns", n.columns}});
    }
    json lanes = json::array();
    for (const auto& l : p.lanes) {
        lanes.push_back({{"edge", l.edge},
                         {"u", l.u},
                         {"v", l.v},
                         {"cls", std::string(1, class_letter(l.cls))},
                         {"port_u", to_string(l.port_u)},
                         {"port_v", to_string(l.port_v)},
                         {"length", l.length},
                         {"bends", l.polyline.size() - 2}});
    }
    return {{"n", p.n},
            {"compact", p.compact},
            {"spacing", p.spacing},
            {"pitch", p.pitch},
            {"scale", p.scale},
            {"node_count", p.node_count()},
            {"nodes", nodes},
            {"lanes", lanes},
            {"spacing_audit",
             {{"required", a.required},
              {"required_turn", a.required_turn},
              {"min_lane_lane", number(a.min_lane_lane)},
              {"min_lane_foreign_gadget", number(a.min_lane_foreign_gadget)},
              {"min_lane_own_gadget", number(a.min_lane_own_gadget)},
              {"min_gadget_gadget", number(a.min_gadget_gadget)},
              {"min_turn", number(a.min_turn)},
              {"min_end_segment", number(a.min_end_segment)},
              {"ok", a.ok()}}}};
}

json to_json(const std::vector<FactBound>& facts) {
    json out = json::array();
    for (const auto& f : facts) {
        json terms = json::array();
        for (const auto& t : f.terms) {
            terms.push_back({{"group", t.group},
                             {"kind", to_string(t.kind)},
                             {"distance", t.distance},
                             {"multiplicity", t.multiplicity},
                             {"power", t.power}});
        }
        out.push_back({{"name", f.name},
                       {"receiver", f.receiver},
                       {"printed", f.printed},
                       {"closed_value", f.closed_value},
                       {"series_value", f.series_value},
                       {"series_tail", f.series_tail},
                       {"value", f.value},
                       {"holds", f.holds()},
                       {"terms", terms}});
    }
    return out;
}

json to_json(const AuditReport& r, bool detail) {
    json entries = json::array();
    std::size_t worst = r.entries.size();
    for (std::size_t i = 0; i < r.entries.size(); ++i) {
        if (worst == r.entries.size() || r.entries[i].margin.lo < r.entries[worst].margin.lo) worst = i;
    }
    for (std::size_t i = 0; i < r.entries.size(); ++i) {
        const auto& e = r.entries[i];
        if (!detail && e.status == AuditStatus::Certified && i != worst) continue;
        json j = {{"round", e.round},
                  {"index", e.index},
                  {"msg", e.msg},
                  {"copy", e.copy},
                  {"receiver", e.receiver},
                  {"power", e.power},
                  {"signal", e.signal},
                  {"near", e.near.hi},
                  {"near_count", e.near_count},
                  {"far_count", e.far_count},
                  {"radius", e.radius},
                  {"far_bound", e.far_bound},
                  {"total_bound", e.total_bound()},
                  {"margin_lo", number(e.margin.lo)},
                  {"margin_hi", number(e.margin.hi)},
                  {"status", to_string(e.status)},
                  {"precision_bits", e.precision_bits}};
        if (!e.reason.empty()) j["reason"] = e.reason;
        entries.push_back(j);
    }
    return {{"alpha", r.alpha},
            {"n", r.n},
            {"node_count", r.node_count},
            {"global_far_bound", r.global_far_bound},
            {"global_far_threshold", r.global_far_threshold},
            {"global_far_ok", r.global_far_ok()},
            {"transmissions", r.entries.size()},
            {"certified", r.certified},
            {"failed", r.failed},
            {"unresolved", r.unresolved},
            {"valid", r.valid()},
            {"worst_margin", number(r.worst_margin())},
            {"facts", to_json(r.facts)},
            {detail ? "entries" : "notable", entries}};
}

// ---------------------------------------------------------------------------
// Bundles
// ---------------------------------------------------------------------------

Bundle bundle_from_json(const json& j) {
    if (!j.is_object()) fail("", "expected a JSON object");
    Bundle b;
    const bool bare_drawing = j.contains("edges") && j.contains("nodes");
    const bool bare_instance = j.contains("messages") && j.contains("nodes");
    const bool bare_schedule = j.contains("rounds");
    if (bare_drawing) b.drawing = drawing_from_json(j);
    if (bare_instance) b.instance = instance_from_json(j);
    if (bare_schedule) b.schedule = schedule_from_json(j);
    if (bare_drawing || bare_instance || bare_schedule) return b;

    if (j.contains("drawing")) b.drawing = drawing_from_json(j.at("drawing"));
    if (j.contains("instance")) b.instance = instance_from_json(j.at("instance"));
    if (j.contains("gadget_map")) b.gadget_map = gadget_map_from_json(j.at("gadget_map"));
    if (j.contains("coloring")) b.coloring = coloring_from_json(j.at("coloring"));
    if (j.contains("schedule")) b.schedule = schedule_from_json(j.at("schedule"));
    if (j.contains("params")) b.params = j.at("params");
    if (j.contains("reports")) b.reports = j.at("reports");
    return b;
}

json to_json(const Bundle& b) {
    json j = json::object();
    j["params"] = b.params;
    if (b.drawing) j["drawing"] = to_json(*b.drawing);
    if (b.coloring) j["coloring"] = to_json(*b.coloring);
    if (b.instance) j["instance"] = to_json(*b.instance);
    if (b.gadget_map) j["gadget_map"] = to_json(*b.gadget_map);
    if (b.schedule) j["schedule"] = to_json(*b.schedule);
    if (!b.reports.empty()) j["reports"] = b.reports;
    return j;
}

}  // namespace mls
