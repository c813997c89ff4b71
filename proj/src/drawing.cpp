#include "mls/drawing.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace mls {

std::string to_string(ViolationKind k) {
    switch (k) {
        case ViolationKind::NonAxisParallel: return "non-axis-parallel";
        case ViolationKind::Crossing: return "crossing";
        case ViolationKind::Degree: return "degree";
        case ViolationKind::DanglingEndpoint: return "dangling-endpoint";
        case ViolationKind::UnknownNode: return "unknown-node";
        case ViolationKind::DuplicateNode: return "duplicate-node";
        case ViolationKind::SelfLoop: return "self-loop";
    }
    return "unknown";
}

namespace {

std::string fmt(const GridPoint& p) {
    std::ostringstream os;
    os << "(" << p.x << "," << p.y << ")";
    return os.str();
}

std::string edge_name(const DrawingEdge& e) {
    return "edge {" + std::to_string(e.u) + "," + std::to_string(e.v) + "}";
}

}  // namespace

std::vector<Violation> validate_grid_drawing(const GridDrawing& d) {
    std::vector<Violation> out;

    std::map<int, GridPoint> pos;
    std::map<GridPoint, int> node_at;
    for (const auto& n : d.nodes) {
        if (!pos.emplace(n.id, n.pos).second) {
            out.push_back({ViolationKind::DuplicateNode, "node id " + std::to_string(n.id) + " repeated"});
            continue;
        }
        if (!node_at.emplace(n.pos, n.id).second) {
            out.push_back({ViolationKind::DuplicateNode,
                           "nodes " + std::to_string(node_at[n.pos]) + " and " + std::to_string(n.id) +
                               " share position " + fmt(n.pos)});
        }
    }

    std::map<int, int> degree;
    std::set<std::pair<int, int>> seen_pairs;
    // Grid point -> (edge index, is endpoint of that edge's path).
    std::map<GridPoint, std::vector<std::pair<std::size_t, bool>>> usage;

    for (std::size_t ei = 0; ei < d.edges.size(); ++ei) {
        const auto& e = d.edges[ei];
        const std::string name = edge_name(e);
        bool endpoints_known = true;
        for (int id : {e.u, e.v}) {
            if (!pos.count(id)) {
                out.push_back({ViolationKind::UnknownNode, name + " references unknown node " + std::to_string(id)});
                endpoints_known = false;
            }
        }
        if (e.u == e.v) {
            out.push_back({ViolationKind::SelfLoop, name + " is a self-loop"});
            continue;
        }
        if (endpoints_known) {
            ++degree[e.u];
            ++degree[e.v];
            auto key = std::minmax(e.u, e.v);
            if (!seen_pairs.insert(key).second) {
                out.push_back({ViolationKind::Crossing, name + " duplicates an earlier edge"});
            }
        }
        if (e.path.size() < 2) {
            out.push_back({ViolationKind::DanglingEndpoint, name + " has fewer than two path points"});
            continue;
        }
        if (endpoints_known) {
            if (e.path.front() != pos[e.u]) {
                out.push_back({ViolationKind::DanglingEndpoint,
                               name + " path starts at " + fmt(e.path.front()) + ", node " +
                                   std::to_string(e.u) + " is at " + fmt(pos[e.u])});
            }
            if (e.path.back() != pos[e.v]) {
                out.push_back({ViolationKind::DanglingEndpoint,
                               name + " path ends at " + fmt(e.path.back()) + ", node " + std::to_string(e.v) +
                                   " is at " + fmt(pos[e.v])});
            }
        }

        // Expand into unit grid points.
        std::vector<GridPoint> pts{e.path.front()};
        bool axis_ok = true;
        for (std::size_t i = 0; i + 1 < e.path.size(); ++i) {
            const auto a = e.path[i];
            const auto b = e.path[i + 1];
            const bool horizontal = a.y == b.y && a.x != b.x;
            const bool vertical = a.x == b.x && a.y != b.y;
            if (!horizontal && !vertical) {
                out.push_back({ViolationKind::NonAxisParallel,
                               name + " segment " + fmt(a) + "->" + fmt(b) + " is not axis-parallel"});
                axis_ok = false;
                continue;
            }
            const std::int64_t dx = (b.x > a.x) - (b.x < a.x);
            const std::int64_t dy = (b.y > a.y) - (b.y < a.y);
            GridPoint p = a;
            while (p != b) {
                p = {p.x + dx, p.y + dy};
                pts.push_back(p);
            }
        }
        if (!axis_ok) continue;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            usage[pts[i]].emplace_back(ei, i == 0 || i + 1 == pts.size());
        }
    }

    for (const auto& [p, users] : usage) {
        // Endpoint uses at a node location are the only legal sharing.
        std::size_t interior = 0;
        std::set<std::size_t> edges_here;
        for (const auto& [ei, endpoint] : users) {
            edges_here.insert(ei);
            if (!endpoint) ++interior;
        }
        const bool at_node = node_at.count(p) != 0;
        if (interior > 0 && (users.size() > 1 || at_node)) {
            std::string names;
            for (auto ei : edges_here) {
                if (!names.empty()) names += ", ";
                names += edge_name(d.edges[ei]);
            }
            std::string what = at_node ? " passes through node " + std::to_string(node_at.at(p)) : " meet";
            if (edges_here.size() == 1 && !at_node) what = " revisits itself";
            out.push_back({ViolationKind::Crossing, names + what + " at " + fmt(p)});
        } else if (interior == 0 && users.size() > 1 && !at_node) {
            out.push_back({ViolationKind::Crossing, "paths share an endpoint away from any node at " + fmt(p)});
        }
    }

    for (const auto& [id, deg] : degree) {
        if (deg > 4) {
            out.push_back({ViolationKind::Degree,
                           "node " + std::to_string(id) + " has degree " + std::to_string(deg) + " > 4"});
        }
    }
    return out;
}

std::vector<std::vector<std::size_t>> adjacency(const GridDrawing& d) {
    std::map<int, std::size_t> idx;
    for (std::size_t i = 0; i < d.nodes.size(); ++i) idx[d.nodes[i].id] = i;
    std::vector<std::vector<std::size_t>> adj(d.nodes.size());
    for (const auto& e : d.edges) {
        auto iu = idx.find(e.u);
        auto iv = idx.find(e.v);
        if (iu == idx.end() || iv == idx.end() || e.u == e.v) continue;
        adj[iu->second].push_back(iv->second);
        adj[iv->second].push_back(iu->second);
    }
    return adj;
}

namespace {

DrawingEdge edge(int u, int v, std::vector<GridPoint> path) { return {u, v, std::move(path)}; }

}  // namespace

std::vector<std::string> builtin_drawing_names() { return {"k2", "path", "c3", "c4", "c6", "k4"}; }

GridDrawing builtin_drawing(const std::string& name) {
    GridDrawing d;
    if (name == "k2") {
        d.nodes = {{0, {0, 0}}, {1, {1, 0}}};
        d.edges = {edge(0, 1, {{0, 0}, {1, 0}})};
    } else if (name == "path") {
        d.nodes = {{0, {0, 0}}, {1, {1, 0}}, {2, {2, 0}}};
        d.edges = {edge(0, 1, {{0, 0}, {1, 0}}), edge(1, 2, {{1, 0}, {2, 0}})};
    } else if (name == "c3" || name == "odd-cycle") {
        d.nodes = {{0, {0, 0}}, {1, {1, 0}}, {2, {0, 1}}};
        d.edges = {edge(0, 1, {{0, 0}, {1, 0}}), edge(0, 2, {{0, 0}, {0, 1}}),
                   edge(1, 2, {{1, 0}, {1, 1}, {0, 1}})};
    } else if (name == "c4" || name == "square") {
        d.nodes = {{0, {0, 0}}, {1, {1, 0}}, {2, {1, 1}}, {3, {0, 1}}};
        d.edges = {edge(0, 1, {{0, 0}, {1, 0}}), edge(1, 2, {{1, 0}, {1, 1}}),
                   edge(2, 3, {{1, 1}, {0, 1}}), edge(3, 0, {{0, 1}, {0, 0}})};
    } else if (name == "c6" || name == "even-cycle") {
        d.nodes = {{0, {0, 0}}, {1, {1, 0}}, {2, {2, 0}}, {3, {2, 1}}, {4, {1, 1}}, {5, {0, 1}}};
        for (int i = 0; i < 6; ++i) {
            const int j = (i + 1) % 6;
            d.edges.push_back(edge(i, j, {d.nodes[i].pos, d.nodes[j].pos}));
        }
    } else if (name == "k4") {
        d.nodes = {{0, {0, 0}}, {1, {2, 0}}, {2, {1, 1}}, {3, {1, 2}}};
        d.edges = {
            edge(0, 1, {{0, 0}, {2, 0}}),
            edge(0, 2, {{0, 0}, {0, 1}, {1, 1}}),
            edge(1, 2, {{2, 0}, {2, 1}, {1, 1}}),
            edge(2, 3, {{1, 1}, {1, 2}}),
            edge(0, 3, {{0, 0}, {-1, 0}, {-1, 3}, {1, 3}, {1, 2}}),
            edge(1, 3, {{2, 0}, {3, 0}, {3, 2}, {1, 2}}),
        };
    } else {
        throw InputError("unknown built-in drawing '" + name + "'");
    }
    return d;
}

}  // namespace mls
