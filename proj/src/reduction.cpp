#include "mls/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "mls/drawing.hpp"
#include "mls/power_control.hpp"

namespace mls {

std::string to_string(MessageKind k) {
    switch (k) {
        case MessageKind::VerticalUp: return "vertical-up";
        case MessageKind::VerticalDown: return "vertical-down";
        case MessageKind::Horizontal: return "horizontal";
        case MessageKind::ChainBold: return "chain-bold";
        case MessageKind::ChainDashed: return "chain-dashed";
        case MessageKind::Boundary: return "boundary";
    }
    return "horizontal";
}

MessageKind message_kind_from_string(const std::string& s) {
    for (auto k : {MessageKind::VerticalUp, MessageKind::VerticalDown, MessageKind::Horizontal, MessageKind::ChainBold,
                   MessageKind::ChainDashed, MessageKind::Boundary}) {
        if (to_string(k) == s) return k;
    }
    throw InputError("unknown message kind '" + s + "'");
}

char class_letter(int cls) {
    static constexpr char kLetters[] = {'R', 'G', 'B'};
    if (cls < 0 || cls > 2) throw InputError("color class must be 0, 1 or 2");
    return kLetters[cls];
}

std::string to_string(Port p) {
    switch (p) {
        case Port::East: return "E";
        case Port::North: return "N";
        case Port::West: return "W";
        case Port::South: return "S";
    }
    return "E";
}

// ---------------------------------------------------------------------------
// Node gadget
// ---------------------------------------------------------------------------

NodeGadget build_node_gadget(int owner, int columns, const std::vector<int>& attachments, Point origin) {
    if (columns < 3) {
        throw ConstructionError("node gadget needs at least 3 columns, got " + std::to_string(columns));
    }
    if (attachments.size() > 12) {
        throw ConstructionError("node gadget supports at most 12 attachments, got " +
                                std::to_string(attachments.size()));
    }
    std::vector<int> att = attachments;
    std::sort(att.begin(), att.end());
    for (std::size_t i = 0; i < att.size(); ++i) {
        const int a = att[i];
        if (a % 2 != 0) throw ConstructionError("attachment column " + std::to_string(a) + " is not an up vertical");
        if (a < 2 || a > columns - 3) {
            throw ConstructionError("attachment column " + std::to_string(a) + " is too close to the gadget end");
        }
        if (i > 0 && a - att[i - 1] < 6) {
            throw ConstructionError("attachment columns " + std::to_string(att[i - 1]) + " and " + std::to_string(a) +
                                    " are closer than 6");
        }
    }

    NodeGadget g;
    g.owner = owner;
    g.origin = origin;
    g.columns = columns;
    g.attachments = att;
    g.messages.reserve(static_cast<std::size_t>(2 * columns - 1));
    for (int i = 0; i < columns; ++i) {
        if (i % 2 == 0) {
            g.messages.push_back({g.bottom(i), g.top(i), MessageKind::VerticalUp, vertical_class(i), i, 1});
        } else {
            g.messages.push_back({g.top(i), g.bottom(i), MessageKind::VerticalDown, vertical_class(i), i, 1});
        }
    }
    for (int i = 0; i + 1 < columns; ++i) {
        // Sent from the end next to the up vertical of the same class.
        const bool left_sends = ((i - 1) % 2 + 2) % 2 == 0;
        const int s = left_sends ? i : i + 1;
        const int r = left_sends ? i + 1 : i;
        g.messages.push_back({g.bottom(s), g.bottom(r), MessageKind::Horizontal, horizontal_class(i), i, 1});
    }
    return g;
}

// ---------------------------------------------------------------------------
// Edge gadget
// ---------------------------------------------------------------------------

LengthPlan adjust_length(std::int64_t target) {
    if (target <= 40) {
        throw ConstructionError("edge gadget length must exceed 40, got " + std::to_string(target));
    }
    const std::int64_t r = target % 4;
    return {(target - r) / 4, 10 * r};
}

namespace {

struct Dir {
    std::int64_t dx = 0;
    std::int64_t dy = 0;
    friend bool operator==(const Dir&, const Dir&) = default;
};

Dir unit_dir(std::int64_t dx, std::int64_t dy) {
    if ((dx != 0) == (dy != 0)) throw ConstructionError("route segment is not axis-parallel or has zero length");
    return {(dx > 0) - (dx < 0), (dy > 0) - (dy < 0)};
}

Dir left_of(Dir d) { return {-d.dy, d.dx}; }

std::string fmt_point(const Point& p) {
    std::ostringstream os;
    os << "(" << p.x() << ", " << p.y() << ")";
    return os.str();
}

}  // namespace

std::vector<GadgetMessage> chain_messages(const std::vector<Point>& chain, int cls) {
    if (chain.size() < 5 || (chain.size() - 1) % 4 != 0) {
        throw ConstructionError("chain edge count must be a positive multiple of 4");
    }
    const std::size_t edges = chain.size() - 1;
    std::vector<GadgetMessage> out;
    out.reserve(edges);
    for (std::size_t i = 0; i < edges; ++i) {
        const bool dashed = i % 2 == 0;
        const std::size_t j = dashed ? i / 2 : (i - 1) / 2;
        const bool backward = j % 2 == 0;
        const Point& s = backward ? chain[i + 1] : chain[i];
        const Point& t = backward ? chain[i] : chain[i + 1];
        MessageKind kind = dashed ? MessageKind::ChainDashed : MessageKind::ChainBold;
        if (i == 0 || i + 1 == edges) kind = MessageKind::Boundary;
        out.push_back({s, t, kind, cls, static_cast<int>(i), dashed ? 2 : 1});
    }
    return out;
}

EdgeGadget build_edge_gadget(int u, int v, int cls, const std::vector<Point>& route, const NodeGadget* gu, int col_u,
                             const NodeGadget* gv, int col_v, double min_turn_spacing) {
    if (cls < 0 || cls > 2) throw ConstructionError("edge gadget class must be 0, 1 or 2");
    if (route.size() < 2) throw ConstructionError("edge gadget route needs at least two points");
    for (const auto& p : route) {
        if (p.x10 % 10 != 0 || p.y10 % 10 != 0) {
            throw ConstructionError("route point " + fmt_point(p) + " is not on the integer grid");
        }
    }
    auto check_end = [&](const NodeGadget* g, int col, const Point& end, const char* side) {
        if (!g) return;
        if (col < 0 || col >= g->columns) throw ConstructionError(std::string(side) + " attachment column out of range");
        if (col % 6 != attachment_residue(cls)) {
            throw ConstructionError(std::string(side) + " attachment column " + std::to_string(col) +
                                    " does not carry an up vertical of class " + class_letter(cls));
        }
        if (g->top(col) != end) {
            throw ConstructionError(std::string(side) + " route end " + fmt_point(end) +
                                    " is not the top node of the attachment column");
        }
    };
    check_end(gu, col_u, route.front(), "u-side");
    check_end(gv, col_v, route.back(), "v-side");

    EdgeGadget g;
    g.u = u;
    g.v = v;
    g.cls = cls;
    g.route = route;

    std::vector<std::int64_t> seg_len;
    std::vector<Dir> seg_dir;
    for (std::size_t i = 0; i + 1 < route.size(); ++i) {
        const auto dx = route[i + 1].x10 - route[i].x10;
        const auto dy = route[i + 1].y10 - route[i].y10;
        seg_dir.push_back(unit_dir(dx, dy));
        seg_len.push_back((std::abs(dx) + std::abs(dy)) / 10);
        if (i > 0 && seg_dir[i].dx == -seg_dir[i - 1].dx && seg_dir[i].dy == -seg_dir[i - 1].dy) {
            throw ConstructionError("edge gadget route reverses direction at " + fmt_point(route[i]));
        }
    }
    for (auto l : seg_len) g.length += l;
    g.plan = adjust_length(g.length);
    const std::int64_t r = g.plan.lengthened / 10;

    std::size_t longest = 0;
    for (std::size_t i = 1; i < seg_len.size(); ++i) {
        if (seg_len[i] > seg_len[longest]) longest = i;
    }
    if (g.plan.lengthened > 0 && seg_len[longest] - r < g.plan.lengthened + 2) {
        throw ConstructionError("longest route segment is too short to host " + std::to_string(g.plan.lengthened) +
                                " lengthened edges");
    }

    std::vector<Point> corners;
    g.chain.push_back(route.front());
    for (std::size_t si = 0; si < seg_len.size(); ++si) {
        const Dir d = seg_dir[si];
        std::int64_t edges = seg_len[si];
        std::int64_t first_long = -1;
        if (si == longest && g.plan.lengthened > 0) {
            edges = seg_len[si] - r;
            first_long = (edges - g.plan.lengthened) / 2;
        }
        Point p = g.chain.back();
        for (std::int64_t e = 0; e < edges; ++e) {
            const bool lengthened = first_long >= 0 && e >= first_long && e < first_long + g.plan.lengthened;
            const std::int64_t step = lengthened ? 11 : 10;
            p = {p.x10 + d.dx * step, p.y10 + d.dy * step};
            g.chain.push_back(p);
        }
        if (p != route[si + 1]) throw ConstructionError("chain does not reach route point " + fmt_point(route[si + 1]));
        if (si + 1 < seg_len.size() && !(seg_dir[si + 1] == d)) {
            g.turns.push_back(g.chain.size() - 1);
            corners.push_back(p);
        }
    }
    const std::size_t edges = g.chain.size() - 1;
    if (edges != static_cast<std::size_t>(4 * g.plan.blocks)) throw ConstructionError("chain edge count mismatch");

    for (std::size_t a = 0; a < corners.size(); ++a) {
        for (std::size_t b = a + 1; b < corners.size(); ++b) {
            if (distance(corners[a], corners[b]) < min_turn_spacing) {
                throw ConstructionError("turns at " + fmt_point(corners[a]) + " and " + fmt_point(corners[b]) +
                                        " are closer than the turn spacing");
            }
        }
    }

    g.messages = chain_messages(g.chain, cls);
    return g;
}

// ---------------------------------------------------------------------------
// Layout
// ---------------------------------------------------------------------------

namespace {

Port port_of(Dir d) {
    if (d.dx > 0) return Port::East;
    if (d.dx < 0) return Port::West;
    if (d.dy > 0) return Port::North;
    return Port::South;
}

Dir grid_dir(const GridPoint& a, const GridPoint& b) { return unit_dir(b.x - a.x, b.y - a.y); }

struct Box {
    std::int64_t x0, x1, y0, y1;
};

Box seg_box(const GridPoint& a, const GridPoint& b) {
    return {std::min(a.x, b.x), std::max(a.x, b.x), std::min(a.y, b.y), std::max(a.y, b.y)};
}

double box_distance(const Box& a, const Box& b) {
    const std::int64_t gx = std::max<std::int64_t>({0, a.x0 - b.x1, b.x0 - a.x1});
    const std::int64_t gy = std::max<std::int64_t>({0, a.y0 - b.y1, b.y0 - a.y1});
    return std::sqrt(static_cast<double>(gx * gx + gy * gy));
}

std::vector<Box> boxes_of(const std::vector<GridPoint>& poly) {
    std::vector<Box> out;
    for (std::size_t i = 0; i + 1 < poly.size(); ++i) out.push_back(seg_box(poly[i], poly[i + 1]));
    return out;
}

double set_distance(const std::vector<Box>& a, const std::vector<Box>& b) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& x : a) {
        for (const auto& y : b) best = std::min(best, box_distance(x, y));
    }
    return best;
}

std::int64_t poly_length(const std::vector<GridPoint>& p) {
    std::int64_t l = 0;
    for (std::size_t i = 0; i + 1 < p.size(); ++i) l += std::abs(p[i + 1].x - p[i].x) + std::abs(p[i + 1].y - p[i].y);
    return l;
}

// Drops an arc length t from the start of the polyline.
std::vector<GridPoint> trim_front(const std::vector<GridPoint>& p, std::int64_t t) {
    std::vector<GridPoint> out;
    std::size_t i = 0;
    GridPoint cur = p.front();
    while (i + 1 < p.size()) {
        const auto seg = std::abs(p[i + 1].x - cur.x) + std::abs(p[i + 1].y - cur.y);
        if (seg > t) {
            const Dir d = grid_dir(cur, p[i + 1]);
            cur = {cur.x + d.dx * t, cur.y + d.dy * t};
            break;
        }
        t -= seg;
        cur = p[i + 1];
        ++i;
    }
    out.push_back(cur);
    for (std::size_t k = i + 1; k < p.size(); ++k) out.push_back(p[k]);
    return out;
}

std::vector<GridPoint> simplify(const std::vector<GridPoint>& in) {
    std::vector<GridPoint> out;
    for (const auto& p : in) {
        if (!out.empty() && out.back() == p) continue;
        if (out.size() >= 2) {
            const auto& a = out[out.size() - 2];
            const auto& b = out.back();
            const bool collinear = (a.x == b.x && b.x == p.x) || (a.y == b.y && b.y == p.y);
            if (collinear) {
                out.back() = p;
                continue;
            }
        }
        out.push_back(p);
    }
    return out;
}

struct EndRequest {
    std::size_t lane = 0;
    bool at_u = true;
    Port port = Port::East;
    int o = 0;  // -1, 0, +1 in units of the pitch
    int cls = 0;
};

std::int64_t port_target(Port p, int o, std::int64_t cx, std::int64_t q) {
    switch (p) {
        case Port::West: return cx + (-3 + o) * q;
        case Port::North: return cx + (1 + o) * q;
        case Port::East: return cx + (4 - o) * q;
        case Port::South: return cx + (7 - o) * q;
    }
    return cx;
}

}  // namespace

std::int64_t LayoutPlan::node_count() const {
    std::int64_t total = 0;
    for (const auto& n : nodes) total += 2 * static_cast<std::int64_t>(n.columns);
    for (const auto& l : lanes) total += l.length - l.length % 4 - 1;
    return total;
}

LayoutPlan layout(const GridDrawing& d, const LayoutParams& params) {
    if (auto v = validate_grid_drawing(d); !v.empty()) {
        std::string msg = "invalid grid drawing: " + to_string(v.front().kind) + ": " + v.front().detail;
        if (v.size() > 1) msg += " (and " + std::to_string(v.size() - 1) + " more)";
        throw InputError(msg);
    }
    if (params.n < 2) throw InputError("size parameter n must be at least 2");
    if (params.compact && params.compact_spacing < 20) throw InputError("compact spacing must be at least 20");

    LayoutPlan plan;
    plan.n = params.n;
    plan.compact = params.compact;
    const std::int64_t n = params.n;
    plan.spacing = params.compact ? params.compact_spacing : 3 * n * n;
    plan.pitch = plan.spacing + 6;
    plan.scale = 20 * plan.pitch;
    const std::int64_t s = plan.spacing;
    const std::int64_t q = plan.pitch;
    const std::int64_t S = plan.scale;

    std::vector<const DrawingNode*> sorted;
    for (const auto& nd : d.nodes) sorted.push_back(&nd);
    std::sort(sorted.begin(), sorted.end(), [](auto* a, auto* b) { return a->id < b->id; });
    std::map<int, std::size_t> slot;
    for (const auto* nd : sorted) {
        slot[nd->id] = plan.nodes.size();
        NodePlacement p;
        p.id = nd->id;
        p.cx = nd->pos.x * S;
        p.cy = nd->pos.y * S;
        plan.nodes.push_back(p);
    }

    // Lanes and their end requests.
    std::vector<std::vector<EndRequest>> requests(plan.nodes.size());
    std::vector<std::vector<GridPoint>> trunk;
    for (std::size_t ei = 0; ei < d.edges.size(); ++ei) {
        const auto& e = d.edges[ei];
        std::vector<GridPoint> path;
        for (const auto& p : e.path) {
            if (path.empty() || path.back() != p) path.push_back(p);
        }
        const Dir du = grid_dir(path[0], path[1]);
        const Dir dv = grid_dir(path[path.size() - 2], path.back());
        for (int lane = -1; lane <= 1; ++lane) {
            LanePlan lp;
            lp.edge = ei;
            lp.u = e.u;
            lp.v = e.v;
            lp.lane = lane;
            lp.cls = lane + 1;
            lp.port_u = port_of(du);
            lp.port_v = port_of({-dv.dx, -dv.dy});
            const Dir wu = left_of(du);
            const Dir wv = left_of(dv);
            const int ou = static_cast<int>(lane * (wu.dx + wu.dy));
            const int ov = static_cast<int>(lane * (wv.dx + wv.dy));
            const std::size_t li = plan.lanes.size();
            requests[slot[e.u]].push_back({li, true, lp.port_u, ou, lp.cls});
            requests[slot[e.v]].push_back({li, false, lp.port_v, ov, lp.cls});

            std::vector<GridPoint> corners;
            for (std::size_t i = 1; i + 1 < path.size(); ++i) {
                const Dir din = grid_dir(path[i - 1], path[i]);
                const Dir dout = grid_dir(path[i], path[i + 1]);
                const Dir a = left_of(din);
                const Dir b = left_of(dout);
                std::int64_t ox = a.dx;
                std::int64_t oy = a.dy;
                if (!(din == dout)) {
                    ox += b.dx;
                    oy += b.dy;
                }
                corners.push_back({path[i].x * S + lane * q * ox, path[i].y * S + lane * q * oy});
            }
            trunk.push_back(std::move(corners));
            plan.lanes.push_back(std::move(lp));
        }
    }

    // Node gadget extents and attachment columns.
    std::vector<std::vector<std::pair<std::size_t, std::vector<GridPoint>>>> local(plan.nodes.size());
    std::vector<std::vector<GridPoint>> local_u(plan.lanes.size());
    std::vector<std::vector<GridPoint>> local_v(plan.lanes.size());
    for (std::size_t ni = 0; ni < plan.nodes.size(); ++ni) {
        auto& p = plan.nodes[ni];
        const auto& reqs = requests[ni];
        bool has_south = false;
        std::int64_t min_t = p.cx;
        std::int64_t max_t = p.cx;
        for (std::size_t k = 0; k < reqs.size(); ++k) {
            const auto t = port_target(reqs[k].port, reqs[k].o, p.cx, q);
            if (k == 0 || t < min_t) min_t = t;
            if (k == 0 || t > max_t) max_t = t;
            has_south = has_south || reqs[k].port == Port::South;
        }
        p.x_left = min_t - q;
        std::int64_t max_att = p.cx;
        std::vector<std::int64_t> att_x(reqs.size());
        for (std::size_t k = 0; k < reqs.size(); ++k) {
            std::int64_t col = port_target(reqs[k].port, reqs[k].o, p.cx, q) - p.x_left;
            while (col % 6 != attachment_residue(reqs[k].cls)) ++col;
            att_x[k] = p.x_left + col;
            max_att = k == 0 ? att_x[k] : std::max(max_att, att_x[k]);
            p.attachments.emplace_back(reqs[k].lane, static_cast<int>(col));
            auto& lp = plan.lanes[reqs[k].lane];
            (reqs[k].at_u ? lp.col_u : lp.col_v) = static_cast<int>(col);
        }
        p.x_right = reqs.empty() ? p.cx + q : max_att + q;
        p.columns = static_cast<int>(p.x_right - p.x_left + 1);
        p.y_top = p.cy - (has_south ? 5 : 2) * q;
        const std::int64_t y_bottom = p.y_top - 1;

        for (std::size_t k = 0; k < reqs.size(); ++k) {
            const auto& r = reqs[k];
            const std::int64_t xa = att_x[k];
            const std::int64_t o = r.o * q;
            std::vector<GridPoint> route{{xa, p.y_top}};
            switch (r.port) {
                case Port::West:
                case Port::East: route.push_back({xa, p.cy + o}); break;
                case Port::North:
                    route.push_back({xa, p.cy + o});
                    route.push_back({p.cx + o, p.cy + o});
                    break;
                case Port::South: {
                    const std::int64_t k2 = 2 + r.o;
                    const std::int64_t h = p.y_top + k2 * q;
                    const std::int64_t x = p.x_right + k2 * q;
                    const std::int64_t g = y_bottom - k2 * q;
                    route.push_back({xa, h});
                    route.push_back({x, h});
                    route.push_back({x, g});
                    route.push_back({p.cx + o, g});
                    break;
                }
            }
            (r.at_u ? local_u : local_v)[r.lane] = std::move(route);
        }
    }

    for (std::size_t li = 0; li < plan.lanes.size(); ++li) {
        std::vector<GridPoint> poly = local_u[li];
        for (const auto& c : trunk[li]) poly.push_back(c);
        for (auto it = local_v[li].rbegin(); it != local_v[li].rend(); ++it) poly.push_back(*it);
        poly = simplify(poly);
        for (std::size_t i = 0; i + 1 < poly.size(); ++i) {
            if (poly[i].x != poly[i + 1].x && poly[i].y != poly[i + 1].y) {
                throw ConstructionError("lane " + std::to_string(li) + " has a non-axis-parallel segment");
            }
        }
        plan.lanes[li].polyline = std::move(poly);
        plan.lanes[li].length = poly_length(plan.lanes[li].polyline);
    }

    // Spacing audit.
    auto& au = plan.audit;
    au.required = s;
    au.required_turn = params.compact ? std::max<std::int64_t>(4, s / 3) : n * n;
    const double inf = std::numeric_limits<double>::infinity();
    au.min_lane_lane = au.min_lane_foreign_gadget = au.min_lane_own_gadget = au.min_gadget_gadget = au.min_turn =
        au.min_end_segment = inf;

    std::vector<Box> gadget_box;
    for (const auto& p : plan.nodes) gadget_box.push_back({p.x_left, p.x_right, p.y_top - 1, p.y_top});
    std::vector<std::vector<Box>> lane_boxes;
    for (const auto& l : plan.lanes) lane_boxes.push_back(boxes_of(l.polyline));

    auto lane_name = [&](std::size_t li) {
        const auto& l = plan.lanes[li];
        return "lane " + std::string(1, class_letter(l.cls)) + " of edge {" + std::to_string(l.u) + "," +
               std::to_string(l.v) + "}";
    };
    auto violate = [&](const std::string& what, double dist, std::int64_t need) {
        std::ostringstream os;
        os << what << " are " << dist << " apart, need " << need;
        au.violations.push_back(os.str());
    };

    for (std::size_t a = 0; a < plan.lanes.size(); ++a) {
        for (std::size_t b = a + 1; b < plan.lanes.size(); ++b) {
            const double dd = set_distance(lane_boxes[a], lane_boxes[b]);
            au.min_lane_lane = std::min(au.min_lane_lane, dd);
            if (dd < static_cast<double>(s)) violate(lane_name(a) + " and " + lane_name(b), dd, s);
        }
    }
    for (std::size_t li = 0; li < plan.lanes.size(); ++li) {
        const auto& l = plan.lanes[li];
        const std::size_t su = slot[l.u];
        const std::size_t sv = slot[l.v];
        for (std::size_t gi = 0; gi < plan.nodes.size(); ++gi) {
            if (gi == su || gi == sv) continue;
            const double dd = set_distance(lane_boxes[li], {gadget_box[gi]});
            au.min_lane_foreign_gadget = std::min(au.min_lane_foreign_gadget, dd);
            if (dd < static_cast<double>(s)) {
                violate(lane_name(li) + " and gadget of node " + std::to_string(plan.nodes[gi].id), dd, s);
            }
        }
        if (l.length <= 2 * s) {
            violate(lane_name(li) + " length and twice the spacing", static_cast<double>(l.length), 2 * s + 1);
            continue;
        }
        auto trimmed = trim_front(l.polyline, s);
        std::reverse(trimmed.begin(), trimmed.end());
        trimmed = trim_front(trimmed, s);
        const auto tb = boxes_of(trimmed);
        for (std::size_t gi : {su, sv}) {
            const double dd = set_distance(tb, {gadget_box[gi]});
            au.min_lane_own_gadget = std::min(au.min_lane_own_gadget, dd);
            if (dd < static_cast<double>(s)) {
                violate(lane_name(li) + " away from its attachment and its own gadget", dd, s);
            }
        }
        const auto& pl = l.polyline;
        const double first = std::abs(pl[1].x - pl[0].x) + std::abs(pl[1].y - pl[0].y);
        const auto m = pl.size();
        const double last = std::abs(pl[m - 1].x - pl[m - 2].x) + std::abs(pl[m - 1].y - pl[m - 2].y);
        au.min_end_segment = std::min({au.min_end_segment, first, last});
        if (std::min(first, last) < static_cast<double>(s)) {
            violate("end segments of " + lane_name(li), std::min(first, last), s);
        }
        for (std::size_t a = 1; a + 1 < pl.size(); ++a) {
            for (std::size_t b = a + 1; b + 1 < pl.size(); ++b) {
                const double dx = static_cast<double>(pl[a].x - pl[b].x);
                const double dy = static_cast<double>(pl[a].y - pl[b].y);
                const double dd = std::sqrt(dx * dx + dy * dy);
                au.min_turn = std::min(au.min_turn, dd);
                if (dd < static_cast<double>(au.required_turn)) violate("turns of " + lane_name(li), dd, au.required_turn);
            }
        }
    }
    for (std::size_t a = 0; a < gadget_box.size(); ++a) {
        for (std::size_t b = a + 1; b < gadget_box.size(); ++b) {
            const double dd = box_distance(gadget_box[a], gadget_box[b]);
            au.min_gadget_gadget = std::min(au.min_gadget_gadget, dd);
            if (dd < static_cast<double>(s)) {
                violate("gadgets of nodes " + std::to_string(plan.nodes[a].id) + " and " +
                            std::to_string(plan.nodes[b].id),
                        dd, s);
            }
        }
    }
    if (!au.ok()) throw ConstructionError("layout spacing audit failed: " + au.violations.front());
    return plan;
}

// ---------------------------------------------------------------------------
// Reduction
// ---------------------------------------------------------------------------

int select_size_parameter(const GridDrawing& d) {
    const int start = std::max<int>(2, static_cast<int>(d.nodes.size()));
    for (int n = start; n <= 400; ++n) {
        const auto plan = layout(d, {n, false, 24});
        const double count = static_cast<double>(plan.node_count());
        const double nn = static_cast<double>(n);
        if (2.0 * count * std::pow(nn, -6.0) < 1.0 / nn) return n;
    }
    throw ConstructionError("no size parameter up to 400 satisfies the far-field condition");
}

Reduction reduce(const GridDrawing& d, const ReduceParams& params) {
    Reduction red;
    if (params.n) {
        red.n = *params.n;
    } else if (params.compact) {
        red.n = std::max<int>(2, static_cast<int>(d.nodes.size()));
    } else {
        red.n = select_size_parameter(d);
    }
    red.plan = layout(d, {red.n, params.compact, params.compact_spacing});
    const auto& plan = red.plan;

    std::vector<Node> nodes;
    std::vector<Message> messages;
    nodes.reserve(static_cast<std::size_t>(plan.node_count()));
    NodeId next = 0;

    std::map<int, std::size_t> slot;
    std::vector<NodeGadget> gadgets;
    std::vector<NodeId> base;
    for (std::size_t ni = 0; ni < plan.nodes.size(); ++ni) {
        const auto& p = plan.nodes[ni];
        slot[p.id] = ni;
        std::vector<int> cols;
        for (const auto& [lane, col] : p.attachments) cols.push_back(col);
        auto g = build_node_gadget(p.id, p.columns, cols, Point::grid(p.x_left, p.y_top - 1));
        base.push_back(next);
        for (int i = 0; i < g.columns; ++i) nodes.push_back({next + i, g.bottom(i)});
        for (int i = 0; i < g.columns; ++i) nodes.push_back({next + g.columns + i, g.top(i)});
        next += 2 * g.columns;

        GadgetInfo info;
        info.id = static_cast<int>(red.map.gadgets.size());
        info.is_node = true;
        info.owner = p.id;
        info.columns = g.columns;
        info.attachments = g.attachments;
        red.map.gadgets.push_back(info);

        const auto id_of = [&](const Point& pt) {
            const auto col = (pt.x10 - g.origin.x10) / 10;
            return base[ni] + col + (pt.y10 == g.origin.y10 ? 0 : g.columns);
        };
        for (const auto& m : g.messages) {
            messages.push_back({id_of(m.from), id_of(m.to), m.copies});
            red.map.messages.push_back({info.id, m.kind, m.cls, m.column});
        }
        gadgets.push_back(std::move(g));
    }

    for (const auto& lp : plan.lanes) {
        const std::size_t su = slot.at(lp.u);
        const std::size_t sv = slot.at(lp.v);
        std::vector<Point> route;
        for (const auto& gp : lp.polyline) route.push_back(Point::grid(gp.x, gp.y));
        auto eg = build_edge_gadget(lp.u, lp.v, lp.cls, route, &gadgets[su], lp.col_u, &gadgets[sv], lp.col_v,
                                    static_cast<double>(plan.audit.required_turn));
        std::vector<NodeId> ids(eg.chain.size());
        ids.front() = base[su] + gadgets[su].columns + lp.col_u;
        ids.back() = base[sv] + gadgets[sv].columns + lp.col_v;
        for (std::size_t i = 1; i + 1 < eg.chain.size(); ++i) {
            ids[i] = next++;
            nodes.push_back({ids[i], eg.chain[i]});
        }
        GadgetInfo info;
        info.id = static_cast<int>(red.map.gadgets.size());
        info.is_node = false;
        info.u = lp.u;
        info.v = lp.v;
        info.cls = lp.cls;
        info.lane = lp.lane;
        red.map.gadgets.push_back(info);
        for (std::size_t i = 0; i < eg.messages.size(); ++i) {
            const auto& m = eg.messages[i];
            const bool forward = m.from == eg.chain[i];
            const NodeId s = forward ? ids[i] : ids[i + 1];
            const NodeId r = forward ? ids[i + 1] : ids[i];
            messages.push_back({s, r, m.copies});
            red.map.messages.push_back({info.id, m.kind, m.cls, m.column});
        }
    }

    red.instance = Instance(params.model, std::move(nodes), std::move(messages));
    return red;
}

int round_of(int color, int cls) {
    // Class order per round for colors 1, 2, 3: (R, B, G), (B, G, R), (G, R, B).
    static constexpr int kOrder[3][3] = {{0, 2, 1}, {2, 1, 0}, {1, 0, 2}};
    if (color < 1 || color > 3) throw ColoringError("color must be 1, 2 or 3, got " + std::to_string(color));
    if (cls < 0 || cls > 2) throw InputError("color class must be 0, 1 or 2");
    for (int r = 0; r < 3; ++r) {
        if (kOrder[color - 1][r] == cls) return r;
    }
    return 0;
}

Schedule schedule_from_coloring(const Instance& inst, const GadgetMap& map, const std::map<int, int>& coloring,
                                const PowerPolicy& policy) {
    if (map.messages.size() != inst.messages().size()) {
        throw InputError("gadget map does not match the instance (" + std::to_string(map.messages.size()) + " vs " +
                         std::to_string(inst.messages().size()) + " messages)");
    }
    auto color_of = [&](int node) {
        auto it = coloring.find(node);
        if (it == coloring.end()) throw ColoringError("coloring has no color for node " + std::to_string(node));
        if (it->second < 1 || it->second > 3) {
            throw ColoringError("node " + std::to_string(node) + " has color " + std::to_string(it->second) +
                                ", expected 1, 2 or 3");
        }
        return it->second;
    };
    for (const auto& g : map.gadgets) {
        if (g.is_node) {
            color_of(g.owner);
        } else if (color_of(g.u) == color_of(g.v)) {
            throw ColoringError("coloring is not proper: edge {" + std::to_string(g.u) + "," + std::to_string(g.v) +
                                "} joins two nodes of color " + std::to_string(color_of(g.u)));
        }
    }

    Schedule sched;
    sched.rounds.resize(3);
    for (std::size_t mi = 0; mi < map.messages.size(); ++mi) {
        const auto& tag = map.messages[mi];
        if (tag.gadget < 0 || static_cast<std::size_t>(tag.gadget) >= map.gadgets.size()) {
            throw InputError("gadget map entry " + std::to_string(mi) + " references an unknown gadget");
        }
        const auto& g = map.gadgets[static_cast<std::size_t>(tag.gadget)];
        const int copies = inst.messages()[mi].copies;
        if (g.is_node) {
            double power = policy.base;
            if (tag.kind == MessageKind::VerticalUp) {
                for (int a : g.attachments) {
                    if (tag.column == a - 2 || tag.column == a + 2) power = policy.flank;
                }
            }
            sched.rounds[static_cast<std::size_t>(round_of(color_of(g.owner), tag.cls))].push_back({mi, 0, power});
            continue;
        }
        const int a = round_of(color_of(g.u), tag.cls);
        const double power = tag.kind == MessageKind::Boundary ? policy.boundary : policy.base;
        if (copies == 1) {
            sched.rounds[static_cast<std::size_t>(a)].push_back({mi, 0, power});
        } else {
            int c = 0;
            for (int r = 0; r < 3 && c < copies; ++r) {
                if (r == a) continue;
                sched.rounds[static_cast<std::size_t>(r)].push_back({mi, c++, power});
            }
        }
    }
    return sched;
}

RepairResult repair_powers(const Instance& inst, Schedule& sched, const VerifyOptions& opts) {
    RepairResult res;
    res.report = verify_schedule(inst, sched, opts);
    if (res.report.success) {
        res.success = true;
        return res;
    }
    for (std::size_t r = 0; r < sched.rounds.size(); ++r) {
        const auto& rr = res.report.rounds[r];
        if (rr.success() || !rr.violations.empty()) continue;
        const auto cfg = round_config(inst, sched.rounds[r]);
        const auto fm = foschini_miljanic(cfg, inst.model());
        for (std::size_t i = 0; i < cfg.size(); ++i) sched.rounds[r][i].power = fm.powers[i];
        res.repaired_rounds.push_back(r);
    }
    res.report = verify_schedule(inst, sched, opts);
    res.success = res.report.success;
    return res;
}

std::vector<std::size_t> class_messages(const GadgetMap& map, int gadget, int cls) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < map.messages.size(); ++i) {
        const auto& t = map.messages[i];
        if (t.gadget == gadget && t.cls == cls) out.push_back(i);
    }
    return out;
}

}  // namespace mls
