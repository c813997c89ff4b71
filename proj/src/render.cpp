#include "mls/render.hpp"

#include <algorithm>
#include <iomanip>
#include <limits>
#include <sstream>

namespace mls {

namespace {

const char* class_color(int cls) {
    static constexpr const char* kColors[] = {"#d62728", "#2ca02c", "#1f77b4"};
    return cls >= 0 && cls < 3 ? kColors[cls] : "#555555";
}

}  // namespace

std::string render_svg(const Instance& inst, const GadgetMap* map, const RenderOptions& opts) {
    if (map && map->messages.size() != inst.messages().size()) {
        throw InputError("gadget map does not match the instance");
    }
    double x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;
    if (!inst.nodes().empty()) {
        x0 = y0 = std::numeric_limits<double>::infinity();
        x1 = y1 = -std::numeric_limits<double>::infinity();
        for (const auto& n : inst.nodes()) {
            x0 = std::min(x0, n.pos.x());
            x1 = std::max(x1, n.pos.x());
            y0 = std::min(y0, n.pos.y());
            y1 = std::max(y1, n.pos.y());
        }
    }
    const double u = opts.unit;
    const double m = opts.margin;
    auto sx = [&](double x) { return m + (x - x0) * u; };
    auto sy = [&](double y) { return m + (y1 - y) * u; };

    std::ostringstream os;
    os << std::fixed << std::setprecision(2);
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << 2 * m + (x1 - x0) * u << "\" height=\""
       << 2 * m + (y1 - y0) * u << "\">\n";
    os << "<defs><marker id=\"a\" viewBox=\"0 0 10 10\" refX=\"10\" refY=\"5\" markerWidth=\"4\" markerHeight=\"4\" "
          "orient=\"auto\"><path d=\"M0,0 L10,5 L0,10 z\" fill=\"context-stroke\"/></marker></defs>\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (std::size_t i = 0; i < inst.messages().size(); ++i) {
        const auto& msg = inst.messages()[i];
        const auto& a = inst.position(msg.sender);
        const auto& b = inst.position(msg.receiver);
        std::string color = "#555555";
        double width = 0.3 * u;
        std::string dash;
        if (map) {
            const auto& t = map->messages[i];
            color = class_color(t.cls);
            if (t.kind == MessageKind::Boundary) {
                color = "#ff7f0e";
                width *= 2.0;
            }
        }
        if (msg.copies > 1) dash = " stroke-dasharray=\"" + std::to_string(u * 0.3) + "\"";
        os << "<line x1=\"" << sx(a.x()) << "\" y1=\"" << sy(a.y()) << "\" x2=\"" << sx(b.x()) << "\" y2=\""
           << sy(b.y()) << "\" stroke=\"" << color << "\" stroke-width=\"" << width << "\"" << dash
           << " marker-end=\"url(#a)\"/>\n";
    }
    for (const auto& n : inst.nodes()) {
        os << "<circle cx=\"" << sx(n.pos.x()) << "\" cy=\"" << sy(n.pos.y()) << "\" r=\"" << 0.15 * u
           << "\" fill=\"black\"/>\n";
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace mls
