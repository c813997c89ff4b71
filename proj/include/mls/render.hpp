#pragma once

#include <string>

#include "mls/geometry.hpp"
#include "mls/reduction.hpp"

namespace mls {

struct RenderOptions {
    /// Pixels per grid unit.
    double unit = 4.0;
    double margin = 20.0;
};

/// SVG of an instance with messages drawn as arrows. With a gadget map,
/// messages are colored by class and boundary messages are highlighted.
std::string render_svg(const Instance& inst, const GadgetMap* map = nullptr, const RenderOptions& opts = {});

}  // namespace mls
