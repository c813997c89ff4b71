#pragma once

#include <string>
#include <vector>

#include "mls/geometry.hpp"

namespace mls {

enum class ViolationKind {
    NonAxisParallel,
    Crossing,
    Degree,
    DanglingEndpoint,
    UnknownNode,
    DuplicateNode,
    SelfLoop,
};

std::string to_string(ViolationKind k);

struct Violation {
    ViolationKind kind;
    std::string detail;
};

/// Reports every geometric problem of a parsed drawing. An empty result means
/// the drawing is an orthogonal grid drawing of a simple graph with maximum
/// degree 4.
std::vector<Violation> validate_grid_drawing(const GridDrawing& d);

/// Built-in example drawings: "k2", "path", "c3" (odd cycle), "c4" (unit
/// square), "c6" (even cycle), "k4". Throws InputError for unknown names.
GridDrawing builtin_drawing(const std::string& name);
std::vector<std::string> builtin_drawing_names();

/// Adjacency lists in drawing-node order, indexed by position in d.nodes.
std::vector<std::vector<std::size_t>> adjacency(const GridDrawing& d);

}  // namespace mls
