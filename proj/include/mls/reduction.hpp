#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mls/geometry.hpp"
#include "mls/sinr.hpp"

namespace mls {

// ---------------------------------------------------------------------------
// Gadgets
// ---------------------------------------------------------------------------

enum class MessageKind { VerticalUp, VerticalDown, Horizontal, ChainBold, ChainDashed, Boundary };

std::string to_string(MessageKind k);
MessageKind message_kind_from_string(const std::string& s);

/// Color classes: 0 = R, 1 = G, 2 = B.
char class_letter(int cls);

struct GadgetMessage {
    Point from;
    Point to;
    MessageKind kind = MessageKind::Horizontal;
    int cls = 0;
    /// Node gadget column of a vertical, left column of a horizontal, or the
    /// chain edge index in an edge gadget.
    int column = 0;
    int copies = 1;
};

/// Two rows of nodes: bottom (origin.x + i, origin.y), top one unit above.
struct NodeGadget {
    int owner = 0;
    Point origin;
    int columns = 0;
    std::vector<int> attachments;
    std::vector<GadgetMessage> messages;

    Point bottom(int i) const { return {origin.x10 + 10 * i, origin.y10}; }
    Point top(int i) const { return {origin.x10 + 10 * i, origin.y10 + 10}; }
};

/// Class of the vertical at column i and of the horizontal between columns i
/// and i + 1.
constexpr int vertical_class(int i) { return ((i % 3) + 3) % 3; }
constexpr int horizontal_class(int i) { return (((i - 1) % 3) + 3) % 3; }

/// Column residue mod 6 of the up verticals of a class (attachment columns).
constexpr int attachment_residue(int cls) { return (cls * 4) % 6; }

/// Verticals at every column (up at even, down at odd), horizontals between
/// adjacent bottom nodes. Attachment columns must be up verticals at least two
/// columns from either end and at least six apart. Throws ConstructionError.
NodeGadget build_node_gadget(int owner, int columns, const std::vector<int>& attachments = {}, Point origin = {});

struct LengthPlan {
    std::int64_t blocks = 0;     ///< k: the chain has 4k edges
    std::int64_t lengthened = 0; ///< m: edges of length 1.1
};

/// Decomposes an integer length > 40 into 4k edges, m of them of length 1.1.
LengthPlan adjust_length(std::int64_t target);

struct EdgeGadget {
    int u = 0;
    int v = 0;
    int cls = 0;
    std::vector<Point> route;
    /// Chain nodes x_0 (u-side attachment) .. x_4k (v-side attachment).
    std::vector<Point> chain;
    /// One entry per chain edge; copies 2 for dashed, 1 for bold.
    std::vector<GadgetMessage> messages;
    /// Chain node indices where the route turns.
    std::vector<std::size_t> turns;
    LengthPlan plan;
    std::int64_t length = 0;
};

/// Messages of a chain x_0 .. x_m with m divisible by 4: multiplicities
/// 2, 1, 2, 1, ... from the u-side, the first and last flagged Boundary and
/// directed into x_0 and x_m. Throws ConstructionError otherwise.
std::vector<GadgetMessage> chain_messages(const std::vector<Point>& chain, int cls);

/// Chain along an axis-parallel integer route. The first chain edge is dashed
/// and directed into x_0, the last is bold and directed into x_4k; both are
/// flagged Boundary. With gadgets given, the route must start and end on top
/// of the attachment columns, which must carry up verticals of class cls.
EdgeGadget build_edge_gadget(int u, int v, int cls, const std::vector<Point>& route,
                             const NodeGadget* gu = nullptr, int col_u = -1, const NodeGadget* gv = nullptr,
                             int col_v = -1, double min_turn_spacing = 0.0);

// ---------------------------------------------------------------------------
// Layout
// ---------------------------------------------------------------------------

enum class Port { East, North, West, South };

std::string to_string(Port p);

struct LayoutParams {
    /// Size parameter; gadget separation is 3 n^2.
    int n = 2;
    bool compact = false;
    std::int64_t compact_spacing = 24;
};

struct NodePlacement {
    int id = 0;
    std::int64_t cx = 0;
    std::int64_t cy = 0;
    std::int64_t x_left = 0;
    std::int64_t x_right = 0;
    std::int64_t y_top = 0;
    int columns = 0;
    /// (lane index into LayoutPlan::lanes, column) per attached lane.
    std::vector<std::pair<std::size_t, int>> attachments;
};

struct LanePlan {
    std::size_t edge = 0;
    int u = 0;
    int v = 0;
    /// -1, 0, +1: offset to the left of the travel direction u -> v.
    int lane = 0;
    int cls = 0;
    Port port_u = Port::East;
    Port port_v = Port::East;
    int col_u = 0;
    int col_v = 0;
    std::vector<GridPoint> polyline;
    std::int64_t length = 0;
};

struct SpacingAudit {
    std::int64_t required = 0;
    std::int64_t required_turn = 0;
    double min_lane_lane = 0.0;
    double min_lane_foreign_gadget = 0.0;
    double min_lane_own_gadget = 0.0;
    double min_gadget_gadget = 0.0;
    double min_turn = 0.0;
    double min_end_segment = 0.0;
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

struct LayoutPlan {
    int n = 2;
    bool compact = false;
    std::int64_t spacing = 0;  ///< s
    std::int64_t pitch = 0;    ///< q: lane pitch
    std::int64_t scale = 0;    ///< grid scale factor
    std::vector<NodePlacement> nodes;
    std::vector<LanePlan> lanes;
    SpacingAudit audit;

    /// Number of instance nodes the plan produces.
    std::int64_t node_count() const;
};

/// Places node gadgets on the scaled grid and routes three lanes per drawing
/// edge. Throws InputError for invalid drawings and ConstructionError when the
/// spacing audit fails.
LayoutPlan layout(const GridDrawing& d, const LayoutParams& params);

// ---------------------------------------------------------------------------
// Reduction
// ---------------------------------------------------------------------------

struct GadgetInfo {
    int id = 0;
    bool is_node = true;
    int owner = 0;  ///< node gadgets
    int u = 0;      ///< edge gadgets
    int v = 0;
    int cls = 0;
    int lane = 0;
    int columns = 0;
    std::vector<int> attachments;  ///< node gadget attachment columns
    friend bool operator==(const GadgetInfo&, const GadgetInfo&) = default;
};

struct MessageTag {
    int gadget = 0;
    MessageKind kind = MessageKind::Horizontal;
    int cls = 0;
    int column = 0;
    friend bool operator==(const MessageTag&, const MessageTag&) = default;
};

struct GadgetMap {
    std::vector<GadgetInfo> gadgets;
    std::vector<MessageTag> messages;
    friend bool operator==(const GadgetMap&, const GadgetMap&) = default;
};

struct ReduceParams {
    /// Size parameter override; by default the smallest n >= max(2, |V|) for
    /// which 2 N n^-6 < 1/n holds with N the produced node count.
    std::optional<int> n;
    bool compact = false;
    std::int64_t compact_spacing = 24;
    ModelParams model;
};

struct Reduction {
    Instance instance;
    GadgetMap map;
    LayoutPlan plan;
    int n = 2;
};

/// Smallest n >= max(2, |V|) satisfying the far-field condition at alpha = 3.
int select_size_parameter(const GridDrawing& d);

Reduction reduce(const GridDrawing& d, const ReduceParams& params = {});

/// Powers used by schedule synthesis.
struct PowerPolicy {
    double base = 1.0;
    double boundary = 2.0;
    /// Up verticals two columns left and right of an attachment.
    double flank = 1.2;

    static PowerPolicy minimal() { return {1.0, 2.0, 1.0}; }
};

/// Round (0-based) in which a node of the given color (1..3) sends class cls.
int round_of(int color, int cls);

/// Thrown for colorings that are not proper or do not cover the graph.
struct ColoringError : InputError {
    using InputError::InputError;
};

/// Canonical three-round schedule of a reduced instance from a proper
/// 3-coloring (drawing node id -> 1..3).
Schedule schedule_from_coloring(const Instance& inst, const GadgetMap& map, const std::map<int, int>& coloring,
                                const PowerPolicy& policy = {});

struct RepairResult {
    std::vector<std::size_t> repaired_rounds;
    bool success = false;
    VerifyReport report;
};

/// Re-synthesizes powers of every failing round by iterative power control
/// and re-verifies.
RepairResult repair_powers(const Instance& inst, Schedule& sched, const VerifyOptions& opts = {});

/// Message indices of each node gadget's color class cls, for tests.
std::vector<std::size_t> class_messages(const GadgetMap& map, int gadget, int cls);

}  // namespace mls
