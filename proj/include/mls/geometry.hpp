#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace mls {

using NodeId = std::int64_t;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
/// Malformed or inconsistent input document.
struct InputError : Error {
    using Error::Error;
};
/// Geometric domain violation, e.g. co-located sender and receiver.
struct DomainError : Error {
    using Error::Error;
};
/// A gadget or layout could not be built from the given parameters.
struct ConstructionError : Error {
    using Error::Error;
};

// ---------------------------------------------------------------------------
// Points
// ---------------------------------------------------------------------------

/// A point in the plane with coordinates stored as exact multiples of 0.1.
///
/// Every coordinate produced by the reduction is a multiple of a tenth (unit
/// edges and 1.1-length edges only), so squared distances are exact integers
/// in units of 1/100.
struct Point {
    std::int64_t x10 = 0;
    std::int64_t y10 = 0;

    constexpr Point() = default;
    constexpr Point(std::int64_t x_tenths, std::int64_t y_tenths) : x10(x_tenths), y10(y_tenths) {}

    /// Grid point with integer coordinates.
    static constexpr Point grid(std::int64_t x, std::int64_t y) { return {x * 10, y * 10}; }
    /// Nearest tenth-multiple to (x, y); throws InputError if the value is not
    /// within 1e-6 of a tenth or is not finite.
    static Point from_decimal(double x, double y);

    double x() const { return static_cast<double>(x10) / 10.0; }
    double y() const { return static_cast<double>(y10) / 10.0; }

    friend constexpr bool operator==(const Point&, const Point&) = default;
    friend constexpr auto operator<=>(const Point&, const Point&) = default;
};

struct PointHash {
    std::size_t operator()(const Point& p) const noexcept {
        auto h = static_cast<std::uint64_t>(p.x10) * 0x9E3779B97F4A7C15ULL;
        h ^= static_cast<std::uint64_t>(p.y10) + 0x632BE59BD9B4E019ULL + (h << 6) + (h >> 2);
        return static_cast<std::size_t>(h);
    }
};

/// Squared distance in units of (1/10)^2; exact.
constexpr std::int64_t dist2_tenths(const Point& p, const Point& q) {
    const std::int64_t dx = p.x10 - q.x10;
    const std::int64_t dy = p.y10 - q.y10;
    return dx * dx + dy * dy;
}

/// Euclidean distance in grid units.
double distance(const Point& p, const Point& q);

// ---------------------------------------------------------------------------
// Model
// ---------------------------------------------------------------------------

/// SINR model parameters. Noise and threshold have a global default with
/// optional per-node overrides.
struct ModelParams {
    double alpha = 3.0;
    double noise = 0.0;
    double beta = 1.0;
    std::map<NodeId, double> node_noise;
    std::map<NodeId, double> node_beta;

    double noise_at(NodeId v) const;
    double beta_at(NodeId v) const;
    bool zero_noise() const;
    /// Throws InputError unless alpha > 0, noise >= 0 and beta >= 1 everywhere.
    void validate() const;

    friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

// ---------------------------------------------------------------------------
// Instances and schedules
// ---------------------------------------------------------------------------

struct Node {
    NodeId id = 0;
    Point pos;
    friend bool operator==(const Node&, const Node&) = default;
};

/// One entry of the message multiset, with its multiplicity.
struct Message {
    NodeId sender = 0;
    NodeId receiver = 0;
    int copies = 1;
    friend bool operator==(const Message&, const Message&) = default;
};

/// A minimum-latency scheduling instance: points in the plane and a multiset
/// of messages between them.
class Instance {
public:
    Instance() = default;
    Instance(ModelParams model, std::vector<Node> nodes, std::vector<Message> messages);

    const ModelParams& model() const { return model_; }
    void set_model(ModelParams m) { model_ = std::move(m); }
    const std::vector<Node>& nodes() const { return nodes_; }
    const std::vector<Message>& messages() const { return messages_; }

    /// Position of a node; throws InputError for unknown ids.
    const Point& position(NodeId id) const;
    bool has_node(NodeId id) const { return index_.count(id) != 0; }
    std::size_t node_index(NodeId id) const;
    std::size_t total_copies() const;

    friend bool operator==(const Instance& a, const Instance& b) {
        return a.model_ == b.model_ && a.nodes_ == b.nodes_ && a.messages_ == b.messages_;
    }

private:
    void check() const;

    ModelParams model_;
    std::vector<Node> nodes_;
    std::vector<Message> messages_;
    std::unordered_map<NodeId, std::size_t> index_;
};

/// One scheduled copy of a message.
struct ScheduledCopy {
    std::size_t msg = 0;
    int copy = 0;
    double power = 1.0;
    friend bool operator==(const ScheduledCopy&, const ScheduledCopy&) = default;
};

using Round = std::vector<ScheduledCopy>;

struct Schedule {
    std::vector<Round> rounds;
    friend bool operator==(const Schedule&, const Schedule&) = default;
};

// ---------------------------------------------------------------------------
// Grid drawings
// ---------------------------------------------------------------------------

struct GridPoint {
    std::int64_t x = 0;
    std::int64_t y = 0;
    friend constexpr bool operator==(const GridPoint&, const GridPoint&) = default;
    friend constexpr auto operator<=>(const GridPoint&, const GridPoint&) = default;
};

struct DrawingNode {
    int id = 0;
    GridPoint pos;
    friend bool operator==(const DrawingNode&, const DrawingNode&) = default;
};

struct DrawingEdge {
    int u = 0;
    int v = 0;
    std::vector<GridPoint> path;
    friend bool operator==(const DrawingEdge&, const DrawingEdge&) = default;
};

/// An orthogonal grid drawing of a graph: nodes on integer grid points and
/// edges as axis-parallel polylines.
struct GridDrawing {
    std::vector<DrawingNode> nodes;
    std::vector<DrawingEdge> edges;

    const DrawingNode* find(int id) const;
    friend bool operator==(const GridDrawing&, const GridDrawing&) = default;
};

}  // namespace mls
