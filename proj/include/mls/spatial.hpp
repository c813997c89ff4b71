#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "mls/geometry.hpp"
#include "mls/interval.hpp"

namespace mls {

/// Static 2-d tree over weighted points (weights are transmit powers).
///
/// Supports certified enclosures of sum_k w_k * d(c, p_k)^(-alpha) with
/// far cells aggregated by their distance range, and exact range queries.
class KdTree {
public:
    struct Item {
        Point p;
        double w = 1.0;
        std::size_t id = 0;
    };

    struct SumResult {
        Interval sum;
        /// Number of items at the query point itself (infinite contribution).
        std::size_t colocated = 0;
    };

    KdTree() = default;
    explicit KdTree(std::vector<Item> items, std::size_t leaf_size = 8);

    std::size_t size() const { return items_.size(); }
    bool empty() const { return items_.empty(); }

    /// Enclosure of the weighted path-loss sum over all items except the one
    /// whose id equals `exclude`. Cells whose diagonal is at most theta times
    /// their distance to c are aggregated. theta = 0 sums exactly.
    SumResult path_loss_sum(const Point& c, double alpha, double theta, std::size_t exclude) const;

    /// Calls f(item) for every item with squared distance (tenths) <= r2.
    template <class F>
    void for_each_within(const Point& c, std::int64_t r2, F&& f) const;

    /// Smallest and largest squared distance (tenths) from c to any item
    /// bounding box corner; used to decide when a radius covers everything.
    std::int64_t max_dist2(const Point& c) const;

private:
    struct Node {
        std::int64_t x0, x1, y0, y1;
        std::uint32_t begin, end;
        std::int32_t left = -1, right = -1;
        Interval wsum;
    };

    std::int32_t build(std::uint32_t begin, std::uint32_t end, std::size_t leaf_size);
    static std::int64_t min_d2(const Node& n, const Point& c);
    static std::int64_t max_d2(const Node& n, const Point& c);

    std::vector<Item> items_;
    std::vector<Node> nodes_;
    std::vector<std::uint32_t> slot_of_id_;
    std::int32_t root_ = -1;
};

template <class F>
void KdTree::for_each_within(const Point& c, std::int64_t r2, F&& f) const {
    if (root_ < 0) return;
    std::vector<std::int32_t> stack{root_};
    while (!stack.empty()) {
        const Node& n = nodes_[static_cast<std::size_t>(stack.back())];
        stack.pop_back();
        if (min_d2(n, c) > r2) continue;
        if (n.left < 0) {
            for (std::uint32_t i = n.begin; i < n.end; ++i) {
                if (dist2_tenths(items_[i].p, c) <= r2) f(items_[i]);
            }
            continue;
        }
        stack.push_back(n.left);
        stack.push_back(n.right);
    }
}

}  // namespace mls
