#include "mls/spatial.hpp"

#include <algorithm>
#include <limits>

namespace mls {

KdTree::KdTree(std::vector<Item> items, std::size_t leaf_size) : items_(std::move(items)) {
    if (items_.empty()) return;
    nodes_.reserve(2 * items_.size() / std::max<std::size_t>(1, leaf_size) + 2);
    root_ = build(0, static_cast<std::uint32_t>(items_.size()), std::max<std::size_t>(1, leaf_size));
    std::size_t max_id = 0;
    for (const auto& it : items_) max_id = std::max(max_id, it.id);
    slot_of_id_.assign(max_id + 1, std::numeric_limits<std::uint32_t>::max());
    for (std::uint32_t i = 0; i < items_.size(); ++i) slot_of_id_[items_[i].id] = i;
}

std::int32_t KdTree::build(std::uint32_t begin, std::uint32_t end, std::size_t leaf_size) {
    Node n{};
    n.begin = begin;
    n.end = end;
    n.x0 = n.y0 = std::numeric_limits<std::int64_t>::max();
    n.x1 = n.y1 = std::numeric_limits<std::int64_t>::min();
    Interval w(0.0);
    for (std::uint32_t i = begin; i < end; ++i) {
        const auto& p = items_[i].p;
        n.x0 = std::min(n.x0, p.x10);
        n.x1 = std::max(n.x1, p.x10);
        n.y0 = std::min(n.y0, p.y10);
        n.y1 = std::max(n.y1, p.y10);
        w += Interval(items_[i].w);
    }
    n.wsum = w;
    const auto idx = static_cast<std::int32_t>(nodes_.size());
    nodes_.push_back(n);
    if (end - begin <= leaf_size) return idx;

    const bool split_x = (n.x1 - n.x0) >= (n.y1 - n.y0);
    const std::uint32_t mid = begin + (end - begin) / 2;
    std::nth_element(items_.begin() + begin, items_.begin() + mid, items_.begin() + end,
                     [split_x](const Item& a, const Item& b) {
                         return split_x ? std::tie(a.p.x10, a.p.y10, a.id) < std::tie(b.p.x10, b.p.y10, b.id)
                                        : std::tie(a.p.y10, a.p.x10, a.id) < std::tie(b.p.y10, b.p.x10, b.id);
                     });
    const std::int32_t l = build(begin, mid, leaf_size);
    const std::int32_t r = build(mid, end, leaf_size);
    nodes_[static_cast<std::size_t>(idx)].left = l;
    nodes_[static_cast<std::size_t>(idx)].right = r;
    return idx;
}

std::int64_t KdTree::min_d2(const Node& n, const Point& c) {
    const std::int64_t dx = c.x10 < n.x0 ? n.x0 - c.x10 : (c.x10 > n.x1 ? c.x10 - n.x1 : 0);
    const std::int64_t dy = c.y10 < n.y0 ? n.y0 - c.y10 : (c.y10 > n.y1 ? c.y10 - n.y1 : 0);
    return dx * dx + dy * dy;
}

std::int64_t KdTree::max_d2(const Node& n, const Point& c) {
    const std::int64_t dx = std::max(std::abs(c.x10 - n.x0), std::abs(c.x10 - n.x1));
    const std::int64_t dy = std::max(std::abs(c.y10 - n.y0), std::abs(c.y10 - n.y1));
    return dx * dx + dy * dy;
}

std::int64_t KdTree::max_dist2(const Point& c) const {
    if (root_ < 0) return 0;
    return max_d2(nodes_[static_cast<std::size_t>(root_)], c);
}

KdTree::SumResult KdTree::path_loss_sum(const Point& c, double alpha, double theta, std::size_t exclude) const {
    SumResult out{Interval(0.0), 0};
    if (root_ < 0) return out;
    std::uint32_t excl_slot = std::numeric_limits<std::uint32_t>::max();
    if (exclude < slot_of_id_.size()) excl_slot = slot_of_id_[exclude];
    const double theta2 = theta * theta;

    std::vector<std::int32_t> stack{root_};
    while (!stack.empty()) {
        const Node& n = nodes_[static_cast<std::size_t>(stack.back())];
        stack.pop_back();
        const bool holds_excluded = excl_slot >= n.begin && excl_slot < n.end;
        if (n.left < 0) {
            for (std::uint32_t i = n.begin; i < n.end; ++i) {
                if (i == excl_slot) continue;
                const std::int64_t d2 = dist2_tenths(items_[i].p, c);
                if (d2 == 0) {
                    ++out.colocated;
                    continue;
                }
                out.sum += Interval(items_[i].w) * path_loss(d2, alpha);
            }
            continue;
        }
        if (!holds_excluded && theta2 > 0.0) {
            const std::int64_t lo2 = min_d2(n, c);
            if (lo2 > 0) {
                const double dx = static_cast<double>(n.x1 - n.x0);
                const double dy = static_cast<double>(n.y1 - n.y0);
                if (dx * dx + dy * dy <= theta2 * static_cast<double>(lo2)) {
                    const Interval pl =
                        path_loss_range(static_cast<double>(lo2), static_cast<double>(max_d2(n, c)), alpha);
                    out.sum += n.wsum * pl;
                    continue;
                }
            }
        }
        stack.push_back(n.left);
        stack.push_back(n.right);
    }
    return out;
}

}  // namespace mls
