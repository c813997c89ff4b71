#include "mls/geometry.hpp"

#include <cmath>
#include <sstream>

namespace mls {

Point Point::from_decimal(double x, double y) {
    auto to_tenths = [](double v, const char* axis) {
        if (!std::isfinite(v)) {
            throw InputError(std::string("non-finite ") + axis + " coordinate");
        }
        const double scaled = v * 10.0;
        const double r = std::round(scaled);
        if (std::abs(scaled - r) > 1e-6 || std::abs(r) > 9.0e15) {
            std::ostringstream os;
            os << axis << " coordinate " << v << " is not a multiple of 0.1";
            throw InputError(os.str());
        }
        return static_cast<std::int64_t>(r);
    };
    return {to_tenths(x, "x"), to_tenths(y, "y")};
}

double distance(const Point& p, const Point& q) {
    return std::sqrt(static_cast<double>(dist2_tenths(p, q))) / 10.0;
}

double ModelParams::noise_at(NodeId v) const {
    auto it = node_noise.find(v);
    return it == node_noise.end() ? noise : it->second;
}

double ModelParams::beta_at(NodeId v) const {
    auto it = node_beta.find(v);
    return it == node_beta.end() ? beta : it->second;
}

bool ModelParams::zero_noise() const {
    if (noise != 0.0) return false;
    for (const auto& [id, n] : node_noise) {
        if (n != 0.0) return false;
    }
    return true;
}

void ModelParams::validate() const {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw InputError("alpha must be positive");
    auto check_noise = [](double n) {
        if (!(n >= 0.0) || !std::isfinite(n)) throw InputError("noise must be nonnegative");
    };
    auto check_beta = [](double b) {
        if (!(b >= 1.0) || !std::isfinite(b)) throw InputError("beta must be at least 1");
    };
    check_noise(noise);
    check_beta(beta);
    for (const auto& [id, n] : node_noise) check_noise(n);
    for (const auto& [id, b] : node_beta) check_beta(b);
}

Instance::Instance(ModelParams model, std::vector<Node> nodes, std::vector<Message> messages)
    : model_(std::move(model)), nodes_(std::move(nodes)), messages_(std::move(messages)) {
    index_.reserve(nodes_.size());
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (!index_.emplace(nodes_[i].id, i).second) {
            throw InputError("duplicate node id " + std::to_string(nodes_[i].id));
        }
    }
    check();
}

void Instance::check() const {
    model_.validate();
    for (std::size_t i = 0; i < messages_.size(); ++i) {
        const auto& m = messages_[i];
        const std::string where = "message " + std::to_string(i) + ": ";
        if (!has_node(m.sender)) throw InputError(where + "unknown sender " + std::to_string(m.sender));
        if (!has_node(m.receiver)) throw InputError(where + "unknown receiver " + std::to_string(m.receiver));
        if (m.sender == m.receiver) throw InputError(where + "sender equals receiver");
        if (m.copies < 1) throw InputError(where + "copies must be at least 1");
    }
}

const Point& Instance::position(NodeId id) const { return nodes_[node_index(id)].pos; }

std::size_t Instance::node_index(NodeId id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw InputError("unknown node id " + std::to_string(id));
    return it->second;
}

std::size_t Instance::total_copies() const {
    std::size_t total = 0;
    for (const auto& m : messages_) total += static_cast<std::size_t>(m.copies);
    return total;
}

const DrawingNode* GridDrawing::find(int id) const {
    for (const auto& n : nodes) {
        if (n.id == id) return &n;
    }
    return nullptr;
}

}  // namespace mls
