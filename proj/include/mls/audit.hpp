#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mls/geometry.hpp"
#include "mls/interval.hpp"

namespace mls {

/// Upper bound on sum_{i >= start} i^-alpha: integral from start plus the
/// first term. Throws DomainError for alpha <= 1, InputError for start < 2.
double tail_bound(int start, double alpha);

/// Certified enclosure of sum_{i >= start} i^-alpha from an explicit partial
/// sum of `terms` terms plus integral bounds on the remainder.
Interval tail_sum(int start, double alpha, int terms = 4096);

enum class TermKind {
    Point,     ///< multiplicity * power * distance^-alpha
    Tail,      ///< multiplicity * power * sum_{i >= distance} i^-alpha
    Integral,  ///< multiplicity * power / ((alpha - 1) distance^(alpha - 1))
};

std::string to_string(TermKind k);

struct FactTerm {
    std::string group;
    TermKind kind = TermKind::Point;
    double distance = 1.0;
    int multiplicity = 1;
    double power = 1.0;
};

/// Bounds may exceed the printed constant by this much (rounding in print).
inline constexpr double kFactTolerance = 5e-4;

struct FactBound {
    std::string name;
    std::string receiver;
    double printed = 0.0;
    std::vector<FactTerm> terms;
    /// Tail terms evaluated with tail_bound.
    double closed_value = 0.0;
    /// Tail terms evaluated with the certified series enclosure (upper end).
    double series_value = 0.0;
    /// Whether `value` uses the series enclosure for tails.
    bool series_tail = false;
    double value = 0.0;

    bool holds() const { return value <= printed + kFactTolerance; }
};

/// The interference bound table for the node gadget and edge gadget worst
/// cases. Throws InputError for alpha < 3.
std::vector<FactBound> fact_bounds(double alpha);

/// Smallest received signal in an edge gadget: 1.1^-alpha.
double edge_signal(double alpha);

/// node_count * 2 * n^(-2 alpha): interference from all senders beyond
/// distance n^2 when every power is at most 2.
double far_field_bound(std::int64_t node_count, int n, double alpha);

struct AuditOptions {
    /// Size parameter; the initial near-field radius is n^2.
    int n = 2;
    /// Overrides the initial radius.
    std::optional<double> radius;
    /// MPFR precisions used when double intervals cannot decide a margin.
    std::vector<int> precisions{128, 256, 512};
};

enum class AuditStatus { Certified, Failed, Unresolved };

std::string to_string(AuditStatus s);

struct AuditEntry {
    std::size_t round = 0;
    std::size_t index = 0;
    std::size_t msg = 0;
    int copy = 0;
    NodeId receiver = 0;
    double power = 1.0;
    double signal = 0.0;
    /// Exact near-field interference from co-round senders within radius.
    Interval near;
    std::size_t near_count = 0;
    std::size_t far_count = 0;
    double radius = 0.0;
    /// far_count * max round power * radius^-alpha.
    double far_bound = 0.0;
    double noise = 0.0;
    double beta = 1.0;
    /// S / (beta (near + far + noise)) - 1, enclosed.
    Interval margin;
    AuditStatus status = AuditStatus::Unresolved;
    int precision_bits = 53;
    std::string reason;

    double total_bound() const { return near.hi + far_bound; }
};

struct AuditReport {
    double alpha = 3.0;
    int n = 2;
    std::int64_t node_count = 0;
    /// far_field_bound(node_count, n, alpha) and the 1/n threshold it must
    /// stay below.
    double global_far_bound = 0.0;
    double global_far_threshold = 0.0;
    std::vector<AuditEntry> entries;
    /// Empty for alpha < 3.
    std::vector<FactBound> facts;
    std::size_t certified = 0;
    std::size_t failed = 0;
    std::size_t unresolved = 0;

    bool global_far_ok() const { return global_far_bound < global_far_threshold; }
    bool valid() const { return failed == 0 && unresolved == 0; }
    double worst_margin() const;
};

/// Receiver-by-receiver certificate of a schedule. The near-field radius
/// starts at n^2 and doubles per receiver until the margin is decided or
/// every co-round sender is inside. Throws InputError for dangling
/// references.
AuditReport audit_instance(const Instance& inst, const Schedule& sched, const AuditOptions& opts = {});

}  // namespace mls
