#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mls/geometry.hpp"
#include "mls/interval.hpp"

namespace mls {

/// A link with its endpoint ids and positions.
struct Link {
    NodeId sender = 0;
    NodeId receiver = 0;
    Point from;
    Point to;
};

/// A link transmitting at a given power in some round.
struct Transmission {
    NodeId sender = 0;
    NodeId receiver = 0;
    Point from;
    Point to;
    double power = 1.0;

    Link link() const { return {sender, receiver, from, to}; }
};

using RoundConfig = std::vector<Transmission>;

/// power / dist^alpha. Throws DomainError for dist <= 0 or power <= 0.
double signal(double power, double dist, double alpha);

/// Sum of P(w) / d(receiver, w)^alpha. Throws DomainError if a sender sits on
/// the receiver.
double interference(const Point& receiver, const std::vector<std::pair<Point, double>>& concurrent, double alpha);

struct StructuralViolation {
    NodeId node = 0;
    std::vector<std::size_t> transmissions;
    std::string detail;
};

struct TransmissionReport {
    double signal = 0.0;
    double interference = 0.0;
    double noise = 0.0;
    double beta = 1.0;
    /// S / (beta (I + n)) - 1; +infinity when I + n = 0.
    double margin = 0.0;
    Interval margin_bounds;
    Certainty certainty = Certainty::Unknown;
    bool success = false;
    /// 53 for double intervals, otherwise the MPFR precision that decided it.
    int precision_bits = 53;
    std::string reason;
};

struct RoundReport {
    std::vector<TransmissionReport> transmissions;
    std::vector<StructuralViolation> violations;

    bool success() const;
    /// Smallest margin over all transmissions (+infinity for an empty round).
    double worst_margin() const;
    std::size_t failures() const;
    std::size_t undecided() const;
};

struct VerifyOptions {
    /// Rounds with at most this many transmissions are summed directly.
    std::size_t direct_limit = 1500;
    /// Aggregation thresholds tried in order before exact summation.
    std::vector<double> thetas{0.5, 0.12, 0.03};
    /// MPFR precisions tried when double intervals cannot decide.
    std::vector<int> precisions{128, 256, 512};
};

/// Structural check plus certified SINR evaluation of every transmission.
RoundReport verify_round(const RoundConfig& round, const ModelParams& model, const VerifyOptions& opts = {});

struct MessageOutcome {
    bool success = false;
    double margin = 0.0;
    std::string reason;
};

/// Success of transmission t within round. Throws InputError if t is out of range.
MessageOutcome message_success(std::size_t t, const RoundConfig& round, const ModelParams& model);

struct CopyRef {
    std::size_t msg = 0;
    int copy = 0;
    friend bool operator==(const CopyRef&, const CopyRef&) = default;
    friend auto operator<=>(const CopyRef&, const CopyRef&) = default;
};

struct PartitionCheck {
    bool exact = true;
    std::vector<CopyRef> missing;
    std::vector<CopyRef> duplicated;
};

struct VerifyReport {
    std::vector<RoundReport> rounds;
    PartitionCheck partition;
    bool success = false;

    double worst_margin() const;
};

/// Round config for one round of a schedule. Throws InputError on dangling
/// message or copy references and on non-positive powers.
RoundConfig round_config(const Instance& inst, const Round& round);

PartitionCheck check_partition(const Instance& inst, const Schedule& sched);

VerifyReport verify_schedule(const Instance& inst, const Schedule& sched, const VerifyOptions& opts = {});

}  // namespace mls
