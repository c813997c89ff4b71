#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mls/geometry.hpp"
#include "mls/sinr.hpp"

namespace mls {

/// Witness that two links can never share a round: the sender of each link is
/// no farther from the other link's receiver than from its own.
struct ConflictCertificate {
    std::size_t first = 0;
    std::size_t second = 1;
    double d_s1_r2 = 0.0;  ///< d(i1, j2), at most d_s1_r1
    double d_s1_r1 = 0.0;  ///< d(i1, i2)
    double d_s2_r1 = 0.0;  ///< d(j1, i2), at most d_s2_r2
    double d_s2_r2 = 0.0;  ///< d(j1, j2)
};

/// Certificate iff d(i1, j2) <= d(i1, i2) and d(j1, i2) <= d(j1, j2), compared
/// exactly. Throws InputError if the links share a node.
std::optional<ConflictCertificate> crossing_conflict(const Link& l1, const Link& l2, std::size_t first = 0,
                                                     std::size_t second = 1);

enum class SearchStatus { Found, ProvenInfeasible, ResourceLimit };

std::string to_string(SearchStatus s);

struct SearchOptions {
    int max_rounds = 3;
    /// Maximum number of search nodes before giving up.
    std::uint64_t budget = 50'000'000;
    /// Pairs of copies forced into the same round / into different rounds.
    std::vector<std::pair<CopyRef, CopyRef>> same_round;
    std::vector<std::pair<CopyRef, CopyRef>> different_round;
    /// Collect every solution (up to round relabeling) instead of stopping at
    /// the first one.
    bool enumerate_all = false;
    std::size_t max_solutions = 100000;
    /// Attach witness powers to the returned schedule.
    bool synthesize = true;
};

struct SearchResult {
    SearchStatus status = SearchStatus::ProvenInfeasible;
    int rounds = 0;
    std::optional<Schedule> schedule;
    /// Every solution found, as the list of rounds of each message copy in
    /// `copies` order. Only filled with enumerate_all.
    std::vector<std::vector<int>> solutions;
    std::vector<CopyRef> copies;
    std::uint64_t explored = 0;
};

/// Search for a schedule with exactly `rounds` rounds (some may stay empty).
SearchResult solve_with_rounds(const Instance& inst, int rounds, const SearchOptions& opts = {});

/// Smallest T <= max_rounds admitting a schedule, by exhaustive pruned search.
SearchResult min_latency_exact(const Instance& inst, const SearchOptions& opts = {});

/// Proper 3-coloring (node id -> 1..3) or nothing if none exists.
std::optional<std::map<int, int>> three_color(const GridDrawing& d);

}  // namespace mls
