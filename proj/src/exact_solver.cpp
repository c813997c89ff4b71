#include "mls/exact_solver.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

#include "mls/drawing.hpp"
#include "mls/power_control.hpp"

namespace mls {

std::optional<ConflictCertificate> crossing_conflict(const Link& l1, const Link& l2, std::size_t first,
                                                     std::size_t second) {
    if (l1.sender == l2.sender || l1.sender == l2.receiver || l1.receiver == l2.sender ||
        l1.receiver == l2.receiver) {
        throw InputError("crossing_conflict: links share a node");
    }
    const auto a = dist2_tenths(l1.from, l2.to);
    const auto b = dist2_tenths(l1.from, l1.to);
    const auto c = dist2_tenths(l2.from, l1.to);
    const auto d = dist2_tenths(l2.from, l2.to);
    if (a > b || c > d) return std::nullopt;
    return ConflictCertificate{first,
                               second,
                               distance(l1.from, l2.to),
                               distance(l1.from, l1.to),
                               distance(l2.from, l1.to),
                               distance(l2.from, l2.to)};
}

std::string to_string(SearchStatus s) {
    switch (s) {
        case SearchStatus::Found: return "found";
        case SearchStatus::ProvenInfeasible: return "proven-infeasible";
        case SearchStatus::ResourceLimit: return "resource-limit";
    }
    return "resource-limit";
}

namespace {

struct KeyHash {
    std::size_t operator()(const std::vector<std::uint32_t>& v) const noexcept {
        std::size_t h = v.size();
        for (auto x : v) h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return h;
    }
};

class Search {
public:
    Search(const Instance& inst, int rounds, const SearchOptions& opts) : inst_(inst), T_(rounds), opts_(opts) {
        const auto& msgs = inst.messages();
        const std::size_t m = msgs.size();
        std::vector<std::size_t> order(m);
        std::iota(order.begin(), order.end(), 0);
        auto key = [&](std::size_t i) {
            const auto& a = inst.position(msgs[i].sender);
            const auto& b = inst.position(msgs[i].receiver);
            return std::make_tuple(std::min(a.x10, b.x10), std::min(a.y10, b.y10), i);
        };
        std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return key(x) < key(y); });
        for (auto i : order) {
            for (int c = 0; c < msgs[i].copies; ++c) copies_.push_back({i, c});
        }
        for (std::size_t k = 0; k < copies_.size(); ++k) slot_[copies_[k]] = k;

        sender_.resize(m);
        receiver_.resize(m);
        links_.resize(m);
        for (std::size_t i = 0; i < m; ++i) {
            sender_[i] = inst.node_index(msgs[i].sender);
            receiver_[i] = inst.node_index(msgs[i].receiver);
            links_[i] = {msgs[i].sender, msgs[i].receiver, inst.position(msgs[i].sender),
                         inst.position(msgs[i].receiver)};
        }
        conflict_.assign(m, std::vector<char>(m, 0));
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = i + 1; j < m; ++j) {
                const auto& a = links_[i];
                const auto& b = links_[j];
                const bool share = a.sender == b.sender || a.sender == b.receiver || a.receiver == b.sender ||
                                   a.receiver == b.receiver;
                if (!share && crossing_conflict(a, b)) conflict_[i][j] = conflict_[j][i] = 1;
            }
        }

        for (const auto& [x, y] : opts.same_round) add_pin(x, y, true);
        for (const auto& [x, y] : opts.different_round) add_pin(x, y, false);

        assign_.assign(copies_.size(), -1);
        members_.assign(static_cast<std::size_t>(T_), {});
        used_.assign(static_cast<std::size_t>(T_), std::vector<char>(inst.nodes().size(), 0));
    }

    SearchResult run() {
        SearchResult res;
        res.rounds = T_;
        res.copies = copies_;
        dfs(0, 0);
        res.explored = explored_;
        res.solutions = solutions_;
        if (aborted_) {
            res.status = solutions_.empty() ? SearchStatus::ResourceLimit : SearchStatus::Found;
            if (opts_.enumerate_all) res.status = SearchStatus::ResourceLimit;
        } else {
            res.status = solutions_.empty() ? SearchStatus::ProvenInfeasible : SearchStatus::Found;
        }
        if (!solutions_.empty()) res.schedule = to_schedule(solutions_.front());
        return res;
    }

private:
    struct Pin {
        std::size_t other;
        bool same;
    };

    void add_pin(const CopyRef& a, const CopyRef& b, bool same) {
        auto ia = slot_.find(a);
        auto ib = slot_.find(b);
        if (ia == slot_.end() || ib == slot_.end()) throw InputError("pin references an unknown message copy");
        const std::size_t x = std::max(ia->second, ib->second);
        const std::size_t y = std::min(ia->second, ib->second);
        pins_[x].push_back({y, same});
    }

    bool feasible_with(std::size_t r, std::size_t msg) {
        const auto& mem = members_[r];
        if (mem.empty()) return true;
        std::vector<std::uint32_t> key(mem.begin(), mem.end());
        key.push_back(static_cast<std::uint32_t>(msg));
        std::sort(key.begin(), key.end());
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
        std::vector<Link> links;
        links.reserve(key.size());
        for (auto k : key) links.push_back(links_[k]);
        const bool ok = round_feasible(links, inst_.model()).feasible;
        memo_.emplace(std::move(key), ok);
        return ok;
    }

    // Returns false when the search should stop.
    bool dfs(std::size_t k, int used_rounds) {
        if (++explored_ > opts_.budget) {
            aborted_ = true;
            return false;
        }
        if (k == copies_.size()) {
            std::vector<int> sol(assign_.begin(), assign_.end());
            solutions_.push_back(std::move(sol));
            if (!opts_.enumerate_all || solutions_.size() >= opts_.max_solutions) {
                if (opts_.enumerate_all) aborted_ = true;
                return false;
            }
            return true;
        }
        const auto [msg, copy] = copies_[k];
        const int lo = copy > 0 ? assign_[k - 1] + 1 : 0;
        const int hi = std::min(T_ - 1, used_rounds);
        for (int r = lo; r <= hi; ++r) {
            const auto ru = static_cast<std::size_t>(r);
            if (used_[ru][sender_[msg]] || used_[ru][receiver_[msg]]) continue;
            bool ok = true;
            for (auto other : members_[ru]) {
                if (conflict_[msg][other]) {
                    ok = false;
                    break;
                }
            }
            if (!ok) continue;
            if (auto it = pins_.find(k); it != pins_.end()) {
                for (const auto& p : it->second) {
                    if ((assign_[p.other] == r) != p.same) ok = false;
                }
            }
            if (!ok || !feasible_with(ru, msg)) continue;

            assign_[k] = r;
            used_[ru][sender_[msg]] = used_[ru][receiver_[msg]] = 1;
            members_[ru].push_back(msg);
            const bool go_on = dfs(k + 1, std::max(used_rounds, r + 1));
            members_[ru].pop_back();
            used_[ru][sender_[msg]] = used_[ru][receiver_[msg]] = 0;
            assign_[k] = -1;
            if (!go_on) return false;
        }
        return true;
    }

    Schedule to_schedule(const std::vector<int>& sol) const {
        Schedule s;
        s.rounds.resize(static_cast<std::size_t>(T_));
        for (std::size_t k = 0; k < copies_.size(); ++k) {
            s.rounds[static_cast<std::size_t>(sol[k])].push_back({copies_[k].msg, copies_[k].copy, 1.0});
        }
        s.rounds.erase(std::remove_if(s.rounds.begin(), s.rounds.end(), [](const Round& r) { return r.empty(); }),
                       s.rounds.end());
        if (opts_.synthesize) {
            for (auto& round : s.rounds) {
                std::vector<Link> links;
                for (const auto& sc : round) links.push_back(links_[sc.msg]);
                const auto sol_p = synthesize_powers(links, inst_.model());
                for (std::size_t i = 0; i < round.size(); ++i) round[i].power = sol_p.powers[i];
            }
        }
        return s;
    }

    const Instance& inst_;
    int T_;
    const SearchOptions& opts_;
    std::vector<CopyRef> copies_;
    std::map<CopyRef, std::size_t> slot_;
    std::vector<std::size_t> sender_, receiver_;
    std::vector<Link> links_;
    std::vector<std::vector<char>> conflict_;
    std::map<std::size_t, std::vector<Pin>> pins_;
    std::vector<int> assign_;
    std::vector<std::vector<std::size_t>> members_;
    std::vector<std::vector<char>> used_;
    std::unordered_map<std::vector<std::uint32_t>, bool, KeyHash> memo_;
    std::vector<std::vector<int>> solutions_;
    std::uint64_t explored_ = 0;
    bool aborted_ = false;
};

}  // namespace

SearchResult solve_with_rounds(const Instance& inst, int rounds, const SearchOptions& opts) {
    if (rounds < 1) throw InputError("number of rounds must be at least 1");
    return Search(inst, rounds, opts).run();
}

SearchResult min_latency_exact(const Instance& inst, const SearchOptions& opts) {
    if (opts.max_rounds < 1) throw InputError("max_rounds must be at least 1");
    SearchResult last;
    last.status = SearchStatus::ProvenInfeasible;
    if (inst.messages().empty()) {
        last.status = SearchStatus::Found;
        last.schedule = Schedule{};
        return last;
    }
    // Lower bound: a node takes part in at most one message per round.
    std::unordered_map<NodeId, int> load;
    int lb = 1;
    for (const auto& m : inst.messages()) {
        lb = std::max(lb, load[m.sender] += m.copies);
        lb = std::max(lb, load[m.receiver] += m.copies);
    }
    std::uint64_t explored = 0;
    for (int t = lb; t <= opts.max_rounds; ++t) {
        SearchOptions o = opts;
        o.budget = opts.budget > explored ? opts.budget - explored : 0;
        last = solve_with_rounds(inst, t, o);
        explored += last.explored;
        last.explored = explored;
        if (last.status != SearchStatus::ProvenInfeasible) return last;
    }
    last.rounds = opts.max_rounds;
    return last;
}

std::optional<std::map<int, int>> three_color(const GridDrawing& d) {
    const auto adj = adjacency(d);
    const std::size_t n = d.nodes.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return adj[a].size() > adj[b].size(); });
    std::vector<int> color(n, 0);

    auto solve = [&](auto&& self, std::size_t k) -> bool {
        if (k == n) return true;
        const std::size_t v = order[k];
        for (int c = 1; c <= 3; ++c) {
            bool ok = true;
            for (auto w : adj[v]) ok = ok && color[w] != c;
            if (!ok) continue;
            color[v] = c;
            if (self(self, k + 1)) return true;
            color[v] = 0;
        }
        return false;
    };
    if (!solve(solve, 0)) return std::nullopt;
    std::map<int, int> out;
    for (std::size_t i = 0; i < n; ++i) out[d.nodes[i].id] = color[i];
    return out;
}

}  // namespace mls
