#include "mls/sinr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <unordered_map>

#include "mls/spatial.hpp"

namespace mls {

double signal(double power, double dist, double alpha) {
    if (!(dist > 0.0)) throw DomainError("signal: sender and receiver are co-located");
    if (!(power > 0.0)) throw DomainError("signal: power must be positive");
    return power / std::pow(dist, alpha);
}

double interference(const Point& receiver, const std::vector<std::pair<Point, double>>& concurrent, double alpha) {
    double total = 0.0;
    for (const auto& [p, w] : concurrent) {
        const auto d2 = dist2_tenths(p, receiver);
        if (d2 == 0) throw DomainError("interference: sender co-located with receiver");
        total += w / std::pow(static_cast<double>(d2) / 100.0, alpha / 2.0);
    }
    return total;
}

bool RoundReport::success() const {
    if (!violations.empty()) return false;
    return std::all_of(transmissions.begin(), transmissions.end(), [](const auto& t) { return t.success; });
}

double RoundReport::worst_margin() const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& t : transmissions) m = std::min(m, t.margin);
    return m;
}

std::size_t RoundReport::failures() const {
    return static_cast<std::size_t>(
        std::count_if(transmissions.begin(), transmissions.end(), [](const auto& t) { return !t.success; }));
}

std::size_t RoundReport::undecided() const {
    return static_cast<std::size_t>(std::count_if(transmissions.begin(), transmissions.end(), [](const auto& t) {
        return t.certainty == Certainty::Unknown;
    }));
}

double VerifyReport::worst_margin() const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& r : rounds) m = std::min(m, r.worst_margin());
    return m;
}

namespace {

std::vector<StructuralViolation> structural_check(const RoundConfig& round) {
    std::unordered_map<NodeId, std::vector<std::size_t>> uses;
    uses.reserve(round.size() * 2);
    for (std::size_t i = 0; i < round.size(); ++i) {
        uses[round[i].sender].push_back(i);
        uses[round[i].receiver].push_back(i);
    }
    std::map<NodeId, std::vector<std::size_t>> bad;
    for (auto& [node, ts] : uses) {
        if (ts.size() > 1) bad.emplace(node, ts);
    }
    std::vector<StructuralViolation> out;
    for (auto& [node, ts] : bad) {
        std::size_t sends = 0;
        std::size_t receives = 0;
        for (auto t : ts) {
            if (round[t].sender == node) ++sends;
            if (round[t].receiver == node) ++receives;
        }
        std::string what;
        if (sends > 0 && receives > 0) {
            what = "sends and receives in the same round";
        } else if (sends > 1) {
            what = "sends more than one message in the same round";
        } else {
            what = "receives more than one message in the same round";
        }
        ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
        out.push_back({node, ts, "node " + std::to_string(node) + " " + what});
    }
    return out;
}

struct Evaluator {
    const RoundConfig& round;
    const ModelParams& model;
    const VerifyOptions& opts;
    std::optional<KdTree> tree;

    Evaluator(const RoundConfig& r, const ModelParams& m, const VerifyOptions& o) : round(r), model(m), opts(o) {
        if (round.size() > opts.direct_limit) {
            std::vector<KdTree::Item> items;
            items.reserve(round.size());
            for (std::size_t i = 0; i < round.size(); ++i) items.push_back({round[i].from, round[i].power, i});
            tree.emplace(std::move(items));
        }
    }

    // Interference enclosure at the receiver of t, either by direct summation
    // or at a given aggregation level (theta = 0 means exact).
    KdTree::SumResult interference_at(std::size_t t, double theta) const {
        const Point& c = round[t].to;
        if (tree) return tree->path_loss_sum(c, model.alpha, theta, t);
        KdTree::SumResult r{Interval(0.0), 0};
        for (std::size_t k = 0; k < round.size(); ++k) {
            if (k == t) continue;
            const auto d2 = dist2_tenths(round[k].from, c);
            if (d2 == 0) {
                ++r.colocated;
                continue;
            }
            r.sum += Interval(round[k].power) * path_loss(d2, model.alpha);
        }
        return r;
    }

    Certainty decide_mpfr(std::size_t t, int prec) const {
        const auto& tr = round[t];
        const mpfr_prec_t p = prec;
        BigInterval s = BigInterval(p, tr.power).mul_nonneg(
            BigInterval::path_loss(p, dist2_tenths(tr.from, tr.to), model.alpha));
        BigInterval i(p);
        for (std::size_t k = 0; k < round.size(); ++k) {
            if (k == t) continue;
            const auto d2 = dist2_tenths(round[k].from, tr.to);
            i = i + BigInterval(p, round[k].power).mul_nonneg(BigInterval::path_loss(p, d2, model.alpha));
        }
        const BigInterval rhs = (i + BigInterval(p, model.noise_at(tr.receiver))).mul_nonneg(
            BigInterval(p, model.beta_at(tr.receiver)));
        return s.greater_than(rhs);
    }

    TransmissionReport evaluate(std::size_t t) const {
        const auto& tr = round[t];
        TransmissionReport rep;
        rep.noise = model.noise_at(tr.receiver);
        rep.beta = model.beta_at(tr.receiver);
        const auto own2 = dist2_tenths(tr.from, tr.to);
        if (own2 == 0) {
            rep.reason = "sender and receiver are co-located";
            rep.certainty = Certainty::No;
            rep.margin = -1.0;
            rep.margin_bounds = Interval(-1.0);
            return rep;
        }
        const Interval s = Interval(tr.power) * path_loss(own2, model.alpha);
        rep.signal = s.mid();
        const Interval beta(rep.beta);
        const Interval noise(rep.noise);

        std::vector<double> levels;
        if (tree) levels = opts.thetas;
        levels.push_back(0.0);

        Interval inter;
        Interval rhs;
        Certainty c = Certainty::Unknown;
        for (double theta : levels) {
            const auto r = interference_at(t, theta);
            if (r.colocated > 0) {
                rep.reason = "an interferer is co-located with the receiver";
                rep.interference = std::numeric_limits<double>::infinity();
                rep.certainty = Certainty::No;
                rep.margin = -1.0;
                rep.margin_bounds = Interval(-1.0);
                return rep;
            }
            inter = r.sum;
            rhs = beta * (inter + noise);
            if (rhs.hi == 0.0) {
                c = Certainty::Yes;
                break;
            }
            c = certainly_greater(s, rhs);
            if (c != Certainty::Unknown) break;
        }
        rep.interference = inter.mid();
        if (rhs.hi == 0.0) {
            rep.margin = std::numeric_limits<double>::infinity();
            rep.margin_bounds = Interval(rep.margin);
        } else {
            const Interval m = rhs.lo > 0.0 ? s / rhs - Interval(1.0)
                                            : Interval(s.lo / rhs.hi - 1.0, std::numeric_limits<double>::infinity());
            rep.margin_bounds = m;
            rep.margin = std::isfinite(m.hi) ? m.mid() : m.lo;
        }
        if (c == Certainty::Unknown) {
            for (int prec : opts.precisions) {
                c = decide_mpfr(t, prec);
                if (c != Certainty::Unknown) {
                    rep.precision_bits = prec;
                    break;
                }
            }
        }
        rep.certainty = c;
        rep.success = c == Certainty::Yes;
        if (c == Certainty::No) rep.reason = "SINR does not exceed the threshold";
        if (c == Certainty::Unknown) rep.reason = "indeterminate at maximum precision";
        return rep;
    }
};

}  // namespace

RoundReport verify_round(const RoundConfig& round, const ModelParams& model, const VerifyOptions& opts) {
    RoundReport rep;
    rep.violations = structural_check(round);
    std::vector<bool> involved(round.size(), false);
    for (const auto& v : rep.violations) {
        for (auto t : v.transmissions) involved[t] = true;
    }
    for (const auto& tr : round) {
        if (!(tr.power > 0.0) || !std::isfinite(tr.power)) throw InputError("transmission power must be positive");
    }
    Evaluator ev(round, model, opts);
    rep.transmissions.reserve(round.size());
    for (std::size_t t = 0; t < round.size(); ++t) {
        auto tr = ev.evaluate(t);
        if (involved[t]) {
            tr.success = false;
            tr.reason = tr.reason.empty() ? "structural violation" : "structural violation; " + tr.reason;
        }
        rep.transmissions.push_back(std::move(tr));
    }
    return rep;
}

MessageOutcome message_success(std::size_t t, const RoundConfig& round, const ModelParams& model) {
    if (t >= round.size()) throw InputError("transmission index out of range");
    VerifyOptions opts;
    Evaluator ev(round, model, opts);
    auto tr = ev.evaluate(t);
    for (const auto& v : structural_check(round)) {
        if (std::find(v.transmissions.begin(), v.transmissions.end(), t) != v.transmissions.end()) {
            return {false, tr.margin, v.detail};
        }
    }
    return {tr.success, tr.margin, tr.reason};
}

RoundConfig round_config(const Instance& inst, const Round& round) {
    RoundConfig cfg;
    cfg.reserve(round.size());
    for (const auto& sc : round) {
        if (sc.msg >= inst.messages().size()) {
            throw InputError("schedule references unknown message " + std::to_string(sc.msg));
        }
        const auto& m = inst.messages()[sc.msg];
        if (sc.copy < 0 || sc.copy >= m.copies) {
            throw InputError("schedule references copy " + std::to_string(sc.copy) + " of message " +
                             std::to_string(sc.msg) + " which has " + std::to_string(m.copies) + " copies");
        }
        if (!(sc.power > 0.0) || !std::isfinite(sc.power)) {
            throw InputError("non-positive power for message " + std::to_string(sc.msg));
        }
        cfg.push_back({m.sender, m.receiver, inst.position(m.sender), inst.position(m.receiver), sc.power});
    }
    return cfg;
}

PartitionCheck check_partition(const Instance& inst, const Schedule& sched) {
    const auto& msgs = inst.messages();
    std::vector<std::vector<int>> seen(msgs.size());
    for (std::size_t i = 0; i < msgs.size(); ++i) seen[i].assign(static_cast<std::size_t>(msgs[i].copies), 0);
    for (const auto& r : sched.rounds) {
        for (const auto& sc : r) {
            if (sc.msg >= msgs.size()) {
                throw InputError("schedule references unknown message " + std::to_string(sc.msg));
            }
            if (sc.copy < 0 || sc.copy >= msgs[sc.msg].copies) {
                throw InputError("schedule references copy " + std::to_string(sc.copy) + " of message " +
                                 std::to_string(sc.msg) + " which has " + std::to_string(msgs[sc.msg].copies) +
                                 " copies");
            }
            ++seen[sc.msg][static_cast<std::size_t>(sc.copy)];
        }
    }
    PartitionCheck pc;
    for (std::size_t i = 0; i < msgs.size(); ++i) {
        for (std::size_t c = 0; c < seen[i].size(); ++c) {
            if (seen[i][c] == 0) pc.missing.push_back({i, static_cast<int>(c)});
            if (seen[i][c] > 1) pc.duplicated.push_back({i, static_cast<int>(c)});
        }
    }
    pc.exact = pc.missing.empty() && pc.duplicated.empty();
    return pc;
}

VerifyReport verify_schedule(const Instance& inst, const Schedule& sched, const VerifyOptions& opts) {
    VerifyReport rep;
    rep.partition = check_partition(inst, sched);
    bool ok = rep.partition.exact;
    for (const auto& r : sched.rounds) {
        rep.rounds.push_back(verify_round(round_config(inst, r), inst.model(), opts));
        ok = ok && rep.rounds.back().success();
    }
    rep.success = ok;
    return rep;
}

}  // namespace mls
