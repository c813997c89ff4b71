#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "mls/sinr.hpp"
#include "mls/spatial.hpp"

using namespace mls;

namespace {

Transmission tx(NodeId s, NodeId r, Point a, Point b, double p = 1.0) { return {s, r, a, b, p}; }

// Two parallel unit links with a horizontal gap of `gap` tenths.
RoundConfig parallel_pair(std::int64_t gap, double p0 = 1.0, double p1 = 1.0) {
    return {tx(0, 1, Point(0, 0), Point(0, 10), p0), tx(2, 3, Point(gap, 0), Point(gap, 10), p1)};
}

}  // namespace

TEST(Signal, Examples) {
    EXPECT_DOUBLE_EQ(signal(2.0, 1.0, 3.0), 2.0);
    EXPECT_NEAR(signal(1.0, 1.1, 3.0), 0.751315, 1e-6);
    EXPECT_DOUBLE_EQ(signal(1.0, 2.0, 3.0), 0.125);
    EXPECT_THROW(signal(1.0, 0.0, 3.0), DomainError);
    EXPECT_THROW(signal(0.0, 1.0, 3.0), DomainError);
}

TEST(Interference, Examples) {
    const Point r = Point::grid(0, 0);
    EXPECT_DOUBLE_EQ(interference(r, {}, 3.0), 0.0);
    EXPECT_DOUBLE_EQ(interference(r, {{Point::grid(2, 0), 1.0}}, 3.0), 0.125);
    EXPECT_NEAR(interference(r, {{Point::grid(2, 0), 1.0}, {Point::grid(0, 3), 1.0}}, 3.0), 1.0 / 8 + 1.0 / 27,
                1e-15);
    EXPECT_THROW(interference(r, {{r, 1.0}}, 3.0), DomainError);
}

TEST(VerifyRound, EmptyRoundSucceeds) {
    const auto rep = verify_round({}, {});
    EXPECT_TRUE(rep.success());
    EXPECT_EQ(rep.failures(), 0u);
}

TEST(VerifyRound, SingleLinkWithNoise) {
    ModelParams m;
    m.noise = 0.5;
    EXPECT_TRUE(verify_round({tx(0, 1, Point(0, 0), Point(10, 0))}, m).success());
    m.noise = 1.0;
    EXPECT_FALSE(verify_round({tx(0, 1, Point(0, 0), Point(10, 0))}, m).success());
}

TEST(VerifyRound, StructuralViolation) {
    const RoundConfig r{tx(0, 1, Point(0, 0), Point(10, 0)), tx(1, 2, Point(10, 0), Point(500, 0))};
    const auto rep = verify_round(r, {});
    ASSERT_EQ(rep.violations.size(), 1u);
    EXPECT_EQ(rep.violations[0].node, 1);
    EXPECT_FALSE(rep.success());
    EXPECT_FALSE(message_success(0, r, {}).success);
}

TEST(VerifyRound, ParallelLinks) {
    // Gap 1: cross distance sqrt(2), interference 0.354, so beta 3 fails.
    EXPECT_TRUE(verify_round(parallel_pair(20), {}).success());
    ModelParams m;
    m.beta = 3.0;
    EXPECT_FALSE(verify_round(parallel_pair(10), m).success());
}

TEST(VerifyRound, ScaleInvariance) {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> c(-60, 60);
    for (int trial = 0; trial < 50; ++trial) {
        RoundConfig r;
        for (NodeId i = 0; i < 5; ++i) {
            const Point a(c(rng) * 10, c(rng) * 10);
            const Point b(a.x10 + 10, a.y10);
            r.push_back(tx(2 * i, 2 * i + 1, a, b));
        }
        RoundConfig scaled = r;
        for (auto& t : scaled) {
            t.from = Point(t.from.x10 * 3, t.from.y10 * 3);
            t.to = Point(t.to.x10 * 3, t.to.y10 * 3);
            t.power *= 27.0;
        }
        bool ok = true;
        for (std::size_t i = 0; i + 1 < r.size() && ok; ++i) {
            for (std::size_t j = i + 1; j < r.size(); ++j) {
                if (r[i].from == r[j].from || r[i].from == r[j].to || r[i].to == r[j].to || r[i].to == r[j].from)
                    ok = false;
            }
        }
        if (!ok) continue;
        const auto a = verify_round(r, {});
        const auto b = verify_round(scaled, {});
        for (std::size_t t = 0; t < r.size(); ++t) {
            EXPECT_EQ(a.transmissions[t].success, b.transmissions[t].success);
            EXPECT_NEAR(a.transmissions[t].margin, b.transmissions[t].margin, 1e-9);
        }
    }
}

TEST(VerifyRound, RemovingTransmissionNeverHurts) {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> c(0, 40);
    for (int trial = 0; trial < 40; ++trial) {
        RoundConfig r;
        for (NodeId i = 0; i < 4; ++i) {
            const Point a(c(rng) * 10 + static_cast<int>(i) * 1000, c(rng) * 10);
            r.push_back(tx(2 * i, 2 * i + 1, a, Point(a.x10, a.y10 + 10)));
        }
        const auto full = verify_round(r, {});
        RoundConfig less(r.begin(), r.end() - 1);
        const auto part = verify_round(less, {});
        for (std::size_t t = 0; t < less.size(); ++t) {
            EXPECT_GE(part.transmissions[t].margin, full.transmissions[t].margin - 1e-12);
            if (full.transmissions[t].success) EXPECT_TRUE(part.transmissions[t].success);
        }
    }
}

TEST(VerifyRound, TreePathMatchesDirect) {
    RoundConfig r;
    NodeId id = 0;
    for (int i = 0; i < 60; ++i) {
        for (int j = 0; j < 60; ++j) {
            r.push_back(tx(id, id + 1, Point(i * 40, j * 40), Point(i * 40, j * 40 + 10)));
            id += 2;
        }
    }
    VerifyOptions direct;
    direct.direct_limit = r.size() + 1;
    VerifyOptions tree;
    tree.direct_limit = 10;
    const auto a = verify_round(r, {}, direct);
    const auto b = verify_round(r, {}, tree);
    ASSERT_EQ(a.transmissions.size(), b.transmissions.size());
    for (std::size_t t = 0; t < r.size(); t += 97) {
        EXPECT_EQ(a.transmissions[t].success, b.transmissions[t].success);
        // The tree stops at the coarsest level that decides, so only the verdict is exact.
        EXPECT_NEAR(a.transmissions[t].interference, b.transmissions[t].interference,
                    1e-2 * a.transmissions[t].interference);
    }
}

TEST(VerifyRound, RejectsBadPower) {
    EXPECT_THROW(verify_round({tx(0, 1, Point(0, 0), Point(10, 0), 0.0)}, {}), InputError);
}

TEST(VerifySchedule, PartitionFailures) {
    const Instance inst({}, {{0, Point::grid(0, 0)}, {1, Point::grid(0, 1)}}, {{0, 1, 2}});
    Schedule ok{{{{0, 0, 1.0}}, {{0, 1, 1.0}}}};
    EXPECT_TRUE(verify_schedule(inst, ok).success);

    Schedule missing{{{{0, 0, 1.0}}}};
    auto rep = verify_schedule(inst, missing);
    EXPECT_FALSE(rep.success);
    ASSERT_EQ(rep.partition.missing.size(), 1u);
    EXPECT_EQ(rep.partition.missing[0], (CopyRef{0, 1}));

    Schedule dup{{{{0, 0, 1.0}}, {{0, 0, 1.0}}, {{0, 1, 1.0}}}};
    rep = verify_schedule(inst, dup);
    EXPECT_FALSE(rep.success);
    EXPECT_EQ(rep.partition.duplicated.size(), 1u);

    Schedule bad{{{{0, 5, 1.0}}}};
    EXPECT_THROW(verify_schedule(inst, bad), InputError);
}

TEST(Interval, PathLossEnclosesValue) {
    for (std::int64_t d2 : {1, 100, 121, 12345, 987654321}) {
        for (double a : {2.5, 3.0, 3.7, 4.0}) {
            const auto iv = path_loss(d2, a);
            const double v = std::pow(std::sqrt(static_cast<double>(d2)) / 10.0, -a);
            EXPECT_TRUE(iv.contains(v)) << d2 << " " << a;
            EXPECT_LT(iv.width(), 1e-12 * v);
        }
    }
}

TEST(Interval, MpfrAgreesWithDouble) {
    const auto big = BigInterval::path_loss(256, 121, 3.0).to_interval();
    EXPECT_TRUE(big.contains(std::pow(1.1, -3.0)) || std::abs(big.mid() - std::pow(1.1, -3.0)) < 1e-15);
    EXPECT_EQ(BigInterval(128, 2.0).greater_than(BigInterval(128, 1.0)), Certainty::Yes);
    EXPECT_EQ(BigInterval(128, 1.0).greater_than(BigInterval(128, 2.0)), Certainty::No);
}

TEST(KdTree, SumMatchesBruteForce) {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> c(-2000, 2000);
    std::uniform_real_distribution<double> w(0.5, 2.0);
    std::vector<KdTree::Item> items;
    for (std::size_t i = 0; i < 3000; ++i) items.push_back({Point(c(rng), c(rng)), w(rng), i});
    const KdTree tree(items);
    for (int q = 0; q < 20; ++q) {
        const Point p(c(rng), c(rng));
        double exact = 0.0;
        for (const auto& it : items) {
            if (it.id == 0) continue;
            const auto d2 = dist2_tenths(it.p, p);
            if (d2 > 0) exact += it.w * std::pow(std::sqrt(static_cast<double>(d2)) / 10.0, -3.0);
        }
        const auto approx = tree.path_loss_sum(p, 3.0, 0.3, 0);
        EXPECT_LE(approx.sum.lo, exact * (1 + 1e-12));
        EXPECT_GE(approx.sum.hi, exact * (1 - 1e-12));
        const auto exact_tree = tree.path_loss_sum(p, 3.0, 0.0, 0);
        EXPECT_NEAR(exact_tree.sum.mid(), exact, 1e-9 * exact);
    }
}
