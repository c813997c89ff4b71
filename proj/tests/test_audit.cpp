#include <gtest/gtest.h>

#include <cmath>

#include "mls/audit.hpp"
#include "mls/drawing.hpp"
#include "mls/exact_solver.hpp"
#include "mls/reduction.hpp"

using namespace mls;

TEST(TailBound, Examples) {
    EXPECT_NEAR(tail_bound(5, 3.0), 0.028, 1e-12);
    EXPECT_NEAR(tail_bound(11, 3.0), 0.004884, 1e-6);
    EXPECT_THROW(tail_bound(5, 1.0), DomainError);
    EXPECT_THROW(tail_bound(1, 3.0), InputError);
}

TEST(TailBound, DominatesPartialSums) {
    for (double a : {3.0, 3.5, 4.0}) {
        for (int s : {2, 5, 11, 40}) {
            double sum = 0.0;
            for (int i = s; i < s + 200000; ++i) sum += std::pow(i, -a);
            EXPECT_GE(tail_bound(s, a), sum);
            const auto enc = tail_sum(s, a);
            EXPECT_LE(enc.lo, tail_bound(s, a));
            EXPECT_GE(enc.hi, sum);
        }
    }
}

TEST(FarField, Examples) {
    EXPECT_NEAR(far_field_bound(10000, 10, 3.0), 0.02, 1e-15);
    EXPECT_EQ(far_field_bound(0, 10, 3.0), 0.0);
    EXPECT_LT(far_field_bound(10000, 10, 4.0), far_field_bound(10000, 10, 3.0));
    EXPECT_THROW(far_field_bound(-1, 10, 3.0), InputError);
}

TEST(Facts, HoldAtThreeAndShrinkWithAlpha) {
    const auto f3 = fact_bounds(3.0);
    const auto f4 = fact_bounds(4.0);
    ASSERT_EQ(f3.size(), f4.size());
    for (std::size_t i = 0; i < f3.size(); ++i) {
        EXPECT_TRUE(f3[i].holds()) << f3[i].name;
        EXPECT_LT(f4[i].value, f3[i].value) << f3[i].name;
    }
    EXPECT_NEAR(edge_signal(3.0), 0.751315, 1e-6);
    EXPECT_THROW(fact_bounds(2.5), InputError);
}

TEST(Audit, BoundDominatesDirectSum) {
    const auto d = builtin_drawing("k2");
    ReduceParams rp;
    rp.n = 2;
    rp.compact = true;
    const auto red = reduce(d, rp);
    const auto sched = schedule_from_coloring(red.instance, red.map, *three_color(d));
    AuditOptions ao;
    ao.n = 2;
    ao.radius = 6.0;
    const auto rep = audit_instance(red.instance, sched, ao);
    ASSERT_FALSE(rep.entries.empty());
    const double alpha = red.instance.model().alpha;
    for (std::size_t k = 0; k < rep.entries.size(); k += 7) {
        const auto& e = rep.entries[k];
        const auto cfg = round_config(red.instance, sched.rounds[e.round]);
        std::vector<std::pair<Point, double>> others;
        for (std::size_t t = 0; t < cfg.size(); ++t) {
            if (t != e.index) others.push_back({cfg[t].from, cfg[t].power});
        }
        const double exact = interference(cfg[e.index].to, others, alpha);
        EXPECT_GE(e.total_bound(), exact * (1 - 1e-12)) << "entry " << k;
        EXPECT_LE(e.near.lo, exact * (1 + 1e-12));
    }
    EXPECT_EQ(rep.certified + rep.failed + rep.unresolved, rep.entries.size());
}
