#include <gtest/gtest.h>

#include <cmath>

#include "mls/power_control.hpp"

using namespace mls;

namespace {

Link link(NodeId s, NodeId r, Point a, Point b) { return {s, r, a, b}; }

}  // namespace

TEST(SpectralRadius, Examples) {
    Eigen::MatrixXd f(2, 2);
    f << 0, 0.5, 0.5, 0;
    auto e = spectral_radius(f);
    EXPECT_NEAR(e.rho, 0.5, 1e-10);
    EXPECT_LE(e.lower, 0.5 + 1e-12);
    EXPECT_GE(e.upper, 0.5 - 1e-12);

    EXPECT_NEAR(spectral_radius(Eigen::MatrixXd::Zero(3, 3)).rho, 0.0, 1e-12);

    f << 0, 2, 2, 0;
    EXPECT_NEAR(spectral_radius(f).rho, 2.0, 1e-9);

    Eigen::MatrixXd g(2, 2);
    g << 0, 4, 1, 0;
    EXPECT_NEAR(spectral_radius(g).rho, 2.0, 1e-9);
}

TEST(SpectralRadius, MatchesEigenSolver) {
    Eigen::MatrixXd f(4, 4);
    f << 0, 0.1, 0.3, 0.05, 0.2, 0, 0.1, 0.4, 0.3, 0.2, 0, 0.1, 0.05, 0.05, 0.5, 0;
    const double expect = f.eigenvalues().cwiseAbs().maxCoeff();
    const auto e = spectral_radius(f);
    EXPECT_NEAR(e.rho, expect, 1e-9);
    EXPECT_LE(e.lower, expect + 1e-12);
    EXPECT_GE(e.upper, expect - 1e-12);
}

TEST(GainMatrix, Entries) {
    const std::vector<Link> ls{link(0, 1, Point::grid(0, 0), Point::grid(0, 1)),
                               link(2, 3, Point::grid(2, 0), Point::grid(2, 1))};
    const auto f = gain_matrix(ls, {});
    EXPECT_DOUBLE_EQ(f(0, 0), 0.0);
    EXPECT_NEAR(f(0, 1), std::pow(std::sqrt(5.0), -3.0), 1e-15);
    EXPECT_NEAR(f(1, 0), f(0, 1), 1e-15);
}

TEST(RoundFeasible, Examples) {
    EXPECT_TRUE(round_feasible({}, {}).feasible);
    EXPECT_TRUE(round_feasible({link(0, 1, Point::grid(0, 0), Point::grid(0, 1))}, {}).feasible);
    const std::vector<Link> far{link(0, 1, Point::grid(0, 0), Point::grid(0, 1)),
                                link(2, 3, Point::grid(10, 0), Point::grid(10, 1))};
    EXPECT_TRUE(round_feasible(far, {}).feasible);

    const std::vector<Link> crossing{link(0, 1, Point::grid(0, 0), Point::grid(0, 1)),
                                     link(2, 3, Point::grid(1, 1), Point::grid(1, 0))};
    const auto r = round_feasible(crossing, {});
    EXPECT_FALSE(r.feasible);
    EXPECT_GE(r.spectrum.rho, 1.0 - 1e-9);

    const std::vector<Link> shared{link(0, 1, Point::grid(0, 0), Point::grid(0, 1)),
                                   link(1, 2, Point::grid(0, 1), Point::grid(0, 2))};
    EXPECT_EQ(round_feasible(shared, {}).status, FeasibilityStatus::Structural);
}

TEST(SynthesizePowers, SymmetricPairGetsEqualPowers) {
    const std::vector<Link> ls{link(0, 1, Point::grid(0, 0), Point::grid(0, 1)),
                               link(2, 3, Point::grid(3, 0), Point::grid(3, 1))};
    ModelParams m;
    m.noise = 0.1;
    const auto sol = synthesize_powers(ls, m, 0.05);
    ASSERT_EQ(sol.powers.size(), 2u);
    EXPECT_NEAR(sol.powers[0], sol.powers[1], 1e-9 * sol.powers[0]);
    EXPECT_GE(sol.achieved_margin, 0.05 - 1e-9);
    RoundConfig cfg;
    for (std::size_t i = 0; i < ls.size(); ++i) {
        cfg.push_back({ls[i].sender, ls[i].receiver, ls[i].from, ls[i].to, sol.powers[i]});
    }
    EXPECT_TRUE(verify_round(cfg, m).success());
}

TEST(SynthesizePowers, CrossingPairIsInfeasible) {
    const std::vector<Link> ls{link(0, 1, Point::grid(0, 0), Point::grid(0, 1)),
                               link(2, 3, Point::grid(1, 1), Point::grid(1, 0))};
    EXPECT_THROW(synthesize_powers(ls, {}), InfeasibleError);
}

TEST(FoschiniMiljanic, ConvergesOnFeasibleRound) {
    RoundConfig r;
    for (int i = 0; i < 5; ++i) {
        r.push_back({2 * i, 2 * i + 1, Point::grid(3 * i, 0), Point::grid(3 * i, 1), 1.0});
    }
    r[2].power = 0.01;
    ModelParams m;
    m.beta = 1.5;
    FmOptions o;
    o.target_margin = 0.02;
    const auto res = foschini_miljanic(r, m, o);
    ASSERT_TRUE(res.converged);
    for (std::size_t i = 0; i < r.size(); ++i) r[i].power = res.powers[i];
    EXPECT_TRUE(verify_round(r, m).success());
}

TEST(FoschiniMiljanic, FailsOnCrossingPair) {
    const RoundConfig r{{0, 1, Point::grid(0, 0), Point::grid(0, 1), 1.0},
                        {2, 3, Point::grid(1, 1), Point::grid(1, 0), 1.0}};
    FmOptions o;
    o.max_iter = 100;
    EXPECT_FALSE(foschini_miljanic(r, {}, o).converged);
}
