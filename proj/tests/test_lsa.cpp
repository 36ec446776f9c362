#include <gtest/gtest.h>

#include <set>

#include "lsa/linear_aggregation.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace lsa;

TEST(Contexts, RowsCarrySharedCoordinateFirst) {
    const Matrix z = build_contexts({Eigen::Vector2d(1, 0), Eigen::Vector2d(0, 1)}, 0.75);
    Matrix expected(2, 3);
    expected << 0.75, 1, 0, 0.75, 0, 1;
    EXPECT_EQ(z, expected);
}

TEST(Contexts, UsesNormalizedScores) {
    const auto a = ScoreVector::from_raw(Eigen::Vector3d(-2, 0, 2));
    const auto b = ScoreVector::from_raw(Eigen::Vector3d(4, 4, 4));
    const Matrix z = build_contexts(std::vector<ScoreVector>{a, b}, 0.5);
    EXPECT_EQ(z.col(1), Vector(Eigen::Vector3d(0, 0.5, 1)));
    EXPECT_EQ(z.col(2), Vector(Eigen::Vector3d::Constant(0.5)));
}

TEST(Contexts, RejectsMismatchedScores) {
    EXPECT_THROW(build_contexts(std::vector<Vector>{}, 0.5), Error);
    EXPECT_THROW(build_contexts({Eigen::Vector2d(1, 0), Eigen::Vector3d(0, 1, 2)}, 0.5), Error);
}

TEST(ImportanceWeight, ClampsAtEpsilon) {
    EXPECT_DOUBLE_EQ(importance_weight(2.0, 1e-3), 0.5);
    EXPECT_DOUBLE_EQ(importance_weight(-0.5, 1e-3), 1000.0);
    EXPECT_DOUBLE_EQ(importance_weight(0.0, 1e-3), 1000.0);
    EXPECT_DOUBLE_EQ(importance_weight(1e-3, 1e-3), 1000.0);
    EXPECT_THROW(importance_weight(1.0, 0.0), Error);
}

TEST(IwAcc, WeightsCorrectPredictions) {
    Dataset train;
    train.features.resize(2, 1);
    train.features << 1.0, -1.0;
    train.labels = {1, 1};
    Classifier h;
    h.weights = Vector::Ones(1);
    h.bias = 0.0;
    // Point 0 is classified correctly, point 1 is not.
    const RewardLedger ledger{{0, 1.0, 1, 1.0}, {1, 3.0, 1, 1.0 / 3.0}};
    EXPECT_DOUBLE_EQ(iw_acc(ledger, h, train), 0.25);
    EXPECT_THROW(iw_acc({}, h, train), Error);
}

TEST(SharedContext, InitialValue) {
    auto p = testutil::gaussian_problem(60, 1);
    const auto labeled = labeled_examples(p.train, p.pools);
    const auto h0 = train(labeled);
    EXPECT_DOUBLE_EQ(initial_shared_context(h0, labeled), accuracy(h0, labeled));
}

TEST(Run, ZeroBudgetReturnsAnchor) {
    auto p = testutil::gaussian_problem(60, 2);
    LsaConfig cfg;
    cfg.budget = 0;
    const Vector w = Eigen::Vector4d(0.1, -0.2, 0.3, 0.4);
    const auto trace = run(cfg, p.pools, p.train, p.test, w);
    EXPECT_TRUE(trace.queried.empty());
    EXPECT_TRUE(trace.rewards.empty());
    EXPECT_EQ(trace.test_accuracy.size(), 1u);
    EXPECT_EQ(trace.final_experience, w);
}

TEST(Run, MatchesScriptedReplay) {
    auto p = testutil::make_problem(synthetic::gaussian_pair(20, 2, 1.5, 4), 3, 4);
    ASSERT_EQ(p.train.size(), 10);
    LsaConfig cfg;
    cfg.budget = 3;
    cfg.strategies = {Strategy::Uncertain, Strategy::Represent};
    cfg.strategy_params.clusters = 2;
    cfg.seed = 17;
    for (const Vector& w_prev : {Vector(Vector::Zero(3)), Vector(Eigen::Vector3d(0.2, -0.1, 0.4))}) {
        std::vector<IterationRecord> seen;
        const auto trace = run(cfg, p.pools, p.train, p.test, w_prev, [&](const IterationRecord& rec) {
            seen.push_back(rec);
            seen.back().bandit = nullptr;
            seen.back().classifier = nullptr;
        });
        const auto script = oracle::scripted_lsa(cfg, p.pools, p.train, w_prev);
        ASSERT_EQ(seen.size(), 3u);
        ASSERT_EQ(script.size(), 3u);
        for (std::size_t t = 0; t < 3; ++t) {
            EXPECT_LE((seen[t].contexts - script[t].contexts).cwiseAbs().maxCoeff(), 1e-10);
            EXPECT_LE((seen[t].ucb.u - script[t].u).cwiseAbs().maxCoeff(), 1e-10);
            EXPECT_EQ(seen[t].ucb.chosen, script[t].chosen);
            EXPECT_EQ(seen[t].queried, script[t].queried);
            EXPECT_NEAR(seen[t].weight, script[t].v, 1e-10);
            EXPECT_NEAR(seen[t].reward, script[t].r, 1e-10);
            EXPECT_EQ(trace.queried[t], script[t].queried);
        }
        EXPECT_LE(oracle::relative_diff(trace.final_experience, script.back().w), 1e-10);
    }
}

TEST(Run, ObserverSeesBanditState) {
    auto p = testutil::gaussian_problem(40, 5);
    LsaConfig cfg;
    cfg.budget = 4;
    std::vector<Matrix> a;
    std::vector<Vector> b;
    run(cfg, p.pools, p.train, p.test, Vector::Zero(4), [&](const IterationRecord& rec) {
        a.push_back(rec.bandit->a());
        b.push_back(rec.bandit->b());
    });
    ASSERT_EQ(a.size(), 4u);
    EXPECT_EQ(a.back().rows(), 4);
}

TEST(Run, Deterministic) {
    auto p = testutil::gaussian_problem(80, 6);
    LsaConfig cfg;
    cfg.budget = 10;
    cfg.seed = 99;
    const auto a = run(cfg, p.pools, p.train, p.test, Vector::Zero(4));
    const auto b = run(cfg, p.pools, p.train, p.test, Vector::Zero(4));
    EXPECT_EQ(a.queried, b.queried);
    EXPECT_EQ(a.rewards, b.rewards);
    EXPECT_EQ(a.test_accuracy, b.test_accuracy);
    EXPECT_EQ(a.final_experience, b.final_experience);
}

TEST(Run, Invariants) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        auto p = testutil::gaussian_problem(80, seed);
        LsaConfig cfg;
        cfg.budget = p.pools.unlabeled.size();
        cfg.seed = seed;
        std::vector<double> weights;
        const auto trace = run(cfg, p.pools, p.train, p.test, Vector::Zero(4),
                               [&](const IterationRecord& rec) { weights.push_back(rec.weight); });
        const std::set<std::size_t> unique(trace.queried.begin(), trace.queried.end());
        EXPECT_EQ(unique.size(), trace.queried.size());
        for (const auto& [i, y] : p.pools.labeled) EXPECT_FALSE(unique.count(i));
        EXPECT_EQ(trace.test_accuracy.size(), cfg.budget + 1);
        for (double r : trace.rewards) {
            EXPECT_GE(r, 0.0);
            EXPECT_LE(r, 1.0);
        }
        for (double v : weights) {
            EXPECT_GT(v, 0.0);
            EXPECT_LE(v, 1.0 / cfg.epsilon);
        }
    }
}

TEST(Run, SingleStrategyGreedyFollowsItsScores) {
    auto p = testutil::gaussian_problem(60, 7);
    LsaConfig cfg;
    cfg.budget = 8;
    cfg.alpha = 0.0;
    cfg.strategies = {Strategy::Uncertain};
    // One strategy, alpha = 0: whenever the strategy's weight is positive the
    // query is that strategy's own argmax.
    Vector w = Eigen::Vector2d(0.0, 1.0);
    int checked = 0;
    run(cfg, p.pools, p.train, p.test, w, [&](const IterationRecord& rec) {
        if (w(1) > 0.0) {
            Eigen::Index best = 0;
            rec.contexts.col(1).maxCoeff(&best);
            EXPECT_EQ(rec.ucb.chosen, best);
            ++checked;
        }
        w = rec.bandit->weights();
    });
    EXPECT_GT(checked, 0);
    const auto lsa_trace = run(cfg, p.pools, p.train, p.test, Eigen::Vector2d(0.0, 1.0));
    const auto base = run_single_strategy(Strategy::Uncertain, cfg, p.pools, p.train, p.test);
    EXPECT_EQ(lsa_trace.queried.front(), base.queried.front());
}

TEST(Run, BudgetLargerThanPoolIsRejected) {
    auto p = testutil::gaussian_problem(20, 8);
    LsaConfig cfg;
    cfg.budget = p.pools.unlabeled.size() + 1;
    EXPECT_THROW(run(cfg, p.pools, p.train, p.test, Vector::Zero(4)), Error);
    EXPECT_THROW(run_single_strategy(Strategy::Uncertain, cfg, p.pools, p.train, p.test), Error);
}

TEST(Run, RejectsMisshapenAnchor) {
    auto p = testutil::gaussian_problem(20, 9);
    LsaConfig cfg;
    cfg.budget = 1;
    EXPECT_THROW(run(cfg, p.pools, p.train, p.test, Vector::Zero(3)), Error);
}

TEST(Run, BaselineHasNoRewards) {
    auto p = testutil::gaussian_problem(40, 10);
    LsaConfig cfg;
    cfg.budget = 5;
    const auto t = run_single_strategy(Strategy::Represent, cfg, p.pools, p.train, p.test);
    EXPECT_TRUE(t.rewards.empty());
    EXPECT_EQ(t.queried.size(), 5u);
    EXPECT_EQ(t.test_accuracy.size(), 6u);
}
