#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "lsa/dataset.hpp"
#include "lsa/synthetic.hpp"
#include "test_util.hpp"

using namespace lsa;

namespace {

Dataset toy(std::size_t n, std::uint64_t seed = 3) { return synthetic::gaussian_pair(n, 3, 2.0, seed, "toy"); }

std::set<std::size_t> row_signature(const Dataset& ds) {
    // Rows of synthetic data are unique, so their first coordinate identifies them.
    std::set<std::size_t> out;
    for (Eigen::Index i = 0; i < ds.size(); ++i) out.insert(std::hash<double>{}(ds.features(i, 0)));
    return out;
}

}  // namespace

TEST(LoadCsv, ParsesLabelsAndRows) {
    testutil::TempDir dir;
    const auto ds = load_csv(dir.write("two.csv", "1,0.5,2.0\n-1,1.0,0.0\n"));
    EXPECT_EQ(ds.name, "two");
    ASSERT_EQ(ds.size(), 2);
    ASSERT_EQ(ds.dim(), 2);
    EXPECT_EQ(ds.labels, (std::vector<int>{1, -1}));
    EXPECT_DOUBLE_EQ(ds.features(0, 0), 0.5);
    EXPECT_DOUBLE_EQ(ds.features(0, 1), 2.0);
    EXPECT_DOUBLE_EQ(ds.features(1, 0), 1.0);
}

TEST(LoadCsv, ZeroLabelMapsToNegativeAndHeaderIsSkipped) {
    testutil::TempDir dir;
    const auto ds = load_csv(dir.write("h.csv", "label,a\n0,1\n+1,2\n\n-1,3\n"));
    EXPECT_EQ(ds.labels, (std::vector<int>{-1, 1, -1}));
    EXPECT_EQ(ds.size(), 3);
}

TEST(LoadCsv, RejectsBadLabelWithLineNumber) {
    testutil::TempDir dir;
    const auto p = dir.write("bad.csv", "1,0.5\n2,0.1\n");
    try {
        load_csv(p);
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 2u);
        EXPECT_NE(std::string(e.what()).find("unparseable label at line 2"), std::string::npos);
    }
}

TEST(LoadCsv, RejectsDimensionMismatchAndEmptyFile) {
    testutil::TempDir dir;
    EXPECT_THROW(load_csv(dir.write("m.csv", "1,1,2,3\n-1,1,2\n")), ParseError);
    EXPECT_THROW(load_csv(dir.write("e.csv", "")), Error);
    EXPECT_THROW(load_csv(dir.write("nan.csv", "1,nan\n")), ParseError);
    EXPECT_THROW(load_csv(dir.path() / "missing.csv"), Error);
}

TEST(LoadLibsvm, FillsMissingIndicesWithZero) {
    testutil::TempDir dir;
    const auto ds = load_libsvm(dir.write("s.libsvm", "-1 1:0.5 3:2\n+1\n1 2:1.5 # comment\n"));
    ASSERT_EQ(ds.dim(), 3);
    ASSERT_EQ(ds.size(), 3);
    EXPECT_EQ(ds.labels, (std::vector<int>{-1, 1, 1}));
    EXPECT_EQ(ds.features.row(0), Eigen::RowVector3d(0.5, 0.0, 2.0));
    EXPECT_TRUE(ds.features.row(1).isZero(0.0));
    EXPECT_EQ(ds.features.row(2), Eigen::RowVector3d(0.0, 1.5, 0.0));
}

TEST(LoadLibsvm, RejectsMalformedTokens) {
    testutil::TempDir dir;
    try {
        load_libsvm(dir.write("a.libsvm", "1 1:0\n1 2:a\n"));
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 2u);
    }
    EXPECT_THROW(load_libsvm(dir.write("b.libsvm", "1 3:1 2:1\n")), ParseError);
    EXPECT_THROW(load_libsvm(dir.write("c.libsvm", "1 2:1 2:1\n")), ParseError);
    EXPECT_THROW(load_libsvm(dir.write("d.libsvm", "1 0:1\n")), ParseError);
    EXPECT_THROW(load_libsvm(dir.write("e.libsvm", "3 1:1\n")), ParseError);
}

TEST(Subsample, NoOpAtOrBelowCap) {
    const auto ds = toy(100);
    const auto same = subsample(ds, 2000, 1);
    EXPECT_EQ(same.features, ds.features);
    EXPECT_EQ(same.labels, ds.labels);
    const auto exact = subsample(toy(50), 50, 1);
    EXPECT_EQ(exact.features, toy(50).features);
}

TEST(Subsample, DeterministicPerSeed) {
    const auto ds = toy(5000);
    const auto a = subsample(ds, 2000, 42);
    const auto b = subsample(ds, 2000, 42);
    const auto c = subsample(ds, 2000, 43);
    EXPECT_EQ(a.size(), 2000);
    EXPECT_EQ(a.features, b.features);
    EXPECT_EQ(a.labels, b.labels);
    EXPECT_NE(a.features, c.features);
    EXPECT_THROW(subsample(ds, 0, 1), Error);
}

TEST(Split, HalvesIntoDisjointCover) {
    const auto ds = toy(100);
    const auto parts = split(ds, 0.5, 7);
    EXPECT_EQ(parts.train.size(), 50);
    EXPECT_EQ(parts.test.size(), 50);
    auto tr = row_signature(parts.train);
    const auto te = row_signature(parts.test);
    for (auto h : te) EXPECT_EQ(tr.count(h), 0u);
    tr.insert(te.begin(), te.end());
    EXPECT_EQ(tr, row_signature(ds));
}

TEST(Split, CeilingRuleAndDeterminism) {
    const auto parts = split(toy(3), 0.5, 1);
    EXPECT_EQ(parts.train.size(), 2);
    EXPECT_EQ(parts.test.size(), 1);
    const auto a = split(toy(40), 0.3, 9);
    const auto b = split(toy(40), 0.3, 9);
    EXPECT_EQ(a.train.features, b.train.features);
    EXPECT_EQ(a.test.labels, b.test.labels);
    EXPECT_THROW(split(toy(1), 0.5, 1), Error);
    EXPECT_THROW(split(toy(10), 1.0, 1), Error);
}

TEST(Standardize, UsesTrainingStatistics) {
    const auto parts = standardize(split(toy(200), 0.5, 2));
    const Vector mean = parts.train.features.colwise().mean();
    EXPECT_LT(mean.cwiseAbs().maxCoeff(), 1e-12);
    for (Eigen::Index j = 0; j < parts.train.dim(); ++j)
        EXPECT_NEAR((parts.train.features.col(j).array().square()).mean(), 1.0, 1e-12);
    // The test split is transformed, not re-standardized.
    EXPECT_GT(parts.test.features.colwise().mean().cwiseAbs().maxCoeff(), 1e-6);
}

TEST(InitPools, SeedsContainBothClasses) {
    const auto ds = toy(60);
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto pools = init_pools(ds, 4, seed);
        ASSERT_EQ(pools.labeled.size(), 4u);
        bool pos = false, neg = false;
        for (const auto& [i, y] : pools.labeled) {
            EXPECT_EQ(y, ds.labels[i]);
            (y > 0 ? pos : neg) = true;
        }
        EXPECT_TRUE(pos && neg);
        EXPECT_EQ(pools.total(), 60u);
        EXPECT_TRUE(std::is_sorted(pools.unlabeled.begin(), pools.unlabeled.end()));
    }
}

TEST(InitPools, BoundaryAndErrors) {
    const auto ds = toy(12);
    const auto all = init_pools(ds, 12, 1);
    EXPECT_EQ(all.labeled.size(), 12u);
    EXPECT_TRUE(all.unlabeled.empty());

    Dataset single = ds;
    std::fill(single.labels.begin(), single.labels.end(), 1);
    EXPECT_THROW(init_pools(single, 4, 1), Error);
    EXPECT_THROW(init_pools(ds, 13, 1), Error);
    EXPECT_THROW(init_pools(ds, 1, 1), Error);  // one seed can never hold both classes
}

TEST(PoolState, RandomMutationsKeepPartition) {
    const auto ds = toy(80);
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        auto pools = init_pools(ds, 4, rng());
        while (!pools.unlabeled.empty()) {
            std::uniform_int_distribution<std::size_t> pick(0, pools.unlabeled.size() - 1);
            const std::size_t idx = pools.unlabeled[pick(rng)];
            pools.reveal(idx, ds.labels[idx]);
            std::set<std::size_t> seen(pools.unlabeled.begin(), pools.unlabeled.end());
            for (const auto& [i, y] : pools.labeled) ASSERT_TRUE(seen.insert(i).second);
            ASSERT_EQ(seen.size(), 80u);
        }
        EXPECT_THROW(pools.reveal(0, 1), Error);
    }
}
