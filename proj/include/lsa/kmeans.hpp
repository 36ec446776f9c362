#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "lsa/dataset.hpp"

namespace lsa {

struct KMeansResult {
    Matrix centers;                     // k' x d
    std::vector<Eigen::Index> assignment;  // one cluster per point
    std::vector<double> wcss_history;   // within-cluster SSE after every assignment step
    int iterations = 0;
};

inline constexpr int kKMeansMaxIter = 100;

/// Lloyd's algorithm with k' = min(k, n) centers seeded from distinct random
/// points. An empty cluster is reseeded at the point farthest from its center.
inline KMeansResult kmeans(const Matrix& points, Eigen::Index k, std::uint64_t seed,
                           int max_iter = kKMeansMaxIter) {
    const Eigen::Index n = points.rows();
    if (n < 1) throw Error("kmeans: empty point set");
    if (k < 1) throw Error("kmeans: k must be >= 1");
    const Eigen::Index kk = std::min(k, n);

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);

    KMeansResult res;
    res.centers.resize(kk, points.cols());
    for (Eigen::Index c = 0; c < kk; ++c) res.centers.row(c) = points.row(order[static_cast<std::size_t>(c)]);
    res.assignment.assign(static_cast<std::size_t>(n), -1);

    std::vector<double> dist2(static_cast<std::size_t>(n));
    for (int iter = 0; iter < max_iter; ++iter) {
        bool changed = false;
        double wcss = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            Eigen::Index best = 0;
            double best_d = (points.row(i) - res.centers.row(0)).squaredNorm();
            for (Eigen::Index c = 1; c < kk; ++c) {
                const double dd = (points.row(i) - res.centers.row(c)).squaredNorm();
                if (dd < best_d) {
                    best_d = dd;
                    best = c;
                }
            }
            auto& slot = res.assignment[static_cast<std::size_t>(i)];
            if (slot != best) changed = true;
            slot = best;
            dist2[static_cast<std::size_t>(i)] = best_d;
            wcss += best_d;
        }
        res.wcss_history.push_back(wcss);
        res.iterations = iter + 1;
        if (!changed && iter > 0) break;

        Matrix sums = Matrix::Zero(kk, points.cols());
        std::vector<Eigen::Index> counts(static_cast<std::size_t>(kk), 0);
        for (Eigen::Index i = 0; i < n; ++i) {
            const auto c = res.assignment[static_cast<std::size_t>(i)];
            sums.row(c) += points.row(i);
            ++counts[static_cast<std::size_t>(c)];
        }
        for (Eigen::Index c = 0; c < kk; ++c) {
            if (counts[static_cast<std::size_t>(c)] > 0) {
                res.centers.row(c) = sums.row(c) / static_cast<double>(counts[static_cast<std::size_t>(c)]);
                continue;
            }
            const auto far = static_cast<Eigen::Index>(
                std::max_element(dist2.begin(), dist2.end()) - dist2.begin());
            res.centers.row(c) = points.row(far);
            dist2[static_cast<std::size_t>(far)] = 0.0;
        }
    }
    return res;
}

}  // namespace lsa
