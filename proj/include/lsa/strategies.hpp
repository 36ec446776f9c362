#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lsa/dataset.hpp"
#include "lsa/error.hpp"
#include "lsa/kmeans.hpp"
#include "lsa/learner.hpp"

namespace lsa {

enum class Strategy { Uncertain, Represent, Dual, Quire };

inline std::string_view to_string(Strategy s) {
    switch (s) {
        case Strategy::Uncertain: return "uncertain";
        case Strategy::Represent: return "represent";
        case Strategy::Dual: return "dual";
        case Strategy::Quire: return "quire";
    }
    return "?";
}

inline Strategy parse_strategy(std::string_view name) {
    for (Strategy s : {Strategy::Uncertain, Strategy::Represent, Strategy::Dual, Strategy::Quire})
        if (to_string(s) == name) return s;
    throw Error("unknown strategy '" + std::string(name) + "'");
}

/// Tunables shared by the scoring functions.
struct StrategyParams {
    Eigen::Index clusters = 5;  // k for REPRESENT and DUAL
    double quire_ridge = 1.0;
};

/// Min-max rescaling to [0, 1]; a constant vector maps to all 0.5.
inline Vector normalize(const Vector& raw) {
    if (raw.size() == 0) return raw;
    const double lo = raw.minCoeff();
    const double hi = raw.maxCoeff();
    if (!(hi > lo)) return Vector::Constant(raw.size(), 0.5);
    return (raw.array() - lo) / (hi - lo);
}

struct ScoreVector {
    Vector raw;
    Vector normalized;

    static ScoreVector from_raw(Vector raw) {
        if (!raw.allFinite()) throw NumericalError("strategy produced a non-finite score");
        ScoreVector s;
        s.normalized = normalize(raw);
        s.raw = std::move(raw);
        return s;
    }
};

/// Negated distance to the decision hyperplane: -|w.x + b| / |w|.
inline ScoreVector score_uncertain(const Classifier& c, const Matrix& pool) {
    if (pool.rows() == 0) throw Error("score_uncertain: empty pool");
    if (pool.cols() != c.dim()) throw Error("score_uncertain: dimension mismatch");
    const double norm = c.weights.norm();
    if (norm == 0.0) return ScoreVector::from_raw(Vector::Zero(pool.rows()));
    const Vector f = (pool * c.weights).array() + c.bias;
    return ScoreVector::from_raw(-f.array().abs() / norm);
}

namespace detail {

inline Vector nearest_center_distance(const Matrix& pool, const Matrix& centers) {
    Vector out(pool.rows());
    for (Eigen::Index i = 0; i < pool.rows(); ++i)
        out(i) = std::sqrt((centers.rowwise() - pool.row(i)).rowwise().squaredNorm().minCoeff());
    return out;
}

}  // namespace detail

/// 1 / (1 + distance to the nearest k-means center).
inline ScoreVector score_representative(const Matrix& pool, Eigen::Index k, std::uint64_t seed) {
    if (pool.rows() == 0) throw Error("score_representative: empty pool");
    const auto km = kmeans(pool, k, seed);
    const Vector dist = detail::nearest_center_distance(pool, km.centers);
    return ScoreVector::from_raw((1.0 + dist.array()).inverse());
}

inline constexpr double kMinBandwidth = 1e-6;

/// Equal-weight isotropic Gaussian mixture on fixed centers.
struct GaussianMixture {
    Matrix centers;
    Vector bandwidth;

    /// Mixture density at x, accumulated in log space.
    double density(const Eigen::Ref<const Eigen::RowVectorXd>& x) const {
        const auto k = centers.rows();
        const double d = static_cast<double>(centers.cols());
        Vector log_terms(k);
        for (Eigen::Index c = 0; c < k; ++c) {
            const double s2 = bandwidth(c) * bandwidth(c);
            log_terms(c) = -0.5 * d * std::log(2.0 * std::numbers::pi * s2) -
                           (x - centers.row(c)).squaredNorm() / (2.0 * s2);
        }
        const double top = log_terms.maxCoeff();
        const double lse = top + std::log((log_terms.array() - top).exp().sum());
        return std::exp(lse - std::log(static_cast<double>(k)));
    }
};

/// Mixture whose components sit on the k-means centers of `pool`, each with
/// bandwidth = mean member-to-center distance (floored at kMinBandwidth).
inline GaussianMixture fit_cluster_mixture(const Matrix& pool, Eigen::Index k, std::uint64_t seed) {
    const auto km = kmeans(pool, k, seed);
    const auto kk = km.centers.rows();
    Vector total = Vector::Zero(kk);
    Vector count = Vector::Zero(kk);
    for (Eigen::Index i = 0; i < pool.rows(); ++i) {
        Eigen::Index best = 0;
        (km.centers.rowwise() - pool.row(i)).rowwise().squaredNorm().minCoeff(&best);
        total(best) += (pool.row(i) - km.centers.row(best)).norm();
        count(best) += 1.0;
    }
    GaussianMixture gm;
    gm.centers = km.centers;
    gm.bandwidth.resize(kk);
    for (Eigen::Index c = 0; c < kk; ++c)
        gm.bandwidth(c) = std::max(count(c) > 0.0 ? total(c) / count(c) : 0.0, kMinBandwidth);
    return gm;
}

/// Uncertainty 1 - |2 sigmoid(f(x)) - 1| times cluster-mixture density.
inline ScoreVector score_dual(const Classifier& c, const Matrix& pool, Eigen::Index k, std::uint64_t seed) {
    if (pool.rows() == 0) throw Error("score_dual: empty pool");
    if (pool.cols() != c.dim()) throw Error("score_dual: dimension mismatch");
    const auto gm = fit_cluster_mixture(pool, k, seed);
    Vector raw(pool.rows());
    for (Eigen::Index i = 0; i < pool.rows(); ++i) {
        const double f = c.weights.dot(pool.row(i).transpose()) + c.bias;
        const double unc = 1.0 - std::abs(2.0 * logistic::sigmoid(f) - 1.0);
        raw(i) = unc * gm.density(pool.row(i));
    }
    return ScoreVector::from_raw(std::move(raw));
}

/// Median Euclidean distance over all distinct pairs of rows.
inline double median_pairwise_distance(const Matrix& x) {
    std::vector<double> d;
    d.reserve(static_cast<std::size_t>(x.rows() * (x.rows() - 1) / 2));
    for (Eigen::Index i = 0; i < x.rows(); ++i)
        for (Eigen::Index j = i + 1; j < x.rows(); ++j) d.push_back((x.row(i) - x.row(j)).norm());
    if (d.empty()) return 1.0;
    const auto mid = d.begin() + static_cast<std::ptrdiff_t>(d.size() / 2);
    std::nth_element(d.begin(), mid, d.end());
    double med = *mid;
    if (d.size() % 2 == 0) med = 0.5 * (med + *std::max_element(d.begin(), mid));
    return med > 0.0 ? med : 1.0;
}

/// exp(-|x_i - x_j|^2 / (2 bandwidth^2)).
inline Matrix rbf_kernel(const Matrix& x, double bandwidth) {
    const Vector sq = x.rowwise().squaredNorm();
    Matrix k = -2.0 * x * x.transpose();
    k.colwise() += sq;
    k.rowwise() += sq.transpose();
    k = (-k.array().max(0.0) / (2.0 * bandwidth * bandwidth)).exp();
    k.diagonal().setOnes();
    return k;
}

/// QUIRE informativeness over the unlabeled pool (pool order).
///
/// With M = K + ridge*I over the training set, l the labeled indices and u
/// the unlabeled ones, the min-max label-assignment objective of querying s
/// reduces to
///     (1 + 2 |(M_ul M_ll^-1 y_l)_s|) / (M_ss - M_sl M_ll^-1 M_ls)
/// and smaller is better; the returned raw score is its negation.
inline ScoreVector score_quire(const Matrix& kernel, const std::vector<std::pair<std::size_t, int>>& labeled,
                               const std::vector<std::size_t>& unlabeled, double ridge = 1.0) {
    if (unlabeled.empty()) throw Error("score_quire: empty pool");
    if (kernel.rows() != kernel.cols()) throw Error("score_quire: kernel is not square");
    const auto nl = static_cast<Eigen::Index>(labeled.size());
    const auto nu = static_cast<Eigen::Index>(unlabeled.size());

    Matrix m_ll(nl, nl);
    Matrix m_ul(nu, nl);
    Vector y(nl);
    for (Eigen::Index a = 0; a < nl; ++a) {
        const auto ia = static_cast<Eigen::Index>(labeled[static_cast<std::size_t>(a)].first);
        y(a) = labeled[static_cast<std::size_t>(a)].second;
        for (Eigen::Index b = 0; b < nl; ++b)
            m_ll(a, b) = kernel(ia, static_cast<Eigen::Index>(labeled[static_cast<std::size_t>(b)].first));
        m_ll(a, a) += ridge;
        for (Eigen::Index s = 0; s < nu; ++s)
            m_ul(s, a) = kernel(static_cast<Eigen::Index>(unlabeled[static_cast<std::size_t>(s)]), ia);
    }

    Vector raw(nu);
    Vector coupling = Vector::Zero(nu);
    Vector explained = Vector::Zero(nu);
    if (nl > 0) {
        Eigen::LLT<Matrix> llt(m_ll);
        if (llt.info() != Eigen::Success) throw NumericalError("score_quire: singular regularized kernel");
        coupling = m_ul * llt.solve(y);
        const Matrix half = llt.matrixL().solve(m_ul.transpose());
        explained = half.colwise().squaredNorm().transpose();
    }
    for (Eigen::Index s = 0; s < nu; ++s) {
        const auto is = static_cast<Eigen::Index>(unlabeled[static_cast<std::size_t>(s)]);
        const double schur = kernel(is, is) + ridge - explained(s);
        if (!(schur > 0.0)) throw NumericalError("score_quire: singular regularized kernel");
        raw(s) = -(1.0 + 2.0 * std::abs(coupling(s))) / schur;
    }
    return ScoreVector::from_raw(std::move(raw));
}

/// Evaluates a fixed, ordered list of strategies against one training set.
/// Holds the QUIRE kernel, which depends only on the training features.
class StrategySet {
public:
    StrategySet(std::vector<Strategy> strategies, const Dataset& train, StrategyParams params = {})
        : strategies_(std::move(strategies)), train_(&train), params_(params) {
        if (strategies_.empty()) throw Error("strategy list is empty");
        for (std::size_t i = 0; i < strategies_.size(); ++i)
            for (std::size_t j = i + 1; j < strategies_.size(); ++j)
                if (strategies_[i] == strategies_[j])
                    throw Error("strategy '" + std::string(to_string(strategies_[i])) + "' listed twice");
        if (std::find(strategies_.begin(), strategies_.end(), Strategy::Quire) != strategies_.end())
            kernel_ = rbf_kernel(train.features, median_pairwise_distance(train.features));
    }

    const std::vector<Strategy>& strategies() const { return strategies_; }
    std::size_t size() const { return strategies_.size(); }

    ScoreVector score(Strategy s, const Classifier& h, const PoolState& pools, const Matrix& pool_rows,
                      std::uint64_t seed) const {
        switch (s) {
            case Strategy::Uncertain: return score_uncertain(h, pool_rows);
            case Strategy::Represent: return score_representative(pool_rows, params_.clusters, seed);
            case Strategy::Dual: return score_dual(h, pool_rows, params_.clusters, seed);
            case Strategy::Quire: return score_quire(*kernel_, pools.labeled, pools.unlabeled, params_.quire_ridge);
        }
        throw Error("unreachable strategy");
    }

    /// One ScoreVector per configured strategy, all in unlabeled-pool order.
    std::vector<ScoreVector> score_all(const Classifier& h, const PoolState& pools, std::uint64_t seed) const {
        const Matrix pool_rows = select_rows(*train_, pools.unlabeled).features;
        std::vector<ScoreVector> out;
        out.reserve(strategies_.size());
        for (Strategy s : strategies_) out.push_back(score(s, h, pools, pool_rows, seed));
        return out;
    }

private:
    std::vector<Strategy> strategies_;
    const Dataset* train_;
    StrategyParams params_;
    std::optional<Matrix> kernel_;
};

}  // namespace lsa
