#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>

#include "lsa/dataset.hpp"
#include "lsa/error.hpp"

namespace lsa {

inline constexpr double kRadicandTolerance = 1e-12;

struct UcbResult {
    Vector u;
    Vector exploit;  // w . z per candidate
    Vector explore;  // sqrt(z' A^-1 z) per candidate
    Eigen::Index chosen = 0;
};

/// LinUCB sufficient statistics with an optional biased-regularization anchor.
///
/// `A = lambda*I + sum z z'` and `b = lambda*w_prev + sum r z`, so that
/// `A^-1 b` minimizes `lambda |w - w_prev|^2 + |Z w - r|^2`. A zero anchor
/// gives plain ridge regression.
class LinUcb {
public:
    LinUcb(Eigen::Index dim, double lambda, const Vector& w_prev) : lambda_(lambda) {
        if (dim < 1) throw Error("LinUcb: dim must be >= 1");
        if (!(lambda > 0.0) || !std::isfinite(lambda)) throw Error("LinUcb: lambda must be positive");
        if (w_prev.size() != dim)
            throw Error("LinUcb: anchor has length " + std::to_string(w_prev.size()) + ", expected " +
                        std::to_string(dim));
        if (!w_prev.allFinite()) throw Error("LinUcb: non-finite anchor");
        a_ = lambda * Matrix::Identity(dim, dim);
        b_ = lambda * w_prev;
        w_prev_ = w_prev;
        refresh();
        w_ = w_prev_;
    }

    LinUcb(Eigen::Index dim, double lambda) : LinUcb(dim, lambda, Vector::Zero(dim)) {}

    Eigen::Index dim() const { return b_.size(); }
    double lambda() const { return lambda_; }
    const Matrix& a() const { return a_; }
    const Vector& b() const { return b_; }
    const Vector& anchor() const { return w_prev_; }

    std::size_t updates() const { return updates_; }

    /// A^-1 b. Before any informative update this is the anchor itself.
    const Vector& weights() const { return w_; }

    /// Upper confidence bounds for candidate contexts (one per row). The
    /// chosen candidate is the first maximizer.
    UcbResult ucb(const Matrix& contexts, double alpha) const {
        if (contexts.rows() < 1) throw Error("ucb: no candidates");
        if (contexts.cols() != dim()) throw Error("ucb: context dimension mismatch");
        if (!contexts.allFinite()) throw Error("ucb: non-finite context");
        if (!(alpha >= 0.0)) throw Error("ucb: alpha must be nonnegative");

        UcbResult res;
        res.exploit = contexts * w_;
        const Matrix solved = llt_.solve(contexts.transpose());
        res.explore.resize(contexts.rows());
        for (Eigen::Index k = 0; k < contexts.rows(); ++k) {
            double radicand = contexts.row(k).dot(solved.col(k));
            if (radicand < -kRadicandTolerance)
                throw NumericalError("ucb: negative confidence radicand " + std::to_string(radicand));
            res.explore(k) = std::sqrt(std::max(radicand, 0.0));
        }
        res.u = res.exploit + alpha * res.explore;
        res.chosen = 0;
        for (Eigen::Index k = 1; k < res.u.size(); ++k)
            if (res.u(k) > res.u(res.chosen)) res.chosen = k;
        return res;
    }

    /// Rank-one update A += z z', b += r z.
    void update(const Vector& z, double r) {
        if (z.size() != dim()) throw Error("update: context dimension mismatch");
        if (!z.allFinite() || !std::isfinite(r)) throw Error("update: non-finite input");
        if (z.isZero(0.0)) return;
        a_.noalias() += z * z.transpose();
        b_ += r * z;
        ++updates_;
        refresh();
    }

private:
    void refresh() {
        llt_.compute(a_);
        if (llt_.info() != Eigen::Success) throw NumericalError("LinUcb: A is not positive definite");
        w_ = llt_.solve(b_);
    }

    double lambda_;
    Matrix a_;
    Vector b_;
    Vector w_prev_;
    Vector w_;
    Eigen::LLT<Matrix> llt_;
    std::size_t updates_ = 0;
};

}  // namespace lsa
