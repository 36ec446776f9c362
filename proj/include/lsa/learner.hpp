#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lsa/dataset.hpp"
#include "lsa/error.hpp"

namespace lsa {

struct TrainOptions {
    double reg_c = 1.0;
    double tol = 1e-8;
    int max_iter = 200;
};

struct TrainInfo {
    int iterations = 0;
    double grad_norm = 0.0;
    bool converged = false;
    bool single_class = false;
};

/// Linear classifier f(x) = w.x + b produced by logistic regression.
struct Classifier {
    Vector weights;
    double bias = 0.0;
    TrainInfo info;

    Eigen::Index dim() const { return weights.size(); }
};

/// Decision value w.x + b.
inline double decision(const Classifier& c, const Eigen::Ref<const Vector>& x) {
    if (x.size() != c.dim())
        throw Error("decision: dimension mismatch (" + std::to_string(x.size()) + " vs " +
                    std::to_string(c.dim()) + ")");
    return c.weights.dot(x) + c.bias;
}

inline int sign_label(double decision_value) { return decision_value >= 0.0 ? 1 : -1; }

/// Sign of the decision value; exact zero maps to +1.
inline int predict(const Classifier& c, const Eigen::Ref<const Vector>& x) {
    return sign_label(decision(c, x));
}

inline Classifier negated(const Classifier& c) {
    Classifier out = c;
    out.weights = -c.weights;
    out.bias = -c.bias;
    return out;
}

/// Fraction of rows of `ds` predicted correctly.
inline double accuracy(const Classifier& c, const Dataset& ds) {
    if (ds.size() == 0) throw Error("accuracy: empty dataset");
    if (ds.dim() != c.dim()) throw Error("accuracy: dimension mismatch");
    const Vector f = (ds.features * c.weights).array() + c.bias;
    Eigen::Index correct = 0;
    for (Eigen::Index i = 0; i < f.size(); ++i)
        if (sign_label(f(i)) == ds.labels[static_cast<std::size_t>(i)]) ++correct;
    return static_cast<double>(correct) / static_cast<double>(ds.size());
}

namespace logistic {

// Parameters are packed as theta = (w_1..w_d, b).

/// log(1 + exp(-m)) without overflow.
inline double log_loss(double margin) {
    return margin > 0.0 ? std::log1p(std::exp(-margin)) : -margin + std::log1p(std::exp(margin));
}

/// 1 / (1 + exp(-t)).
inline double sigmoid(double t) {
    if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
    const double e = std::exp(t);
    return e / (1.0 + e);
}

inline Vector margins(const Matrix& x, std::span<const int> y, const Vector& theta) {
    const Eigen::Index d = x.cols();
    Vector m = (x * theta.head(d)).array() + theta(d);
    for (Eigen::Index i = 0; i < m.size(); ++i) m(i) *= y[static_cast<std::size_t>(i)];
    return m;
}

/// 0.5 |w|^2 + C sum_i log(1 + exp(-y_i (w.x_i + b))).
inline double objective(const Matrix& x, std::span<const int> y, double reg_c, const Vector& theta) {
    const Eigen::Index d = x.cols();
    const Vector m = margins(x, y, theta);
    double loss = 0.0;
    for (Eigen::Index i = 0; i < m.size(); ++i) loss += log_loss(m(i));
    return 0.5 * theta.head(d).squaredNorm() + reg_c * loss;
}

inline Vector gradient(const Matrix& x, std::span<const int> y, double reg_c, const Vector& theta) {
    const Eigen::Index d = x.cols();
    const Vector m = margins(x, y, theta);
    Vector coef(m.size());
    for (Eigen::Index i = 0; i < m.size(); ++i)
        coef(i) = -reg_c * y[static_cast<std::size_t>(i)] * sigmoid(-m(i));
    Vector g(d + 1);
    g.head(d) = theta.head(d) + x.transpose() * coef;
    g(d) = coef.sum();
    return g;
}

inline Matrix hessian(const Matrix& x, std::span<const int> y, double reg_c, const Vector& theta) {
    const Eigen::Index d = x.cols();
    const Vector m = margins(x, y, theta);
    Vector curv(m.size());
    for (Eigen::Index i = 0; i < m.size(); ++i) {
        const double p = sigmoid(m(i));
        curv(i) = reg_c * p * (1.0 - p);
    }
    Matrix h = Matrix::Zero(d + 1, d + 1);
    const Matrix weighted = x.transpose() * curv.asDiagonal();
    h.topLeftCorner(d, d) = weighted * x;
    h.topLeftCorner(d, d).diagonal().array() += 1.0;
    h.topRightCorner(d, 1) = weighted.rowwise().sum();
    h.bottomLeftCorner(1, d) = h.topRightCorner(d, 1).transpose();
    h(d, d) = curv.sum();
    return h;
}

}  // namespace logistic

/// Fits L2-regularized logistic regression by damped Newton iterations
/// started at zero. Bit-deterministic for a fixed example order.
inline Classifier train(const Matrix& x, std::span<const int> y, const TrainOptions& opt = {}) {
    if (x.rows() == 0) throw Error("train: no examples");
    if (static_cast<std::size_t>(x.rows()) != y.size()) throw Error("train: label count mismatch");
    if (!(opt.reg_c > 0.0) || !(opt.tol > 0.0)) throw Error("train: reg_c and tol must be positive");

    const Eigen::Index d = x.cols();
    Vector theta = Vector::Zero(d + 1);
    double f = logistic::objective(x, y, opt.reg_c, theta);
    Vector g = logistic::gradient(x, y, opt.reg_c, theta);

    TrainInfo info;
    bool pos = false;
    bool neg = false;
    for (int label : y) (label > 0 ? pos : neg) = true;
    info.single_class = !(pos && neg);

    int iter = 0;
    while (iter < opt.max_iter && g.norm() > opt.tol) {
        ++iter;
        const Matrix h = logistic::hessian(x, y, opt.reg_c, theta);
        Eigen::LDLT<Matrix> ldlt(h);
        Vector step = ldlt.solve(-g);
        if (ldlt.info() != Eigen::Success || !step.allFinite() || g.dot(step) >= 0.0) step = -g;

        const double slope = g.dot(step);
        double t = 1.0;
        bool accepted = false;
        for (int k = 0; k < 60; ++k, t *= 0.5) {
            const Vector candidate = theta + t * step;
            const double fc = logistic::objective(x, y, opt.reg_c, candidate);
            if (!std::isfinite(fc)) throw NumericalError("train: non-finite loss during optimization");
            if (fc <= f + 1e-4 * t * slope) {
                theta = candidate;
                f = fc;
                accepted = true;
                break;
            }
        }
        if (!accepted) break;
        g = logistic::gradient(x, y, opt.reg_c, theta);
    }

    info.iterations = iter;
    info.grad_norm = g.norm();
    info.converged = info.grad_norm <= opt.tol;
    if (!theta.allFinite()) throw NumericalError("train: non-finite parameters");

    Classifier c;
    c.weights = theta.head(d);
    c.bias = theta(d);
    c.info = info;
    return c;
}

inline Classifier train(const Dataset& ds, const TrainOptions& opt = {}) {
    return train(ds.features, ds.labels, opt);
}

}  // namespace lsa
