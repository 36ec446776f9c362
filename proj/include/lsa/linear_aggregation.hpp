#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "lsa/bandit.hpp"
#include "lsa/dataset.hpp"
#include "lsa/error.hpp"
#include "lsa/learner.hpp"
#include "lsa/seed.hpp"
#include "lsa/strategies.hpp"

namespace lsa {

/// Fallback shared context for the first iteration: random-guessing accuracy.
inline constexpr double kRandomGuessAccuracy = 0.5;

struct LsaConfig {
    double alpha = 1.5;
    double lambda = 1.0;
    double epsilon = 1e-3;
    std::size_t budget = 0;
    std::vector<Strategy> strategies{Strategy::Uncertain, Strategy::Represent, Strategy::Dual};
    TrainOptions learner{};
    StrategyParams strategy_params{};
    std::uint64_t seed = 0;
    /// First-iteration shared context: training accuracy of h_0 on the seed
    /// pool (true) or the constant kRandomGuessAccuracy (false).
    bool training_accuracy_context = true;

    Eigen::Index context_dim() const { return static_cast<Eigen::Index>(strategies.size()) + 1; }
};

struct LedgerEntry {
    std::size_t train_index;
    double weight;  // v_t
    int label;
    double u_chosen;
};

using RewardLedger = std::vector<LedgerEntry>;

struct RunTrace {
    std::vector<std::size_t> queried;
    std::vector<double> rewards;
    std::vector<double> test_accuracy;  // h_0 first, then one entry per query
    Vector final_experience;
};

/// Everything one LSA iteration computed, handed to an optional observer.
struct IterationRecord {
    std::size_t iteration;  // 1-based
    Matrix contexts;        // one row per unlabeled candidate, pool order
    UcbResult ucb;
    std::size_t queried;    // training-set index
    int label;
    double weight;
    double reward;
    const LinUcb* bandit;   // state after the update
    const Classifier* classifier;  // h_t
};

using IterationObserver = std::function<void(const IterationRecord&)>;

/// Context rows (prev_reward, s_1[k], ..., s_M[k]) over the candidate pool.
inline Matrix build_contexts(const std::vector<Vector>& scores, double prev_reward) {
    if (scores.empty()) throw Error("build_contexts: no strategies");
    const Eigen::Index c = scores.front().size();
    if (c < 1) throw Error("build_contexts: empty candidate pool");
    Matrix z(c, static_cast<Eigen::Index>(scores.size()) + 1);
    z.col(0).setConstant(prev_reward);
    for (std::size_t m = 0; m < scores.size(); ++m) {
        if (scores[m].size() != c) throw Error("build_contexts: score vectors differ in length");
        z.col(static_cast<Eigen::Index>(m) + 1) = scores[m];
    }
    return z;
}

inline Matrix build_contexts(const std::vector<ScoreVector>& scores, double prev_reward) {
    std::vector<Vector> normalized;
    normalized.reserve(scores.size());
    for (const auto& s : scores) normalized.push_back(s.normalized);
    return build_contexts(normalized, prev_reward);
}

/// Training accuracy of h_0 on the initial labeled examples.
inline double initial_shared_context(const Classifier& h0, const Dataset& initial_labeled) {
    return accuracy(h0, initial_labeled);
}

/// v = 1 / max(u, epsilon).
inline double importance_weight(double u_chosen, double epsilon) {
    if (!(epsilon > 0.0)) throw Error("importance_weight: epsilon must be positive");
    return 1.0 / std::max(u_chosen, epsilon);
}

/// Importance-weighted accuracy of `h` over every queried example so far.
inline double iw_acc(const RewardLedger& ledger, const Classifier& h, const Dataset& train) {
    if (ledger.empty()) throw Error("iw_acc: empty ledger");
    double hit = 0.0;
    double total = 0.0;
    for (const auto& e : ledger) {
        const auto row = train.features.row(static_cast<Eigen::Index>(e.train_index)).transpose();
        if (predict(h, row) == e.label) hit += e.weight;
        total += e.weight;
    }
    return hit / total;
}

inline Dataset labeled_examples(const Dataset& train, const PoolState& pools) {
    std::vector<std::size_t> idx;
    idx.reserve(pools.labeled.size());
    for (const auto& [i, y] : pools.labeled) idx.push_back(i);
    Dataset out = select_rows(train, idx);
    for (std::size_t k = 0; k < pools.labeled.size(); ++k) out.labels[k] = pools.labeled[k].second;
    return out;
}

/// Per-iteration seed for the randomized scoring functions (k-means).
inline std::uint64_t iteration_seed(std::uint64_t run_seed, std::size_t iteration) {
    return derive_seed(run_seed, static_cast<std::uint64_t>(iteration));
}

namespace detail {

inline void check_run_inputs(std::size_t budget, const PoolState& pools, const Dataset& train, const Dataset& test) {
    if (pools.total() != static_cast<std::size_t>(train.size()))
        throw Error("run: pools do not partition the training set");
    if (pools.labeled.empty()) throw Error("run: labeled pool is empty");
    if (budget > pools.unlabeled.size())
        throw Error("run: budget " + std::to_string(budget) + " exceeds the unlabeled pool (" +
                    std::to_string(pools.unlabeled.size()) + ")");
    if (train.dim() != test.dim()) throw Error("run: train/test dimension mismatch");
}

}  // namespace detail

/// Linear strategy aggregation: each iteration scores the unlabeled pool
/// with every strategy against h_{t-1}, queries the LinUCB choice over the
/// context rows, retrains, and feeds the importance-weighted training
/// accuracy back to the bandit. `w_prev` anchors the bandit's ridge
/// regression (zero for plain LSA).
inline RunTrace run(const LsaConfig& cfg, PoolState pools, const Dataset& train, const Dataset& test,
                    const Vector& w_prev, const IterationObserver& observer = {}) {
    detail::check_run_inputs(cfg.budget, pools, train, test);
    const StrategySet strategies(cfg.strategies, train, cfg.strategy_params);
    LinUcb bandit(cfg.context_dim(), cfg.lambda, w_prev);
    if (!(cfg.epsilon > 0.0)) throw Error("run: epsilon must be positive");

    RunTrace trace;
    Classifier h = lsa::train(labeled_examples(train, pools), cfg.learner);
    trace.test_accuracy.push_back(accuracy(h, test));
    double prev_reward = cfg.training_accuracy_context
                             ? initial_shared_context(h, labeled_examples(train, pools))
                             : kRandomGuessAccuracy;

    RewardLedger ledger;
    for (std::size_t t = 1; t <= cfg.budget; ++t) {
        const auto scores = strategies.score_all(h, pools, iteration_seed(cfg.seed, t));
        Matrix contexts = build_contexts(scores, prev_reward);
        UcbResult choice = bandit.ucb(contexts, cfg.alpha);

        const std::size_t queried = pools.unlabeled[static_cast<std::size_t>(choice.chosen)];
        const int label = train.labels[queried];
        pools.reveal(queried, label);
        h = lsa::train(labeled_examples(train, pools), cfg.learner);

        const double u_chosen = choice.u(choice.chosen);
        const double v = importance_weight(u_chosen, cfg.epsilon);
        ledger.push_back({queried, v, label, u_chosen});
        const double r = iw_acc(ledger, h, train);
        bandit.update(contexts.row(choice.chosen).transpose(), r);

        trace.queried.push_back(queried);
        trace.rewards.push_back(r);
        trace.test_accuracy.push_back(accuracy(h, test));
        prev_reward = r;

        if (observer)
            observer(IterationRecord{t, std::move(contexts), std::move(choice), queried, label, v, r, &bandit, &h});
    }
    trace.final_experience = bandit.weights();
    return trace;
}

/// Baseline run that queries the argmax (first maximizer) of one strategy's
/// raw scores each iteration. Uses the same learner, budget and per-iteration
/// seeds as `run`; `rewards` and `final_experience` stay empty.
inline RunTrace run_single_strategy(Strategy strategy, const LsaConfig& cfg, PoolState pools, const Dataset& train,
                                    const Dataset& test) {
    detail::check_run_inputs(cfg.budget, pools, train, test);
    const StrategySet strategies({strategy}, train, cfg.strategy_params);

    RunTrace trace;
    Classifier h = lsa::train(labeled_examples(train, pools), cfg.learner);
    trace.test_accuracy.push_back(accuracy(h, test));
    for (std::size_t t = 1; t <= cfg.budget; ++t) {
        const auto scores = strategies.score_all(h, pools, iteration_seed(cfg.seed, t));
        Eigen::Index best = 0;
        scores.front().raw.maxCoeff(&best);
        const std::size_t queried = pools.unlabeled[static_cast<std::size_t>(best)];
        pools.reveal(queried, train.labels[queried]);
        h = lsa::train(labeled_examples(train, pools), cfg.learner);
        trace.queried.push_back(queried);
        trace.test_accuracy.push_back(accuracy(h, test));
    }
    return trace;
}

}  // namespace lsa
