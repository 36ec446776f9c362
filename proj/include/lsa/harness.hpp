#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "lsa/curves.hpp"
#include "lsa/dataset.hpp"
#include "lsa/error.hpp"
#include "lsa/linear_aggregation.hpp"
#include "lsa/report.hpp"
#include "lsa/seed.hpp"
#include "lsa/strategies.hpp"
#include "lsa/transfer.hpp"

namespace lsa {

enum class Mode { Single, Compare, Transfer };
enum class DataFormat { Csv, Libsvm };

/// One experiment, as configured on the command line.
struct ExperimentSpec {
    Mode mode = Mode::Single;
    std::vector<std::filesystem::path> data;
    std::optional<std::filesystem::path> target;  // transfer: defaults to the last data path
    DataFormat format = DataFormat::Csv;
    std::vector<double> alphas{1.5, 2.0, 2.5};
    std::vector<double> lambdas{1.0};
    double control_lambda = 1.0;  // plain-LSA control in transfer mode
    double epsilon = 1e-3;
    double budget_frac = 0.5;
    std::optional<std::size_t> budget;  // absolute count; overrides budget_frac
    std::size_t init_labeled = 4;
    double test_frac = 0.5;
    std::size_t max_examples = 2000;
    std::size_t repeats = 10;
    std::size_t q = 3;
    std::vector<Strategy> strategies{Strategy::Uncertain, Strategy::Represent, Strategy::Dual};
    StrategyParams strategy_params{};
    bool training_accuracy_context = true;
    std::uint64_t seed = 0;
    std::filesystem::path out = "out";
    std::optional<std::filesystem::path> experience;  // prior experience to start from
    std::vector<double> checkpoints = kDefaultCheckpoints;
    double level = 0.9;
};

inline void validate(const ExperimentSpec& spec) {
    if (spec.repeats < 1) throw Error("repeats must be >= 1");
    if (spec.alphas.empty() || spec.lambdas.empty()) throw Error("parameter grids must be non-empty");
    if (spec.strategies.empty()) throw Error("no strategies configured");
    if (spec.data.empty()) throw Error("no datasets given");
    if (spec.mode == Mode::Transfer) {
        const std::size_t n = spec.data.size() + (spec.target && std::find(spec.data.begin(), spec.data.end(),
                                                                              *spec.target) == spec.data.end());
        if (n < 2) throw Error("transfer mode needs at least two datasets");
    }
    if (!(spec.budget_frac > 0.0 && spec.budget_frac <= 1.0)) throw Error("budget fraction must lie in (0, 1]");
}

/// floor(fraction * pool), at least 1 for a non-empty pool.
inline std::size_t budget_from_fraction(double fraction, std::size_t unlabeled) {
    if (unlabeled == 0) return 0;
    const auto t = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(unlabeled) + 1e-9));
    return std::clamp<std::size_t>(t, 1, unlabeled);
}

inline Dataset load_dataset(const std::filesystem::path& path, DataFormat format) {
    return format == DataFormat::Csv ? load_csv(path) : load_libsvm(path);
}

/// A dataset prepared for one repeat: subsampled, split, standardized with
/// training statistics, with its seed pool drawn. Every algorithm of the
/// repeat runs on this same object.
struct PreparedRun {
    std::string dataset;
    std::uint64_t seed;  // repeat seed; also the pairing key in curve tables
    Dataset train;
    Dataset test;
    PoolState pools;
    std::size_t budget;
};

inline std::uint64_t repeat_seed(std::uint64_t master, const std::string& dataset, std::size_t repeat) {
    return derive_seed(master, dataset, static_cast<std::uint64_t>(repeat));
}

inline PreparedRun prepare_run(const Dataset& ds, const ExperimentSpec& spec, std::size_t repeat) {
    PreparedRun p;
    p.dataset = ds.name;
    p.seed = repeat_seed(spec.seed, ds.name, repeat);
    const Dataset sampled = subsample(ds, spec.max_examples, derive_seed(p.seed, "subsample"));
    const Split parts = standardize(split(sampled, spec.test_frac, derive_seed(p.seed, "split")));
    p.train = parts.train;
    p.test = parts.test;
    p.pools = init_pools(p.train, spec.init_labeled, derive_seed(p.seed, "pools"));
    p.budget = spec.budget ? std::min(*spec.budget, p.pools.unlabeled.size())
                           : budget_from_fraction(spec.budget_frac, p.pools.unlabeled.size());
    return p;
}

inline LsaConfig make_config(const ExperimentSpec& spec, const PreparedRun& p, double alpha, double lambda) {
    LsaConfig cfg;
    cfg.alpha = alpha;
    cfg.lambda = lambda;
    cfg.epsilon = spec.epsilon;
    cfg.budget = p.budget;
    cfg.strategies = spec.strategies;
    cfg.strategy_params = spec.strategy_params;
    cfg.training_accuracy_context = spec.training_accuracy_context;
    cfg.seed = derive_seed(p.seed, "strategies");
    return cfg;
}

inline void append_curve(CurveTable& table, const std::string& algorithm, const PreparedRun& p,
                         const RunTrace& trace) {
    const auto pool = static_cast<double>(p.pools.unlabeled.size());
    for (std::size_t it = 0; it < trace.test_accuracy.size(); ++it)
        table.push_back({algorithm, p.dataset, p.seed, it, static_cast<double>(it) / pool, trace.test_accuracy[it]});
}

inline std::string short_real(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

inline std::string grid_name(const std::string& base, double alpha, double lambda) {
    return base + "(alpha=" + short_real(alpha) + ";lambda=" + short_real(lambda) + ")";
}

inline std::string baseline_name(Strategy s) {
    std::string name(to_string(s));
    std::transform(name.begin(), name.end(), name.begin(), [](unsigned char c) { return std::toupper(c); });
    return name;
}

/// Copies, per dataset, the rows of the grid algorithm with the highest mean
/// accuracy (over seeds and iterations) under the summary name `base`.
/// Ties keep the earlier grid point.
inline void add_best_of_grid(CurveTable& table, const std::string& base, const std::vector<std::string>& grid) {
    std::map<std::string, std::map<std::string, std::pair<double, std::size_t>>> totals;
    for (const auto& r : table)
        if (std::find(grid.begin(), grid.end(), r.algorithm) != grid.end()) {
            auto& t = totals[r.dataset][r.algorithm];
            t.first += r.test_accuracy;
            ++t.second;
        }
    CurveTable extra;
    for (const auto& [ds, algs] : totals) {
        const std::string* best = nullptr;
        double best_mean = -1.0;
        for (const auto& name : grid) {
            const auto f = algs.find(name);
            if (f == algs.end()) continue;
            const double m = f->second.first / static_cast<double>(f->second.second);
            if (m > best_mean) {
                best_mean = m;
                best = &name;
            }
        }
        if (best == nullptr) continue;
        for (const auto& r : table)
            if (r.dataset == ds && r.algorithm == *best) {
                CurveRow copy = r;
                copy.algorithm = base;
                extra.push_back(std::move(copy));
            }
    }
    table.insert(table.end(), extra.begin(), extra.end());
}

struct ExperimentResult {
    CurveTable curves;
    std::vector<std::pair<std::string, Experience>> experiences;  // file stem -> experience
};

inline std::optional<Experience> load_prior(const ExperimentSpec& spec) {
    if (!spec.experience) return std::nullopt;
    Experience e = load_experience(*spec.experience);
    check_compatible(e, spec.strategies);
    return e;
}

/// Single-dataset protocol: per dataset and repeat, LSA at every
/// (alpha, lambda) grid point plus each configured strategy on its own, all
/// on identical pools; then the best grid point per dataset as "LSA".
inline ExperimentResult run_single(const ExperimentSpec& spec) {
    validate(spec);
    const auto prior = load_prior(spec);
    ExperimentResult res;
    std::vector<std::string> grid;
    for (double a : spec.alphas)
        for (double l : spec.lambdas) grid.push_back(grid_name("LSA", a, l));

    for (const auto& path : spec.data) {
        const Dataset ds = load_dataset(path, spec.format);
        for (std::size_t r = 1; r <= spec.repeats; ++r) {
            const PreparedRun p = prepare_run(ds, spec, r);
            for (double a : spec.alphas) {
                for (double l : spec.lambdas) {
                    const LsaConfig cfg = make_config(spec, p, a, l);
                    TransferTask task{p.dataset, p.pools, p.train, p.test};
                    auto seq = run_sequence({cfg}, {task}, prior ? &*prior : nullptr);
                    append_curve(res.curves, grid_name("LSA", a, l), p, seq.traces.front());
                    res.experiences.emplace_back(p.dataset + "_rep" + std::to_string(r) + "_alpha" + short_real(a) +
                                                     "_lambda" + short_real(l),
                                                 std::move(seq.experience));
                }
            }
            const LsaConfig base = make_config(spec, p, spec.alphas.front(), spec.lambdas.front());
            for (Strategy s : spec.strategies)
                append_curve(res.curves, baseline_name(s), p, run_single_strategy(s, base, p.pools, p.train, p.test));
        }
    }
    add_best_of_grid(res.curves, "LSA", grid);
    sort_curves(res.curves);
    return res;
}

/// Cross-dataset protocol: per repeat, a random sequence of q source
/// datasets (target excluded) accumulates experience at each lambda of the
/// grid; T-LSA then runs on the target from that experience, next to a plain
/// LSA control on the same target pools.
inline ExperimentResult run_transfer(const ExperimentSpec& spec) {
    validate(spec);
    const auto prior = load_prior(spec);
    const std::filesystem::path target_path = spec.target ? *spec.target : spec.data.back();
    std::vector<std::filesystem::path> source_paths;
    for (const auto& p : spec.data)
        if (p != target_path) source_paths.push_back(p);
    if (spec.q > source_paths.size())
        throw Error("q = " + std::to_string(spec.q) + " exceeds the " + std::to_string(source_paths.size()) +
                    " available source datasets");

    const Dataset target = load_dataset(target_path, spec.format);
    std::vector<Dataset> sources;
    for (const auto& p : source_paths) {
        sources.push_back(load_dataset(p, spec.format));
        if (sources.back().name == target.name) throw Error("source and target share the name " + target.name);
    }

    const double alpha = spec.alphas.front();
    ExperimentResult res;
    std::vector<std::string> grid;
    for (double l : spec.lambdas) grid.push_back(grid_name("T-LSA", alpha, l));

    for (std::size_t r = 1; r <= spec.repeats; ++r) {
        std::vector<std::size_t> order(sources.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::mt19937_64 rng(derive_seed(spec.seed, "sequence", static_cast<std::uint64_t>(r)));
        std::shuffle(order.begin(), order.end(), rng);
        order.resize(spec.q);

        std::vector<PreparedRun> prepared;
        for (std::size_t idx : order) prepared.push_back(prepare_run(sources[idx], spec, r));
        const PreparedRun tgt = prepare_run(target, spec, r);

        for (double l : spec.lambdas) {
            std::vector<LsaConfig> cfgs;
            std::vector<TransferTask> tasks;
            for (const auto& p : prepared) {
                cfgs.push_back(make_config(spec, p, alpha, l));
                tasks.push_back({p.dataset, p.pools, p.train, p.test});
            }
            cfgs.push_back(make_config(spec, tgt, alpha, l));
            tasks.push_back({tgt.dataset, tgt.pools, tgt.train, tgt.test});
            auto seq = run_sequence(cfgs, tasks, prior ? &*prior : nullptr);
            append_curve(res.curves, grid_name("T-LSA", alpha, l), tgt, seq.traces.back());
            res.experiences.emplace_back(tgt.dataset + "_rep" + std::to_string(r) + "_lambda" + short_real(l),
                                         std::move(seq.experience));
        }
        const LsaConfig control = make_config(spec, tgt, alpha, spec.control_lambda);
        append_curve(res.curves, "LSA", tgt, run(control, tgt.pools, tgt.train, tgt.test,
                                                 Vector::Zero(control.context_dim())));
    }
    add_best_of_grid(res.curves, "T-LSA", grid);
    sort_curves(res.curves);
    return res;
}

/// Writes curves.csv and experience/<name>.json under spec.out.
inline void write_outputs(const ExperimentResult& res, const std::filesystem::path& out) {
    std::filesystem::create_directories(out / "experience");
    emit_curves(res.curves, out / "curves.csv");
    for (const auto& [name, e] : res.experiences) save_experience(e, out / "experience" / (name + ".json"));
}

}  // namespace lsa
