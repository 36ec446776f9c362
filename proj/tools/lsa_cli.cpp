// Command-line experiment runner.
//
//   lsa run      --data a.csv b.csv           LSA grid + single-strategy baselines
//   lsa compare  --data a.csv b.csv           same, followed by the checkpoint report
//   lsa transfer --data s1.csv ... --target t.csv
//   lsa ttest    --data out/curves.csv        report from previously emitted curves

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lsa/lsa.hpp"

namespace {

struct CliOptions {
    std::vector<std::string> data;
    std::string target;
    std::string format = "csv";
    std::vector<double> alphas{1.5, 2.0, 2.5};
    std::vector<double> lambdas;
    double epsilon = 1e-3;
    double budget_frac = 0.5;
    std::size_t budget = 0;
    std::size_t init_labeled = 4;
    double test_frac = 0.5;
    std::size_t max_examples = 2000;
    std::size_t repeats = 10;
    std::size_t q = 3;
    std::vector<std::string> strategies{"uncertain", "represent", "dual"};
    long long clusters = 5;
    std::string shared_context = "training";
    std::uint64_t seed = 0;
    std::string out = "out";
    std::string experience;
    std::vector<double> checkpoints = lsa::kDefaultCheckpoints;
    double level = 0.9;
};

void add_experiment_flags(CLI::App* cmd, CliOptions& o) {
    cmd->add_option("--data", o.data, "Dataset files")->required()->expected(1, -1);
    cmd->add_option("--format", o.format, "Input format")->check(CLI::IsMember({"csv", "libsvm"}));
    cmd->add_option("--alpha", o.alphas, "Exploration weights (grid)")->delimiter(',');
    cmd->add_option("--lambda", o.lambdas, "Ridge / trust parameters (grid)")->delimiter(',');
    cmd->add_option("--epsilon", o.epsilon, "Minimum goodness for importance weights");
    cmd->add_option("--budget-frac", o.budget_frac, "Query budget as a fraction of the unlabeled pool");
    cmd->add_option("--budget", o.budget, "Query budget as a count (overrides --budget-frac)");
    cmd->add_option("--init-labeled", o.init_labeled, "Size of the initial labeled pool");
    cmd->add_option("--test-frac", o.test_frac, "Fraction held out for testing");
    cmd->add_option("--max-examples", o.max_examples, "Subsample larger datasets to this size");
    cmd->add_option("--repeats", o.repeats, "Seeded repetitions");
    cmd->add_option("--strategies", o.strategies, "uncertain,represent,dual,quire")->delimiter(',');
    cmd->add_option("--clusters", o.clusters, "k for the clustering-based strategies");
    cmd->add_option("--shared-context", o.shared_context, "First-iteration shared context")
        ->check(CLI::IsMember({"training", "random"}));
    cmd->add_option("--seed", o.seed, "Master seed");
    cmd->add_option("--out", o.out, "Output directory");
    cmd->add_option("--experience", o.experience, "Prior experience JSON to start from");
}

void add_report_flags(CLI::App* cmd, CliOptions& o) {
    cmd->add_option("--checkpoints", o.checkpoints, "Report checkpoints (pool fractions)")->delimiter(',');
    cmd->add_option("--level", o.level, "t-test confidence level");
}

lsa::ExperimentSpec to_spec(const CliOptions& o, lsa::Mode mode) {
    lsa::ExperimentSpec spec;
    spec.mode = mode;
    for (const auto& d : o.data) spec.data.emplace_back(d);
    if (!o.target.empty()) spec.target = o.target;
    spec.format = o.format == "libsvm" ? lsa::DataFormat::Libsvm : lsa::DataFormat::Csv;
    spec.alphas = o.alphas;
    if (!o.lambdas.empty()) {
        spec.lambdas = o.lambdas;
    } else {
        spec.lambdas = mode == lsa::Mode::Transfer ? std::vector<double>{1.0, 5.0, 10.0} : std::vector<double>{1.0};
    }
    spec.epsilon = o.epsilon;
    spec.budget_frac = o.budget_frac;
    if (o.budget > 0) spec.budget = o.budget;
    spec.init_labeled = o.init_labeled;
    spec.test_frac = o.test_frac;
    spec.max_examples = o.max_examples;
    spec.repeats = o.repeats;
    spec.q = o.q;
    spec.strategies.clear();
    for (const auto& s : o.strategies) spec.strategies.push_back(lsa::parse_strategy(s));
    spec.strategy_params.clusters = o.clusters;
    spec.training_accuracy_context = o.shared_context == "training";
    spec.seed = o.seed;
    spec.out = o.out;
    if (!o.experience.empty()) spec.experience = o.experience;
    spec.checkpoints = o.checkpoints;
    spec.level = o.level;
    return spec;
}

void emit_report(const lsa::CurveTable& curves, const lsa::ExperimentSpec& spec) {
    const auto rep = lsa::report(curves, spec.checkpoints, spec.level);
    lsa::write_report(rep, spec.out);
    std::cout << lsa::render_text(rep);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Linear strategy aggregation for pool-based active learning"};
    app.require_subcommand(1);
    CliOptions opts;

    auto* run_cmd = app.add_subcommand("run", "LSA parameter grid and single-strategy baselines");
    add_experiment_flags(run_cmd, opts);

    auto* compare_cmd = app.add_subcommand("compare", "run, then report checkpoints and pairwise t-tests");
    add_experiment_flags(compare_cmd, opts);
    add_report_flags(compare_cmd, opts);

    auto* transfer_cmd = app.add_subcommand("transfer", "cross-dataset experience transfer (T-LSA vs LSA)");
    add_experiment_flags(transfer_cmd, opts);
    transfer_cmd->add_option("--target", opts.target, "Target dataset (default: last --data entry)");
    transfer_cmd->add_option("--q", opts.q, "Number of source datasets per sequence");

    auto* ttest_cmd = app.add_subcommand("ttest", "re-analyze emitted curves CSV files");
    ttest_cmd->add_option("--data", opts.data, "curves.csv files")->required()->expected(1, -1);
    ttest_cmd->add_option("--out", opts.out, "Output directory");
    add_report_flags(ttest_cmd, opts);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run_cmd || *compare_cmd) {
            const auto spec = to_spec(opts, *run_cmd ? lsa::Mode::Single : lsa::Mode::Compare);
            const auto res = lsa::run_single(spec);
            lsa::write_outputs(res, spec.out);
            if (*compare_cmd) emit_report(res.curves, spec);
            std::cerr << "wrote " << (spec.out / "curves.csv").string() << '\n';
        } else if (*transfer_cmd) {
            const auto spec = to_spec(opts, lsa::Mode::Transfer);
            const auto res = lsa::run_transfer(spec);
            lsa::write_outputs(res, spec.out);
            std::cerr << "wrote " << (spec.out / "curves.csv").string() << '\n';
        } else if (*ttest_cmd) {
            lsa::CurveTable curves;
            for (const auto& path : opts.data) {
                auto part = lsa::read_curves(path);
                curves.insert(curves.end(), part.begin(), part.end());
            }
            lsa::ExperimentSpec spec;
            spec.out = opts.out;
            spec.checkpoints = opts.checkpoints;
            spec.level = opts.level;
            emit_report(curves, spec);
        }
    } catch (const lsa::Error& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 1;
    }
    return 0;
}
