#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "lsa/curves.hpp"
#include "lsa/error.hpp"
#include "lsa/stats.hpp"

namespace lsa {

inline const std::vector<double> kDefaultCheckpoints{0.05, 0.10, 0.20, 0.50};

struct CheckpointStats {
    std::string dataset;
    double checkpoint;
    std::string algorithm;
    std::size_t n;
    double mean;
    double std;
};

struct PairVerdict {
    std::string dataset;
    double checkpoint;
    std::string algorithm_a;
    std::string algorithm_b;
    TTestResult test;
};

struct Report {
    double level = 0.9;
    std::vector<double> checkpoints;
    std::vector<CheckpointStats> stats;
    std::vector<PairVerdict> verdicts;
};

/// Per-seed accuracy of each algorithm on one dataset at one checkpoint,
/// keyed algorithm -> seed.
using CheckpointValues = std::map<std::string, std::map<std::uint64_t, double>>;

namespace detail {

using Group = std::map<std::size_t, const CurveRow*>;  // iteration -> row

// Initial pool size recovered from any row past h_0.
inline std::size_t pool_size(const Group& g) {
    for (const auto& [it, row] : g)
        if (it > 0 && row->fraction_queried > 0.0)
            return static_cast<std::size_t>(std::llround(static_cast<double>(it) / row->fraction_queried));
    return 0;
}

}  // namespace detail

/// Accuracy at iteration floor(checkpoint * pool size) for every
/// (algorithm, seed) group of `dataset`.
inline CheckpointValues checkpoint_values(const CurveTable& table, const std::string& dataset, double checkpoint) {
    std::map<std::string, std::map<std::uint64_t, detail::Group>> groups;
    for (const auto& r : table)
        if (r.dataset == dataset) groups[r.algorithm][r.seed][r.iteration] = &r;

    CheckpointValues out;
    for (const auto& [alg, seeds] : groups) {
        for (const auto& [seed, g] : seeds) {
            const std::size_t u = detail::pool_size(g);
            const auto it = static_cast<std::size_t>(std::floor(checkpoint * static_cast<double>(u) + 1e-9));
            const auto found = g.find(it);
            if (u == 0 || found == g.end()) {
                char buf[32];
                std::snprintf(buf, sizeof buf, "%g", checkpoint);
                throw Error("missing checkpoint " + std::string(buf) + " for " + alg + " on " + dataset +
                            " (seed " + std::to_string(seed) + ")");
            }
            out[alg][seed] = found->second->test_accuracy;
        }
    }
    return out;
}

/// Mean/std per algorithm at each checkpoint and paired t-test verdicts for
/// every pair of algorithms, per dataset.
inline Report report(const CurveTable& table, std::span<const double> checkpoints, double level) {
    if (checkpoints.empty()) throw Error("report: no checkpoints");
    std::set<std::string> datasets;
    for (const auto& r : table) datasets.insert(r.dataset);
    if (datasets.empty()) throw Error("report: empty curve table");

    Report rep;
    rep.level = level;
    rep.checkpoints.assign(checkpoints.begin(), checkpoints.end());
    for (const auto& ds : datasets) {
        for (double cp : checkpoints) {
            const auto values = checkpoint_values(table, ds, cp);
            if (values.size() < 2) throw Error("report: dataset " + ds + " has fewer than two algorithms");

            std::map<std::string, std::vector<double>> series;
            const auto& reference_seeds = values.begin()->second;
            for (const auto& [alg, by_seed] : values) {
                if (by_seed.size() != reference_seeds.size())
                    throw Error("report: " + alg + " on " + ds + " is not paired with the other algorithms' seeds");
                auto& s = series[alg];
                for (const auto& [seed, _] : reference_seeds) {
                    const auto f = by_seed.find(seed);
                    if (f == by_seed.end())
                        throw Error("report: " + alg + " on " + ds + " lacks seed " + std::to_string(seed));
                    s.push_back(f->second);
                }
                rep.stats.push_back({ds, cp, alg, s.size(), mean(s), stddev(s)});
            }
            for (auto a = series.begin(); a != series.end(); ++a)
                for (auto b = std::next(a); b != series.end(); ++b)
                    rep.verdicts.push_back({ds, cp, a->first, b->first, paired_ttest(a->second, b->second, level)});
        }
    }
    return rep;
}

inline std::string percent(double cp) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g%%", cp * 100.0);
    return buf;
}

/// Aligned plain-text rendering: a mean+-std table per dataset followed by
/// win/tie/loss counts over all datasets and checkpoints.
inline std::string render_text(const Report& rep) {
    std::ostringstream out;
    char buf[128];
    std::map<std::string, std::map<std::string, std::map<double, const CheckpointStats*>>> by_ds;
    for (const auto& s : rep.stats) by_ds[s.dataset][s.algorithm][s.checkpoint] = &s;

    std::size_t width = 9;
    for (const auto& [ds, algs] : by_ds)
        for (const auto& [alg, _] : algs) width = std::max(width, alg.size());

    for (const auto& [ds, algs] : by_ds) {
        out << "dataset " << ds << '\n';
        std::snprintf(buf, sizeof buf, "  %-*s", static_cast<int>(width), "algorithm");
        out << buf;
        for (double cp : rep.checkpoints) {
            std::snprintf(buf, sizeof buf, " %17s", percent(cp).c_str());
            out << buf;
        }
        out << '\n';
        for (const auto& [alg, cps] : algs) {
            std::snprintf(buf, sizeof buf, "  %-*s", static_cast<int>(width), alg.c_str());
            out << buf;
            for (double cp : rep.checkpoints) {
                const auto* s = cps.at(cp);
                std::snprintf(buf, sizeof buf, "   %.4f +- %.4f", s->mean, s->std);
                out << buf;
            }
            out << '\n';
        }
        out << '\n';
    }

    struct Tally {
        int win = 0, tie = 0, loss = 0;
    };
    std::map<std::pair<std::string, std::string>, Tally> tallies;
    for (const auto& v : rep.verdicts) {
        auto& t = tallies[{v.algorithm_a, v.algorithm_b}];
        if (v.test.verdict == Verdict::ABetter) ++t.win;
        else if (v.test.verdict == Verdict::BBetter) ++t.loss;
        else ++t.tie;
    }
    std::snprintf(buf, sizeof buf, "paired t-test, level %.2f: win/tie/loss of A vs B\n", rep.level);
    out << buf;
    for (const auto& [pair, t] : tallies) {
        std::snprintf(buf, sizeof buf, "  %-*s vs %-*s  %3d / %3d / %3d\n", static_cast<int>(width),
                      pair.first.c_str(), static_cast<int>(width), pair.second.c_str(), t.win, t.tie, t.loss);
        out << buf;
    }
    return out.str();
}

/// Writes report.txt, report_summary.csv and report_ttest.csv into `dir`.
inline void write_report(const Report& rep, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    auto open = [&](const char* name) {
        std::ofstream f(dir / name, std::ios::binary);
        if (!f) throw Error("cannot write '" + (dir / name).string() + "'");
        return f;
    };
    {
        auto f = open("report.txt");
        f << render_text(rep);
    }
    {
        auto f = open("report_summary.csv");
        f << "dataset,checkpoint,algorithm,n,mean,std\n";
        for (const auto& s : rep.stats)
            f << s.dataset << ',' << format_real(s.checkpoint) << ',' << s.algorithm << ',' << s.n << ','
              << format_real(s.mean) << ',' << format_real(s.std) << '\n';
    }
    {
        auto f = open("report_ttest.csv");
        f << "dataset,checkpoint,algorithm_a,algorithm_b,t,threshold,verdict\n";
        for (const auto& v : rep.verdicts)
            f << v.dataset << ',' << format_real(v.checkpoint) << ',' << v.algorithm_a << ',' << v.algorithm_b << ','
              << format_real(v.test.t) << ',' << format_real(v.test.threshold) << ',' << to_string(v.test.verdict)
              << '\n';
    }
}

}  // namespace lsa
