#pragma once

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "lsa/error.hpp"

namespace lsa {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Dense binary-classification data: one example per row, labels in {+1, -1}.
struct Dataset {
    std::string name;
    Matrix features;
    std::vector<int> labels;

    Eigen::Index size() const { return features.rows(); }
    Eigen::Index dim() const { return features.cols(); }
};

/// Checks the Dataset invariants; throws Error on the first violation.
inline void validate(const Dataset& ds) {
    if (ds.size() < 1 || ds.dim() < 1)
        throw Error("dataset '" + ds.name + "' must have N >= 1 and d >= 1");
    if (static_cast<Eigen::Index>(ds.labels.size()) != ds.size())
        throw Error("dataset '" + ds.name + "': label count does not match row count");
    for (int y : ds.labels)
        if (y != 1 && y != -1) throw Error("dataset '" + ds.name + "': label is not +1/-1");
    if (!ds.features.allFinite())
        throw Error("dataset '" + ds.name + "': non-finite feature value");
}

/// Rows of `ds` at `indices`, in the given order.
inline Dataset select_rows(const Dataset& ds, const std::vector<std::size_t>& indices) {
    Dataset out;
    out.name = ds.name;
    out.features.resize(static_cast<Eigen::Index>(indices.size()), ds.dim());
    out.labels.reserve(indices.size());
    for (std::size_t i = 0; i < indices.size(); ++i) {
        out.features.row(static_cast<Eigen::Index>(i)) =
            ds.features.row(static_cast<Eigen::Index>(indices[i]));
        out.labels.push_back(ds.labels[indices[i]]);
    }
    return out;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

inline bool parse_double(std::string_view s, double& out) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    if (s.empty()) return false;
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, out);
    return ec == std::errc() && ptr == end;
}

// Accepts 1, +1, -1 and 0 (mapped to -1), in any numeric spelling.
inline bool parse_label(std::string_view s, int& out) {
    double v = 0.0;
    if (!parse_double(s, v)) return false;
    if (v == 1.0) {
        out = 1;
    } else if (v == -1.0 || v == 0.0) {
        out = -1;
    } else {
        return false;
    }
    return true;
}

inline std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path.string() + "'");
    return in;
}

}  // namespace detail

/// Reads `label,f1,...,fd` rows. An optional header row is skipped when its
/// first field is non-numeric.
inline Dataset load_csv(const std::filesystem::path& path) {
    auto in = detail::open_input(path);
    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    std::string line;
    std::size_t line_no = 0;
    bool first_content = true;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view = detail::trim(line);
        if (view.empty()) continue;

        std::vector<std::string_view> fields;
        std::size_t start = 0;
        while (true) {
            const auto comma = view.find(',', start);
            fields.push_back(view.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                                  : comma - start));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }

        double probe = 0.0;
        if (first_content && !detail::parse_double(fields.front(), probe)) {
            first_content = false;
            continue;
        }
        first_content = false;

        int label = 0;
        if (!detail::parse_label(fields.front(), label))
            throw ParseError("unparseable label", line_no);
        if (fields.size() < 2) throw ParseError("row has no features", line_no);

        std::vector<double> row;
        row.reserve(fields.size() - 1);
        for (std::size_t f = 1; f < fields.size(); ++f) {
            double v = 0.0;
            if (!detail::parse_double(fields[f], v) || !std::isfinite(v))
                throw ParseError("unparseable feature value", line_no);
            row.push_back(v);
        }
        if (!rows.empty() && row.size() != rows.front().size())
            throw ParseError("dimension mismatch: expected " + std::to_string(rows.front().size()) +
                                 " features, found " + std::to_string(row.size()),
                             line_no);
        rows.push_back(std::move(row));
        labels.push_back(label);
    }
    if (rows.empty()) throw Error("'" + path.string() + "' contains no examples");

    Dataset ds;
    ds.name = path.stem().string();
    ds.features.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            ds.features(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    ds.labels = std::move(labels);
    validate(ds);
    return ds;
}

/// Reads sparse `label idx:val ...` lines (1-based, strictly ascending
/// indices) into a dense dataset with d = largest index seen.
inline Dataset load_libsvm(const std::filesystem::path& path) {
    auto in = detail::open_input(path);
    std::vector<std::vector<std::pair<std::size_t, double>>> rows;
    std::vector<int> labels;
    std::size_t max_index = 0;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view = line;
        if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
        view = detail::trim(view);
        if (view.empty()) continue;

        std::vector<std::string_view> tokens;
        std::size_t pos = 0;
        while (pos < view.size()) {
            const auto begin = view.find_first_not_of(" \t", pos);
            if (begin == std::string_view::npos) break;
            auto end = view.find_first_of(" \t", begin);
            if (end == std::string_view::npos) end = view.size();
            tokens.push_back(view.substr(begin, end - begin));
            pos = end;
        }

        int label = 0;
        if (!detail::parse_label(tokens.front(), label)) throw ParseError("unparseable label", line_no);

        std::vector<std::pair<std::size_t, double>> row;
        std::size_t last = 0;
        for (std::size_t t = 1; t < tokens.size(); ++t) {
            const auto colon = tokens[t].find(':');
            if (colon == std::string_view::npos) throw ParseError("unparseable token", line_no);
            const auto idx_str = tokens[t].substr(0, colon);
            std::size_t idx = 0;
            auto [ptr, ec] = std::from_chars(idx_str.data(), idx_str.data() + idx_str.size(), idx);
            if (ec != std::errc() || ptr != idx_str.data() + idx_str.size() || idx == 0)
                throw ParseError("unparseable feature index", line_no);
            double v = 0.0;
            if (!detail::parse_double(tokens[t].substr(colon + 1), v) || !std::isfinite(v))
                throw ParseError("unparseable feature value", line_no);
            if (idx <= last) throw ParseError("feature indices not ascending", line_no);
            last = idx;
            row.emplace_back(idx, v);
        }
        max_index = std::max(max_index, last);
        rows.push_back(std::move(row));
        labels.push_back(label);
    }
    if (rows.empty()) throw Error("'" + path.string() + "' contains no examples");
    if (max_index == 0) throw Error("'" + path.string() + "' has no feature columns");

    Dataset ds;
    ds.name = path.stem().string();
    ds.features = Matrix::Zero(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(max_index));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (const auto& [idx, v] : rows[i])
            ds.features(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(idx - 1)) = v;
    ds.labels = std::move(labels);
    validate(ds);
    return ds;
}

/// Writes `label,f1,...,fd` rows with round-trippable values.
inline void save_csv(const Dataset& ds, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    char buf[32];
    for (Eigen::Index i = 0; i < ds.size(); ++i) {
        out << ds.labels[static_cast<std::size_t>(i)];
        for (Eigen::Index j = 0; j < ds.dim(); ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", ds.features(i, j));
            out << ',' << buf;
        }
        out << '\n';
    }
    if (!out) throw Error("failed writing '" + path.string() + "'");
}

/// Uniform sample of `n_max` rows without replacement (row order kept).
/// Returns `ds` unchanged when it already has at most `n_max` rows.
inline Dataset subsample(const Dataset& ds, std::size_t n_max, std::uint64_t seed) {
    if (n_max < 1) throw Error("subsample: n_max must be >= 1");
    const auto n = static_cast<std::size_t>(ds.size());
    if (n <= n_max) return ds;
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::mt19937_64 rng(seed);
    std::shuffle(idx.begin(), idx.end(), rng);
    idx.resize(n_max);
    std::sort(idx.begin(), idx.end());
    return select_rows(ds, idx);
}

struct Split {
    Dataset train;
    Dataset test;
};

/// Random train/test partition: train gets ceil(N * (1 - test_frac)) rows.
inline Split split(const Dataset& ds, double test_frac, std::uint64_t seed) {
    if (!(test_frac > 0.0 && test_frac < 1.0)) throw Error("split: test_frac must lie in (0, 1)");
    const auto n = static_cast<std::size_t>(ds.size());
    const auto n_train = static_cast<std::size_t>(std::ceil(static_cast<double>(n) * (1.0 - test_frac)));
    if (n_train == 0 || n_train >= n)
        throw Error("split: degenerate split of " + std::to_string(n) + " examples");
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::mt19937_64 rng(seed);
    std::shuffle(idx.begin(), idx.end(), rng);
    std::vector<std::size_t> train_idx(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_train));
    std::vector<std::size_t> test_idx(idx.begin() + static_cast<std::ptrdiff_t>(n_train), idx.end());
    std::sort(train_idx.begin(), train_idx.end());
    std::sort(test_idx.begin(), test_idx.end());
    return {select_rows(ds, train_idx), select_rows(ds, test_idx)};
}

/// Z-scores every feature with the training split's mean and standard
/// deviation; constant features are only centered.
inline Split standardize(const Split& parts) {
    const Vector mean = parts.train.features.colwise().mean().transpose();
    Vector scale(mean.size());
    for (Eigen::Index j = 0; j < mean.size(); ++j) {
        const double var = (parts.train.features.col(j).array() - mean(j)).square().mean();
        scale(j) = var > 0.0 ? std::sqrt(var) : 1.0;
    }
    Split out = parts;
    for (Dataset* ds : {&out.train, &out.test}) {
        ds->features.rowwise() -= mean.transpose();
        ds->features.array().rowwise() /= scale.transpose().array();
    }
    return out;
}

/// Labeled/unlabeled partition of the training indices. Labeled entries keep
/// the order in which they were revealed; unlabeled indices stay ascending.
struct PoolState {
    std::vector<std::pair<std::size_t, int>> labeled;
    std::vector<std::size_t> unlabeled;

    std::size_t total() const { return labeled.size() + unlabeled.size(); }

    /// Moves unlabeled index `train_index` to the labeled pool with `label`.
    void reveal(std::size_t train_index, int label) {
        const auto it = std::lower_bound(unlabeled.begin(), unlabeled.end(), train_index);
        if (it == unlabeled.end() || *it != train_index)
            throw Error("index " + std::to_string(train_index) + " is not in the unlabeled pool");
        unlabeled.erase(it);
        labeled.emplace_back(train_index, label);
    }
};

inline constexpr int kMaxSeedResamples = 100;

/// Reveals `n_init` random training labels, resampling until both classes
/// are present (at most kMaxSeedResamples attempts).
inline PoolState init_pools(const Dataset& train, std::size_t n_init, std::uint64_t seed) {
    const auto n = static_cast<std::size_t>(train.size());
    if (n_init > n) throw Error("init_pools: n_init exceeds the training set size");
    const bool has_pos = std::find(train.labels.begin(), train.labels.end(), 1) != train.labels.end();
    const bool has_neg = std::find(train.labels.begin(), train.labels.end(), -1) != train.labels.end();
    if (!(has_pos && has_neg)) throw Error("init_pools: training set '" + train.name + "' has a single class");

    std::mt19937_64 rng(seed);
    std::vector<std::size_t> idx(n);
    for (int attempt = 0; attempt < kMaxSeedResamples; ++attempt) {
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        std::shuffle(idx.begin(), idx.end(), rng);
        bool pos = false;
        bool neg = false;
        for (std::size_t i = 0; i < n_init; ++i) (train.labels[idx[i]] > 0 ? pos : neg) = true;
        if (!(pos && neg)) continue;

        PoolState pools;
        std::vector<std::size_t> seeds(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_init));
        std::sort(seeds.begin(), seeds.end());
        for (std::size_t i : seeds) pools.labeled.emplace_back(i, train.labels[i]);
        pools.unlabeled.assign(idx.begin() + static_cast<std::ptrdiff_t>(n_init), idx.end());
        std::sort(pools.unlabeled.begin(), pools.unlabeled.end());
        return pools;
    }
    throw Error("init_pools: no two-class seed set of size " + std::to_string(n_init) + " found in " +
                std::to_string(kMaxSeedResamples) + " attempts");
}

}  // namespace lsa
