#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "lsa/error.hpp"

namespace lsa {

struct CurveRow {
    std::string algorithm;
    std::string dataset;
    std::uint64_t seed = 0;
    std::size_t iteration = 0;
    double fraction_queried = 0.0;
    double test_accuracy = 0.0;

    bool operator==(const CurveRow&) const = default;
};

using CurveTable = std::vector<CurveRow>;

inline constexpr const char* kCurveHeader = "algorithm,dataset,seed,iteration,fraction_queried,test_accuracy";

/// Canonical row order: (algorithm, dataset, seed, iteration).
inline void sort_curves(CurveTable& table) {
    std::stable_sort(table.begin(), table.end(), [](const CurveRow& a, const CurveRow& b) {
        return std::tie(a.algorithm, a.dataset, a.seed, a.iteration) <
               std::tie(b.algorithm, b.dataset, b.seed, b.iteration);
    });
}

/// 17 significant digits, enough to round-trip any double.
inline std::string format_real(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// Writes the table as CSV in canonical order.
inline void emit_curves(CurveTable table, const std::filesystem::path& path) {
    sort_curves(table);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out << kCurveHeader << '\n';
    for (const auto& r : table)
        out << r.algorithm << ',' << r.dataset << ',' << r.seed << ',' << r.iteration << ','
            << format_real(r.fraction_queried) << ',' << format_real(r.test_accuracy) << '\n';
    if (!out) throw Error("failed writing '" + path.string() + "'");
}

inline CurveTable read_curves(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path.string() + "'");
    std::string line;
    std::size_t line_no = 1;
    if (!std::getline(in, line) || line != kCurveHeader)
        throw ParseError("missing curves header '" + std::string(kCurveHeader) + "'", line_no);

    auto parse_uint = [&](const std::string& s, auto& out) {
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
        if (ec != std::errc() || p != s.data() + s.size()) throw ParseError("bad integer '" + s + "'", line_no);
    };
    auto parse_real = [&](const std::string& s) {
        double v = 0.0;
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || p != s.data() + s.size()) throw ParseError("bad number '" + s + "'", line_no);
        return v;
    };

    CurveTable table;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
        if (f.size() != 6) throw ParseError("expected 6 fields", line_no);
        CurveRow r;
        r.algorithm = f[0];
        r.dataset = f[1];
        parse_uint(f[2], r.seed);
        parse_uint(f[3], r.iteration);
        r.fraction_queried = parse_real(f[4]);
        r.test_accuracy = parse_real(f[5]);
        table.push_back(std::move(r));
    }
    return table;
}

}  // namespace lsa
