#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "lsa/dataset.hpp"

namespace lsa::synthetic {

/// Two isotropic unit-variance Gaussians whose means sit at +-separation/2
/// along a random unit direction. Classes are drawn with probability 1/2.
inline Dataset gaussian_pair(std::size_t n, Eigen::Index d, double separation, std::uint64_t seed,
                             std::string name = "gaussians") {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::bernoulli_distribution coin(0.5);

    Vector direction(d);
    for (Eigen::Index j = 0; j < d; ++j) direction(j) = normal(rng);
    direction.normalize();

    Dataset ds;
    ds.name = std::move(name);
    ds.features.resize(static_cast<Eigen::Index>(n), d);
    ds.labels.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const int y = coin(rng) ? 1 : -1;
        ds.labels[i] = y;
        for (Eigen::Index j = 0; j < d; ++j)
            ds.features(static_cast<Eigen::Index>(i), j) = normal(rng) + 0.5 * separation * y * direction(j);
    }
    return ds;
}

/// Four blobs at (+-offset, +-offset) in the plane labelled by the sign of
/// x1 * x2 (the XOR pattern), with each label flipped with probability `noise`.
inline Dataset xor_blobs(std::size_t n, double offset, double spread, double noise, std::uint64_t seed,
                         std::string name = "xor") {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, spread);
    std::uniform_int_distribution<int> quadrant(0, 3);
    std::bernoulli_distribution flip(noise);

    Dataset ds;
    ds.name = std::move(name);
    ds.features.resize(static_cast<Eigen::Index>(n), 2);
    ds.labels.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const int q = quadrant(rng);
        const double sx = (q & 1) ? 1.0 : -1.0;
        const double sy = (q & 2) ? 1.0 : -1.0;
        const auto row = static_cast<Eigen::Index>(i);
        ds.features(row, 0) = sx * offset + normal(rng);
        ds.features(row, 1) = sy * offset + normal(rng);
        int y = sx * sy > 0 ? 1 : -1;
        if (flip(rng)) y = -y;
        ds.labels[i] = y;
    }
    return ds;
}

}  // namespace lsa::synthetic
