#pragma once

#include <cstdint>
#include <string_view>

namespace lsa {

/// splitmix64 finalizer; a bijective 64-bit mixer.
constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t hash_string(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t part) { return mix64(seed ^ mix64(part)); }

constexpr std::uint64_t derive_seed(std::uint64_t seed, int part) {
    return derive_seed(seed, static_cast<std::uint64_t>(static_cast<std::int64_t>(part)));
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::string_view part) {
    return derive_seed(seed, hash_string(part));
}

template <typename First, typename Second, typename... Rest>
constexpr std::uint64_t derive_seed(std::uint64_t seed, First first, Second second, Rest... rest) {
    return derive_seed(derive_seed(seed, first), second, rest...);
}

}  // namespace lsa
