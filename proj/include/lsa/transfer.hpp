#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "lsa/dataset.hpp"
#include "lsa/error.hpp"
#include "lsa/linear_aggregation.hpp"
#include "lsa/strategies.hpp"

namespace lsa {

inline constexpr int kExperienceVersion = 1;

struct ChainLink {
    std::string dataset;
    std::uint64_t seed = 0;
    std::size_t budget = 0;

    bool operator==(const ChainLink&) const = default;
};

/// Blending weights learned by LSA (shared-context coordinate first), plus
/// the strategy order they refer to and the datasets that produced them.
struct Experience {
    Vector weights;
    std::vector<Strategy> strategies;
    double lambda_used = 1.0;
    std::vector<ChainLink> chain;

    bool operator==(const Experience& other) const {
        return weights.size() == other.weights.size() && weights == other.weights &&
               strategies == other.strategies && lambda_used == other.lambda_used && chain == other.chain;
    }
};

inline void validate(const Experience& e) {
    if (e.strategies.empty()) throw Error("experience: empty strategy list");
    if (e.weights.size() != static_cast<Eigen::Index>(e.strategies.size()) + 1)
        throw Error("experience: " + std::to_string(e.weights.size()) + " weights for " +
                    std::to_string(e.strategies.size()) + " strategies (expected strategies + 1)");
    if (!e.weights.allFinite()) throw Error("experience: non-finite weight");
    if (!(e.lambda_used > 0.0)) throw Error("experience: lambda_used must be positive");
}

/// Throws unless `e` was learned over exactly `strategies`, in that order.
inline void check_compatible(const Experience& e, const std::vector<Strategy>& strategies) {
    if (e.strategies == strategies) return;
    auto join = [](const std::vector<Strategy>& v) {
        std::string s;
        for (Strategy x : v) s += (s.empty() ? "" : ",") + std::string(to_string(x));
        return s;
    };
    throw Error("experience is incompatible: learned over [" + join(e.strategies) + "], run uses [" +
                join(strategies) + "]");
}

/// One dataset of a transfer sequence, already split and pool-initialized.
struct TransferTask {
    std::string name;
    PoolState pools;
    Dataset train;
    Dataset test;
};

struct SequenceResult {
    Experience experience;
    std::vector<RunTrace> traces;
};

/// Runs LSA over `tasks` in order, anchoring each run's bandit at the
/// experience left by the previous one (zero before the first, or `prior`).
inline SequenceResult run_sequence(const std::vector<LsaConfig>& cfgs, const std::vector<TransferTask>& tasks,
                                   const Experience* prior = nullptr) {
    if (tasks.empty()) throw Error("run_sequence: no datasets");
    if (cfgs.size() != tasks.size()) throw Error("run_sequence: one config per dataset required");
    for (const auto& cfg : cfgs) {
        if (cfg.strategies != cfgs.front().strategies)
            throw Error("run_sequence: strategy lists differ across datasets");
        if (cfg.lambda != cfgs.front().lambda) throw Error("run_sequence: lambda differs across datasets");
    }

    SequenceResult out;
    Experience& exp = out.experience;
    exp.strategies = cfgs.front().strategies;
    exp.lambda_used = cfgs.front().lambda;
    exp.weights = Vector::Zero(cfgs.front().context_dim());
    if (prior != nullptr) {
        validate(*prior);
        check_compatible(*prior, exp.strategies);
        exp.weights = prior->weights;
        exp.chain = prior->chain;
    }

    for (std::size_t q = 0; q < tasks.size(); ++q) {
        const auto& task = tasks[q];
        out.traces.push_back(run(cfgs[q], task.pools, task.train, task.test, exp.weights));
        exp.weights = out.traces.back().final_experience;
        exp.chain.push_back({task.name, cfgs[q].seed, cfgs[q].budget});
    }
    return out;
}

inline nlohmann::json to_json(const Experience& e) {
    nlohmann::json j;
    j["version"] = kExperienceVersion;
    auto& names = j["strategies"] = nlohmann::json::array();
    for (Strategy s : e.strategies) names.push_back(std::string(to_string(s)));
    j["lambda_used"] = e.lambda_used;
    auto& w = j["weights"] = nlohmann::json::array();
    for (Eigen::Index i = 0; i < e.weights.size(); ++i) w.push_back(e.weights(i));
    auto& chain = j["chain"] = nlohmann::json::array();
    for (const auto& link : e.chain)
        chain.push_back({{"dataset", link.dataset}, {"seed", link.seed}, {"budget", link.budget}});
    return j;
}

inline Experience experience_from_json(const nlohmann::json& j) {
    auto field = [&](const char* name) -> const nlohmann::json& {
        if (!j.is_object() || !j.contains(name)) throw Error(std::string("experience: missing field '") + name + "'");
        return j.at(name);
    };
    auto bad = [](const char* name) { return Error(std::string("experience: field '") + name + "' has the wrong type"); };

    const auto& version = field("version");
    if (!version.is_number_integer()) throw bad("version");
    if (version.get<int>() != kExperienceVersion)
        throw Error("experience: unsupported version " + version.dump() + " (expected " +
                    std::to_string(kExperienceVersion) + ")");

    Experience e;
    const auto& names = field("strategies");
    if (!names.is_array()) throw bad("strategies");
    for (const auto& n : names) {
        if (!n.is_string()) throw bad("strategies");
        e.strategies.push_back(parse_strategy(n.get<std::string>()));
    }
    const auto& lambda = field("lambda_used");
    if (!lambda.is_number()) throw bad("lambda_used");
    e.lambda_used = lambda.get<double>();

    const auto& weights = field("weights");
    if (!weights.is_array()) throw bad("weights");
    e.weights.resize(static_cast<Eigen::Index>(weights.size()));
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (!weights[i].is_number()) throw bad("weights");
        e.weights(static_cast<Eigen::Index>(i)) = weights[i].get<double>();
    }

    const auto& chain = field("chain");
    if (!chain.is_array()) throw bad("chain");
    for (const auto& link : chain) {
        if (!link.is_object() || !link.contains("dataset") || !link.contains("seed") || !link.contains("budget") ||
            !link["dataset"].is_string() || !link["seed"].is_number_integer() ||
            !link["budget"].is_number_integer())
            throw bad("chain");
        e.chain.push_back({link["dataset"].get<std::string>(), link["seed"].get<std::uint64_t>(),
                           link["budget"].get<std::size_t>()});
    }
    validate(e);
    return e;
}

inline void save_experience(const Experience& e, const std::filesystem::path& path) {
    validate(e);
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out << to_json(e).dump(2) << '\n';
    if (!out) throw Error("failed writing '" + path.string() + "'");
}

inline Experience load_experience(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path.string() + "'");
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& err) {
        throw Error("experience: malformed JSON in '" + path.string() + "': " + err.what());
    }
    return experience_from_json(j);
}

}  // namespace lsa
