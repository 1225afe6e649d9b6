#pragma once

#include "homgibbs/graphs.hpp"
#include "homgibbs/rng.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace homgibbs {

/// Packaged experiments, one per acceptance criterion:
/// hinge-activities, hinge-multiplicity, conditional-symmetry,
/// stationary-fractions, dichotomy, sterile-uniqueness, r1-uniqueness,
/// coloring-threshold, weak-square-isolation, frozen-rigidity,
/// mcmc-exactness, hardcore-bimodality, scaling-gauge, detailed-balance.
const std::vector<std::string>& experiment_ids();

struct ExperimentConfig {
    std::string id;
    std::optional<std::uint64_t> seed;  ///< unset: the experiment's pinned seed
    unsigned threads = 0;
    std::filesystem::path out_dir;      ///< empty: no artifacts written
};

struct ExperimentResult {
    std::string id;
    bool passed = false;
    std::string summary;           ///< one line, expectation vs observed
    std::vector<std::string> diff; ///< failed expectations
    nlohmann::json details;
    std::uint64_t seed = 0;
};

/// Throws std::invalid_argument for an unknown id.
ExperimentResult run_experiment(const ExperimentConfig& config);

nlohmann::json to_json(const ExperimentResult& result);

/// Random connected constraint graph on q nodes: each edge and loop present
/// with probability p, redrawn until connected with at least one edge.
ConstraintGraph random_connected_graph(std::size_t q, double p, Rng& rng);

/// Activities drawn log-uniformly from [lo, hi].
std::vector<double> random_activities(std::size_t q, Rng& rng, double lo = 0.1, double hi = 10.0);

}  // namespace homgibbs
