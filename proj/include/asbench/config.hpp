#ifndef ASBENCH_CONFIG_HPP
#define ASBENCH_CONFIG_HPP

#include "asbench/portfolio.hpp"
#include "asbench/selector.hpp"
#include "asbench/splits.hpp"
#include "asbench/suite.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace asbench {

struct AnalysisConfig {
    bool correlation = true;
    bool consistency = true;
    bool alignment = true;
    bool distributions = true;
    std::size_t consistency_pairs = 1000;
    std::size_t alignment_problems = 200;
    int pca_dims = 20;
    std::uint64_t seed = 1;
};

/// Everything that defines an experiment. `workers` and `output` never enter
/// any hash: they change where and how fast, not what is computed.
struct ExperimentConfig {
    SuiteConfig suite = SuiteConfig::full(2);
    std::uint64_t sample_seed = 1;
    int sample_factor = 50;  // sample size = factor * dim

    std::vector<std::string> portfolios{"2DE+2PSO"};
    PortfolioSettings portfolio;

    /// Computed groups (ela, ela_scaled, tinytla), imported groups, and
    /// concatenations written as "a+b".
    std::vector<std::string> feature_groups{"ela"};
    std::map<std::string, std::filesystem::path> imports;
    int tla_max_dim = 1;

    std::vector<Protocol> protocols = all_protocols();
    std::uint64_t split_seed = 1;
    int random_folds = 5;
    bool all_pairs = false;

    ForestConfig forest;
    AnalysisConfig analysis;

    std::filesystem::path output = "asbench-out";
    std::size_t workers = 1;

    int sample_size() const { return sample_factor * suite.dim; }

    /// Canonical text of one section ("suite", "portfolio", ...), used for hashing.
    std::string canonical(const std::string& section) const;
    /// Canonical text of the whole file; round-trips through parse_config.
    std::string to_ini() const;
};

/// Parses the INI text. Relative paths resolve against `base_dir`. Unknown
/// sections or keys and malformed values throw UsageError.
ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

/// Throws UsageError when the config is inconsistent (unknown group or
/// portfolio, missing import file, empty suite).
void validate(const ExperimentConfig& cfg);

/// Groups that are computed from samples, in a fixed order.
std::vector<std::string> computed_groups(const ExperimentConfig& cfg);
/// The building blocks of a (possibly concatenated) group name.
std::vector<std::string> group_parts(const std::string& group);

/// "1-3,7" -> {1,2,3,7}
std::vector<int> parse_int_list(const std::string& text);

}  // namespace asbench

#endif
