#ifndef ASBENCH_VERIFY_HPP
#define ASBENCH_VERIFY_HPP

#include "asbench/config.hpp"
#include "asbench/tla.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace asbench {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

// Built-in oracle suites.
CheckResult check_h0_mst(int matrices = 200, int max_n = 50, std::uint64_t seed = 1);
CheckResult check_h1_bruteforce(int trials = 200, int max_n = 6, std::uint64_t seed = 2);
CheckResult check_metric_examples();
CheckResult check_as_endpoints();
CheckResult check_split_cardinalities();
CheckResult check_lhs_strata();
CheckResult check_forest_memorization();
CheckResult check_affine_invariance(int problems = 20, std::uint64_t seed = 3);

/// Runs the whole pipeline of `cfg` into `<scratch>/w1` with one worker and
/// into `<scratch>/w<workers>` with `workers`, then compares every file.
CheckResult check_determinism(ExperimentConfig cfg, const std::filesystem::path& scratch, std::size_t workers);

/// A small configuration that exercises every stage in seconds.
ExperimentConfig tiny_config();

std::vector<CheckResult> builtin_oracles(const std::filesystem::path& scratch, std::size_t workers);

/// Compares the stage manifests under cfg.output with the config and the
/// files on disk: stale stage hashes, altered files and CSVs whose
/// `#config_hash=` line disagrees are all failures.
std::vector<CheckResult> check_artifacts(const ExperimentConfig& cfg);

/// Relative paths of files that differ (or exist on one side only).
std::vector<std::string> diff_trees(const std::filesystem::path& a, const std::filesystem::path& b);

/// Independent H1 barcode of the full Rips filtration of a small matrix
/// (n <= 8), through persistent Betti numbers over GF(2).
std::vector<PersistencePair> brute_force_h1(const Matrix& D);
/// Sorted minimum spanning tree weights (Prim).
std::vector<double> mst_weights(const Matrix& D);

}  // namespace asbench

#endif
