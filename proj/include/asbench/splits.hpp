#ifndef ASBENCH_SPLITS_HPP
#define ASBENCH_SPLITS_HPP

#include "asbench/suite.hpp"

#include <nlohmann/json_fwd.hpp>
#include <string>
#include <utility>
#include <vector>

namespace asbench {

enum class Protocol { Instance, Random, ProblemCombination, Problem };

std::string protocol_name(Protocol p);
/// Accepts instance, random, problem_combination, problem.
Protocol protocol_from_name(const std::string& name);
std::vector<Protocol> all_protocols();

struct Fold {
    std::string label;
    std::vector<std::string> train;  // sorted
    std::vector<std::string> test;   // sorted
};

struct SplitPlan {
    Protocol protocol = Protocol::Instance;
    std::uint64_t seed = 0;
    std::string manifest_hash;
    std::vector<Fold> folds;
};

/// One fold per instance id: test = that instance, train = the others.
SplitPlan instance_split(const SuiteManifest& manifest);

/// k seeded folds of near-equal size (sizes differ by at most one).
SplitPlan random_split(const SuiteManifest& manifest, int k, std::uint64_t seed);

/// One fold per class c: test = c is a parent, train = c is not.
SplitPlan problem_combination_split(const SuiteManifest& manifest);

using ClassPair = std::pair<int, int>;

/// All unordered pairs of the suite's classes (a < b), lexicographic.
std::vector<ClassPair> all_class_pairs(const std::vector<int>& classes);

/// Disjoint pairs from a seeded shuffle of the classes; with an odd class
/// count the last shuffled class is left out.
std::vector<ClassPair> disjoint_class_pairs(const std::vector<int>& classes, std::uint64_t seed);

/// One fold per pair {a,b}: test = parents exactly {a,b}; train = neither
/// parent in {a,b}. Everything else is left out of the fold.
SplitPlan problem_split(const SuiteManifest& manifest, const std::vector<ClassPair>& pairs, std::uint64_t seed);

/// Disjoint seeded pairs by default, every pair when `all_pairs`.
SplitPlan problem_split(const SuiteManifest& manifest, bool all_pairs, std::uint64_t seed);

SplitPlan make_split(const SuiteManifest& manifest, Protocol protocol, std::uint64_t seed, int random_folds = 5,
                     bool all_pairs = false);

/// Throws InvariantError on overlap, empty test sets, unknown ids, or leakage
/// of instance ids / parent classes for the protocols that forbid it.
void check_plan(const SplitPlan& plan, const SuiteManifest& manifest);

nlohmann::json to_json(const SplitPlan& plan);
SplitPlan plan_from_json(const nlohmann::json& j);

}  // namespace asbench

#endif
