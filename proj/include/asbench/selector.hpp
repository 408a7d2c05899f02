#ifndef ASBENCH_SELECTOR_HPP
#define ASBENCH_SELECTOR_HPP

#include "asbench/featurestore.hpp"
#include "asbench/perf.hpp"
#include "asbench/splits.hpp"

#include <nlohmann/json_fwd.hpp>
#include <string>
#include <vector>

namespace asbench {

struct ForestConfig {
    int n_trees = 100;
    bool bootstrap = true;
    int max_features = 0;  // 0: ceil(sqrt(width)); negative: all features
    int min_samples_split = 2;
    int min_samples_leaf = 1;
    double min_impurity_decrease = 0.0;
    int max_depth = 0;  // 0: unlimited
    std::uint64_t seed = 1;
    std::size_t workers = 1;

    int candidate_count(int width) const;
};

struct TreeNode {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    int leaf = -1;  // row of Tree::leaf_values
};

struct Tree {
    std::vector<TreeNode> nodes;
    Matrix leaf_values;  // one row per leaf, one column per target
    Vector importance;   // unnormalized impurity decrease per feature

    Eigen::RowVectorXd predict(const Eigen::Ref<const Eigen::RowVectorXd>& x) const;
};

/// Multi-output regression forest, squared-error splits, vector leaves.
struct ForestModel {
    std::vector<Tree> trees;
    std::vector<std::string> features;
    std::vector<std::string> targets;

    Matrix predict(const Matrix& X) const;
    /// Mean impurity decrease, normalized to sum 1 (all zero without splits).
    Vector importance() const;
};

/// Throws UsageError for zero-width X or fewer than 2 rows.
ForestModel train_forest(const Matrix& X, const Matrix& Y, const ForestConfig& cfg,
                         std::vector<std::string> feature_names = {}, std::vector<std::string> target_names = {});

/// Aligns rows by problem id; rows are taken in sorted id order so the result
/// does not depend on the order of `train_ids`.
ForestModel train_forest(const FeatureMatrix& X, const PerformanceMatrix& Y, std::vector<std::string> train_ids,
                         const ForestConfig& cfg);

/// Argmin per row; ties go to the lowest algorithm index.
std::vector<int> select(const Matrix& predictions);
/// The dummy picks the argmin of its constant vector for every problem.
std::vector<int> select(const Vector& dummy, std::size_t problems);

/// mean(1 - (s_selected - s_best)) over the rows of `truth`.
double as_performance(const std::vector<int>& choices, const Matrix& truth);

struct FoldResult {
    std::string portfolio;
    std::string feature_group;
    Protocol protocol = Protocol::Instance;
    std::string fold;
    double model_as = 0.0;
    double dummy_as = 0.0;
    std::vector<std::string> features;
    Vector importance;
};

struct PlanEvaluation {
    std::vector<FoldResult> folds;
    std::vector<std::string> warnings;

    double median_model() const;
    double median_dummy() const;
    /// median over folds of (model_as - dummy_as)
    double median_delta() const;
};

/// Trains one forest per fold on raw features and scores model and dummy.
PlanEvaluation evaluate_plan(const FeatureMatrix& features, const SplitPlan& plan, const PerformanceMatrix& perf,
                             const ForestConfig& cfg, const std::string& portfolio);

std::string results_to_csv(const std::vector<FoldResult>& results);
std::vector<FoldResult> results_from_csv(const std::string& text, const std::string& origin);
/// Long format: portfolio,feature_group,protocol,fold,feature,importance.
std::string importance_to_csv(const std::vector<FoldResult>& results);

nlohmann::json to_json(const Tree& tree, const std::vector<std::string>& features);

}  // namespace asbench

#endif
