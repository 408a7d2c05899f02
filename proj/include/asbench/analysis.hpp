#ifndef ASBENCH_ANALYSIS_HPP
#define ASBENCH_ANALYSIS_HPP

#include "asbench/featurestore.hpp"
#include "asbench/perf.hpp"

#include <string>
#include <utility>
#include <vector>

namespace asbench {

struct CorrelationMatrix {
    std::vector<std::string> names;
    Matrix rho;
    std::vector<int> order;  // dendrogram leaf order
};

/// Spearman correlation between every pair of columns (constant columns give
/// 0 off the diagonal), clustered by average linkage on 1 - |rho|.
CorrelationMatrix spearman_matrix(const FeatureMatrix& m, std::size_t workers = 1);

/// Leaf order of an average-linkage dendrogram over a distance matrix.
std::vector<int> average_linkage_order(const Matrix& dist);

/// `count` distinct unordered index pairs (i < j) from n items, sorted; all
/// pairs when count >= n(n-1)/2.
std::vector<std::pair<std::size_t, std::size_t>> sample_pairs(std::size_t n, std::size_t count, std::uint64_t seed);

/// Constant-drop followed by column min-max scaling.
FeatureMatrix preprocess_for_similarity(const FeatureMatrix& m);

struct PairSimilarity {
    std::string a;
    std::string b;
    std::vector<double> cosine;  // per group; NaN when the group had no usable columns
};

std::vector<PairSimilarity> cosine_consistency(const std::vector<FeatureMatrix>& groups, std::size_t n_pairs,
                                               std::uint64_t seed);

struct AlignmentRecord {
    std::string a;
    std::string b;
    double feature_sim = 0.0;
    double perf_sim = 0.0;
};

struct CurvePoint {
    double feature_sim = 0.0;  // bin centre, rounded to 2 decimals
    double mean = 0.0;
    double median = 0.0;
    std::size_t count = 0;
};

struct Alignment {
    std::vector<AlignmentRecord> records;
    std::vector<CurvePoint> curve;  // occupied bins only, ascending
};

/// All pairs among `n_problems` sampled problems: feature cosine (after
/// preprocessing) against the cosine of the performance rows.
Alignment alignment(const FeatureMatrix& group, const PerformanceMatrix& perf, std::size_t n_problems,
                    std::uint64_t seed);

std::vector<CurvePoint> binned_curve(const std::vector<AlignmentRecord>& records);

/// Spearman of every feature column (constants included, rho = 0) against the
/// performance column of `algorithm`.
Vector per_feature_perf_corr(const FeatureMatrix& group, const PerformanceMatrix& perf,
                             const std::string& algorithm);

struct PcaReduction {
    Matrix projection;       // rows x components
    Vector shares;           // explained-variance share per component, descending
    double explained = 0.0;  // cumulative share of the kept components
    int rank = 0;
    std::string note;        // set when fewer than the requested dims exist
};

PcaReduction pca_reduce(const Matrix& data, int dims = 20);

// CSV helpers
std::string correlation_to_csv(const CorrelationMatrix& c);
std::string pairs_to_csv(const std::vector<PairSimilarity>& pairs, const std::vector<std::string>& groups);
std::string alignment_to_csv(const Alignment& a);
std::string curve_to_csv(const std::vector<CurvePoint>& curve);

}  // namespace asbench

#endif
