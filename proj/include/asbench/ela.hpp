#ifndef ASBENCH_ELA_HPP
#define ASBENCH_ELA_HPP

#include "asbench/suite.hpp"

#include <vector>

namespace asbench {

/// Exploratory landscape analysis on a fixed sample (no extra evaluations).
///
/// Families and their name prefixes: disp., ela_distr., ela_level., ela_meta.,
/// ic., nbc., pca. The schema depends on the configuration only. Degenerate
/// statistics never produce NaN; they fall back to neutral values and raise
/// the family's flag feature:
///
///   - zero-variance y: skewness = kurtosis = 0, number_of_peaks = 1
///   - level sets with a single class: misclassification 0.5
///   - zero misclassification in a ratio denominator: replaced by 1 / n
///   - constant y: R^2 = 0, coefficient ratios 1
///   - 0/0 distance ratios: 1
///   - correlations with a constant input: 0
struct ElaConfig {
    std::vector<double> level_quantiles{0.10, 0.25, 0.50};
    std::vector<double> disp_fractions{0.02, 0.05, 0.10, 0.25};
    int level_folds = 5;
    std::uint64_t level_seed = 20240901;
    int ic_grid_points = 30;
    double ic_eps_low = 1e-5;
    double ic_eps_high = 1e2;
    double ic_settling_threshold = 0.05;
    double pca_variance_target = 0.9;
    double meta_ridge = 1e-8;
};

FeatureVector ela_distr(const Sample& sample);
FeatureVector ela_meta(const Sample& sample, const ElaConfig& cfg = {});
FeatureVector ela_level(const Sample& sample, const ElaConfig& cfg = {});
FeatureVector ela_ic(const Sample& sample, const ElaConfig& cfg = {});
FeatureVector ela_disp(const Sample& sample, const ElaConfig& cfg = {});
FeatureVector ela_nbc(const Sample& sample);
FeatureVector ela_pca(const Sample& sample, const ElaConfig& cfg = {});

/// All families concatenated; with `scale_y` the objective values are first
/// min-max scaled to [0, 1] (constant y becomes all 0.5).
FeatureVector ela_all(const Sample& sample, bool scale_y, const ElaConfig& cfg = {});

std::vector<std::string> ela_feature_names(const ElaConfig& cfg = {});

// Building blocks, exposed for testing.

/// Number of strict local maxima of a Gaussian KDE (Silverman bandwidth) above
/// 0.1% of the maximum density.
int kde_peak_count(const Eigen::Ref<const Vector>& y);

struct LinearFit {
    Vector coef;  // intercept first
    double r2 = 0.0;
    double adj_r2 = 0.0;
    bool ridge = false;
};

LinearFit least_squares(const Matrix& design, const Vector& y, double ridge);

/// 5-fold CV misclassification of LDA or QDA; NaN when every fold is degenerate.
double level_set_mmce(const Matrix& X, const std::vector<int>& labels, bool quadratic, int folds,
                      std::uint64_t seed);

/// Nearest-neighbour tour starting at point 0 (ties to the lowest index).
std::vector<Index> nearest_neighbour_tour(const Matrix& X);

/// Entropy of consecutive distinct symbol pairs, log base 6.
double information_content(const std::vector<int>& symbols);

struct PcaSummary {
    int components_needed = 0;  // to reach the variance target
    int columns = 0;
    double first_share = 1.0;
    std::vector<double> shares;
    bool dropped_columns = false;
};

PcaSummary pca_summary(const Matrix& data, bool correlation, double target = 0.9);

}  // namespace asbench

#endif
