#ifndef ASBENCH_TLA_HPP
#define ASBENCH_TLA_HPP

#include "asbench/suite.hpp"

#include <vector>

namespace asbench {

enum class VolumeTransform { None, RankCdf };

struct TlaConfig {
    double alpha = 0.3;  // weight of the x-distance
    VolumeTransform transform = VolumeTransform::RankCdf;
    int max_dim = 0;
    bool allow_h2 = false;  // H2 is combinatorially expensive; needs this and a threshold
    double threshold = 0.0; // <= 0 means the enclosing radius
    double sigma = 0.002;
    int resolution = 50;
};

/// Per-column min-max scaling followed by the volume transform, in [0,1].
Matrix tla_scaled_x(const Matrix& X, VolumeTransform transform);

/// alpha * D_x + (1 - alpha) * D_y on scaled inputs.
Matrix tla_distance(const Sample& sample, double alpha = 0.3,
                    VolumeTransform transform = VolumeTransform::RankCdf);

struct PersistencePair {
    double birth = 0.0;
    double death = 0.0;  // kInf for essential classes
    bool operator==(const PersistencePair&) const = default;
};

struct PersistenceDiagram {
    int dim = 0;
    std::vector<PersistencePair> pairs;
};

/// min over points of the max distance to any other point.
double enclosing_radius(const Matrix& D);

/// Vietoris-Rips persistence up to `max_dim` (0, 1, or 2 with allow_h2).
/// H0 has one bar per point (births 0, one infinite); zero-length bars in
/// higher dimensions are omitted. Pairs are sorted by (birth, death).
std::vector<PersistenceDiagram> vr_persistence(const Matrix& D, int max_dim, double threshold = 0.0,
                                               bool allow_h2 = false);

/// H0 image: `resolution` bins over death. Higher dims: resolution x resolution
/// over (birth, persistence), row-major with birth as the row. Infinite bars
/// are dropped; each bar is weighted by its persistence.
Vector persistence_image(const PersistenceDiagram& diagram, double sigma = 0.002, int resolution = 50);

FeatureVector tla_features(const Sample& sample, const TlaConfig& cfg = {});
std::vector<std::string> tla_feature_names(const TlaConfig& cfg = {});

}  // namespace asbench

#endif
