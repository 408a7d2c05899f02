#ifndef ASBENCH_SUITE_HPP
#define ASBENCH_SUITE_HPP

#include "asbench/bbob.hpp"

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <nlohmann/json_fwd.hpp>
#include <string>
#include <vector>

namespace asbench {

/// Clamp applied inside both logarithms of the affine recombination.
constexpr double kAffineLogClamp = 1e-12;

/// Recombination F(P_i, P_j, alpha) of two parents sharing an instance id.
///
///     F(x) = exp(alpha * log(P_i(x) - P_i(O_i)) + (1 - alpha) * log(P_j(x - O_i + O_j) - P_j(O_j)))
///
/// Both differences are clamped below at kAffineLogClamp. The optimum sits at O_i.
struct AffineInstance {
    std::shared_ptr<const BaseInstance> parent_i;
    std::shared_ptr<const BaseInstance> parent_j;
    double alpha = 0.5;
    std::string id;

    int dim() const { return parent_i->dim; }
    const Vector& x_opt() const { return parent_i->x_opt; }
};

std::string affine_id(int class_i, int class_j, int instance, double alpha);

/// Builds a recombination; checks the class/instance/dimension constraints.
/// `allow_same_class` is only meant for diagnostics with hand-built parents.
AffineInstance make_affine(std::shared_ptr<const BaseInstance> parent_i, std::shared_ptr<const BaseInstance> parent_j,
                           double alpha, bool allow_same_class = false);

double eval_affine(const AffineInstance& a, const Eigen::Ref<const Vector>& x);

struct SuiteConfig {
    std::vector<int> classes;
    std::vector<int> instances;
    std::vector<double> alphas;
    int dim = 2;

    static SuiteConfig full(int dim = 2);
};

struct ManifestEntry {
    std::string id;
    int class_i = 0;
    int class_j = 0;
    int instance = 0;
    double alpha = 0.0;
    int dim = 0;
};

struct SuiteManifest {
    std::vector<ManifestEntry> entries;
    SuiteConfig config;
    std::string config_hash;

    std::size_t size() const { return entries.size(); }
    /// Index of `id`; throws DataError when absent.
    std::size_t index_of(const std::string& id) const;
};

/// All ordered class pairs (i != j) with equal instance ids, for every alpha.
/// Entries are sorted by id.
SuiteManifest generate_suite(const SuiteConfig& config);

constexpr std::size_t expected_suite_size(std::size_t classes, std::size_t instances, std::size_t alphas)
{
    return classes < 2 ? 0 : classes * (classes - 1) * instances * alphas;
}

/// Thread-safe memo of base instances keyed by (class, instance, dim).
class InstanceCache {
public:
    std::shared_ptr<const BaseInstance> get(int class_id, int instance_id, int dim);
    AffineInstance affine(const ManifestEntry& entry);

private:
    std::mutex mutex_;
    std::map<std::tuple<int, int, int>, std::shared_ptr<const BaseInstance>> cache_;
};

/// Latin hypercube design of n points on [-5, 5]^dim; one point per stratum in
/// every coordinate.
Matrix lhs_sample(int dim, int n, std::uint64_t seed);

struct Sample {
    std::string problem_id;
    Matrix X;
    Vector y;
    std::uint64_t sampler_seed = 0;

    Index size() const { return X.rows(); }
    int dim() const { return static_cast<int>(X.cols()); }
};

Sample evaluate_sample(const AffineInstance& problem, const Matrix& X, std::uint64_t sampler_seed = 0);

// Serialization

nlohmann::json to_json(const SuiteManifest& manifest);
SuiteManifest manifest_from_json(const nlohmann::json& j);

/// CSV with header x1..xd,y.
std::string sample_to_csv(const Sample& sample);
Sample sample_from_csv(const std::string& text, const std::string& problem_id, std::uint64_t seed);

}  // namespace asbench

#endif
