#ifndef ASBENCH_FEATURESTORE_HPP
#define ASBENCH_FEATURESTORE_HPP

#include "asbench/core.hpp"

#include <filesystem>
#include <map>
#include <nlohmann/json_fwd.hpp>
#include <shared_mutex>
#include <string>
#include <vector>

namespace asbench {

enum class Provenance { Computed, Imported };

std::string provenance_name(Provenance p);

/// One feature group: a dense problems x features table.
struct FeatureMatrix {
    std::string group;
    std::vector<std::string> problems;
    std::vector<std::string> names;
    Matrix values;
    Provenance provenance = Provenance::Computed;
    std::vector<std::string> dropped;  // names removed by drop_constant
    std::string source_hash;

    Index width() const { return values.cols(); }
    Index height() const { return values.rows(); }
    /// Column of `name`; throws InvariantError when absent.
    Index column(const std::string& name) const;
    /// Row of problem `id`; throws DataError when absent.
    Index row(const std::string& id) const;
    /// Rows for `ids`, in that order.
    Matrix rows_for(const std::vector<std::string>& ids) const;
};

/// Stacks per-problem vectors; every vector must carry the same names.
FeatureMatrix from_vectors(std::string group, std::vector<std::string> problems,
                           const std::vector<FeatureVector>& rows);

/// Header `problem_id,<f1>,...`, one row per problem.
std::string features_to_csv(const FeatureMatrix& m);
FeatureMatrix features_from_csv(const std::string& text, const std::string& group, const std::string& origin,
                                Provenance provenance = Provenance::Computed);

/// Reads an externally computed feature CSV and aligns it to `suite_ids`.
/// Missing ids are listed in the error; ids outside the suite are ignored.
FeatureMatrix import_features(const std::filesystem::path& path, const std::string& group,
                              const std::vector<std::string>& suite_ids);

/// Removes zero-range columns. An all-constant group becomes width 0.
FeatureMatrix drop_constant(const FeatureMatrix& m);

/// Maps each column to [0,1]; a constant column becomes 0.5.
FeatureMatrix minmax_columns(const FeatureMatrix& m);

/// Horizontal concatenation; names become `<group>.<name>`.
FeatureMatrix concat_groups(const std::vector<FeatureMatrix>& groups);

/// Registered groups of one experiment. Registration is serialized; lookups
/// may run concurrently.
class FeatureRegistry {
public:
    /// Throws UsageError on a duplicate name and DataError when the problem
    /// ids differ from the groups already registered.
    void add(FeatureMatrix m);
    const FeatureMatrix& get(const std::string& group) const;
    bool contains(const std::string& group) const;
    std::vector<std::string> groups() const;
    nlohmann::json manifest() const;

private:
    mutable std::shared_mutex mutex_;
    std::map<std::string, FeatureMatrix> groups_;
};

}  // namespace asbench

#endif
