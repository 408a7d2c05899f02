#include "asbench/featurestore.hpp"
#include "asbench/csv.hpp"
#include "asbench/stats.hpp"

#include <algorithm>
#include <mutex>
#include <nlohmann/json.hpp>
#include <set>
#include <unordered_map>

namespace asbench {

std::string provenance_name(Provenance p)
{
    return p == Provenance::Computed ? "computed" : "imported";
}

Index FeatureMatrix::column(const std::string& name) const
{
    const auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) {
        throw InvariantError("group '" + group + "' has no feature '" + name + "'");
    }
    return static_cast<Index>(it - names.begin());
}

Index FeatureMatrix::row(const std::string& id) const
{
    const auto it = std::lower_bound(problems.begin(), problems.end(), id);
    if (it != problems.end() && *it == id) {
        return static_cast<Index>(it - problems.begin());
    }
    // unsorted tables fall back to a scan
    const auto lin = std::find(problems.begin(), problems.end(), id);
    if (lin == problems.end()) {
        throw DataError("group '" + group + "' has no problem '" + id + "'");
    }
    return static_cast<Index>(lin - problems.begin());
}

Matrix FeatureMatrix::rows_for(const std::vector<std::string>& ids) const
{
    Matrix out(static_cast<Index>(ids.size()), width());
    for (std::size_t k = 0; k < ids.size(); ++k) {
        out.row(static_cast<Index>(k)) = values.row(row(ids[k]));
    }
    return out;
}

namespace {

void check_unique_names(const std::vector<std::string>& names, const std::string& group)
{
    std::set<std::string> seen;
    for (const auto& n : names) {
        if (!seen.insert(n).second) {
            throw DataError("group '" + group + "' repeats feature name '" + n + "'");
        }
    }
}

FeatureMatrix select_columns(const FeatureMatrix& m, const std::vector<Index>& keep)
{
    FeatureMatrix out = m;
    out.names.clear();
    out.values.resize(m.height(), static_cast<Index>(keep.size()));
    for (std::size_t k = 0; k < keep.size(); ++k) {
        out.names.push_back(m.names[static_cast<std::size_t>(keep[k])]);
        out.values.col(static_cast<Index>(k)) = m.values.col(keep[k]);
    }
    return out;
}

}  // namespace

FeatureMatrix from_vectors(std::string group, std::vector<std::string> problems,
                           const std::vector<FeatureVector>& rows)
{
    if (problems.size() != rows.size()) {
        throw InvariantError("from_vectors: problem/row count mismatch");
    }
    FeatureMatrix m;
    m.group = std::move(group);
    m.problems = std::move(problems);
    if (!rows.empty()) {
        m.names = rows.front().names;
    }
    check_unique_names(m.names, m.group);
    m.values.resize(static_cast<Index>(rows.size()), static_cast<Index>(m.names.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].names != m.names) {
            throw InvariantError("feature schema differs for problem '" + m.problems[r] + "'");
        }
        for (std::size_t c = 0; c < m.names.size(); ++c) {
            m.values(static_cast<Index>(r), static_cast<Index>(c)) = rows[r].values[c];
        }
    }
    return m;
}

std::string features_to_csv(const FeatureMatrix& m)
{
    std::vector<std::string> header{"problem_id"};
    header.insert(header.end(), m.names.begin(), m.names.end());
    csv::Writer w(header);
    std::vector<std::string> fields(header.size());
    for (Index r = 0; r < m.height(); ++r) {
        fields[0] = m.problems[static_cast<std::size_t>(r)];
        for (Index c = 0; c < m.width(); ++c) {
            fields[static_cast<std::size_t>(c) + 1] = format_double(m.values(r, c));
        }
        w.row(fields);
    }
    return w.str();
}

FeatureMatrix features_from_csv(const std::string& text, const std::string& group, const std::string& origin,
                                Provenance provenance)
{
    const auto table = csv::parse(text, origin);
    if (table.header.empty() || table.header[0] != "problem_id") {
        throw DataError(origin + ": first column must be problem_id");
    }
    FeatureMatrix m;
    m.group = group;
    m.provenance = provenance;
    m.names.assign(table.header.begin() + 1, table.header.end());
    check_unique_names(m.names, group);
    m.values.resize(static_cast<Index>(table.rows.size()), static_cast<Index>(m.names.size()));
    std::set<std::string> seen;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        if (!seen.insert(row[0]).second) {
            throw DataError(origin + ": duplicate problem id '" + row[0] + "'");
        }
        m.problems.push_back(row[0]);
        for (std::size_t c = 1; c < row.size(); ++c) {
            const double v = csv::to_double(row[c], r, c, origin);
            if (!std::isfinite(v)) {
                throw DataError(origin + ": non-finite value at row " + std::to_string(r + 1) + ", column " +
                                std::to_string(c + 1));
            }
            m.values(static_cast<Index>(r), static_cast<Index>(c - 1)) = v;
        }
    }
    return m;
}

FeatureMatrix import_features(const std::filesystem::path& path, const std::string& group,
                              const std::vector<std::string>& suite_ids)
{
    const std::string text = csv::read_text(path);
    FeatureMatrix raw = features_from_csv(text, group, path.string(), Provenance::Imported);
    std::unordered_map<std::string, Index> where;
    for (std::size_t r = 0; r < raw.problems.size(); ++r) {
        where.emplace(raw.problems[r], static_cast<Index>(r));
    }
    std::vector<std::string> missing;
    for (const auto& id : suite_ids) {
        if (!where.count(id)) {
            missing.push_back(id);
        }
    }
    if (!missing.empty()) {
        std::string msg = path.string() + ": missing " + std::to_string(missing.size()) + " problem id(s):";
        for (std::size_t k = 0; k < missing.size() && k < 20; ++k) {
            msg += " " + missing[k];
        }
        if (missing.size() > 20) {
            msg += " ...";
        }
        throw DataError(msg);
    }
    FeatureMatrix m = raw;
    m.problems = suite_ids;
    m.values.resize(static_cast<Index>(suite_ids.size()), raw.width());
    for (std::size_t r = 0; r < suite_ids.size(); ++r) {
        m.values.row(static_cast<Index>(r)) = raw.values.row(where.at(suite_ids[r]));
    }
    m.source_hash = hex64(fnv1a(text));
    return m;
}

FeatureMatrix drop_constant(const FeatureMatrix& m)
{
    std::vector<Index> keep;
    std::vector<std::string> dropped = m.dropped;
    for (Index c = 0; c < m.width(); ++c) {
        if (m.height() > 0 && m.values.col(c).maxCoeff() > m.values.col(c).minCoeff()) {
            keep.push_back(c);
        } else {
            dropped.push_back(m.names[static_cast<std::size_t>(c)]);
        }
    }
    FeatureMatrix out = select_columns(m, keep);
    out.dropped = std::move(dropped);
    return out;
}

FeatureMatrix minmax_columns(const FeatureMatrix& m)
{
    FeatureMatrix out = m;
    for (Index c = 0; c < m.width(); ++c) {
        out.values.col(c) = minmax_scale(m.values.col(c), 0.5);
    }
    return out;
}

FeatureMatrix concat_groups(const std::vector<FeatureMatrix>& groups)
{
    if (groups.empty()) {
        throw UsageError("concat_groups needs at least one group");
    }
    FeatureMatrix out;
    out.problems = groups.front().problems;
    Index width = 0;
    for (const auto& g : groups) {
        if (g.problems != out.problems) {
            throw DataError("groups '" + groups.front().group + "' and '" + g.group + "' cover different problems");
        }
        width += g.width();
    }
    out.values.resize(static_cast<Index>(out.problems.size()), width);
    Index at = 0;
    for (const auto& g : groups) {
        out.group += (out.group.empty() ? "" : "+") + g.group;
        if (g.provenance == Provenance::Imported) {
            out.provenance = Provenance::Imported;
        }
        for (const auto& n : g.names) {
            out.names.push_back(g.group + "." + n);
        }
        out.values.middleCols(at, g.width()) = g.values;
        at += g.width();
    }
    check_unique_names(out.names, out.group);
    return out;
}

void FeatureRegistry::add(FeatureMatrix m)
{
    std::unique_lock lock(mutex_);
    if (groups_.count(m.group)) {
        throw UsageError("feature group '" + m.group + "' is already registered");
    }
    if (!groups_.empty() && groups_.begin()->second.problems != m.problems) {
        throw DataError("feature group '" + m.group + "' covers different problems than '" +
                        groups_.begin()->first + "'");
    }
    const std::string name = m.group;
    groups_.emplace(name, std::move(m));
}

const FeatureMatrix& FeatureRegistry::get(const std::string& group) const
{
    std::shared_lock lock(mutex_);
    const auto it = groups_.find(group);
    if (it == groups_.end()) {
        throw UsageError("unknown feature group '" + group + "'");
    }
    return it->second;
}

bool FeatureRegistry::contains(const std::string& group) const
{
    std::shared_lock lock(mutex_);
    return groups_.count(group) > 0;
}

std::vector<std::string> FeatureRegistry::groups() const
{
    std::shared_lock lock(mutex_);
    std::vector<std::string> out;
    for (const auto& [k, v] : groups_) {
        out.push_back(k);
    }
    return out;
}

nlohmann::json FeatureRegistry::manifest() const
{
    std::shared_lock lock(mutex_);
    nlohmann::json j = nlohmann::json::array();
    for (const auto& [name, m] : groups_) {
        j.push_back({{"group", name},
                     {"width", m.width()},
                     {"problems", m.height()},
                     {"provenance", provenance_name(m.provenance)},
                     {"source_hash", m.source_hash}});
    }
    return j;
}

}  // namespace asbench
