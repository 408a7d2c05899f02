#include "asbench/suite.hpp"
#include "asbench/csv.hpp"
#include "asbench/random.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

namespace asbench {

std::string affine_id(int class_i, int class_j, int instance, double alpha)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), "A_%02d_%02d_%d_%s", class_i, class_j, instance, format_alpha(alpha).c_str());
    return buf;
}

AffineInstance make_affine(std::shared_ptr<const BaseInstance> parent_i, std::shared_ptr<const BaseInstance> parent_j,
                           double alpha, bool allow_same_class)
{
    if (!parent_i || !parent_j) {
        throw UsageError("make_affine: missing parent");
    }
    if (!allow_same_class && parent_i->class_id == parent_j->class_id) {
        throw UsageError("affine parents must come from different classes");
    }
    if (parent_i->instance_id != parent_j->instance_id) {
        throw UsageError("affine parents must share the instance id");
    }
    if (parent_i->dim != parent_j->dim) {
        throw UsageError("affine parents must share the dimension");
    }
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw UsageError("alpha must lie in [0, 1]");
    }
    AffineInstance a;
    a.id = affine_id(parent_i->class_id, parent_j->class_id, parent_i->instance_id, alpha);
    a.parent_i = std::move(parent_i);
    a.parent_j = std::move(parent_j);
    a.alpha = alpha;
    return a;
}

double eval_affine(const AffineInstance& a, const Eigen::Ref<const Vector>& x)
{
    const BaseInstance& pi = *a.parent_i;
    const BaseInstance& pj = *a.parent_j;
    if (x.size() != pi.dim) {
        throw UsageError("dimension mismatch in eval_affine");
    }
    const double di = pi.evaluate(x) - pi.optimum_value();
    const Vector xj = x - pi.x_opt + pj.x_opt;
    const double dj = pj.evaluate(xj) - pj.optimum_value();
    return std::exp(a.alpha * std::log(std::max(di, kAffineLogClamp)) +
                    (1.0 - a.alpha) * std::log(std::max(dj, kAffineLogClamp)));
}

SuiteConfig SuiteConfig::full(int dim)
{
    SuiteConfig c;
    for (int k = 1; k <= kNumBbobClasses; ++k) {
        c.classes.push_back(k);
    }
    for (int k = 1; k <= kMaxBbobInstance; ++k) {
        c.instances.push_back(k);
    }
    c.alphas = {0.25, 0.5, 0.75};
    c.dim = dim;
    return c;
}

std::size_t SuiteManifest::index_of(const std::string& id) const
{
    auto it = std::lower_bound(entries.begin(), entries.end(), id,
                               [](const ManifestEntry& e, const std::string& key) { return e.id < key; });
    if (it == entries.end() || it->id != id) {
        throw DataError("unknown problem id '" + id + "'");
    }
    return static_cast<std::size_t>(it - entries.begin());
}

SuiteManifest generate_suite(const SuiteConfig& config)
{
    if (config.classes.empty() || config.instances.empty() || config.alphas.empty()) {
        throw UsageError("suite configuration needs at least one class, instance and alpha");
    }
    if (config.dim < 2) {
        throw UsageError("suite dimension must be >= 2");
    }
    const std::set<int> classes(config.classes.begin(), config.classes.end());
    const std::set<int> instances(config.instances.begin(), config.instances.end());
    const std::set<double> alphas(config.alphas.begin(), config.alphas.end());
    for (int c : classes) {
        if (c < 1 || c > kNumBbobClasses) {
            throw UsageError("class id out of range 1..24: " + std::to_string(c));
        }
    }
    for (int m : instances) {
        if (m < 1 || m > kMaxBbobInstance) {
            throw UsageError("instance id out of range 1..5: " + std::to_string(m));
        }
    }
    for (double a : alphas) {
        if (!(a >= 0.0 && a <= 1.0)) {
            throw UsageError("alpha out of range [0, 1]");
        }
    }

    SuiteManifest manifest;
    manifest.config.classes.assign(classes.begin(), classes.end());
    manifest.config.instances.assign(instances.begin(), instances.end());
    manifest.config.alphas.assign(alphas.begin(), alphas.end());
    manifest.config.dim = config.dim;
    for (int i : classes) {
        for (int j : classes) {
            if (i == j) {
                continue;
            }
            for (int m : instances) {
                for (double a : alphas) {
                    manifest.entries.push_back({affine_id(i, j, m, a), i, j, m, a, config.dim});
                }
            }
        }
    }
    std::sort(manifest.entries.begin(), manifest.entries.end(),
              [](const ManifestEntry& l, const ManifestEntry& r) { return l.id < r.id; });

    std::string key = "dim=" + std::to_string(config.dim);
    for (const auto& e : manifest.entries) {
        key += ";" + e.id;
    }
    manifest.config_hash = hex64(fnv1a(key));
    return manifest;
}

std::shared_ptr<const BaseInstance> InstanceCache::get(int class_id, int instance_id, int dim)
{
    const auto key = std::make_tuple(class_id, instance_id, dim);
    {
        std::lock_guard lock(mutex_);
        if (auto it = cache_.find(key); it != cache_.end()) {
            return it->second;
        }
    }
    auto inst = std::make_shared<const BaseInstance>(make_base_instance(class_id, instance_id, dim));
    std::lock_guard lock(mutex_);
    return cache_.emplace(key, std::move(inst)).first->second;
}

AffineInstance InstanceCache::affine(const ManifestEntry& entry)
{
    return make_affine(get(entry.class_i, entry.instance, entry.dim), get(entry.class_j, entry.instance, entry.dim),
                       entry.alpha);
}

Matrix lhs_sample(int dim, int n, std::uint64_t seed)
{
    if (n < 1 || dim < 1) {
        throw UsageError("lhs_sample needs n >= 1 and dim >= 1");
    }
    Rng rng(derive_seed(seed, "lhs", static_cast<std::uint64_t>(dim), static_cast<std::uint64_t>(n)));
    Matrix X(n, dim);
    std::vector<int> strata(static_cast<std::size_t>(n));
    const double width = kDomainUpper - kDomainLower;
    for (int d = 0; d < dim; ++d) {
        std::iota(strata.begin(), strata.end(), 0);
        rng.shuffle(strata);
        for (int k = 0; k < n; ++k) {
            const double u = (strata[static_cast<std::size_t>(k)] + rng.uniform()) / n;
            X(k, d) = kDomainLower + width * u;
        }
    }
    return X;
}

Sample evaluate_sample(const AffineInstance& problem, const Matrix& X, std::uint64_t sampler_seed)
{
    if (X.cols() != problem.dim()) {
        throw UsageError("design dimension does not match problem " + problem.id);
    }
    Sample s;
    s.problem_id = problem.id;
    s.X = X;
    s.y.resize(X.rows());
    s.sampler_seed = sampler_seed;
    for (Index k = 0; k < X.rows(); ++k) {
        const double v = eval_affine(problem, X.row(k).transpose());
        if (!std::isfinite(v)) {
            throw DataError("non-finite objective value on " + problem.id);
        }
        s.y[k] = v;
    }
    return s;
}

nlohmann::json to_json(const SuiteManifest& manifest)
{
    nlohmann::json j;
    j["config_hash"] = manifest.config_hash;
    j["config"] = {{"classes", manifest.config.classes},
                   {"instances", manifest.config.instances},
                   {"alphas", manifest.config.alphas},
                   {"dim", manifest.config.dim}};
    auto& problems = j["problems"] = nlohmann::json::array();
    for (const auto& e : manifest.entries) {
        problems.push_back({{"id", e.id},
                            {"parent_i", {{"class", e.class_i}, {"instance", e.instance}}},
                            {"parent_j", {{"class", e.class_j}, {"instance", e.instance}}},
                            {"alpha", e.alpha},
                            {"dim", e.dim}});
    }
    return j;
}

SuiteManifest manifest_from_json(const nlohmann::json& j)
{
    try {
        SuiteManifest m;
        m.config_hash = j.at("config_hash").get<std::string>();
        const auto& c = j.at("config");
        m.config.classes = c.at("classes").get<std::vector<int>>();
        m.config.instances = c.at("instances").get<std::vector<int>>();
        m.config.alphas = c.at("alphas").get<std::vector<double>>();
        m.config.dim = c.at("dim").get<int>();
        for (const auto& p : j.at("problems")) {
            ManifestEntry e;
            e.id = p.at("id").get<std::string>();
            e.class_i = p.at("parent_i").at("class").get<int>();
            e.class_j = p.at("parent_j").at("class").get<int>();
            e.instance = p.at("parent_i").at("instance").get<int>();
            e.alpha = p.at("alpha").get<double>();
            e.dim = p.at("dim").get<int>();
            m.entries.push_back(std::move(e));
        }
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("malformed suite manifest: ") + e.what());
    }
}

std::string sample_to_csv(const Sample& sample)
{
    std::vector<std::string> header;
    for (int d = 0; d < sample.dim(); ++d) {
        header.push_back("x" + std::to_string(d + 1));
    }
    header.emplace_back("y");
    csv::Writer w(header);
    for (Index k = 0; k < sample.size(); ++k) {
        std::vector<std::string> row;
        for (int d = 0; d < sample.dim(); ++d) {
            row.push_back(format_double(sample.X(k, d)));
        }
        row.push_back(format_double(sample.y[k]));
        w.row(row);
    }
    return w.str();
}

Sample sample_from_csv(const std::string& text, const std::string& problem_id, std::uint64_t seed)
{
    const auto table = csv::parse(text, problem_id);
    if (table.header.size() < 2 || table.header.back() != "y") {
        throw DataError(problem_id + ": sample CSV must have header x1..xd,y");
    }
    const auto dim = table.header.size() - 1;
    Sample s;
    s.problem_id = problem_id;
    s.sampler_seed = seed;
    s.X.resize(static_cast<Index>(table.rows.size()), static_cast<Index>(dim));
    s.y.resize(static_cast<Index>(table.rows.size()));
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        for (std::size_t c = 0; c < dim; ++c) {
            s.X(static_cast<Index>(r), static_cast<Index>(c)) = csv::to_double(table.rows[r][c], r, c, problem_id);
        }
        s.y[static_cast<Index>(r)] = csv::to_double(table.rows[r][dim], r, dim, problem_id);
    }
    return s;
}

}  // namespace asbench
