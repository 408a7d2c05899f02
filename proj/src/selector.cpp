#include "asbench/selector.hpp"
#include "asbench/csv.hpp"
#include "asbench/parallel.hpp"
#include "asbench/random.hpp"
#include "asbench/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <nlohmann/json.hpp>
#include <numeric>

namespace asbench {

int ForestConfig::candidate_count(int width) const
{
    if (max_features < 0 || max_features >= width) {
        return width;
    }
    if (max_features > 0) {
        return max_features;
    }
    return std::max(1, static_cast<int>(std::ceil(std::sqrt(static_cast<double>(width)))));
}

Eigen::RowVectorXd Tree::predict(const Eigen::Ref<const Eigen::RowVectorXd>& x) const
{
    int at = 0;
    while (nodes[static_cast<std::size_t>(at)].feature >= 0) {
        const auto& n = nodes[static_cast<std::size_t>(at)];
        at = x[n.feature] <= n.threshold ? n.left : n.right;
    }
    return leaf_values.row(nodes[static_cast<std::size_t>(at)].leaf);
}

Matrix ForestModel::predict(const Matrix& X) const
{
    if (trees.empty()) {
        throw InvariantError("forest has no trees");
    }
    const Index T = trees.front().leaf_values.cols();
    Matrix out(X.rows(), T);
    for (Index r = 0; r < X.rows(); ++r) {
        const Eigen::RowVectorXd x = X.row(r);
        Eigen::RowVectorXd sum = Eigen::RowVectorXd::Zero(T);
        Eigen::RowVectorXd lo = Eigen::RowVectorXd::Constant(T, kInf);
        Eigen::RowVectorXd hi = Eigen::RowVectorXd::Constant(T, -kInf);
        for (const auto& tree : trees) {
            const Eigen::RowVectorXd p = tree.predict(x);
            sum += p;
            lo = lo.cwiseMin(p);
            hi = hi.cwiseMax(p);
        }
        for (Index t = 0; t < T; ++t) {
            // unanimous trees return their value exactly
            out(r, t) = lo[t] == hi[t] ? lo[t] : sum[t] / static_cast<double>(trees.size());
        }
    }
    return out;
}

Vector ForestModel::importance() const
{
    const Index p = static_cast<Index>(features.size());
    Vector total = Vector::Zero(p);
    for (const auto& t : trees) {
        const double s = t.importance.sum();
        if (s > 0.0) {
            total += t.importance / s;
        }
    }
    const double s = total.sum();
    return s > 0.0 ? Vector(total / s) : total;
}

namespace {

class TreeBuilder {
public:
    TreeBuilder(const Matrix& X, const RowMatrix& Y, const ForestConfig& cfg, std::uint64_t seed, Tree& tree)
        : X_(X), Y_(Y), cfg_(cfg), rng_(seed), tree_(tree), mtry_(cfg.candidate_count(static_cast<int>(X.cols())))
    {
        pool_.resize(static_cast<std::size_t>(X.cols()));
        std::iota(pool_.begin(), pool_.end(), 0);
        tree_.importance = Vector::Zero(X.cols());
    }

    void grow(std::vector<int> rows)
    {
        rows_ = std::move(rows);
        n_root_ = static_cast<double>(rows_.size());
        leaves_.clear();
        build(0, rows_.size(), 0);
        tree_.leaf_values.resize(static_cast<Index>(leaves_.size()), Y_.cols());
        for (std::size_t k = 0; k < leaves_.size(); ++k) {
            tree_.leaf_values.row(static_cast<Index>(k)) = leaves_[k];
        }
    }

private:
    struct Split {
        int feature = -1;
        double threshold = 0.0;
        double proxy = -kInf;
    };

    // Mean of the target variances over rows [lo, hi).
    double impurity(std::size_t lo, std::size_t hi, Eigen::RowVectorXd* mean_out = nullptr) const
    {
        const Index T = Y_.cols();
        const double m = static_cast<double>(hi - lo);
        Eigen::RowVectorXd mean = Eigen::RowVectorXd::Zero(T);
        for (std::size_t k = lo; k < hi; ++k) {
            mean += Y_.row(rows_[k]);
        }
        mean /= m;
        double ss = 0.0;
        for (std::size_t k = lo; k < hi; ++k) {
            ss += (Y_.row(rows_[k]) - mean).squaredNorm();
        }
        if (mean_out) {
            *mean_out = mean;
        }
        return ss / (m * static_cast<double>(T));
    }

    Eigen::RowVectorXd leaf_value(std::size_t lo, std::size_t hi) const
    {
        const Index T = Y_.cols();
        Eigen::RowVectorXd out(T);
        for (Index t = 0; t < T; ++t) {
            double sum = 0.0;
            double mn = kInf;
            double mx = -kInf;
            for (std::size_t k = lo; k < hi; ++k) {
                const double v = Y_(rows_[k], t);
                sum += v;
                mn = std::min(mn, v);
                mx = std::max(mx, v);
            }
            out[t] = mn == mx ? mn : sum / static_cast<double>(hi - lo);
        }
        return out;
    }

    int make_leaf(std::size_t lo, std::size_t hi)
    {
        TreeNode node;
        node.leaf = static_cast<int>(leaves_.size());
        leaves_.push_back(leaf_value(lo, hi));
        tree_.nodes.push_back(node);
        return static_cast<int>(tree_.nodes.size() - 1);
    }

    Split find_split(std::size_t lo, std::size_t hi)
    {
        const std::size_t m = hi - lo;
        const Index T = Y_.cols();
        const auto min_leaf = static_cast<std::size_t>(std::max(cfg_.min_samples_leaf, 1));
        const auto nt = static_cast<std::size_t>(T);
        total_.assign(nt, 0.0);
        for (std::size_t k = lo; k < hi; ++k) {
            const double* y = Y_.data() + static_cast<std::size_t>(rows_[k]) * nt;
            for (std::size_t t = 0; t < nt; ++t) {
                total_[t] += y[t];
            }
        }

        Split best;
        int visited = 0;
        const std::size_t p = pool_.size();
        for (std::size_t k = 0; k < p && visited < mtry_; ++k) {
            const std::size_t j = k + static_cast<std::size_t>(rng_.below(p - k));
            std::swap(pool_[k], pool_[j]);
            const int f = pool_[k];
            buf_.clear();
            for (std::size_t r = lo; r < hi; ++r) {
                buf_.push_back({X_(rows_[r], f), rows_[r]});
            }
            std::sort(buf_.begin(), buf_.end());
            if (buf_.front().first == buf_.back().first) {
                continue;  // constant in this node, not counted
            }
            ++visited;
            left_.assign(nt, 0.0);
            for (std::size_t i = 0; i + 1 < m; ++i) {
                const double* y = Y_.data() + static_cast<std::size_t>(buf_[i].second) * nt;
                for (std::size_t t = 0; t < nt; ++t) {
                    left_[t] += y[t];
                }
                const std::size_t nl = i + 1;
                const std::size_t nr = m - nl;
                if (buf_[i].first == buf_[i + 1].first || nl < min_leaf || nr < min_leaf) {
                    continue;
                }
                double sl = 0.0;
                double sr = 0.0;
                for (std::size_t t = 0; t < nt; ++t) {
                    const double rt = total_[t] - left_[t];
                    sl += left_[t] * left_[t];
                    sr += rt * rt;
                }
                const double proxy = sl / static_cast<double>(nl) + sr / static_cast<double>(nr);
                if (proxy > best.proxy) {
                    best.proxy = proxy;
                    best.feature = f;
                    const double a = buf_[i].first;
                    const double b = buf_[i + 1].first;
                    double mid = a + (b - a) / 2.0;
                    if (mid == b || !std::isfinite(mid)) {
                        mid = a;
                    }
                    best.threshold = mid;
                }
            }
        }
        return best;
    }

    int build(std::size_t lo, std::size_t hi, int depth)
    {
        const std::size_t m = hi - lo;
        const double imp = impurity(lo, hi);
        const bool stop = m < static_cast<std::size_t>(std::max(cfg_.min_samples_split, 2)) ||
                          m < 2 * static_cast<std::size_t>(std::max(cfg_.min_samples_leaf, 1)) ||
                          (cfg_.max_depth > 0 && depth >= cfg_.max_depth) ||
                          imp <= std::numeric_limits<double>::epsilon();
        if (stop) {
            return make_leaf(lo, hi);
        }
        const Split split = find_split(lo, hi);
        if (split.feature < 0) {
            return make_leaf(lo, hi);
        }
        const auto mid_it = std::stable_partition(
            rows_.begin() + static_cast<std::ptrdiff_t>(lo), rows_.begin() + static_cast<std::ptrdiff_t>(hi),
            [&](int r) { return X_(r, split.feature) <= split.threshold; });
        const auto mid = static_cast<std::size_t>(mid_it - rows_.begin());
        const double ml = static_cast<double>(mid - lo);
        const double mr = static_cast<double>(hi - mid);
        const double md = static_cast<double>(m);
        const double decrease =
            md / n_root_ * (imp - ml / md * impurity(lo, mid) - mr / md * impurity(mid, hi));
        if (decrease + std::numeric_limits<double>::epsilon() < cfg_.min_impurity_decrease) {
            return make_leaf(lo, hi);
        }
        tree_.importance[split.feature] += std::max(decrease, 0.0);

        const int self = static_cast<int>(tree_.nodes.size());
        TreeNode node;
        node.feature = split.feature;
        node.threshold = split.threshold;
        tree_.nodes.push_back(node);
        const int left = build(lo, mid, depth + 1);
        const int right = build(mid, hi, depth + 1);
        tree_.nodes[static_cast<std::size_t>(self)].left = left;
        tree_.nodes[static_cast<std::size_t>(self)].right = right;
        return self;
    }

    const Matrix& X_;
    const RowMatrix& Y_;
    const ForestConfig& cfg_;
    Rng rng_;
    Tree& tree_;
    int mtry_;
    std::vector<int> pool_;
    std::vector<int> rows_;
    std::vector<std::pair<double, int>> buf_;
    std::vector<double> total_;
    std::vector<double> left_;
    std::vector<Eigen::RowVectorXd> leaves_;
    double n_root_ = 1.0;
};

}  // namespace

ForestModel train_forest(const Matrix& X, const Matrix& Y, const ForestConfig& cfg,
                         std::vector<std::string> feature_names, std::vector<std::string> target_names)
{
    if (X.cols() == 0) {
        throw UsageError("cannot train a forest on zero features");
    }
    if (X.rows() < 2) {
        throw UsageError("forest training needs at least 2 rows");
    }
    if (Y.rows() != X.rows() || Y.cols() == 0) {
        throw InvariantError("feature and target rows differ");
    }
    if (cfg.n_trees < 1) {
        throw UsageError("n_trees must be positive");
    }
    ForestModel model;
    model.features = std::move(feature_names);
    model.targets = std::move(target_names);
    if (model.features.empty()) {
        for (Index c = 0; c < X.cols(); ++c) {
            model.features.push_back("x" + std::to_string(c));
        }
    }
    model.trees.resize(static_cast<std::size_t>(cfg.n_trees));
    const RowMatrix Yr = Y;
    const int n = static_cast<int>(X.rows());
    parallel_for(model.trees.size(), cfg.workers, [&](std::size_t t) {
        const std::uint64_t seed = derive_seed(cfg.seed, "tree", static_cast<std::uint64_t>(t));
        TreeBuilder builder(X, Yr, cfg, derive_seed(seed, "split"), model.trees[t]);
        std::vector<int> rows(static_cast<std::size_t>(n));
        if (cfg.bootstrap) {
            Rng boot(derive_seed(seed, "bootstrap"));
            for (auto& r : rows) {
                r = static_cast<int>(boot.below(static_cast<std::uint64_t>(n)));
            }
            std::sort(rows.begin(), rows.end());
        } else {
            std::iota(rows.begin(), rows.end(), 0);
        }
        builder.grow(std::move(rows));
    });
    return model;
}

ForestModel train_forest(const FeatureMatrix& X, const PerformanceMatrix& Y, std::vector<std::string> train_ids,
                         const ForestConfig& cfg)
{
    std::sort(train_ids.begin(), train_ids.end());
    const Matrix features = X.rows_for(train_ids);
    Matrix targets(static_cast<Index>(train_ids.size()), static_cast<Index>(Y.algorithms.size()));
    for (std::size_t k = 0; k < train_ids.size(); ++k) {
        targets.row(static_cast<Index>(k)) = Y.S.row(static_cast<Index>(Y.row_of(train_ids[k])));
    }
    return train_forest(features, targets, cfg, X.names, Y.algorithms);
}

std::vector<int> select(const Matrix& predictions)
{
    std::vector<int> out(static_cast<std::size_t>(predictions.rows()));
    for (Index r = 0; r < predictions.rows(); ++r) {
        out[static_cast<std::size_t>(r)] = static_cast<int>(argmin_lowest(predictions.row(r)));
    }
    return out;
}

std::vector<int> select(const Vector& dummy, std::size_t problems)
{
    return std::vector<int>(problems, static_cast<int>(argmin_lowest(dummy)));
}

double as_performance(const std::vector<int>& choices, const Matrix& truth)
{
    if (choices.size() != static_cast<std::size_t>(truth.rows()) || choices.empty()) {
        throw InvariantError("choices must cover every test problem");
    }
    double sum = 0.0;
    for (Index r = 0; r < truth.rows(); ++r) {
        const int c = choices[static_cast<std::size_t>(r)];
        sum += 1.0 - (truth(r, c) - truth.row(r).minCoeff());
    }
    return sum / static_cast<double>(truth.rows());
}

namespace {

double median_of(const std::vector<FoldResult>& folds, double (*get)(const FoldResult&))
{
    std::vector<double> v;
    for (const auto& f : folds) {
        v.push_back(get(f));
    }
    return v.empty() ? std::numeric_limits<double>::quiet_NaN() : median(v);
}

}  // namespace

double PlanEvaluation::median_model() const
{
    return median_of(folds, [](const FoldResult& f) { return f.model_as; });
}

double PlanEvaluation::median_dummy() const
{
    return median_of(folds, [](const FoldResult& f) { return f.dummy_as; });
}

double PlanEvaluation::median_delta() const
{
    return median_of(folds, [](const FoldResult& f) { return f.model_as - f.dummy_as; });
}

PlanEvaluation evaluate_plan(const FeatureMatrix& features, const SplitPlan& plan, const PerformanceMatrix& perf,
                             const ForestConfig& cfg, const std::string& portfolio)
{
    PlanEvaluation eval;
    for (const auto& fold : plan.folds) {
        if (fold.train.size() < 2 || fold.test.empty()) {
            eval.warnings.push_back("fold " + fold.label + " skipped: too few training or test problems");
            continue;
        }
        const ForestModel model = train_forest(features, perf, fold.train, cfg);

        std::vector<std::size_t> train_rows;
        for (const auto& id : fold.train) {
            train_rows.push_back(perf.row_of(id));
        }
        std::vector<std::size_t> test_rows;
        for (const auto& id : fold.test) {
            test_rows.push_back(perf.row_of(id));
        }
        const Matrix truth = perf.rows(test_rows).S;
        const Matrix predicted = model.predict(features.rows_for(fold.test));

        FoldResult r;
        r.portfolio = portfolio;
        r.feature_group = features.group;
        r.protocol = plan.protocol;
        r.fold = fold.label;
        r.model_as = as_performance(select(predicted), truth);
        r.dummy_as = as_performance(select(dummy_target(perf.rows(train_rows)), test_rows.size()), truth);
        r.features = features.names;
        r.importance = model.importance();
        eval.folds.push_back(std::move(r));
    }
    return eval;
}

std::string results_to_csv(const std::vector<FoldResult>& results)
{
    csv::Writer w({"portfolio", "feature_group", "protocol", "fold", "model_as", "dummy_as"});
    for (const auto& r : results) {
        w.row({r.portfolio, r.feature_group, protocol_name(r.protocol), r.fold, format_double(r.model_as),
               format_double(r.dummy_as)});
    }
    return w.str();
}

std::vector<FoldResult> results_from_csv(const std::string& text, const std::string& origin)
{
    const auto t = csv::parse(text, origin);
    const std::size_t cp = t.column("portfolio"), cg = t.column("feature_group"), cr = t.column("protocol"),
                      cf = t.column("fold"), cm = t.column("model_as"), cd = t.column("dummy_as");
    std::vector<FoldResult> out;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const auto& row = t.rows[i];
        FoldResult r;
        r.portfolio = row[cp];
        r.feature_group = row[cg];
        try {
            r.protocol = protocol_from_name(row[cr]);
        } catch (const UsageError& e) {
            throw DataError(origin + ": " + e.what());
        }
        r.fold = row[cf];
        r.model_as = csv::to_double(row[cm], i, cm, origin);
        r.dummy_as = csv::to_double(row[cd], i, cd, origin);
        out.push_back(std::move(r));
    }
    return out;
}

std::string importance_to_csv(const std::vector<FoldResult>& results)
{
    csv::Writer w({"portfolio", "feature_group", "protocol", "fold", "feature", "importance"});
    for (const auto& r : results) {
        for (std::size_t k = 0; k < r.features.size(); ++k) {
            w.row({r.portfolio, r.feature_group, protocol_name(r.protocol), r.fold, r.features[k],
                   format_double(r.importance[static_cast<Index>(k)])});
        }
    }
    return w.str();
}

nlohmann::json to_json(const Tree& tree, const std::vector<std::string>& features)
{
    nlohmann::json nodes = nlohmann::json::array();
    for (const auto& n : tree.nodes) {
        if (n.feature < 0) {
            const auto row = tree.leaf_values.row(n.leaf);
            nodes.push_back({{"leaf", std::vector<double>(row.data(), row.data() + row.size())}});
        } else {
            nodes.push_back({{"feature", features.at(static_cast<std::size_t>(n.feature))},
                             {"threshold", n.threshold},
                             {"left", n.left},
                             {"right", n.right}});
        }
    }
    return nodes;
}

}  // namespace asbench
