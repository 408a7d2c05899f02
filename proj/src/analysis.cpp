#include "asbench/analysis.hpp"
#include "asbench/csv.hpp"
#include "asbench/parallel.hpp"
#include "asbench/random.hpp"
#include "asbench/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

namespace asbench {

CorrelationMatrix spearman_matrix(const FeatureMatrix& m, std::size_t workers)
{
    const Index p = m.width();
    CorrelationMatrix c;
    c.names = m.names;
    c.rho = Matrix::Identity(p, p);
    std::vector<Vector> ranks(static_cast<std::size_t>(p));
    std::vector<bool> constant(static_cast<std::size_t>(p));
    for (Index k = 0; k < p; ++k) {
        ranks[static_cast<std::size_t>(k)] = average_ranks(m.values.col(k));
        constant[static_cast<std::size_t>(k)] = !(m.values.col(k).maxCoeff() > m.values.col(k).minCoeff());
    }
    parallel_for(static_cast<std::size_t>(p), workers, [&](std::size_t a) {
        for (std::size_t b = a + 1; b < static_cast<std::size_t>(p); ++b) {
            const double r = constant[a] || constant[b] ? 0.0 : pearson(ranks[a], ranks[b]);
            c.rho(static_cast<Index>(a), static_cast<Index>(b)) = r;
            c.rho(static_cast<Index>(b), static_cast<Index>(a)) = r;
        }
    });
    const Matrix dist = (1.0 - c.rho.array().abs()).matrix();
    c.order = average_linkage_order(dist);
    return c;
}

std::vector<int> average_linkage_order(const Matrix& dist)
{
    const Index n = dist.rows();
    std::vector<std::vector<int>> members;
    for (Index i = 0; i < n; ++i) {
        members.push_back({static_cast<int>(i)});
    }
    if (n == 0) {
        return {};
    }
    // cluster distances, updated with the average-linkage (UPGMA) rule
    Matrix d = dist;
    std::vector<bool> alive(static_cast<std::size_t>(n), true);
    for (Index step = 0; step + 1 < n; ++step) {
        Index bi = -1, bj = -1;
        double best = kInf;
        for (Index i = 0; i < n; ++i) {
            if (!alive[static_cast<std::size_t>(i)]) {
                continue;
            }
            for (Index j = i + 1; j < n; ++j) {
                if (alive[static_cast<std::size_t>(j)] && d(i, j) < best) {
                    best = d(i, j);
                    bi = i;
                    bj = j;
                }
            }
        }
        const double ni = static_cast<double>(members[static_cast<std::size_t>(bi)].size());
        const double nj = static_cast<double>(members[static_cast<std::size_t>(bj)].size());
        for (Index k = 0; k < n; ++k) {
            if (alive[static_cast<std::size_t>(k)] && k != bi && k != bj) {
                const double v = (ni * d(bi, k) + nj * d(bj, k)) / (ni + nj);
                d(bi, k) = v;
                d(k, bi) = v;
            }
        }
        auto& into = members[static_cast<std::size_t>(bi)];
        const auto& from = members[static_cast<std::size_t>(bj)];
        into.insert(into.end(), from.begin(), from.end());
        alive[static_cast<std::size_t>(bj)] = false;
    }
    for (Index i = 0; i < n; ++i) {
        if (alive[static_cast<std::size_t>(i)]) {
            return members[static_cast<std::size_t>(i)];
        }
    }
    throw InvariantError("clustering lost every cluster");
}

std::vector<std::pair<std::size_t, std::size_t>> sample_pairs(std::size_t n, std::size_t count, std::uint64_t seed)
{
    std::vector<std::pair<std::size_t, std::size_t>> out;
    const std::size_t total = n < 2 ? 0 : n * (n - 1) / 2;
    if (count >= total) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                out.push_back({i, j});
            }
        }
        return out;
    }
    Rng rng(derive_seed(seed, "pairs", static_cast<std::uint64_t>(n)));
    std::set<std::pair<std::size_t, std::size_t>> chosen;
    if (count * 2 > total) {
        // dense request: shuffle the full list
        std::vector<std::pair<std::size_t, std::size_t>> all;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                all.push_back({i, j});
            }
        }
        rng.shuffle(all);
        chosen.insert(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(count));
    } else {
        while (chosen.size() < count) {
            std::size_t a = rng.below(n);
            std::size_t b = rng.below(n);
            if (a == b) {
                continue;
            }
            chosen.insert({std::min(a, b), std::max(a, b)});
        }
    }
    out.assign(chosen.begin(), chosen.end());
    return out;
}

FeatureMatrix preprocess_for_similarity(const FeatureMatrix& m)
{
    return minmax_columns(drop_constant(m));
}

std::vector<PairSimilarity> cosine_consistency(const std::vector<FeatureMatrix>& groups, std::size_t n_pairs,
                                               std::uint64_t seed)
{
    if (groups.empty()) {
        throw UsageError("cosine consistency needs at least one group");
    }
    const auto& problems = groups.front().problems;
    if (problems.size() < 2) {
        throw UsageError("cosine consistency needs at least 2 problems");
    }
    std::vector<FeatureMatrix> pre;
    for (const auto& g : groups) {
        if (g.problems != problems) {
            throw DataError("group '" + g.group + "' covers different problems");
        }
        pre.push_back(preprocess_for_similarity(g));
    }
    std::vector<PairSimilarity> out;
    for (auto [i, j] : sample_pairs(problems.size(), n_pairs, seed)) {
        PairSimilarity s{problems[i], problems[j], {}};
        for (const auto& g : pre) {
            s.cosine.push_back(g.width() == 0 ? std::numeric_limits<double>::quiet_NaN()
                                              : cosine_similarity(g.values.row(static_cast<Index>(i)).transpose(),
                                                                  g.values.row(static_cast<Index>(j)).transpose()));
        }
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<CurvePoint> binned_curve(const std::vector<AlignmentRecord>& records)
{
    std::map<long, std::vector<double>> bins;
    for (const auto& r : records) {
        bins[std::lround(r.feature_sim * 100.0)].push_back(r.perf_sim);
    }
    std::vector<CurvePoint> out;
    for (auto& [key, vals] : bins) {
        CurvePoint p;
        p.feature_sim = static_cast<double>(key) / 100.0;
        double s = 0.0;
        for (double v : vals) {
            s += v;
        }
        p.mean = s / static_cast<double>(vals.size());
        p.median = median(vals);
        p.count = vals.size();
        out.push_back(p);
    }
    return out;
}

Alignment alignment(const FeatureMatrix& group, const PerformanceMatrix& perf, std::size_t n_problems,
                    std::uint64_t seed)
{
    if (perf.algorithms.size() < 2) {
        throw UsageError("alignment needs a portfolio of at least 2 algorithms");
    }
    const FeatureMatrix pre = preprocess_for_similarity(group);
    std::vector<std::size_t> pick(pre.problems.size());
    std::iota(pick.begin(), pick.end(), std::size_t{0});
    if (n_problems < pick.size()) {
        Rng rng(derive_seed(seed, "alignment"));
        rng.shuffle(pick);
        pick.resize(n_problems);
        std::sort(pick.begin(), pick.end());
    }
    Alignment a;
    a.records.reserve(pick.size() * (pick.size() - 1) / 2);
    std::vector<Vector> frow, prow;
    for (std::size_t k : pick) {
        frow.push_back(pre.values.row(static_cast<Index>(k)).transpose());
        prow.push_back(perf.S.row(static_cast<Index>(perf.row_of(pre.problems[k]))).transpose());
    }
    for (std::size_t x = 0; x < pick.size(); ++x) {
        for (std::size_t y = x + 1; y < pick.size(); ++y) {
            a.records.push_back({pre.problems[pick[x]], pre.problems[pick[y]],
                                 pre.width() == 0 ? 0.0 : cosine_similarity(frow[x], frow[y]),
                                 cosine_similarity(prow[x], prow[y])});
        }
    }
    a.curve = binned_curve(a.records);
    return a;
}

Vector per_feature_perf_corr(const FeatureMatrix& group, const PerformanceMatrix& perf,
                             const std::string& algorithm)
{
    const auto it = std::find(perf.algorithms.begin(), perf.algorithms.end(), algorithm);
    if (it == perf.algorithms.end()) {
        throw UsageError("unknown algorithm '" + algorithm + "'");
    }
    const Index col = it - perf.algorithms.begin();
    Vector target(group.height());
    for (Index r = 0; r < group.height(); ++r) {
        target[r] = perf.S(static_cast<Index>(perf.row_of(group.problems[static_cast<std::size_t>(r)])), col);
    }
    Vector rho(group.width());
    for (Index c = 0; c < group.width(); ++c) {
        rho[c] = spearman(group.values.col(c), target);
    }
    return rho;
}

PcaReduction pca_reduce(const Matrix& data, int dims)
{
    if (dims < 1) {
        throw UsageError("pca_reduce needs dims >= 1");
    }
    if (data.rows() < dims) {
        throw UsageError("pca_reduce needs at least as many rows as dims");
    }
    const Matrix centered = data.rowwise() - data.colwise().mean();
    const Matrix cov = centered.transpose() * centered;
    Eigen::SelfAdjointEigenSolver<Matrix> es(cov);
    const Index p = cov.rows();
    std::vector<double> ev;
    for (Index k = p - 1; k >= 0; --k) {
        ev.push_back(std::max(es.eigenvalues()[k], 0.0));
    }
    double total = 0.0;
    for (double v : ev) {
        total += v;
    }
    PcaReduction out;
    const double tol = ev.empty() ? 0.0 : 1e-12 * ev.front() * static_cast<double>(std::max<Index>(p, 1));
    for (double v : ev) {
        out.rank += v > tol ? 1 : 0;
    }
    int keep = dims;
    if (dims > out.rank) {
        keep = std::max(out.rank, 1);
        out.note = "requested " + std::to_string(dims) + " dims, data rank is " + std::to_string(out.rank);
    }
    keep = std::min<int>(keep, static_cast<int>(p));
    out.shares.resize(keep);
    Matrix basis(p, keep);
    for (int k = 0; k < keep; ++k) {
        out.shares[k] = total > 0.0 ? ev[static_cast<std::size_t>(k)] / total : 0.0;
        basis.col(k) = es.eigenvectors().col(p - 1 - k);
    }
    out.explained = total > 0.0 ? out.shares.sum() : 1.0;
    out.projection = centered * basis;
    return out;
}

std::string correlation_to_csv(const CorrelationMatrix& c)
{
    std::vector<std::string> header{"feature"};
    for (int k : c.order) {
        header.push_back(c.names[static_cast<std::size_t>(k)]);
    }
    csv::Writer w(header);
    for (int a : c.order) {
        std::vector<std::string> row{c.names[static_cast<std::size_t>(a)]};
        for (int b : c.order) {
            row.push_back(format_double(c.rho(a, b)));
        }
        w.row(row);
    }
    return w.str();
}

std::string pairs_to_csv(const std::vector<PairSimilarity>& pairs, const std::vector<std::string>& groups)
{
    std::vector<std::string> header{"problem_a", "problem_b"};
    header.insert(header.end(), groups.begin(), groups.end());
    csv::Writer w(header);
    for (const auto& p : pairs) {
        std::vector<std::string> row{p.a, p.b};
        for (double v : p.cosine) {
            row.push_back(std::isnan(v) ? "NA" : format_double(v));
        }
        w.row(row);
    }
    return w.str();
}

std::string alignment_to_csv(const Alignment& a)
{
    csv::Writer w({"problem_a", "problem_b", "feature_sim", "perf_sim"});
    for (const auto& r : a.records) {
        w.row({r.a, r.b, format_double(r.feature_sim), format_double(r.perf_sim)});
    }
    return w.str();
}

std::string curve_to_csv(const std::vector<CurvePoint>& curve)
{
    csv::Writer w({"feature_sim", "mean_perf_sim", "median_perf_sim", "count"});
    for (const auto& p : curve) {
        w.row({format_alpha(p.feature_sim), format_double(p.mean), format_double(p.median), std::to_string(p.count)});
    }
    return w.str();
}

}  // namespace asbench
