#include "asbench/ela.hpp"
#include "asbench/random.hpp"
#include "asbench/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

namespace asbench {

namespace {

std::string pct(double q)
{
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%02d", static_cast<int>(std::lround(q * 100.0)));
    return buf;
}

// Ratio with a 0/0 -> 1 rule.
double safe_ratio(double num, double den)
{
    if (den == 0.0) {
        return num == 0.0 ? 1.0 : num / std::numeric_limits<double>::min();
    }
    return num / den;
}

// max/min of absolute values; both zero -> 1, min below 1e-12 * max is floored there.
double abs_spread_ratio(const Vector& v)
{
    if (v.size() == 0) {
        return 1.0;
    }
    const double hi = v.cwiseAbs().maxCoeff();
    const double lo = v.cwiseAbs().minCoeff();
    if (hi == 0.0) {
        return 1.0;
    }
    return hi / std::max(lo, 1e-12 * hi);
}

std::vector<double> upper_triangle(const Matrix& D, const std::vector<Index>& idx)
{
    std::vector<double> out;
    for (std::size_t a = 0; a < idx.size(); ++a) {
        for (std::size_t b = a + 1; b < idx.size(); ++b) {
            out.push_back(D(idx[a], idx[b]));
        }
    }
    return out;
}

double mean_of(const std::vector<double>& v)
{
    if (v.empty()) {
        return 0.0;
    }
    double s = 0.0;
    for (double x : v) {
        s += x;
    }
    return s / static_cast<double>(v.size());
}

std::vector<Index> order_by_y(const Vector& y)
{
    std::vector<Index> order(static_cast<std::size_t>(y.size()));
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return y[a] < y[b]; });
    return order;
}

Matrix covariance(const Matrix& data)
{
    const Matrix centered = data.rowwise() - data.colwise().mean();
    const double denom = data.rows() > 1 ? static_cast<double>(data.rows() - 1) : 1.0;
    return (centered.transpose() * centered) / denom;
}

Sample with_y(const Sample& s, Vector y)
{
    Sample out = s;
    out.y = std::move(y);
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// y-distribution

int kde_peak_count(const Eigen::Ref<const Vector>& y)
{
    const Index n = y.size();
    const double sd = sample_sd(Vector(y));
    if (n < 2 || sd <= 0.0) {
        return 1;
    }
    std::vector<double> vals(y.data(), y.data() + n);
    const double iqr = quantile(vals, 0.75) - quantile(vals, 0.25);
    double spread = std::min(sd, iqr / 1.34);
    if (spread <= 0.0) {
        spread = sd;
    }
    const double h = 0.9 * spread * std::pow(static_cast<double>(n), -0.2);

    constexpr int kGrid = 512;
    const double lo = y.minCoeff() - 3.0 * h;
    const double hi = y.maxCoeff() + 3.0 * h;
    std::vector<double> dens(kGrid, 0.0);
    for (int g = 0; g < kGrid; ++g) {
        const double t = lo + (hi - lo) * g / (kGrid - 1);
        double s = 0.0;
        for (Index i = 0; i < n; ++i) {
            const double u = (t - y[i]) / h;
            s += std::exp(-0.5 * u * u);
        }
        dens[static_cast<std::size_t>(g)] = s;
    }
    const double peak = *std::max_element(dens.begin(), dens.end());
    int count = 0;
    for (int g = 1; g + 1 < kGrid; ++g) {
        const double d = dens[static_cast<std::size_t>(g)];
        if (d > dens[static_cast<std::size_t>(g - 1)] && d > dens[static_cast<std::size_t>(g + 1)] &&
            d > 1e-3 * peak) {
            ++count;
        }
    }
    return std::max(count, 1);
}

FeatureVector ela_distr(const Sample& sample)
{
    if (sample.size() < 4) {
        throw UsageError("ela_distr needs at least 4 points");
    }
    FeatureVector f;
    const bool flat = !(sample.y.maxCoeff() > sample.y.minCoeff());
    f.add("ela_distr.skewness", flat ? 0.0 : skewness(sample.y));
    f.add("ela_distr.kurtosis", flat ? 0.0 : excess_kurtosis(sample.y));
    f.add("ela_distr.number_of_peaks", flat ? 1.0 : kde_peak_count(sample.y));
    f.add("ela_distr.degenerate_flag", flat ? 1.0 : 0.0);
    return f;
}

// ---------------------------------------------------------------------------
// meta models

LinearFit least_squares(const Matrix& design, const Vector& y, double ridge)
{
    LinearFit fit;
    const Index n = design.rows();
    const Index p = design.cols();
    Eigen::ColPivHouseholderQR<Matrix> qr(design);
    if (qr.rank() == p) {
        fit.coef = qr.solve(y);
    } else {
        fit.ridge = true;
        const Matrix gram = design.transpose() * design + ridge * Matrix::Identity(p, p);
        fit.coef = gram.ldlt().solve(design.transpose() * y);
    }
    const double sst = (y.array() - y.mean()).square().sum();
    if (sst <= 0.0) {
        return fit;  // R^2 defined as 0 for constant y
    }
    const double sse = (y - design * fit.coef).squaredNorm();
    fit.r2 = 1.0 - sse / sst;
    const double dof = static_cast<double>(n - p);
    fit.adj_r2 = dof > 0 ? 1.0 - (1.0 - fit.r2) * static_cast<double>(n - 1) / dof : fit.r2;
    return fit;
}

FeatureVector ela_meta(const Sample& sample, const ElaConfig& cfg)
{
    const Index n = sample.size();
    const Index d = sample.dim();
    if (n <= d * (d + 3) / 2 + 1) {
        throw UsageError("ela_meta needs n > d(d+3)/2 + 1");
    }
    const Matrix& X = sample.X;
    const Index n_inter = d * (d - 1) / 2;
    Matrix inter(n, n_inter);
    for (Index a = 0, c = 0; a < d; ++a) {
        for (Index b = a + 1; b < d; ++b, ++c) {
            inter.col(c) = X.col(a).cwiseProduct(X.col(b));
        }
    }
    const Matrix squares = X.array().square().matrix();
    const Vector ones = Vector::Ones(n);

    Matrix lin(n, 1 + d);
    lin << ones, X;
    Matrix lin_inter(n, 1 + d + n_inter);
    lin_inter << ones, X, inter;
    Matrix quad(n, 1 + 2 * d);
    quad << ones, X, squares;
    Matrix full(n, 1 + 2 * d + n_inter);
    full << ones, X, squares, inter;

    const auto f_lin = least_squares(lin, sample.y, cfg.meta_ridge);
    const auto f_lin_inter = least_squares(lin_inter, sample.y, cfg.meta_ridge);
    const auto f_quad = least_squares(quad, sample.y, cfg.meta_ridge);
    const auto f_full = least_squares(full, sample.y, cfg.meta_ridge);

    Vector lin_coef = f_lin.coef.tail(d);
    Vector quad_coef = f_quad.coef.tail(d);
    if (!(sample.y.maxCoeff() > sample.y.minCoeff())) {
        lin_coef.setZero();  // round-off only; ratios fall back to 1
        quad_coef.setZero();
    }
    FeatureVector f;
    f.add("ela_meta.lin_simple.adj_r2", f_lin.adj_r2);
    f.add("ela_meta.lin_simple.intercept", f_lin.coef[0]);
    f.add("ela_meta.lin_simple.coef.min", lin_coef.cwiseAbs().minCoeff());
    f.add("ela_meta.lin_simple.coef.max", lin_coef.cwiseAbs().maxCoeff());
    f.add("ela_meta.lin_simple.coef.max_by_min", abs_spread_ratio(lin_coef));
    f.add("ela_meta.lin_w_interact.adj_r2", f_lin_inter.adj_r2);
    f.add("ela_meta.quad_simple.adj_r2", f_quad.adj_r2);
    f.add("ela_meta.quad_simple.cond", abs_spread_ratio(quad_coef));
    f.add("ela_meta.quad_w_interact.adj_r2", f_full.adj_r2);
    const bool ridge = f_lin.ridge || f_lin_inter.ridge || f_quad.ridge || f_full.ridge;
    f.add("ela_meta.ridge_flag", ridge ? 1.0 : 0.0);
    return f;
}

// ---------------------------------------------------------------------------
// level sets

namespace {

struct GaussianClass {
    Vector mean;
    Matrix cov;
    double log_prior = 0.0;
    int count = 0;
};

// Per-class moments over the rows in `rows`.
std::vector<GaussianClass> class_moments(const Matrix& X, const std::vector<int>& labels,
                                         const std::vector<Index>& rows)
{
    const Index d = X.cols();
    std::vector<GaussianClass> cls(2);
    for (auto& c : cls) {
        c.mean = Vector::Zero(d);
        c.cov = Matrix::Zero(d, d);
    }
    for (Index r : rows) {
        auto& c = cls[static_cast<std::size_t>(labels[static_cast<std::size_t>(r)])];
        c.mean += X.row(r).transpose();
        ++c.count;
    }
    for (auto& c : cls) {
        if (c.count > 0) {
            c.mean /= c.count;
        }
        c.log_prior = std::log(static_cast<double>(std::max(c.count, 1)) / static_cast<double>(rows.size()));
    }
    for (Index r : rows) {
        auto& c = cls[static_cast<std::size_t>(labels[static_cast<std::size_t>(r)])];
        const Vector dx = X.row(r).transpose() - c.mean;
        c.cov += dx * dx.transpose();
    }
    return cls;
}

Matrix regularized(const Matrix& cov, double scale)
{
    const Index d = cov.rows();
    const double jitter = 1e-8 * std::max(scale, 1e-300);
    return cov + jitter * Matrix::Identity(d, d);
}

}  // namespace

double level_set_mmce(const Matrix& X, const std::vector<int>& labels, bool quadratic, int folds,
                      std::uint64_t seed)
{
    const Index n = X.rows();
    std::vector<Index> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), Index{0});
    Rng rng(derive_seed(seed, "level-folds", static_cast<std::uint64_t>(n)));
    rng.shuffle(perm);
    std::vector<int> fold_of(static_cast<std::size_t>(n));
    for (std::size_t k = 0; k < perm.size(); ++k) {
        fold_of[static_cast<std::size_t>(perm[k])] = static_cast<int>(k % static_cast<std::size_t>(folds));
    }
    // Overall data scale for the covariance jitter.
    const double scale = covariance(X).diagonal().mean();

    double rate_sum = 0.0;
    int used = 0;
    for (int f = 0; f < folds; ++f) {
        std::vector<Index> train;
        std::vector<Index> test;
        for (Index r = 0; r < n; ++r) {
            (fold_of[static_cast<std::size_t>(r)] == f ? test : train).push_back(r);
        }
        if (test.empty()) {
            continue;
        }
        auto cls = class_moments(X, labels, train);
        if (cls[0].count == 0 || cls[1].count == 0) {
            continue;  // single-class training fold
        }

        std::vector<Eigen::LDLT<Matrix>> solvers;
        std::vector<double> logdets;
        if (quadratic) {
            for (auto& c : cls) {
                const Matrix cov = regularized(c.cov / std::max(c.count - 1, 1), scale);
                solvers.emplace_back(cov);
                logdets.push_back(solvers.back().vectorD().array().abs().log().sum());
            }
        } else {
            const double denom = std::max<double>(static_cast<double>(train.size()) - 2.0, 1.0);
            const Matrix pooled = regularized((cls[0].cov + cls[1].cov) / denom, scale);
            solvers.emplace_back(pooled);
        }

        int wrong = 0;
        for (Index r : test) {
            const Vector x = X.row(r).transpose();
            double score[2];
            for (int k = 0; k < 2; ++k) {
                const auto& c = cls[static_cast<std::size_t>(k)];
                const Vector dx = x - c.mean;
                if (quadratic) {
                    const auto& solver = solvers[static_cast<std::size_t>(k)];
                    score[k] = -0.5 * logdets[static_cast<std::size_t>(k)] - 0.5 * dx.dot(solver.solve(dx)) +
                               c.log_prior;
                } else {
                    score[k] = -0.5 * dx.dot(solvers[0].solve(dx)) + c.log_prior;
                }
            }
            const int predicted = score[1] > score[0] ? 1 : 0;
            if (predicted != labels[static_cast<std::size_t>(r)]) {
                ++wrong;
            }
        }
        rate_sum += static_cast<double>(wrong) / static_cast<double>(test.size());
        ++used;
    }
    if (used == 0) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    return rate_sum / used;
}

FeatureVector ela_level(const Sample& sample, const ElaConfig& cfg)
{
    const Index n = sample.size();
    if (n < 20) {
        throw UsageError("ela_level needs at least 20 points");
    }
    std::vector<double> yv(sample.y.data(), sample.y.data() + n);
    FeatureVector f;
    bool degenerate = false;
    for (double q : cfg.level_quantiles) {
        const double threshold = quantile(yv, q);
        std::vector<int> labels(static_cast<std::size_t>(n));
        int below = 0;
        for (Index i = 0; i < n; ++i) {
            labels[static_cast<std::size_t>(i)] = sample.y[i] <= threshold ? 1 : 0;
            below += labels[static_cast<std::size_t>(i)];
        }
        double lda = 0.5;
        double qda = 0.5;
        if (below > 0 && below < n) {
            lda = level_set_mmce(sample.X, labels, false, cfg.level_folds, cfg.level_seed);
            qda = level_set_mmce(sample.X, labels, true, cfg.level_folds, cfg.level_seed);
        }
        if (std::isnan(lda) || std::isnan(qda) || below == 0 || below == n) {
            degenerate = true;
            lda = std::isnan(lda) || below == 0 || below == n ? 0.5 : lda;
            qda = std::isnan(qda) || below == 0 || below == n ? 0.5 : qda;
        }
        const double floor = 1.0 / static_cast<double>(n);
        f.add("ela_level.mmce_lda_" + pct(q), lda);
        f.add("ela_level.mmce_qda_" + pct(q), qda);
        f.add("ela_level.lda_qda_" + pct(q), lda / std::max(qda, floor));
    }
    f.add("ela_level.degenerate_flag", degenerate ? 1.0 : 0.0);
    return f;
}

// ---------------------------------------------------------------------------
// information content

std::vector<Index> nearest_neighbour_tour(const Matrix& X)
{
    const Index n = X.rows();
    std::vector<Index> tour;
    if (n == 0) {
        return tour;
    }
    std::vector<bool> visited(static_cast<std::size_t>(n), false);
    Index cur = 0;
    visited[0] = true;
    tour.push_back(0);
    for (Index step = 1; step < n; ++step) {
        Index best = -1;
        double best_d = kInf;
        for (Index j = 0; j < n; ++j) {
            if (visited[static_cast<std::size_t>(j)]) {
                continue;
            }
            const double dist = (X.row(cur) - X.row(j)).squaredNorm();
            if (dist < best_d) {
                best_d = dist;
                best = j;
            }
        }
        visited[static_cast<std::size_t>(best)] = true;
        tour.push_back(best);
        cur = best;
    }
    return tour;
}

double information_content(const std::vector<int>& symbols)
{
    if (symbols.size() < 2) {
        return 0.0;
    }
    // counts[a][b] for a != b, symbols in {-1, 0, 1}
    double counts[3][3] = {};
    for (std::size_t k = 0; k + 1 < symbols.size(); ++k) {
        counts[symbols[k] + 1][symbols[k + 1] + 1] += 1.0;
    }
    const double total = static_cast<double>(symbols.size() - 1);
    const double log6 = std::log(6.0);
    double h = 0.0;
    for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
            if (a != b && counts[a][b] > 0) {
                const double p = counts[a][b] / total;
                h -= p * std::log(p) / log6;
            }
        }
    }
    return h;
}

namespace {

double partial_information(const std::vector<int>& symbols)
{
    if (symbols.empty()) {
        return 0.0;
    }
    int last = 0;
    int length = 0;
    for (int s : symbols) {
        if (s != 0 && s != last) {
            ++length;
            last = s;
        }
    }
    return static_cast<double>(length) / static_cast<double>(symbols.size());
}

std::vector<int> symbolize(const std::vector<double>& slopes, double eps)
{
    std::vector<int> out(slopes.size());
    for (std::size_t k = 0; k < slopes.size(); ++k) {
        out[k] = slopes[k] > eps ? 1 : (slopes[k] < -eps ? -1 : 0);
    }
    return out;
}

}  // namespace

FeatureVector ela_ic(const Sample& sample, const ElaConfig& cfg)
{
    if (sample.size() < 3) {
        throw UsageError("ela_ic needs at least 3 points");
    }
    const auto tour = nearest_neighbour_tour(sample.X);
    std::vector<double> slopes;
    for (std::size_t k = 0; k + 1 < tour.size(); ++k) {
        const double dy = sample.y[tour[k + 1]] - sample.y[tour[k]];
        const double dx = (sample.X.row(tour[k + 1]) - sample.X.row(tour[k])).norm();
        slopes.push_back(dx > 0 ? dy / dx : (dy == 0 ? 0.0 : std::copysign(kInf, dy)));
    }

    std::vector<double> grid{0.0};
    const double l0 = std::log10(cfg.ic_eps_low);
    const double l1 = std::log10(cfg.ic_eps_high);
    for (int k = 0; k < cfg.ic_grid_points; ++k) {
        grid.push_back(std::pow(10.0, l0 + (l1 - l0) * k / (cfg.ic_grid_points - 1)));
    }

    double h_max = -1.0;
    double eps_max = 0.0;
    double eps_s = 0.0;
    double eps_ratio = 0.0;
    double m0 = 0.0;
    for (std::size_t g = 0; g < grid.size(); ++g) {
        const auto sym = symbolize(slopes, grid[g]);
        const double h = information_content(sym);
        const double m = partial_information(sym);
        if (g == 0) {
            m0 = m;
        }
        if (h > h_max) {
            h_max = h;
            eps_max = grid[g];
        }
        if (h >= cfg.ic_settling_threshold) {
            eps_s = grid[g];
        }
        if (m > 0.5 * m0) {
            eps_ratio = grid[g];
        }
    }
    FeatureVector f;
    f.add("ic.h_max", h_max);
    f.add("ic.eps_s", eps_s);
    f.add("ic.eps_max", eps_max);
    f.add("ic.eps_ratio", eps_ratio);
    f.add("ic.m0", m0);
    return f;
}

// ---------------------------------------------------------------------------
// dispersion

FeatureVector ela_disp(const Sample& sample, const ElaConfig& cfg)
{
    const Index n = sample.size();
    const double min_fraction = *std::min_element(cfg.disp_fractions.begin(), cfg.disp_fractions.end());
    if (static_cast<double>(n) * min_fraction < 2.0 - 1e-9) {
        throw UsageError("ela_disp needs n * min(fraction) >= 2");
    }
    const Matrix D = pairwise_distances(sample.X);
    const auto order = order_by_y(sample.y);
    std::vector<Index> all(order.begin(), order.end());
    std::sort(all.begin(), all.end());
    const auto d_all = upper_triangle(D, all);
    const double mean_all = mean_of(d_all);
    const double median_all = median(d_all);

    std::vector<double> ratio_mean, ratio_median, diff_mean, diff_median;
    for (double fr : cfg.disp_fractions) {
        const auto k = static_cast<std::size_t>(std::ceil(fr * static_cast<double>(n) - 1e-9));
        std::vector<Index> best(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k));
        const auto d_best = upper_triangle(D, best);
        const double mb = mean_of(d_best);
        const double medb = median(d_best);
        ratio_mean.push_back(safe_ratio(mb, mean_all));
        ratio_median.push_back(safe_ratio(medb, median_all));
        diff_mean.push_back(mb - mean_all);
        diff_median.push_back(medb - median_all);
    }
    FeatureVector f;
    auto emit = [&](const char* stem, const std::vector<double>& vals) {
        for (std::size_t i = 0; i < vals.size(); ++i) {
            f.add(std::string("disp.") + stem + "_" + pct(cfg.disp_fractions[i]), vals[i]);
        }
    };
    emit("ratio_mean", ratio_mean);
    emit("ratio_median", ratio_median);
    emit("diff_mean", diff_mean);
    emit("diff_median", diff_median);
    return f;
}

// ---------------------------------------------------------------------------
// nearest-better clustering

FeatureVector ela_nbc(const Sample& sample)
{
    const Index n = sample.size();
    if (n < 3) {
        throw UsageError("ela_nbc needs at least 3 points");
    }
    const Matrix D = pairwise_distances(sample.X);
    Vector nn(n), nb(n), ratio(n), indegree = Vector::Zero(n);
    for (Index i = 0; i < n; ++i) {
        double dn = kInf;
        double db = kInf;
        Index target = -1;
        for (Index j = 0; j < n; ++j) {
            if (j == i) {
                continue;
            }
            dn = std::min(dn, D(i, j));
            if (sample.y[j] < sample.y[i] && D(i, j) < db) {
                db = D(i, j);
                target = j;
            }
        }
        nn[i] = dn;
        if (target < 0) {
            nb[i] = dn;  // no strictly better point
        } else {
            nb[i] = db;
            indegree[target] += 1.0;
        }
        ratio[i] = nb[i] > 0 ? nn[i] / nb[i] : 1.0;
    }
    FeatureVector f;
    f.add("nbc.nn_nb.mean_ratio", ratio.mean());
    f.add("nbc.nn_nb.sd_ratio", sample_sd(ratio));
    f.add("nbc.nn_nb.cor", pearson(nn, nb));
    f.add("nbc.nb_fitness.cor", spearman(nb, sample.y));
    f.add("nbc.indegree.max_share", indegree.maxCoeff() / static_cast<double>(n));
    f.add("nbc.indegree.sd", sample_sd(indegree));
    f.add("nbc.indegree_fitness.cor", spearman(indegree, sample.y));
    return f;
}

// ---------------------------------------------------------------------------
// principal components

PcaSummary pca_summary(const Matrix& data, bool correlation, double target)
{
    PcaSummary out;
    std::vector<Index> keep;
    const Vector var = covariance(data).diagonal();
    for (Index c = 0; c < data.cols(); ++c) {
        if (!correlation || var[c] > 0.0) {
            keep.push_back(c);
        } else {
            out.dropped_columns = true;
        }
    }
    out.columns = static_cast<int>(keep.size());
    if (keep.empty()) {
        out.components_needed = 0;
        out.first_share = 1.0;
        return out;
    }
    Matrix sub(data.rows(), static_cast<Index>(keep.size()));
    for (std::size_t k = 0; k < keep.size(); ++k) {
        sub.col(static_cast<Index>(k)) = data.col(keep[k]);
    }
    Matrix m = covariance(sub);
    if (correlation) {
        const Vector sd = m.diagonal().cwiseSqrt();
        m = sd.cwiseInverse().asDiagonal() * m * sd.cwiseInverse().asDiagonal();
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
    std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    for (double& v : ev) {
        v = std::max(v, 0.0);
    }
    std::sort(ev.begin(), ev.end(), std::greater<>());
    double total = 0.0;
    for (double v : ev) {
        total += v;
    }
    if (total <= 0.0) {
        out.components_needed = 1;
        out.first_share = 1.0;
        out.shares.assign(ev.size(), 0.0);
        out.shares[0] = 1.0;
        return out;
    }
    double cum = 0.0;
    for (double v : ev) {
        out.shares.push_back(v / total);
    }
    out.first_share = out.shares.front();
    for (std::size_t k = 0; k < out.shares.size(); ++k) {
        cum += out.shares[k];
        if (cum >= target - 1e-12) {
            out.components_needed = static_cast<int>(k + 1);
            break;
        }
    }
    if (out.components_needed == 0) {
        out.components_needed = static_cast<int>(out.shares.size());
    }
    return out;
}

FeatureVector ela_pca(const Sample& sample, const ElaConfig& cfg)
{
    if (sample.size() <= sample.dim()) {
        throw UsageError("ela_pca needs n > dim");
    }
    Matrix init(sample.size(), sample.dim() + 1);
    init << sample.X, sample.y;
    const auto cov_x = pca_summary(sample.X, false, cfg.pca_variance_target);
    const auto cor_x = pca_summary(sample.X, true, cfg.pca_variance_target);
    const auto cov_init = pca_summary(init, false, cfg.pca_variance_target);
    const auto cor_init = pca_summary(init, true, cfg.pca_variance_target);
    auto fraction = [](const PcaSummary& s) {
        return s.columns > 0 ? static_cast<double>(s.components_needed) / s.columns : 1.0;
    };
    FeatureVector f;
    f.add("pca.expl_var.cov_x", fraction(cov_x));
    f.add("pca.expl_var.cor_x", fraction(cor_x));
    f.add("pca.expl_var.cov_init", fraction(cov_init));
    f.add("pca.expl_var.cor_init", fraction(cor_init));
    f.add("pca.expl_var_PC1.cov_x", cov_x.first_share);
    f.add("pca.expl_var_PC1.cor_x", cor_x.first_share);
    f.add("pca.expl_var_PC1.cov_init", cov_init.first_share);
    f.add("pca.expl_var_PC1.cor_init", cor_init.first_share);
    f.add("pca.dropped_flag", cor_x.dropped_columns || cor_init.dropped_columns ? 1.0 : 0.0);
    return f;
}

// ---------------------------------------------------------------------------

FeatureVector ela_all(const Sample& sample, bool scale_y, const ElaConfig& cfg)
{
    const Sample s = scale_y ? with_y(sample, minmax_scale(sample.y, 0.5)) : sample;
    FeatureVector f;
    f.append(ela_disp(s, cfg));
    f.append(ela_distr(s));
    f.append(ela_level(s, cfg));
    f.append(ela_meta(s, cfg));
    f.append(ela_ic(s, cfg));
    f.append(ela_nbc(s));
    f.append(ela_pca(s, cfg));
    for (double& v : f.values) {
        if (!std::isfinite(v)) {
            v = 0.0;  // never reached by construction; keeps matrices dense
        }
    }
    return f;
}

std::vector<std::string> ela_feature_names(const ElaConfig& cfg)
{
    Sample probe;
    probe.X = lhs_sample(2, 100, 1);
    probe.y = probe.X.rowwise().squaredNorm();
    return ela_all(probe, false, cfg).names;
}

}  // namespace asbench
