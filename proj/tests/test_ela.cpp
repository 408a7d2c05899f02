#include <doctest.h>

#include "asbench/ela.hpp"
#include "asbench/random.hpp"
#include "asbench/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

using namespace asbench;

namespace {

Sample make_sample(Matrix X, Vector y)
{
    Sample s;
    s.problem_id = "t";
    s.X = std::move(X);
    s.y = std::move(y);
    return s;
}

Sample sphere_sample(int dim, int n, std::uint64_t seed)
{
    Matrix X = lhs_sample(dim, n, seed);
    Vector y = X.rowwise().squaredNorm();
    return make_sample(X, y);
}

// Plain moment definitions, written independently of the stats module.
double oracle_excess_kurtosis(const std::vector<double>& v)
{
    double mean = 0;
    for (double x : v) {
        mean += x;
    }
    mean /= static_cast<double>(v.size());
    double m2 = 0, m4 = 0;
    for (double x : v) {
        m2 += (x - mean) * (x - mean);
        m4 += std::pow(x - mean, 4);
    }
    m2 /= static_cast<double>(v.size());
    m4 /= static_cast<double>(v.size());
    return m4 / (m2 * m2) - 3.0;
}

double max_abs_diff(const FeatureVector& a, const FeatureVector& b)
{
    REQUIRE(a.names == b.names);
    double d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        d = std::max(d, std::abs(a.values[i] - b.values[i]));
    }
    return d;
}

}  // namespace

TEST_CASE("y distribution")
{
    SUBCASE("symmetric y has zero skewness")
    {
        Matrix X = lhs_sample(2, 40, 3);
        Vector y(40);
        Rng rng(8);
        for (int i = 0; i < 20; ++i) {
            y[i] = rng.uniform(0, 4);
            y[i + 20] = 2 * 7.0 - y[i];
        }
        CHECK(std::abs(ela_distr(make_sample(X, y)).at("ela_distr.skewness")) <= 1e-9);
    }
    SUBCASE("uniform grid kurtosis")
    {
        const int n = 101;
        Vector y(n);
        std::vector<double> raw;
        for (int i = 0; i < n; ++i) {
            y[i] = static_cast<double>(i) / (n - 1);
            raw.push_back(y[i]);
        }
        const auto f = ela_distr(make_sample(Matrix::Zero(n, 2), y));
        const double closed = -6.0 * (n * n + 1.0) / (5.0 * (n * n - 1.0));
        CHECK(std::abs(f.at("ela_distr.kurtosis") - oracle_excess_kurtosis(raw)) <= 1e-12);
        CHECK(std::abs(f.at("ela_distr.kurtosis") - closed) <= 1e-9);
        CHECK(std::abs(f.at("ela_distr.kurtosis") + 1.2) <= 1e-3);
    }
    SUBCASE("peak counts")
    {
        // deterministic Gaussian quantiles via inverse-erf bisection
        const int n = 200;
        Vector bump(n), two(2 * n);
        for (int i = 0; i < n; ++i) {
            const double p = (i + 0.5) / n;
            double lo = -10, hi = 10;
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (lo + hi);
                (0.5 * std::erfc(-mid / std::sqrt(2.0)) < p ? lo : hi) = mid;
            }
            bump[i] = lo;
            two[i] = lo;
            two[i + n] = lo + 20.0;
        }
        CHECK(kde_peak_count(bump) == 1);
        CHECK(kde_peak_count(two) == 2);
        CHECK(ela_distr(make_sample(Matrix::Zero(n, 2), bump)).at("ela_distr.number_of_peaks") == 1.0);
    }
    SUBCASE("constant y")
    {
        const auto f = ela_distr(make_sample(Matrix::Zero(10, 2), Vector::Constant(10, 4.0)));
        CHECK(f.at("ela_distr.skewness") == 0.0);
        CHECK(f.at("ela_distr.kurtosis") == 0.0);
        CHECK(f.at("ela_distr.number_of_peaks") == 1.0);
        CHECK(f.at("ela_distr.degenerate_flag") == 1.0);
    }
    CHECK_THROWS_AS(ela_distr(make_sample(Matrix::Zero(3, 2), Vector::Zero(3))), UsageError);
}

TEST_CASE("meta models")
{
    const Matrix X = lhs_sample(3, 60, 5);
    SUBCASE("linear truth")
    {
        const Vector y = (3.0 + 2.0 * X.col(0).array()).matrix();
        const auto f = ela_meta(make_sample(X, y));
        CHECK(f.at("ela_meta.lin_simple.adj_r2") == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(f.at("ela_meta.quad_w_interact.adj_r2") == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(f.at("ela_meta.lin_simple.intercept") == doctest::Approx(3.0));
        CHECK(f.at("ela_meta.lin_simple.coef.max") == doctest::Approx(2.0));
        CHECK(f.at("ela_meta.ridge_flag") == 0.0);
    }
    SUBCASE("isotropic quadratic")
    {
        const Vector y = X.rowwise().squaredNorm();
        const auto f = ela_meta(make_sample(X, y));
        CHECK(f.at("ela_meta.quad_simple.adj_r2") == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(f.at("ela_meta.quad_simple.cond") == doctest::Approx(1.0).epsilon(1e-9));
    }
    SUBCASE("constant y")
    {
        const auto f = ela_meta(make_sample(X, Vector::Constant(60, 2.0)));
        CHECK(f.at("ela_meta.lin_simple.adj_r2") == 0.0);
        CHECK(f.at("ela_meta.quad_simple.adj_r2") == 0.0);
        CHECK(f.at("ela_meta.lin_simple.coef.max_by_min") == 1.0);
        CHECK(f.at("ela_meta.quad_simple.cond") == 1.0);
    }
    SUBCASE("singular design falls back to ridge")
    {
        Matrix Xd = X;
        Xd.col(1) = Xd.col(0);
        const auto f = ela_meta(make_sample(Xd, Xd.col(0)));
        CHECK(f.at("ela_meta.ridge_flag") == 1.0);
        for (double v : f.values) {
            CHECK(std::isfinite(v));
        }
    }
    CHECK_THROWS_AS(ela_meta(make_sample(Matrix::Zero(6, 2), Vector::Zero(6))), UsageError);
}

TEST_CASE("level sets")
{
    Rng rng(17);
    const int n = 100;
    SUBCASE("separable blobs")
    {
        Matrix X(n, 2);
        Vector y(n);
        for (int i = 0; i < n; ++i) {
            const double centre = i < n / 2 ? -3.0 : 3.0;
            X(i, 0) = centre + 0.5 * rng.normal();
            X(i, 1) = 0.5 * rng.normal();
            y[i] = i < n / 2 ? rng.uniform(0, 1) : rng.uniform(2, 3);
        }
        const auto f = ela_level(make_sample(X, y));
        CHECK(f.at("ela_level.mmce_lda_50") <= 0.05);
        CHECK(f.at("ela_level.mmce_qda_50") <= 0.05);
    }
    SUBCASE("random labels")
    {
        const Matrix X = lhs_sample(2, 400, 9);
        std::vector<int> labels(400);
        for (auto& l : labels) {
            l = rng.below(2) == 0 ? 0 : 1;
        }
        const double lda = level_set_mmce(X, labels, false, 5, 1);
        const double qda = level_set_mmce(X, labels, true, 5, 1);
        CHECK(std::abs(lda - 0.5) <= 0.1);
        CHECK(std::abs(qda - 0.5) <= 0.1);
    }
    SUBCASE("duplicated rows")
    {
        Matrix X(40, 2);
        Vector y(40);
        for (int i = 0; i < 40; ++i) {
            X(i, 0) = i % 4;
            X(i, 1) = (i % 4) * 2;
            y[i] = i % 4;
        }
        const auto f = ela_level(make_sample(X, y));
        for (std::size_t k = 0; k < f.size(); ++k) {
            CHECK(std::isfinite(f.values[k]));
            if (f.names[k].find("mmce") != std::string::npos) {
                CHECK(f.values[k] >= 0.0);
                CHECK(f.values[k] <= 1.0);
            }
        }
    }
    SUBCASE("single class everywhere")
    {
        const Matrix X = lhs_sample(2, 30, 2);
        std::vector<int> ones(30, 1);
        CHECK(std::isnan(level_set_mmce(X, ones, false, 5, 1)));
        const auto f = ela_level(make_sample(X, Vector::Constant(30, 1.0)));
        CHECK(f.at("ela_level.mmce_lda_10") == 0.5);
        CHECK(f.at("ela_level.degenerate_flag") == 1.0);
    }
}

TEST_CASE("information content")
{
    SUBCASE("entropy of symbol pairs")
    {
        CHECK(information_content({1, -1}) == 0.0);
        // two distinct pair types, each with probability 1/2
        CHECK(information_content({1, -1, 1}) == doctest::Approx(std::log(2.0) / std::log(6.0)));
        CHECK(information_content({0, 0, 0}) == 0.0);
    }
    SUBCASE("hand instance")
    {
        Matrix X(3, 1);
        X << 0, 1, 2;
        Vector y(3);
        y << 0, 1, 0;
        CHECK(nearest_neighbour_tour(X) == std::vector<Index>{0, 1, 2});
        const auto f = ela_ic(make_sample(X, y));
        CHECK(f.at("ic.h_max") == 0.0);
        CHECK(f.at("ic.m0") == 1.0);
    }
    SUBCASE("constant y")
    {
        const Matrix X = lhs_sample(2, 50, 4);
        const auto f = ela_ic(make_sample(X, Vector::Constant(50, 3.0)));
        CHECK(f.at("ic.h_max") == 0.0);
        CHECK(f.at("ic.m0") == 0.0);
    }
    SUBCASE("eps_s follows y scale within grid resolution")
    {
        const double step = std::pow(10.0, 7.0 / 29.0);
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            Sample s = sphere_sample(2, 100, seed);
            s.y = (s.y.array() * 0.01 + 0.01 * (s.X.col(0).array() * 7).sin()).matrix();
            const double e1 = ela_ic(s).at("ic.eps_s");
            Sample t = s;
            t.y *= 10.0;
            const double e10 = ela_ic(t).at("ic.eps_s");
            REQUIRE(e1 > 0.0);
            CHECK(e10 / e1 >= 10.0 / step - 1e-9);
            CHECK(e10 / e1 <= 10.0 * step + 1e-9);
        }
    }
}

TEST_CASE("dispersion")
{
    SUBCASE("sphere best points cluster")
    {
        const auto f = ela_disp(sphere_sample(2, 100, 12));
        CHECK(f.at("disp.ratio_mean_02") < 1.0);
        CHECK(f.at("disp.ratio_median_10") < 1.0);
        CHECK(f.at("disp.diff_mean_05") < 0.0);
    }
    SUBCASE("random y")
    {
        Sample s = sphere_sample(2, 400, 13);
        Rng rng(5);
        for (Index i = 0; i < s.y.size(); ++i) {
            s.y[i] = rng.uniform();
        }
        const auto f = ela_disp(s);
        CHECK(std::abs(f.at("disp.ratio_mean_25") - 1.0) <= 0.2);
        CHECK(std::abs(f.at("disp.ratio_mean_10") - 1.0) <= 0.2);
    }
    SUBCASE("identical X")
    {
        Sample s = make_sample(Matrix::Constant(100, 2, 1.5), lhs_sample(1, 100, 3).col(0));
        const auto f = ela_disp(s);
        for (std::size_t k = 0; k < f.size(); ++k) {
            CHECK(f.values[k] == (f.names[k].find("ratio") != std::string::npos ? 1.0 : 0.0));
        }
    }
    SUBCASE("direct computation")
    {
        const Sample s = sphere_sample(2, 100, 7);
        std::vector<Index> idx(100);
        std::iota(idx.begin(), idx.end(), Index{0});
        std::sort(idx.begin(), idx.end(), [&](Index a, Index b) { return s.y[a] < s.y[b]; });
        // best 5 points for fraction 0.05
        double best = 0, all = 0;
        int nb = 0, na = 0;
        for (int a = 0; a < 100; ++a) {
            for (int b = a + 1; b < 100; ++b) {
                all += (s.X.row(a) - s.X.row(b)).norm();
                ++na;
            }
        }
        for (int a = 0; a < 5; ++a) {
            for (int b = a + 1; b < 5; ++b) {
                best += (s.X.row(idx[a]) - s.X.row(idx[b])).norm();
                ++nb;
            }
        }
        CHECK(ela_disp(s).at("disp.ratio_mean_05") == doctest::Approx((best / nb) / (all / na)).epsilon(1e-12));
    }
    CHECK_THROWS_AS(ela_disp(sphere_sample(2, 60, 1)), UsageError);
}

TEST_CASE("nearest-better clustering")
{
    SUBCASE("chain")
    {
        const int n = 10;
        Matrix X(n, 1);
        Vector y(n);
        for (int i = 0; i < n; ++i) {
            X(i, 0) = i;
            y[i] = i;
        }
        const auto f = ela_nbc(make_sample(X, y));
        CHECK(f.at("nbc.nn_nb.mean_ratio") == 1.0);
        CHECK(f.at("nbc.nn_nb.sd_ratio") == 0.0);
        CHECK(f.at("nbc.indegree.max_share") == doctest::Approx(0.1));
        // indegree 1 for points 0..8, 0 for the worst point
        CHECK(f.at("nbc.indegree.sd") == doctest::Approx(std::sqrt(0.1)));
    }
    SUBCASE("minimal instance")
    {
        Matrix X(3, 2);
        X << 0, 0, 1, 0, 0, 2;
        Vector y(3);
        y << 2, 1, 2;
        for (double v : ela_nbc(make_sample(X, y)).values) {
            CHECK(std::isfinite(v));
        }
    }
}

TEST_CASE("principal components")
{
    SUBCASE("rank one")
    {
        Matrix X = Matrix::Constant(30, 3, 2.0);
        for (int i = 0; i < 30; ++i) {
            X(i, 0) = i;
        }
        CHECK(pca_summary(X, false).first_share == doctest::Approx(1.0));
        const auto cor = pca_summary(X, true);
        CHECK(cor.dropped_columns);
        CHECK(cor.first_share == doctest::Approx(1.0));
        const auto f = ela_pca(make_sample(X, X.col(0)));
        CHECK(f.at("pca.expl_var_PC1.cov_x") == doctest::Approx(1.0));
        CHECK(f.at("pca.dropped_flag") == 1.0);
    }
    SUBCASE("isotropic gaussian")
    {
        Rng rng(3);
        Matrix X(4000, 2);
        for (Index i = 0; i < X.rows(); ++i) {
            X(i, 0) = rng.normal();
            X(i, 1) = rng.normal();
        }
        CHECK(std::abs(pca_summary(X, false).first_share - 0.5) <= 0.1);
    }
    SUBCASE("shares monotone and counts bounded")
    {
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            const Sample s = sphere_sample(3, 40, seed);
            Matrix init(40, 4);
            init << s.X, s.y;
            for (bool corr : {false, true}) {
                const auto p = pca_summary(init, corr);
                CHECK(p.components_needed <= 4);
                double cum = 0;
                for (std::size_t k = 0; k < p.shares.size(); ++k) {
                    CHECK(p.shares[k] >= 0.0);
                    CHECK(p.shares[k] <= 1.0);
                    if (k > 0) {
                        CHECK(p.shares[k] <= p.shares[k - 1] + 1e-15);
                    }
                    cum += p.shares[k];
                }
                CHECK(cum == doctest::Approx(1.0));
            }
        }
    }
}

TEST_CASE("combined vector properties")
{
    const auto names = ela_feature_names();
    CHECK(names.size() >= 55);
    CHECK(names.size() <= 65);

    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        Sample s = sphere_sample(2, 100, seed);
        s.y = (s.y.array() + (3 * s.X.col(1).array()).cos()).matrix();
        const auto base = ela_all(s, true);
        CHECK(base.names == names);
        for (double v : base.values) {
            CHECK(std::isfinite(v));
        }

        Rng rng(seed);
        Sample t = s;
        t.y = (rng.uniform(0.01, 50.0) * s.y.array() + rng.uniform(-100, 100)).matrix();
        CHECK(max_abs_diff(base, ela_all(t, true)) <= 1e-9);

        // already in [0,1] -> scaling is the identity
        Sample u = s;
        u.y = minmax_scale(s.y);
        CHECK(max_abs_diff(ela_all(u, false), ela_all(u, true)) <= 1e-12);

        // translation of X preserves distance-based and X-only families
        Sample v = s;
        v.X = s.X.rowwise() + Eigen::RowVectorXd::Constant(2, rng.uniform(-3, 3));
        const auto fa = ela_all(s, false);
        const auto fb = ela_all(v, false);
        for (std::size_t k = 0; k < fa.size(); ++k) {
            const auto& name = fa.names[k];
            if (name.rfind("disp.", 0) == 0 || name.rfind("nbc.", 0) == 0 || name.rfind("pca.", 0) == 0) {
                CHECK(std::abs(fa.values[k] - fb.values[k]) <= 1e-9);
            }
        }
    }

    const auto flat = ela_all(make_sample(lhs_sample(2, 100, 1), Vector::Constant(100, 5.0)), true);
    CHECK(flat.names == names);
    for (double v : flat.values) {
        CHECK(std::isfinite(v));
    }
}
