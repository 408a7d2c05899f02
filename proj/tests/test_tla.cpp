#include <doctest.h>

#include "asbench/random.hpp"
#include "asbench/stats.hpp"
#include "asbench/tla.hpp"

#include <algorithm>
#include <cmath>

using namespace asbench;

namespace {

Sample make_sample(Matrix X, Vector y)
{
    Sample s;
    s.X = std::move(X);
    s.y = std::move(y);
    return s;
}

Matrix random_distances(Rng& rng, int n, bool integer_ties)
{
    Matrix D = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double v = integer_ties ? static_cast<double>(1 + rng.below(4)) : rng.uniform(0.01, 1.0);
            D(i, j) = v;
            D(j, i) = v;
        }
    }
    return D;
}

// Prim's algorithm on the dense matrix; returns sorted MST edge weights.
std::vector<double> prim_weights(const Matrix& D)
{
    const Index n = D.rows();
    std::vector<bool> in(static_cast<std::size_t>(n), false);
    std::vector<double> key(static_cast<std::size_t>(n), kInf);
    std::vector<double> out;
    key[0] = 0;
    for (Index step = 0; step < n; ++step) {
        Index u = -1;
        for (Index v = 0; v < n; ++v) {
            if (!in[static_cast<std::size_t>(v)] && (u < 0 || key[static_cast<std::size_t>(v)] < key[static_cast<std::size_t>(u)])) {
                u = v;
            }
        }
        in[static_cast<std::size_t>(u)] = true;
        if (step > 0) {
            out.push_back(key[static_cast<std::size_t>(u)]);
        }
        for (Index v = 0; v < n; ++v) {
            if (!in[static_cast<std::size_t>(v)]) {
                key[static_cast<std::size_t>(v)] = std::min(key[static_cast<std::size_t>(v)], D(u, v));
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

// Brute-force H1 of the full Rips filtration over GF(2), through persistent
// Betti numbers beta^{i,j} = dim(Z_i + B_j) - dim(B_j) and inclusion-exclusion.
struct BruteH1 {
    using Vec = std::uint64_t;  // bit sets over edges (n <= 6 -> 15 edges)

    static int rank(std::vector<Vec> rows)
    {
        int r = 0;
        for (int bit = 63; bit >= 0; --bit) {
            const Vec mask = Vec{1} << bit;
            auto it = std::find_if(rows.begin() + r, rows.end(), [&](Vec v) { return (v & mask) != 0; });
            if (it == rows.end()) {
                continue;
            }
            std::iter_swap(rows.begin() + r, it);
            for (std::size_t k = 0; k < rows.size(); ++k) {
                if (static_cast<int>(k) != r && (rows[k] & mask)) {
                    rows[k] ^= rows[static_cast<std::size_t>(r)];
                }
            }
            ++r;
        }
        return r;
    }

    static std::vector<PersistencePair> run(const Matrix& D)
    {
        const int n = static_cast<int>(D.rows());
        std::vector<std::pair<int, int>> edges;
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                edges.push_back({i, j});
            }
        }
        auto edge_id = [&](int a, int b) {
            for (std::size_t e = 0; e < edges.size(); ++e) {
                if (edges[e] == std::pair<int, int>{a, b}) {
                    return static_cast<int>(e);
                }
            }
            return -1;
        };
        std::vector<double> values;
        for (auto [a, b] : edges) {
            values.push_back(D(a, b));
        }
        std::sort(values.begin(), values.end());
        values.erase(std::unique(values.begin(), values.end()), values.end());
        const int T = static_cast<int>(values.size());

        // cycle space basis of the 1-skeleton at each filtration step
        auto cycles = [&](int t) {
            std::vector<std::pair<Vec, Vec>> work;  // (vertex boundary, edge combination)
            for (std::size_t e = 0; e < edges.size(); ++e) {
                if (D(edges[e].first, edges[e].second) <= values[static_cast<std::size_t>(t)]) {
                    work.push_back({(Vec{1} << edges[e].first) | (Vec{1} << edges[e].second), Vec{1} << e});
                }
            }
            std::vector<Vec> basis;
            for (std::size_t a = 0; a < work.size(); ++a) {
                for (int bit = 0; bit < n; ++bit) {
                    if (!(work[a].first >> bit & 1)) {
                        continue;
                    }
                    for (std::size_t b = a + 1; b < work.size(); ++b) {
                        if (work[b].first >> bit & 1) {
                            work[b].first ^= work[a].first;
                            work[b].second ^= work[a].second;
                        }
                    }
                    break;
                }
            }
            for (auto& w : work) {
                if (w.first == 0) {
                    basis.push_back(w.second);
                }
            }
            return basis;
        };
        auto boundaries = [&](int t) {
            std::vector<Vec> out;
            for (int a = 0; a < n; ++a) {
                for (int b = a + 1; b < n; ++b) {
                    for (int c = b + 1; c < n; ++c) {
                        const double diam = std::max({D(a, b), D(a, c), D(b, c)});
                        if (diam <= values[static_cast<std::size_t>(t)]) {
                            out.push_back((Vec{1} << edge_id(a, b)) | (Vec{1} << edge_id(a, c)) |
                                          (Vec{1} << edge_id(b, c)));
                        }
                    }
                }
            }
            return out;
        };
        auto beta = [&](int i, int j) {
            if (i < 0) {
                return 0;
            }
            auto z = cycles(i);
            auto b = boundaries(j);
            const int rb = rank(b);
            z.insert(z.end(), b.begin(), b.end());
            return rank(z) - rb;
        };
        std::vector<PersistencePair> out;
        for (int i = 0; i < T; ++i) {
            for (int j = i + 1; j < T; ++j) {
                const int mu = beta(i, j - 1) - beta(i, j) - beta(i - 1, j - 1) + beta(i - 1, j);
                REQUIRE(mu >= 0);
                for (int k = 0; k < mu; ++k) {
                    out.push_back({values[static_cast<std::size_t>(i)], values[static_cast<std::size_t>(j)]});
                }
            }
            REQUIRE(beta(i, T - 1) - beta(i - 1, T - 1) == 0);  // no essential classes in a full simplex
        }
        std::sort(out.begin(), out.end(), [](const PersistencePair& a, const PersistencePair& b) {
            return a.birth != b.birth ? a.birth < b.birth : a.death < b.death;
        });
        return out;
    }
};

}  // namespace

TEST_CASE("fused distance")
{
    Rng rng(2);
    Matrix X(30, 2);
    Vector y(30);
    for (Index i = 0; i < 30; ++i) {
        X(i, 0) = rng.uniform(-5, 5);
        X(i, 1) = rng.uniform(-5, 5);
        y[i] = rng.uniform(0, 1000);
    }
    const Sample s = make_sample(X, y);
    const Matrix Dx = pairwise_distances(tla_scaled_x(X, VolumeTransform::RankCdf));
    const Matrix Dy = pairwise_distances(Matrix(minmax_scale(y)));
    CHECK((tla_distance(s, 1.0) - Dx).cwiseAbs().maxCoeff() == 0.0);
    CHECK((tla_distance(s, 0.0) - Dy).cwiseAbs().maxCoeff() == 0.0);

    const Matrix D = tla_distance(s);
    CHECK(D.diagonal().isZero());
    CHECK(D == D.transpose());
    CHECK(D.minCoeff() >= 0.0);

    // ranks of a column are the scaled positions of its sorted values
    const Matrix scaled = tla_scaled_x(X, VolumeTransform::RankCdf);
    for (Index i = 0; i < 30; ++i) {
        int below = 0;
        for (Index j = 0; j < 30; ++j) {
            below += X(j, 0) < X(i, 0);
        }
        CHECK(scaled(i, 0) == doctest::Approx(below / 29.0));
    }

    for (auto transform : {VolumeTransform::None, VolumeTransform::RankCdf}) {
        Sample t = s;
        t.X.col(0) = 3.5 * X.col(0).array() + 11.0;
        t.X.col(1) = 0.01 * X.col(1).array() - 2.0;
        t.y = 1e-3 * y.array() + 7.0;
        CHECK((tla_distance(s, 0.3, transform) - tla_distance(t, 0.3, transform)).cwiseAbs().maxCoeff() <= 1e-9);
    }

    const auto flat = tla_scaled_x(Matrix::Constant(5, 2, 4.0), VolumeTransform::RankCdf);
    CHECK((flat.array() == 0.5).all());
    CHECK_THROWS_AS(tla_distance(make_sample(Matrix::Zero(1, 2), Vector::Zero(1))), UsageError);
}

TEST_CASE("H0 persistence")
{
    SUBCASE("collinear points")
    {
        Matrix X(3, 1);
        X << 0, 1, 3;
        const auto dg = vr_persistence(pairwise_distances(X), 0);
        REQUIRE(dg.size() == 1);
        REQUIRE(dg[0].pairs.size() == 3);
        CHECK(dg[0].pairs[0] == PersistencePair{0.0, 1.0});
        CHECK(dg[0].pairs[1] == PersistencePair{0.0, 2.0});
        CHECK(dg[0].pairs[2].death == kInf);
    }
    SUBCASE("deaths equal minimum spanning tree weights")
    {
        Rng rng(99);
        for (int trial = 0; trial < 200; ++trial) {
            const int n = 2 + static_cast<int>(rng.below(49));
            const Matrix D = random_distances(rng, n, trial % 4 == 0);
            const auto dg = vr_persistence(D, 0);
            REQUIRE(dg[0].pairs.size() == static_cast<std::size_t>(n));
            std::vector<double> deaths;
            int infinite = 0;
            for (const auto& p : dg[0].pairs) {
                CHECK(p.birth == 0.0);
                if (std::isinf(p.death)) {
                    ++infinite;
                } else {
                    deaths.push_back(p.death);
                }
            }
            CHECK(infinite == 1);
            std::sort(deaths.begin(), deaths.end());
            CHECK(deaths == prim_weights(D));
        }
    }
}

TEST_CASE("H1 persistence")
{
    SUBCASE("unit square")
    {
        Matrix X(4, 2);
        X << 0, 0, 1, 0, 1, 1, 0, 1;
        const auto dg = vr_persistence(pairwise_distances(X), 1);
        REQUIRE(dg[1].pairs.size() == 1);
        CHECK(dg[1].pairs[0].birth == 1.0);
        CHECK(dg[1].pairs[0].death == std::sqrt(2.0));
    }
    SUBCASE("matches brute-force enumeration")
    {
        Rng rng(7);
        std::size_t bars = 0;
        for (int trial = 0; trial < 150; ++trial) {
            const int n = 3 + static_cast<int>(rng.below(4));
            const Matrix D = random_distances(rng, n, trial % 3 == 0);
            const auto dg = vr_persistence(D, 1);
            CHECK(dg[1].pairs == BruteH1::run(D));
            bars += dg[1].pairs.size();
        }
        CHECK(bars >= 30);  // the comparison is not vacuous
        // planar point sets as well
        for (int trial = 0; trial < 50; ++trial) {
            Matrix X(6, 2);
            for (Index i = 0; i < 6; ++i) {
                X(i, 0) = rng.uniform();
                X(i, 1) = rng.uniform();
            }
            const Matrix D = pairwise_distances(X);
            CHECK(vr_persistence(D, 1)[1].pairs == BruteH1::run(D));
        }
    }
    SUBCASE("low threshold leaves essential classes")
    {
        Matrix X(4, 2);
        X << 0, 0, 1, 0, 1, 1, 0, 1;
        const auto dg = vr_persistence(pairwise_distances(X), 1, 1.2);
        REQUIRE(dg[1].pairs.size() == 1);
        CHECK(std::isinf(dg[1].pairs[0].death));
    }
}

TEST_CASE("H2 gating")
{
    Matrix X(6, 3);
    X << 1, 0, 0, -1, 0, 0, 0, 1, 0, 0, -1, 0, 0, 0, 1, 0, 0, -1;
    const Matrix D = pairwise_distances(X);
    CHECK_THROWS_AS(vr_persistence(D, 2), UsageError);
    CHECK_THROWS_AS(vr_persistence(D, 2, 0.0, true), UsageError);
    // octahedron: a 2-sphere appears at sqrt(2) and is filled at 2
    const auto dg = vr_persistence(D, 2, 3.0, true);
    REQUIRE(dg[2].pairs.size() == 1);
    CHECK(dg[2].pairs[0].birth == doctest::Approx(std::sqrt(2.0)));
    CHECK(dg[2].pairs[0].death == 2.0);
    CHECK(dg[1].pairs.empty());
}

TEST_CASE("persistence images")
{
    PersistenceDiagram h1{1, {}};
    CHECK(persistence_image(h1).size() == 2500);
    CHECK(persistence_image(h1).isZero());
    PersistenceDiagram h0{0, {{0.0, kInf}}};
    CHECK(persistence_image(h0).size() == 50);
    CHECK(persistence_image(h0).isZero());

    // pixel (i, j) covers birth [i/50, (i+1)/50) and persistence [j/50, (j+1)/50)
    h1.pairs = {{0.31, 0.31 + 0.47}};
    const Vector img = persistence_image(h1);
    Index arg = 0;
    img.maxCoeff(&arg);
    CHECK(arg == 15 * 50 + 23);
    CHECK(img.minCoeff() >= 0.0);
    CHECK(img.sum() == doctest::Approx(0.47).epsilon(0.01));

    PersistenceDiagram doubled = h1;
    doubled.pairs.push_back(h1.pairs[0]);
    CHECK((persistence_image(doubled) - 2.0 * img).cwiseAbs().maxCoeff() <= 1e-15);

    h0.pairs = {{0.0, 0.11}, {0.0, 0.55}};
    const Vector i0 = persistence_image(h0);
    CHECK(i0.sum() == doctest::Approx(0.66).epsilon(0.01));
    i0.maxCoeff(&arg);
    CHECK(arg == 27);
}

TEST_CASE("tinytla features")
{
    Sample s = make_sample(lhs_sample(2, 100, 4), Vector());
    s.y = s.X.rowwise().squaredNorm() + (2 * s.X.col(0).array()).sin().matrix();

    const auto f = tla_features(s);
    CHECK(f.size() == 50);
    CHECK(f.names == tla_feature_names());
    CHECK(tla_features(s).values == f.values);
    for (double v : f.values) {
        CHECK(v >= 0.0);
    }

    TlaConfig h1;
    h1.max_dim = 1;
    CHECK(tla_feature_names(h1).size() == 2550);
    TlaConfig h2 = h1;
    h2.max_dim = 2;
    CHECK(tla_feature_names(h2).size() == 5050);
    h2.allow_h2 = true;
    h2.threshold = 0.25;
    const Sample small = make_sample(s.X.topRows(20), s.y.head(20));
    CHECK(tla_features(small, h2).size() == 5050);

    Rng rng(6);
    for (int trial = 0; trial < 5; ++trial) {
        Sample t = s;
        for (Index c = 0; c < 2; ++c) {
            t.X.col(c) = rng.uniform(0.1, 10.0) * s.X.col(c).array() + rng.uniform(-5, 5);
        }
        t.y = rng.uniform(0.1, 10.0) * s.y.array() + rng.uniform(-5, 5);
        const auto g = tla_features(t);
        double drift = 0;
        for (std::size_t k = 0; k < f.size(); ++k) {
            drift = std::max(drift, std::abs(f.values[k] - g.values[k]));
        }
        CHECK(drift <= 1e-9);
    }
}
