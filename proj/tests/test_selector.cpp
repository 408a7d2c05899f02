#include <doctest.h>

#include "asbench/random.hpp"
#include "asbench/selector.hpp"

#include <algorithm>
#include <nlohmann/json.hpp>

using namespace asbench;

namespace {

Matrix random_matrix(Rng& rng, Index rows, Index cols)
{
    Matrix m(rows, cols);
    for (Index r = 0; r < rows; ++r) {
        for (Index c = 0; c < cols; ++c) {
            m(r, c) = rng.uniform();
        }
    }
    return m;
}

ForestConfig memorizing()
{
    ForestConfig cfg;
    cfg.n_trees = 1;
    cfg.bootstrap = false;
    return cfg;
}

// Sum of squared errors of a two-leaf stump, computed directly.
double stump_sse(const Matrix& X, const Matrix& Y, int f, double thr)
{
    double sse = 0;
    for (int side = 0; side < 2; ++side) {
        std::vector<Index> rows;
        for (Index r = 0; r < X.rows(); ++r) {
            if ((X(r, f) <= thr) == (side == 0)) {
                rows.push_back(r);
            }
        }
        if (rows.empty()) {
            return kInf;
        }
        Eigen::RowVectorXd mean = Eigen::RowVectorXd::Zero(Y.cols());
        for (Index r : rows) {
            mean += Y.row(r);
        }
        mean /= static_cast<double>(rows.size());
        for (Index r : rows) {
            sse += (Y.row(r) - mean).squaredNorm();
        }
    }
    return sse;
}

struct Fixture {
    FeatureMatrix features;
    PerformanceMatrix perf;
};

Fixture synthetic(int n, std::uint64_t seed)
{
    Rng rng(seed);
    Fixture fx;
    fx.features.group = "syn";
    fx.features.names = {"signal", "noise", "flat"};
    fx.features.values.resize(n, 3);
    fx.perf.algorithms = {"A", "B", "C"};
    fx.perf.S.resize(n, 3);
    for (int i = 0; i < n; ++i) {
        char id[16];
        std::snprintf(id, sizeof(id), "p%04d", i);
        fx.features.problems.push_back(id);
        fx.perf.problems.push_back(id);
        const double s = rng.uniform();
        fx.features.values.row(i) << s, rng.uniform(), 1.0;
        if (s < 0.5) {
            fx.perf.S.row(i) << 0.0, 1.0, 0.6;
        } else {
            fx.perf.S.row(i) << 1.0, 0.0, 0.6;
        }
    }
    return fx;
}

}  // namespace

TEST_CASE("forest basics")
{
    Rng rng(1);
    const Matrix X = random_matrix(rng, 40, 5);

    SUBCASE("constant targets")
    {
        Matrix Y(40, 2);
        Y.col(0).setConstant(0.1);
        Y.col(1).setConstant(0.7);
        const auto model = train_forest(X, Y, ForestConfig{});
        const Matrix P = model.predict(random_matrix(rng, 15, 5));
        CHECK((P.col(0).array() == 0.1).all());
        CHECK((P.col(1).array() == 0.7).all());
    }
    SUBCASE("memorization")
    {
        const Matrix X10 = X.topRows(10);
        const Matrix Y = random_matrix(rng, 10, 4);
        const auto model = train_forest(X10, Y, memorizing());
        CHECK(model.predict(X10) == Y);
    }
    SUBCASE("predictions inside the training range")
    {
        const Matrix Y = random_matrix(rng, 40, 3);
        ForestConfig cfg;
        cfg.n_trees = 20;
        const Matrix P = train_forest(X, Y, cfg).predict(random_matrix(rng, 100, 5));
        for (Index t = 0; t < 3; ++t) {
            CHECK(P.col(t).minCoeff() >= Y.col(t).minCoeff());
            CHECK(P.col(t).maxCoeff() <= Y.col(t).maxCoeff());
        }
    }
    SUBCASE("stump picks the squared-error optimum")
    {
        for (int trial = 0; trial < 20; ++trial) {
            const Matrix Xs = random_matrix(rng, 25, 4);
            const Matrix Ys = random_matrix(rng, 25, 3);
            ForestConfig cfg = memorizing();
            cfg.max_depth = 1;
            cfg.max_features = -1;
            const auto model = train_forest(Xs, Ys, cfg);
            const auto& root = model.trees[0].nodes[0];
            REQUIRE(root.feature >= 0);
            double best = kInf;
            for (int f = 0; f < 4; ++f) {
                for (Index r = 0; r < 25; ++r) {
                    best = std::min(best, stump_sse(Xs, Ys, f, Xs(r, f)));
                }
            }
            CHECK(stump_sse(Xs, Ys, root.feature, root.threshold) == doctest::Approx(best).epsilon(1e-12));
        }
    }
    SUBCASE("workers do not change the model")
    {
        const Matrix Y = random_matrix(rng, 40, 3);
        ForestConfig a;
        a.n_trees = 16;
        ForestConfig b = a;
        b.workers = 4;
        const Matrix Xt = random_matrix(rng, 30, 5);
        CHECK(train_forest(X, Y, a).predict(Xt) == train_forest(X, Y, b).predict(Xt));
    }
    CHECK_THROWS_AS(train_forest(Matrix(5, 0), Matrix::Zero(5, 2), ForestConfig{}), UsageError);
    CHECK_THROWS_AS(train_forest(Matrix::Zero(1, 3), Matrix::Zero(1, 2), ForestConfig{}), UsageError);
    CHECK(ForestConfig{}.candidate_count(61) == 8);
    CHECK(ForestConfig{}.candidate_count(50) == 8);
    CHECK(ForestConfig{}.candidate_count(49) == 7);
}

TEST_CASE("selection and AS performance")
{
    Matrix p(1, 3);
    p << 0.2, 0.1, 0.9;
    CHECK(select(p) == std::vector<int>{1});
    Matrix tie(1, 2);
    tie << 0.3, 0.3;
    CHECK(select(tie) == std::vector<int>{0});
    Vector dummy(3);
    dummy << 0.5, 0.4, 0.45;
    CHECK(select(dummy, 4) == std::vector<int>{1, 1, 1, 1});

    // strictly increasing transforms leave choices unchanged
    Rng rng(4);
    const Matrix preds = random_matrix(rng, 50, 4);
    const Matrix warped = (preds.array().cube() * 3.0 + 1.0).exp().matrix();
    CHECK(select(preds) == select(warped));

    Matrix truth(3, 3);
    truth << 0.0, 0.5, 1.0, 1.0, 0.0, 0.2, 0.3, 1.0, 0.0;
    CHECK(as_performance({0, 1, 2}, truth) == 1.0);
    CHECK(as_performance({2, 0, 1}, truth) == 0.0);
    Matrix single(1, 2);
    single << 0.3, 0.1;
    CHECK(std::abs(as_performance({0}, single) - 0.8) <= 1e-12);
    for (int trial = 0; trial < 20; ++trial) {
        const Matrix t = random_matrix(rng, 10, 4);
        std::vector<int> choice(10);
        for (auto& c : choice) {
            c = static_cast<int>(rng.below(4));
        }
        const double as = as_performance(choice, t);
        CHECK(as >= 0.0);
        CHECK(as <= 1.0);
    }
}

TEST_CASE("evaluate plan")
{
    const Fixture fx = synthetic(120, 9);
    SplitPlan plan;
    plan.protocol = Protocol::Random;
    for (int f = 0; f < 3; ++f) {
        Fold fold;
        fold.label = "r" + std::to_string(f);
        for (std::size_t i = 0; i < fx.features.problems.size(); ++i) {
            (static_cast<int>(i % 3) == f ? fold.test : fold.train).push_back(fx.features.problems[i]);
        }
        plan.folds.push_back(fold);
    }
    ForestConfig cfg;
    cfg.n_trees = 30;
    const auto eval = evaluate_plan(fx.features, plan, fx.perf, cfg, "P");
    REQUIRE(eval.folds.size() == 3);
    for (const auto& r : eval.folds) {
        CHECK(r.model_as >= 0.95);
        CHECK(r.dummy_as < 0.8);
        CHECK(r.importance[0] > 0.9);
        CHECK(r.importance[2] == 0.0);
        CHECK(std::abs(r.importance.sum() - 1.0) <= 1e-9);
    }
    CHECK(eval.median_delta() > 0.15);

    SUBCASE("dummy that is always right")
    {
        Fixture easy = fx;
        for (Index r = 0; r < easy.perf.S.rows(); ++r) {
            easy.perf.S.row(r) << 0.2, 0.0, 1.0;
        }
        const auto e = evaluate_plan(easy.features, plan, easy.perf, cfg, "P");
        for (const auto& r : e.folds) {
            CHECK(r.dummy_as == 1.0);
        }
    }
    SUBCASE("memorizing model on its own training fold")
    {
        SplitPlan same;
        same.folds.push_back({"all", fx.features.problems, fx.features.problems});
        const auto e = evaluate_plan(fx.features, same, fx.perf, memorizing(), "P");
        REQUIRE(e.folds.size() == 1);
        CHECK(e.folds[0].model_as >= e.folds[0].dummy_as);
        CHECK(e.folds[0].model_as == 1.0);
    }
    SUBCASE("empty training fold is skipped")
    {
        SplitPlan bad = plan;
        bad.folds[1].train.clear();
        const auto e = evaluate_plan(fx.features, bad, fx.perf, cfg, "P");
        CHECK(e.folds.size() == 2);
        CHECK(e.warnings.size() == 1);
    }

    const auto back = results_from_csv(results_to_csv(eval.folds), "mem");
    REQUIRE(back.size() == 3);
    CHECK(back[1].model_as == eval.folds[1].model_as);
    CHECK(back[1].protocol == Protocol::Random);
    CHECK(importance_to_csv(eval.folds).find("P,syn,random,r0,signal,") != std::string::npos);
}

TEST_CASE("training order does not matter")
{
    const Fixture fx = synthetic(60, 3);
    auto ids = fx.features.problems;
    ForestConfig cfg;
    cfg.n_trees = 10;
    const auto a = train_forest(fx.features, fx.perf, ids, cfg);
    Rng rng(5);
    rng.shuffle(ids);
    const auto b = train_forest(fx.features, fx.perf, ids, cfg);
    CHECK(a.predict(fx.features.values) == b.predict(fx.features.values));
    CHECK(to_json(a.trees[0], a.features).dump() == to_json(b.trees[0], b.features).dump());
}
