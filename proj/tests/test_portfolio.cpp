#include <doctest.h>

#include "asbench/portfolio.hpp"
#include "asbench/suite.hpp"

#include <algorithm>

using namespace asbench;

namespace {

Problem sphere_problem(int instance = 1, int dim = 2)
{
    auto inst = std::make_shared<const BaseInstance>(make_base_instance(1, instance, dim));
    return {"sphere_" + std::to_string(instance), dim, [inst](const Eigen::Ref<const Vector>& x) {
                return inst->evaluate(x);
            }};
}

Problem affine_problem(InstanceCache& cache, const ManifestEntry& e)
{
    auto a = std::make_shared<const AffineInstance>(cache.affine(e));
    return {e.id, e.dim, [a](const Eigen::Ref<const Vector>& x) { return eval_affine(*a, x); }};
}

}  // namespace

TEST_CASE("configuration tables")
{
    const auto& de = de_configs();
    REQUIRE(de.size() == 5);
    CHECK(de[0].cr == 0.5);
    CHECK(de[0].f == 0.5);
    CHECK(de[0].selection == DeSelection::random);
    CHECK(de[0].crossover == DeCrossover::binary);
    CHECK(de[1].cr == 0.6);
    CHECK(de[1].f == 0.4);
    CHECK(de[1].selection == DeSelection::best);
    CHECK(de[1].crossover == DeCrossover::exponential);
    CHECK((de[2].cr == 0.9 && de[2].f == 0.7 && de[2].crossover == DeCrossover::exponential));
    CHECK((de[3].cr == 0.3 && de[3].f == 0.8 && de[3].crossover == DeCrossover::binary));
    CHECK((de[4].cr == 0.8 && de[4].f == 0.4 && de[4].selection == DeSelection::best));

    const auto& pso = pso_configs();
    REQUIRE(pso.size() == 5);
    CHECK((pso[0].initial_velocity == InitialVelocity::zero && pso[0].adaptive && pso[0].w == 0.9));
    CHECK((pso[1].initial_velocity == InitialVelocity::zero && !pso[1].adaptive && pso[1].w == 0.9));
    CHECK((pso[2].initial_velocity == InitialVelocity::random && pso[2].adaptive && pso[2].w == 0.9));
    CHECK((pso[3].initial_velocity == InitialVelocity::random && !pso[3].adaptive && pso[3].w == 0.9));
    CHECK((pso[4].initial_velocity == InitialVelocity::random && !pso[4].adaptive && pso[4].w == 0.7));
}

TEST_CASE("portfolio membership")
{
    CHECK(make_portfolio("2DE+2PSO").member_names() == std::vector<std::string>{"DE2", "DE5", "PSO1", "PSO3"});
    CHECK(make_portfolio("5DE").members.size() == 5);
    CHECK(make_portfolio("5PSO").members.size() == 5);
    CHECK(make_portfolio("5DE+5PSO").members.size() == 10);
    CHECK_THROWS_AS(make_portfolio("3DE"), UsageError);
}

TEST_CASE("initial population")
{
    const Matrix a = init_population("A_01_02_1_0.50", 3, 20, 0, 42);
    const Matrix b = init_population("A_01_02_1_0.50", 3, 20, 0, 42);
    const Matrix c = init_population("A_01_02_1_0.50", 3, 20, 1, 42);
    CHECK(a == b);
    CHECK(a != c);
    CHECK(a.minCoeff() >= -5.0);
    CHECK(a.maxCoeff() <= 5.0);
    CHECK_THROWS_AS(init_population("p", 2, 3, 0, 1), UsageError);
}

TEST_CASE("zero budget returns the best of the initial population")
{
    const auto p = sphere_problem();
    const Matrix pop0 = init_population(p.id, 2, 20, 0, 5);
    double best = kInf;
    for (Index i = 0; i < pop0.rows(); ++i) {
        best = std::min(best, p.f(pop0.row(i).transpose()));
    }
    for (const auto& cfg : de_configs()) {
        CHECK(run_de(cfg, p, pop0, 0, 1).best_y == best);
    }
    for (const auto& cfg : pso_configs()) {
        CHECK(run_pso(cfg, p, pop0, 0, 1).best_y == best);
    }
}

TEST_CASE("best-so-far is non-increasing and generation 0 is shared")
{
    InstanceCache cache;
    const auto m = generate_suite({{3, 8, 21}, {2}, {0.25, 0.75}, 2});
    const auto portfolio = make_portfolio("5DE+5PSO");
    for (const auto& e : m.entries) {
        const auto p = affine_problem(cache, e);
        const Matrix pop0 = init_population(p.id, 2, 20, 0, 9);
        std::vector<double> first;
        for (const auto& member : portfolio.members) {
            RunTrace trace;
            const auto rec = run_algorithm(member, p, pop0, 30, 77, &trace);
            REQUIRE(trace.best_so_far.size() == 31);
            for (std::size_t t = 1; t < trace.best_so_far.size(); ++t) {
                CHECK(trace.best_so_far[t] <= trace.best_so_far[t - 1]);
            }
            CHECK(rec.best_y == trace.best_so_far.back());
            first.push_back(trace.best_so_far.front());
        }
        CHECK(std::adjacent_find(first.begin(), first.end(), std::not_equal_to<>()) == first.end());
    }
}

TEST_CASE("inertia schedule")
{
    const auto p = sphere_problem();
    const Matrix pop0 = init_population(p.id, 2, 20, 0, 5);
    RunTrace fixed;
    run_pso(pso_configs()[1], p, pop0, 25, 3, &fixed);
    REQUIRE(fixed.inertia.size() == 25);
    for (double w : fixed.inertia) {
        CHECK(w == 0.9);
    }
    RunTrace adaptive;
    run_pso(pso_configs()[0], p, pop0, 25, 3, &adaptive);
    CHECK(adaptive.inertia.front() == doctest::Approx(0.9));
    CHECK(adaptive.inertia.back() == doctest::Approx(0.4));
    for (std::size_t t = 1; t < adaptive.inertia.size(); ++t) {
        CHECK(adaptive.inertia[t] < adaptive.inertia[t - 1]);
    }
}

TEST_CASE("portfolio runs: counting and determinism")
{
    const auto p = sphere_problem(2);
    const auto portfolio = make_portfolio("2DE+2PSO");
    PortfolioSettings s;
    s.runs = 3;
    s.budget = 20;
    const auto a = run_portfolio(p, portfolio, s);
    const auto b = run_portfolio(p, portfolio, s);
    REQUIRE(a.size() == 12);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].best_y == b[i].best_y);
        CHECK(a[i].budget == 20);
    }
    CHECK(PortfolioSettings{}.budget == 100);
    CHECK(runs_to_csv(a) == runs_to_csv(b));
    const auto back = runs_from_csv(runs_to_csv(a), "mem");
    CHECK(runs_to_csv(back) == runs_to_csv(a));
}

TEST_CASE("every configuration improves on the sphere in at least 95% of runs")
{
    for (const auto& member : make_portfolio("5DE+5PSO").members) {
        int improved = 0;
        const int runs = 40;
        for (int r = 0; r < runs; ++r) {
            const auto p = sphere_problem(1 + r % 5);
            const Matrix pop0 = init_population(p.id, 2, 20, r, 11);
            RunTrace trace;
            run_algorithm(member, p, pop0, 100, derive_seed(11, static_cast<std::uint64_t>(r)), &trace);
            if (trace.best_so_far.back() < trace.best_so_far.front()) {
                ++improved;
            }
        }
        CAPTURE(algorithm_name(member));
        CHECK(improved >= 0.95 * runs);
    }
}
