#include "asbench/verify.hpp"
#include "asbench/csv.hpp"
#include "asbench/ela.hpp"
#include "asbench/perf.hpp"
#include "asbench/pipeline.hpp"
#include "asbench/random.hpp"
#include "asbench/selector.hpp"
#include "asbench/splits.hpp"
#include "asbench/stats.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace asbench {

namespace fs = std::filesystem;

namespace {

CheckResult result(std::string name, const std::vector<std::string>& failures, const std::string& ok_detail)
{
    CheckResult r{std::move(name), failures.empty(), ok_detail};
    if (!failures.empty()) {
        r.detail = failures.front();
        if (failures.size() > 1) {
            r.detail += " (+" + std::to_string(failures.size() - 1) + " more)";
        }
    }
    return r;
}

Matrix random_distances(Rng& rng, int n, bool ties)
{
    Matrix D = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double v = ties ? static_cast<double>(1 + rng.below(4)) : rng.uniform(0.01, 1.0);
            D(i, j) = v;
            D(j, i) = v;
        }
    }
    return D;
}

// GF(2) rank of bit-set rows
int gf2_rank(std::vector<std::uint64_t> rows)
{
    int r = 0;
    for (int bit = 63; bit >= 0; --bit) {
        const std::uint64_t mask = std::uint64_t{1} << bit;
        auto it = std::find_if(rows.begin() + r, rows.end(), [&](std::uint64_t v) { return (v & mask) != 0; });
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

bool near(double a, double b)
{
    return std::abs(a - b) <= 1e-12;
}

}  // namespace

std::vector<double> mst_weights(const Matrix& D)
{
    const Index n = D.rows();
    std::vector<bool> in(static_cast<std::size_t>(n), false);
    std::vector<double> key(static_cast<std::size_t>(n), kInf);
    std::vector<double> out;
    if (n == 0) {
        return out;
    }
    key[0] = 0;
    for (Index step = 0; step < n; ++step) {
        Index u = -1;
        for (Index v = 0; v < n; ++v) {
            const auto sv = static_cast<std::size_t>(v);
            if (!in[sv] && (u < 0 || key[sv] < key[static_cast<std::size_t>(u)])) {
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

std::vector<PersistencePair> brute_force_h1(const Matrix& D)
{
    const int n = static_cast<int>(D.rows());
    if (n > 8) {
        throw UsageError("brute_force_h1 is limited to 8 points");
    }
    std::vector<std::pair<int, int>> edges;
    std::vector<std::vector<int>> edge_id(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n)));
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            edge_id[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = static_cast<int>(edges.size());
            edges.push_back({i, j});
        }
    }
    std::vector<double> values;
    for (auto [a, b] : edges) {
        values.push_back(D(a, b));
    }
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    const int T = static_cast<int>(values.size());
    using Bits = std::uint64_t;

    // cycle space of the graph at step t, by elimination on vertex boundaries
    auto cycles = [&](int t) {
        std::vector<std::pair<Bits, Bits>> work;
        for (std::size_t e = 0; e < edges.size(); ++e) {
            if (D(edges[e].first, edges[e].second) <= values[static_cast<std::size_t>(t)]) {
                work.push_back({(Bits{1} << edges[e].first) | (Bits{1} << edges[e].second), Bits{1} << e});
            }
        }
        for (std::size_t a = 0; a < work.size(); ++a) {
            if (work[a].first == 0) {
                continue;
            }
            const int bit = __builtin_ctzll(work[a].first);
            for (std::size_t b = a + 1; b < work.size(); ++b) {
                if (work[b].first >> bit & 1) {
                    work[b].first ^= work[a].first;
                    work[b].second ^= work[a].second;
                }
            }
        }
        std::vector<Bits> basis;
        for (const auto& w : work) {
            if (w.first == 0) {
                basis.push_back(w.second);
            }
        }
        return basis;
    };
    auto boundaries = [&](int t) {
        std::vector<Bits> out;
        for (int a = 0; a < n; ++a) {
            for (int b = a + 1; b < n; ++b) {
                for (int c = b + 1; c < n; ++c) {
                    if (std::max({D(a, b), D(a, c), D(b, c)}) <= values[static_cast<std::size_t>(t)]) {
                        const auto& ea = edge_id[static_cast<std::size_t>(a)];
                        const auto& eb = edge_id[static_cast<std::size_t>(b)];
                        out.push_back((Bits{1} << ea[static_cast<std::size_t>(b)]) |
                                      (Bits{1} << ea[static_cast<std::size_t>(c)]) |
                                      (Bits{1} << eb[static_cast<std::size_t>(c)]));
                    }
                }
            }
        }
        return out;
    };
    // beta^{i,j} = dim(Z_i + B_j) - dim(B_j)
    auto beta = [&](int i, int j) {
        if (i < 0) {
            return 0;
        }
        auto z = cycles(i);
        const auto b = boundaries(j);
        z.insert(z.end(), b.begin(), b.end());
        return gf2_rank(z) - gf2_rank(b);
    };
    std::vector<PersistencePair> out;
    for (int i = 0; i < T; ++i) {
        for (int j = i + 1; j < T; ++j) {
            const int mu = beta(i, j - 1) - beta(i, j) - beta(i - 1, j - 1) + beta(i - 1, j);
            if (mu < 0) {
                throw InvariantError("negative persistence multiplicity");
            }
            for (int k = 0; k < mu; ++k) {
                out.push_back({values[static_cast<std::size_t>(i)], values[static_cast<std::size_t>(j)]});
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const PersistencePair& a, const PersistencePair& b) {
        return a.birth != b.birth ? a.birth < b.birth : a.death < b.death;
    });
    return out;
}

CheckResult check_h0_mst(int matrices, int max_n, std::uint64_t seed)
{
    Rng rng(seed);
    std::vector<std::string> failures;
    for (int t = 0; t < matrices; ++t) {
        const int n = 2 + static_cast<int>(rng.below(static_cast<std::size_t>(max_n - 1)));
        const Matrix D = random_distances(rng, n, t % 4 == 0);
        const auto dg = vr_persistence(D, 0);
        std::vector<double> deaths;
        int infinite = 0;
        for (const auto& p : dg[0].pairs) {
            if (std::isinf(p.death)) {
                ++infinite;
            } else {
                deaths.push_back(p.death);
            }
        }
        std::sort(deaths.begin(), deaths.end());
        if (infinite != 1 || deaths != mst_weights(D)) {
            failures.push_back("matrix " + std::to_string(t) + " (n=" + std::to_string(n) + ") differs from MST");
        }
    }
    return result("H0 deaths = MST edges", failures, std::to_string(matrices) + " matrices, exact");
}

CheckResult check_h1_bruteforce(int trials, int max_n, std::uint64_t seed)
{
    Rng rng(seed);
    std::vector<std::string> failures;
    std::size_t bars = 0;
    for (int t = 0; t < trials; ++t) {
        const int n = 3 + static_cast<int>(rng.below(static_cast<std::size_t>(max_n - 2)));
        Matrix D;
        if (t % 2 == 0) {
            D = random_distances(rng, n, t % 6 == 0);
        } else {
            Matrix X(n, 2);
            for (Index i = 0; i < n; ++i) {
                X(i, 0) = rng.uniform();
                X(i, 1) = rng.uniform();
            }
            D = pairwise_distances(X);
        }
        const auto expect = brute_force_h1(D);
        bars += expect.size();
        if (vr_persistence(D, 1)[1].pairs != expect) {
            failures.push_back("trial " + std::to_string(t) + " (n=" + std::to_string(n) + ") differs");
        }
    }
    if (bars == 0) {
        failures.push_back("no H1 bars were generated, comparison is vacuous");
    }
    return result("H1 = brute-force enumeration", failures,
                  std::to_string(trials) + " complexes, " + std::to_string(bars) + " bars, exact");
}

CheckResult check_metric_examples()
{
    std::vector<std::string> f;
    auto expect = [&](bool ok, const std::string& what) {
        if (!ok) {
            f.push_back(what);
        }
    };
    expect(scaled_precision(0.0, 0.0, 10.0) == 0.0, "scaled precision at best != 0");
    expect(scaled_precision(10.0, 0.0, 10.0) == 1.0, "scaled precision at worst != 1");
    expect(near(scaled_precision(5.0, 0.0, 10.0), 0.5), "scaled precision 5 in [0,10] != 0.5");
    expect(scaled_precision(2.0, 2.0, 2.0) == 0.0, "tied run != 0");

    auto rec = [](const std::string& alg, int run, double y) { return RunRecord{"P", alg, run, y, 10}; };
    {
        const auto p = normalized_precision({rec("A", 0, 1.0), rec("B", 0, 3.0)}, {"A", "B"});
        expect(near(p.S(0, 0), 0.0) && near(p.S(0, 1), 1.0), "single run (1,3) != (0,1)");
    }
    {
        const auto p = normalized_precision(
            {rec("A", 0, 1.0), rec("B", 0, 2.0), rec("A", 1, 5.0), rec("B", 1, 4.0)}, {"A", "B"});
        expect(near(p.S(0, 0), 0.5) && near(p.S(0, 1), 0.5), "best-then-worst != 0.5");
    }
    {
        const auto p = normalized_precision({rec("A", 0, 7.0), rec("B", 0, 7.0), rec("C", 0, 7.0)}, {"A", "B", "C"});
        expect(p.S.isZero(0.0), "all-tied row != 0");
    }
    {
        PerformanceMatrix one;
        one.problems = {"P"};
        one.algorithms = {"A", "B"};
        one.S.resize(1, 2);
        one.S << 0.25, 0.75;
        const Vector d = dummy_target(one);
        expect(near(d[0], 0.25) && near(d[1], 0.75), "dummy of one problem != its row");
        PerformanceMatrix two = one;
        two.problems = {"P", "Q"};
        two.S.resize(2, 2);
        two.S << 0.0, 1.0, 1.0, 0.0;
        const Vector e = dummy_target(two);
        expect(near(e[0], 0.5) && near(e[1], 0.5), "dummy of (0,1),(1,0) != (0.5,0.5)");
        expect(select(e, 3) == std::vector<int>{0, 0, 0}, "dummy tie not broken towards index 0");
    }
    {
        Matrix p(1, 3);
        p << 0.2, 0.1, 0.9;
        expect(select(p) == std::vector<int>{1}, "argmin of (0.2,0.1,0.9) != 1");
        Matrix tie(1, 2);
        tie << 0.3, 0.3;
        expect(select(tie) == std::vector<int>{0}, "tie not broken towards index 0");
        Matrix single(1, 2);
        single << 0.3, 0.1;
        expect(near(as_performance({0}, single), 0.8), "AS of 0.3 vs best 0.1 != 0.8");
    }
    return result("metric examples", f, "scaled/normalized precision, dummy, select, AS within 1e-12");
}

CheckResult check_as_endpoints()
{
    Rng rng(11);
    std::vector<std::string> f;
    for (int trial = 0; trial < 50; ++trial) {
        const Index rows = 1 + static_cast<Index>(rng.below(20));
        const Index algs = 2 + static_cast<Index>(rng.below(5));
        Matrix S(rows, algs);
        std::vector<int> best, worst;
        for (Index r = 0; r < rows; ++r) {
            // rows span exactly {0, ..., 1}
            for (Index c = 0; c < algs; ++c) {
                S(r, c) = rng.uniform(0.01, 0.99);
            }
            const auto lo = static_cast<Index>(rng.below(static_cast<std::size_t>(algs)));
            auto hi = static_cast<Index>(rng.below(static_cast<std::size_t>(algs - 1)));
            hi += hi >= lo ? 1 : 0;
            S(r, lo) = 0.0;
            S(r, hi) = 1.0;
            best.push_back(static_cast<int>(lo));
            worst.push_back(static_cast<int>(hi));
        }
        if (as_performance(best, S) != 1.0) {
            f.push_back("true-best selector does not score 1");
        }
        if (as_performance(worst, S) != 0.0) {
            f.push_back("row-worst selector does not score 0");
        }
    }
    return result("AS endpoints", f, "best selector = 1, worst selector = 0 on 50 matrices");
}

CheckResult check_split_cardinalities()
{
    const SuiteManifest m = generate_suite(SuiteConfig::full(2));
    std::vector<std::string> f;
    auto expect = [&](bool ok, const std::string& what) {
        if (!ok) {
            f.push_back(what);
        }
    };
    expect(m.size() == 8280, "suite has " + std::to_string(m.size()) + " problems, expected 8280");
    const auto inst = instance_split(m);
    expect(inst.folds.size() == 5, "instance split fold count");
    for (const auto& fold : inst.folds) {
        expect(fold.test.size() == 1656 && fold.train.size() == 6624, "instance fold " + fold.label + " sizes");
    }
    const auto comb = problem_combination_split(m);
    expect(comb.folds.size() == 24, "problem-combination fold count");
    for (const auto& fold : comb.folds) {
        expect(fold.test.size() == 690 && fold.train.size() == 7590, "combination fold " + fold.label + " sizes");
    }
    const auto pairs = all_class_pairs(m.config.classes);
    expect(pairs.size() == 276, "class pair count " + std::to_string(pairs.size()));
    const auto prob = problem_split(m, true, 1);
    expect(prob.folds.size() == 276, "problem split over all pairs fold count");
    for (const auto& fold : prob.folds) {
        expect(fold.test.size() == 30 && fold.train.size() == 6930, "problem fold " + fold.label + " sizes");
    }
    const auto rnd = random_split(m, 5, 1);
    std::size_t covered = 0;
    for (const auto& fold : rnd.folds) {
        covered += fold.test.size();
        expect(fold.test.size() == 1656, "random fold " + fold.label + " sizes");
    }
    expect(covered == 8280, "random folds do not cover the suite");
    for (const auto* plan : {&inst, &comb, &prob, &rnd}) {
        try {
            check_plan(*plan, m);
        } catch (const std::exception& e) {
            f.push_back(e.what());
        }
    }
    return result("suite and split cardinalities", f,
                  "8280 problems; test 1656 / 690 (train 7590) / 30 (train 6930); 276 pairs");
}

CheckResult check_lhs_strata()
{
    std::vector<std::string> f;
    for (int dim = 1; dim <= 5; ++dim) {
        for (int n : {1, 7, 50 * dim, 333}) {
            for (std::uint64_t seed : {1ULL, 2ULL, 99ULL}) {
                const Matrix X = lhs_sample(dim, n, seed);
                if (X != lhs_sample(dim, n, seed)) {
                    f.push_back("lhs not deterministic");
                }
                for (Index c = 0; c < X.cols(); ++c) {
                    std::vector<int> hits(static_cast<std::size_t>(n), 0);
                    for (Index r = 0; r < X.rows(); ++r) {
                        const double u = (X(r, c) + 5.0) / 10.0 * n;
                        const int bin = std::clamp(static_cast<int>(std::floor(u)), 0, n - 1);
                        ++hits[static_cast<std::size_t>(bin)];
                    }
                    if (std::any_of(hits.begin(), hits.end(), [](int h) { return h != 1; })) {
                        f.push_back("dim " + std::to_string(dim) + ", n " + std::to_string(n) +
                                    ": stratum without exactly one point");
                    }
                }
            }
        }
    }
    return result("LHS one point per stratum", f, "dims 1-5, several n and seeds");
}

CheckResult check_forest_memorization()
{
    Rng rng(5);
    std::vector<std::string> f;
    for (int trial = 0; trial < 20; ++trial) {
        Matrix X(10, 3), Y(10, 4);
        for (Index r = 0; r < 10; ++r) {
            for (Index c = 0; c < 3; ++c) {
                X(r, c) = rng.uniform();
            }
            for (Index c = 0; c < 4; ++c) {
                Y(r, c) = rng.uniform();
            }
        }
        ForestConfig cfg;
        cfg.n_trees = 1;
        cfg.bootstrap = false;
        cfg.seed = static_cast<std::uint64_t>(trial);
        if (train_forest(X, Y, cfg).predict(X) != Y) {
            f.push_back("trial " + std::to_string(trial) + ": training targets not reproduced");
        }
    }
    return result("forest memorization", f, "1 tree, no bootstrap, 10 unique rows, exact");
}

CheckResult check_affine_invariance(int problems, std::uint64_t seed)
{
    const SuiteManifest m = generate_suite(SuiteConfig::full(2));
    InstanceCache cache;
    Rng rng(seed);
    const Matrix X = lhs_sample(2, 100, seed);
    double ela_drift = 0.0, tla_drift = 0.0;
    TlaConfig tla;
    tla.max_dim = 1;
    for (int k = 0; k < problems; ++k) {
        const auto& entry = m.entries[rng.below(m.size())];
        const Sample s = evaluate_sample(cache.affine(entry), X, seed);
        Sample t = s;
        const double a = rng.uniform(0.01, 100.0), b = rng.uniform(-100.0, 100.0);
        t.y = a * s.y.array() + b;
        // x maps only enter the topological features; the ELA families are
        // not invariant to rescaling the domain
        Sample tx = t;
        for (Index c = 0; c < 2; ++c) {
            tx.X.col(c) = rng.uniform(0.1, 10.0) * s.X.col(c).array() + rng.uniform(-5.0, 5.0);
        }
        const auto e0 = ela_all(s, true), e1 = ela_all(t, true);
        for (std::size_t i = 0; i < e0.size(); ++i) {
            ela_drift = std::max(ela_drift, std::abs(e0.values[i] - e1.values[i]));
        }
        const auto t0 = tla_features(s, tla), t1 = tla_features(tx, tla);
        for (std::size_t i = 0; i < t0.size(); ++i) {
            tla_drift = std::max(tla_drift, std::abs(t0.values[i] - t1.values[i]));
        }
    }
    std::vector<std::string> f;
    std::ostringstream d;
    d << "max drift ela_scaled " << ela_drift << ", tinytla " << tla_drift;
    if (!(ela_drift <= 1e-9) || !(tla_drift <= 1e-9)) {
        f.push_back(d.str());
    }
    return result("affine invariance", f, d.str());
}

ExperimentConfig tiny_config()
{
    ExperimentConfig cfg;
    cfg.suite.classes = {1, 2, 3, 6, 15, 21};
    cfg.suite.instances = {1, 2};
    cfg.suite.alphas = {0.25, 0.75};
    cfg.suite.dim = 2;
    cfg.sample_factor = 50;
    cfg.portfolio.runs = 2;
    cfg.portfolio.budget = 15;
    cfg.portfolio.pop_size = 8;
    cfg.feature_groups = {"ela", "tinytla", "ela+tinytla"};
    cfg.tla_max_dim = 0;
    cfg.forest.n_trees = 8;
    cfg.random_folds = 3;
    cfg.analysis.alignment_problems = 30;
    cfg.analysis.consistency_pairs = 50;
    return cfg;
}

std::vector<std::string> diff_trees(const fs::path& a, const fs::path& b)
{
    std::set<std::string> names;
    for (const auto& root : {a, b}) {
        if (!fs::exists(root)) {
            continue;
        }
        for (const auto& e : fs::recursive_directory_iterator(root)) {
            if (e.is_regular_file()) {
                names.insert(fs::relative(e.path(), root).generic_string());
            }
        }
    }
    std::vector<std::string> out;
    for (const auto& n : names) {
        const fs::path pa = a / n, pb = b / n;
        if (!fs::exists(pa) || !fs::exists(pb) || csv::read_text(pa) != csv::read_text(pb)) {
            out.push_back(n);
        }
    }
    return out;
}

CheckResult check_determinism(ExperimentConfig cfg, const fs::path& scratch, std::size_t workers)
{
    const fs::path one = scratch / "w1";
    const fs::path many = scratch / ("w" + std::to_string(workers));
    std::vector<std::string> f;
    for (const auto& [dir, w] : {std::pair{one, std::size_t{1}}, std::pair{many, workers}}) {
        cfg.output = dir;
        cfg.workers = w;
        Pipeline(cfg, true).run_all();
    }
    std::size_t files = 0;
    for (const auto& e : fs::recursive_directory_iterator(one)) {
        files += e.is_regular_file() ? 1 : 0;
    }
    for (const auto& d : diff_trees(one, many)) {
        f.push_back("differs: " + d);
    }
    return result("determinism 1 vs " + std::to_string(workers) + " workers", f,
                  std::to_string(files) + " files byte-identical");
}

std::vector<CheckResult> builtin_oracles(const fs::path& scratch, std::size_t workers)
{
    std::vector<CheckResult> out;
    out.push_back(check_h0_mst());
    out.push_back(check_h1_bruteforce());
    out.push_back(check_metric_examples());
    out.push_back(check_as_endpoints());
    out.push_back(check_split_cardinalities());
    out.push_back(check_lhs_strata());
    out.push_back(check_forest_memorization());
    out.push_back(check_affine_invariance());
    out.push_back(check_determinism(tiny_config(), scratch, std::max<std::size_t>(workers, 2)));
    return out;
}

std::vector<CheckResult> check_artifacts(const ExperimentConfig& cfg)
{
    const Pipeline pipe(cfg);
    std::vector<CheckResult> out;
    for (Stage s : all_stages()) {
        const fs::path manifest = pipe.dir(s) / "stage.json";
        if (!fs::exists(manifest)) {
            continue;
        }
        std::vector<std::string> f;
        const auto m = pipe.stage_manifest(s);
        const std::string hash = m.value("config_hash", "");
        if (hash != pipe.stage_hash(s)) {
            f.push_back("stale: stage hash " + hash + ", config expects " + pipe.stage_hash(s));
        }
        for (Stage in : stage_inputs(s)) {
            const auto it = m.at("inputs").find(stage_name(in));
            if (it == m.at("inputs").end() || *it != pipe.stage_hash(in)) {
                f.push_back("built from a different '" + stage_name(in) + "' stage");
            }
        }
        std::size_t n = 0;
        for (const auto& [name, expect] : m.at("files").items()) {
            ++n;
            const fs::path p = pipe.dir(s) / name;
            if (!fs::exists(p)) {
                f.push_back("missing " + stage_name(s) + "/" + name);
                continue;
            }
            const std::string text = csv::read_text(p);
            if (content_hash(text) != expect.get<std::string>()) {
                f.push_back("hash mismatch: " + stage_name(s) + "/" + name);
            }
            if (p.extension() == ".csv" && text.rfind("#config_hash=" + hash + "\n", 0) != 0) {
                f.push_back("missing or wrong config_hash line: " + stage_name(s) + "/" + name);
            }
        }
        out.push_back(result("artifacts " + stage_name(s), f, std::to_string(n) + " files match"));
    }
    if (out.empty()) {
        out.push_back({"artifacts", false, "no stage manifests under " + cfg.output.string()});
    }
    return out;
}

}  // namespace asbench
