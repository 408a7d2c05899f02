#include <doctest.h>

#include "asbench/config.hpp"
#include "asbench/csv.hpp"
#include "asbench/pipeline.hpp"
#include "asbench/report.hpp"
#include "asbench/stats.hpp"
#include "asbench/verify.hpp"

#include <algorithm>
#include <filesystem>
#include <map>

using namespace asbench;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name)
{
    const fs::path p = fs::temp_directory_path() / "asbench-test" / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

ExperimentConfig small(const fs::path& out)
{
    ExperimentConfig cfg = tiny_config();
    cfg.feature_groups = {"ela"};
    cfg.protocols = {Protocol::Instance, Protocol::Problem};
    cfg.analysis.alignment = false;
    cfg.output = out;
    return cfg;
}

}  // namespace

TEST_CASE("config parsing")
{
    const std::string text = R"(
; comment
[suite]
classes = 1-3, 7
instances = 2
alphas = 0.5
dim = 3

[portfolio]
names = 5DE, 2DE+2PSO
runs = 2

[selector]
trees = 7
bootstrap = false

[output]
dir = results
workers = 3
)";
    const auto cfg = parse_config(text, "/base");
    CHECK(cfg.suite.classes == std::vector<int>{1, 2, 3, 7});
    CHECK(cfg.suite.instances == std::vector<int>{2});
    CHECK(cfg.suite.dim == 3);
    CHECK(cfg.sample_size() == 150);
    CHECK(cfg.portfolios == std::vector<std::string>{"5DE", "2DE+2PSO"});
    CHECK(cfg.forest.n_trees == 7);
    CHECK_FALSE(cfg.forest.bootstrap);
    CHECK(cfg.output == fs::path("/base/results"));
    CHECK(cfg.workers == 3);

    // canonical text round-trips
    const auto again = parse_config(cfg.to_ini());
    CHECK(again.to_ini() == cfg.to_ini());

    CHECK(parse_int_list("1-3,5,8-9") == std::vector<int>{1, 2, 3, 5, 8, 9});
    CHECK_THROWS_AS(parse_config("[suite]\ncolour = red\n"), UsageError);
    CHECK_THROWS_AS(parse_config("[nowhere]\nx = 1\n"), UsageError);
    CHECK_THROWS_AS(parse_config("[suite]\ndim = two\n"), UsageError);
    CHECK_THROWS_AS(parse_config("[portfolio]\nnames = 3DE\n"), UsageError);
    CHECK_THROWS_AS(parse_config("[features]\ngroups = mystery\n"), UsageError);
    CHECK_THROWS_AS(parse_config("[features]\ngroups = ext\nimport.ext = /no/such/file.csv\n"), UsageError);
    CHECK_THROWS_AS(parse_config("[suite]\nsample_factor = 10\n"), UsageError);
    CHECK(group_parts("ela+tinytla") == std::vector<std::string>{"ela", "tinytla"});
}

TEST_CASE("stage hashes ignore workers and output")
{
    ExperimentConfig a = small("/tmp/a");
    ExperimentConfig b = a;
    b.output = "/tmp/b";
    b.workers = 8;
    const Pipeline pa(a), pb(b);
    for (Stage s : all_stages()) {
        CHECK(pa.stage_hash(s) == pb.stage_hash(s));
    }
    // a selector change reaches train-eval and report only
    b.forest.seed = 99;
    const Pipeline pc(b);
    for (Stage s : all_stages()) {
        const bool affected = s == Stage::TrainEval || s == Stage::Report;
        CHECK((pa.stage_hash(s) != pc.stage_hash(s)) == affected);
    }
}

TEST_CASE("summary rows")
{
    std::vector<FoldResult> rs;
    const double model[] = {0.9, 0.7, 0.8};
    const double dummy[] = {0.6, 0.75, 0.7};
    for (int k = 0; k < 3; ++k) {
        FoldResult r;
        r.portfolio = "P";
        r.feature_group = "g";
        r.protocol = Protocol::Random;
        r.fold = "r" + std::to_string(k);
        r.model_as = model[k];
        r.dummy_as = dummy[k];
        rs.push_back(r);
    }
    const auto rows = summarize(rs);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].folds == 3);
    CHECK(rows[0].median_model == 0.8);
    CHECK(rows[0].median_dummy == 0.7);
    CHECK(rows[0].delta == doctest::Approx(0.1));
    // per-fold differences 0.3, -0.05, 0.1
    CHECK(rows[0].paired_delta == doctest::Approx(0.1));
    const auto svg = boxplot_svg("t", {{"a", {0.1, 0.2}}, {"b", {}}}, 2, {"x", "y"}, 0.0, 1.0);
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
}

TEST_CASE("pipeline end to end")
{
    const fs::path out = scratch("e2e");
    const ExperimentConfig cfg = small(out);
    Pipeline pipe(cfg);

    CHECK_THROWS_AS(pipe.run(Stage::Sample), DataError);  // generate has not run

    const auto first = pipe.run_all();
    for (const auto& r : first) {
        CHECK_FALSE(r.cached);
    }
    const auto manifest = pipe.load_manifest();
    CHECK(manifest.size() == expected_suite_size(6, 2, 2));

    // every CSV carries the hash of the stage that wrote it
    for (Stage s : all_stages()) {
        const std::string hash = pipe.stage_hash(s);
        for (const auto& e : fs::directory_iterator(pipe.dir(s))) {
            if (e.path().extension() == ".csv") {
                CHECK(csv::read_text(e.path()).rfind("#config_hash=" + hash + "\n", 0) == 0);
            }
        }
    }

    // one results row per fold of every protocol
    const auto results = pipe.load_results();
    std::map<Protocol, std::size_t> per_protocol;
    for (const auto& r : results) {
        ++per_protocol[r.protocol];
        CHECK(r.model_as >= 0.0);
        CHECK(r.model_as <= 1.0);
    }
    CHECK(per_protocol[Protocol::Instance] == 2);
    CHECK(per_protocol[Protocol::Problem] == 3);

    // report deltas recomputed from the results table
    const auto summary = csv::read(pipe.dir(Stage::Report) / "summary.csv");
    REQUIRE(summary.rows.size() == 2);
    for (const auto& row : summary.rows) {
        std::vector<double> m, d;
        for (const auto& r : results) {
            if (protocol_name(r.protocol) == row[summary.column("protocol")]) {
                m.push_back(r.model_as);
                d.push_back(r.dummy_as);
            }
        }
        const double delta = std::stod(row[summary.column("delta")]);
        CHECK(delta == doctest::Approx(median(m) - median(d)).epsilon(1e-12));
    }
    CHECK(fs::exists(pipe.dir(Stage::Report) / "as_2DE_2PSO.svg"));
    CHECK(fs::exists(pipe.dir(Stage::Report) / "heatmap_ela.svg"));

    // a second run is a no-op
    const auto stamp = fs::last_write_time(pipe.dir(Stage::TrainEval) / "results.csv");
    for (const auto& r : Pipeline(cfg).run_all()) {
        CHECK(r.cached);
    }
    CHECK(fs::last_write_time(pipe.dir(Stage::TrainEval) / "results.csv") == stamp);

    // artifacts check clean, then flags a corrupted feature file
    for (const auto& c : check_artifacts(cfg)) {
        CHECK_MESSAGE(c.pass, c.name << ": " << c.detail);
    }
    {
        std::string text = csv::read_text(pipe.dir(Stage::Features) / "ela.csv");
        text[text.size() / 2] = text[text.size() / 2] == '1' ? '2' : '1';
        csv::write_text(pipe.dir(Stage::Features) / "ela.csv", text);
    }
    bool flagged = false;
    for (const auto& c : check_artifacts(cfg)) {
        if (c.name == "artifacts features") {
            flagged = !c.pass && c.detail.find("hash mismatch: features/ela.csv") != std::string::npos;
        }
    }
    CHECK(flagged);
    // the damaged stage is recomputed on the next run
    CHECK_FALSE(Pipeline(cfg).run(Stage::Features).cached);

    // a different selector config refuses to overwrite unless forced
    ExperimentConfig other = cfg;
    other.forest.seed = 42;
    CHECK_THROWS_AS(Pipeline(other).run(Stage::TrainEval), DataError);
    CHECK_FALSE(Pipeline(other, true).run(Stage::TrainEval).cached);
    // and the report built on the old results is now stale
    CHECK_THROWS_AS(Pipeline(other).run(Stage::Report), DataError);
}

TEST_CASE("imported feature groups")
{
    const fs::path out = scratch("import");
    ExperimentConfig cfg = small(out / "run");
    cfg.protocols = {Protocol::Instance};
    cfg.analysis = AnalysisConfig{};
    cfg.analysis.alignment_problems = 20;
    cfg.analysis.consistency_pairs = 20;

    const auto ids = generate_suite(cfg.suite);
    csv::Writer w({"problem_id", "a", "b"});
    for (std::size_t i = 0; i < ids.size(); ++i) {
        w.row({ids.entries[i].id, std::to_string(i % 7), std::to_string((i * 13) % 5)});
    }
    w.row({"not_in_suite", "1", "2"});
    w.save(out / "ext.csv");

    cfg.imports["ext"] = out / "ext.csv";
    cfg.feature_groups = {"ext", "ela+ext"};
    Pipeline pipe(cfg);
    pipe.run_all();
    const auto g = pipe.load_group("ela+ext");
    CHECK(g.group == "ela+ext");
    CHECK(g.names.back() == "ext.b");
    CHECK(pipe.load_group("ext").provenance == Provenance::Imported);

    // editing the imported file invalidates the features stage
    const std::string before = pipe.stage_hash(Stage::Features);
    csv::write_text(out / "ext.csv", csv::read_text(out / "ext.csv") + "\n");
    CHECK(Pipeline(cfg).stage_hash(Stage::Features) != before);
}
