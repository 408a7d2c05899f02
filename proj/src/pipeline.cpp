#include "asbench/pipeline.hpp"
#include "asbench/analysis.hpp"
#include "asbench/csv.hpp"
#include "asbench/ela.hpp"
#include "asbench/parallel.hpp"
#include "asbench/report.hpp"
#include "asbench/splits.hpp"
#include "asbench/tla.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <ostream>
#include <set>

namespace asbench {

namespace fs = std::filesystem;

namespace {

const char* kStageFile = "stage.json";
const char* kHashPrefix = "config_hash=";

std::vector<std::string> unique_parts(const std::vector<std::string>& groups)
{
    std::vector<std::string> out;
    for (const auto& g : groups) {
        for (const auto& p : group_parts(g)) {
            if (std::find(out.begin(), out.end(), p) == out.end()) {
                out.push_back(p);
            }
        }
    }
    return out;
}

std::string dump(nlohmann::json j)
{
    return j.dump(2) + "\n";
}

// Block of a tinytla feature name: "h0.pi_07" -> "h0".
std::string block_of(const std::string& name)
{
    return name.substr(0, name.find('.'));
}

}  // namespace

std::string stage_name(Stage s)
{
    switch (s) {
    case Stage::Generate: return "generate";
    case Stage::Sample: return "sample";
    case Stage::Run: return "run";
    case Stage::Features: return "features";
    case Stage::Splits: return "splits";
    case Stage::TrainEval: return "train-eval";
    case Stage::Analyze: return "analyze";
    case Stage::Report: return "report";
    }
    throw InvariantError("bad stage");
}

const std::vector<Stage>& all_stages()
{
    static const std::vector<Stage> stages{Stage::Generate, Stage::Sample,    Stage::Run,     Stage::Features,
                                           Stage::Splits,   Stage::TrainEval, Stage::Analyze, Stage::Report};
    return stages;
}

Stage stage_from_name(const std::string& name)
{
    for (Stage s : all_stages()) {
        if (stage_name(s) == name) {
            return s;
        }
    }
    throw UsageError("unknown stage '" + name + "'");
}

std::vector<Stage> stage_inputs(Stage s)
{
    switch (s) {
    case Stage::Generate: return {};
    case Stage::Sample: return {Stage::Generate};
    case Stage::Run: return {Stage::Generate};
    case Stage::Features: return {Stage::Sample};
    case Stage::Splits: return {Stage::Generate};
    case Stage::TrainEval: return {Stage::Run, Stage::Features, Stage::Splits};
    case Stage::Analyze: return {Stage::Run, Stage::Features};
    case Stage::Report: return {Stage::TrainEval, Stage::Analyze};
    }
    throw InvariantError("bad stage");
}

std::string stamp_csv(const std::string& text, const std::string& hash)
{
    return "#" + std::string(kHashPrefix) + hash + "\n" + text;
}

std::string content_hash(const std::string& bytes)
{
    return hex64(fnv1a(bytes));
}

std::string file_token(const std::string& name)
{
    std::string out;
    for (char c : name) {
        out += (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.') ? c : '_';
    }
    return out;
}

Pipeline::Pipeline(ExperimentConfig cfg, bool force, std::ostream* log)
    : cfg_(std::move(cfg)), force_(force), log_(log)
{
    validate(cfg_);
}

fs::path Pipeline::dir(Stage s) const
{
    return cfg_.output / stage_name(s);
}

std::string Pipeline::stage_hash(Stage s) const
{
    std::string key = stage_name(s) + "\n";
    switch (s) {
    case Stage::Generate:
    case Stage::Sample: key += cfg_.canonical("suite"); break;
    case Stage::Run: key += cfg_.canonical("portfolio"); break;
    case Stage::Features:
        // imports count by content, not by where the file lives
        for (const auto& g : cfg_.feature_groups) {
            key += "group=" + g + "\n";
        }
        key += "tla_max_dim=" + std::to_string(cfg_.tla_max_dim) + "\n";
        for (const auto& [g, path] : cfg_.imports) {
            key += g + "=" + content_hash(csv::read_text(path)) + "\n";
        }
        break;
    case Stage::Splits: key += cfg_.canonical("splits"); break;
    case Stage::TrainEval: key += cfg_.canonical("selector"); break;
    case Stage::Analyze: key += cfg_.canonical("analysis"); break;
    case Stage::Report: break;
    }
    for (Stage in : stage_inputs(s)) {
        key += stage_name(in) + "=" + stage_hash(in) + "\n";
    }
    return hex64(fnv1a(key));
}

nlohmann::json Pipeline::stage_manifest(Stage s) const
{
    const fs::path p = dir(s) / kStageFile;
    if (!fs::exists(p)) {
        throw DataError("stage '" + stage_name(s) + "' has not been run (no " + p.string() + ")");
    }
    try {
        return nlohmann::json::parse(csv::read_text(p));
    } catch (const nlohmann::json::exception& e) {
        throw DataError(p.string() + ": " + e.what());
    }
}

bool Pipeline::is_current(Stage s) const
{
    const fs::path p = dir(s) / kStageFile;
    if (!fs::exists(p)) {
        return false;
    }
    const auto m = stage_manifest(s);
    if (m.value("config_hash", "") != stage_hash(s)) {
        return false;
    }
    for (const auto& [name, hash] : m.at("files").items()) {
        const fs::path f = dir(s) / name;
        if (!fs::exists(f) || content_hash(csv::read_text(f)) != hash.get<std::string>()) {
            return false;
        }
    }
    return true;
}

void Pipeline::check_inputs(Stage s, std::vector<std::string>& warnings) const
{
    for (Stage in : stage_inputs(s)) {
        const auto m = stage_manifest(in);
        const std::string have = m.value("config_hash", "");
        if (have != stage_hash(in)) {
            const std::string msg = "stage '" + stage_name(in) + "' on disk was produced by a different config (hash " +
                                    have + ", expected " + stage_hash(in) + ")";
            if (!force_) {
                throw DataError(msg + "; rerun it or pass --force");
            }
            warnings.push_back(msg);
        }
    }
}

void Pipeline::commit(Stage s, const std::vector<Output>& outputs, const std::vector<std::string>& warnings)
{
    const fs::path d = dir(s);
    fs::create_directories(d);
    // drop files of an earlier version of this stage
    if (fs::exists(d / kStageFile)) {
        const auto old = stage_manifest(s);
        for (const auto& [name, hash] : old.at("files").items()) {
            fs::remove(d / name);
        }
        fs::remove(d / kStageFile);
    }
    nlohmann::json files = nlohmann::json::object();
    for (const auto& o : outputs) {
        csv::write_text(d / o.name, o.text);
        files[o.name] = content_hash(o.text);
    }
    nlohmann::json m;
    m["stage"] = stage_name(s);
    m["config_hash"] = stage_hash(s);
    nlohmann::json inputs = nlohmann::json::object();
    for (Stage in : stage_inputs(s)) {
        inputs[stage_name(in)] = stage_manifest(in).value("config_hash", "");
    }
    m["inputs"] = inputs;
    m["files"] = files;
    m["warnings"] = warnings;
    csv::write_text(d / kStageFile, dump(m));
}

void Pipeline::say(const std::string& line) const
{
    if (log_) {
        *log_ << line << std::endl;
    }
}

StageOutcome Pipeline::run(Stage s)
{
    StageOutcome out;
    out.stage = s;
    if (is_current(s)) {
        out.cached = true;
        for (const auto& [name, hash] : stage_manifest(s).at("files").items()) {
            out.files.push_back(name);
        }
        say(stage_name(s) + ": up to date");
        return out;
    }
    if (fs::exists(dir(s) / kStageFile)) {
        const std::string have = stage_manifest(s).value("config_hash", "");
        if (have != stage_hash(s) && !force_) {
            throw DataError("stage '" + stage_name(s) + "' in " + dir(s).string() +
                            " was produced by a different config (hash " + have + ", expected " + stage_hash(s) +
                            "); use another output directory or pass --force");
        }
    }
    check_inputs(s, out.warnings);
    say(stage_name(s) + ": running");

    std::vector<Output> outputs;
    switch (s) {
    case Stage::Generate: outputs = do_generate(); break;
    case Stage::Sample: outputs = do_sample(); break;
    case Stage::Run: outputs = do_run(); break;
    case Stage::Features: outputs = do_features(); break;
    case Stage::Splits: outputs = do_splits(); break;
    case Stage::TrainEval: outputs = do_train_eval(out.warnings); break;
    case Stage::Analyze: outputs = do_analyze(); break;
    case Stage::Report: outputs = do_report(); break;
    }
    for (const auto& w : out.warnings) {
        say(stage_name(s) + ": warning: " + w);
    }
    commit(s, outputs, out.warnings);
    for (const auto& o : outputs) {
        out.files.push_back(o.name);
    }
    return out;
}

std::vector<StageOutcome> Pipeline::run_all()
{
    std::vector<StageOutcome> out;
    for (Stage s : all_stages()) {
        out.push_back(run(s));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Loaders

SuiteManifest Pipeline::load_manifest() const
{
    const fs::path p = dir(Stage::Generate) / "manifest.json";
    try {
        return manifest_from_json(nlohmann::json::parse(csv::read_text(p)));
    } catch (const nlohmann::json::exception& e) {
        throw DataError(p.string() + ": " + e.what());
    }
}

std::vector<Sample> Pipeline::load_samples() const
{
    const fs::path dp = dir(Stage::Sample) / "design.csv";
    const fs::path vp = dir(Stage::Sample) / "values.csv";
    const auto design = csv::read(dp);
    Matrix X(static_cast<Index>(design.rows.size()), static_cast<Index>(design.header.size()));
    for (std::size_t r = 0; r < design.rows.size(); ++r) {
        for (std::size_t c = 0; c < design.header.size(); ++c) {
            X(static_cast<Index>(r), static_cast<Index>(c)) = csv::to_double(design.rows[r][c], r, c, dp.string());
        }
    }
    const auto values = csv::read(vp);
    if (values.header.size() != design.rows.size() + 1) {
        throw DataError(vp.string() + ": expected " + std::to_string(design.rows.size()) + " values per problem");
    }
    std::vector<Sample> out;
    out.reserve(values.rows.size());
    for (std::size_t r = 0; r < values.rows.size(); ++r) {
        Sample s;
        s.problem_id = values.rows[r][0];
        s.X = X;
        s.y.resize(X.rows());
        for (Index k = 0; k < X.rows(); ++k) {
            s.y[k] = csv::to_double(values.rows[r][static_cast<std::size_t>(k) + 1], r, static_cast<std::size_t>(k) + 1,
                                    vp.string());
        }
        s.sampler_seed = cfg_.sample_seed;
        out.push_back(std::move(s));
    }
    return out;
}

PerformanceMatrix Pipeline::load_performance(const std::string& portfolio) const
{
    const fs::path p = dir(Stage::Run) / ("performance_" + file_token(portfolio) + ".csv");
    return performance_from_csv(csv::read_text(p), p.string());
}

FeatureMatrix Pipeline::load_group(const std::string& group) const
{
    const auto parts = group_parts(group);
    std::vector<FeatureMatrix> blocks;
    for (const auto& part : parts) {
        const fs::path p = dir(Stage::Features) / (file_token(part) + ".csv");
        const auto prov = cfg_.imports.count(part) ? Provenance::Imported : Provenance::Computed;
        blocks.push_back(features_from_csv(csv::read_text(p), part, p.string(), prov));
    }
    return blocks.size() == 1 ? blocks.front() : concat_groups(blocks);
}

std::vector<FoldResult> Pipeline::load_results() const
{
    const fs::path p = dir(Stage::TrainEval) / "results.csv";
    return results_from_csv(csv::read_text(p), p.string());
}

// ---------------------------------------------------------------------------
// Stages

std::vector<Pipeline::Output> Pipeline::do_generate()
{
    const SuiteManifest m = generate_suite(cfg_.suite);
    if (m.size() == 0) {
        throw UsageError("the configured suite is empty (need at least two classes)");
    }
    auto j = to_json(m);
    j["pipeline_hash"] = stage_hash(Stage::Generate);
    say("generate: " + std::to_string(m.size()) + " problems");
    return {{"manifest.json", dump(j)}};
}

std::vector<Pipeline::Output> Pipeline::do_sample()
{
    const SuiteManifest m = load_manifest();
    const int dim = cfg_.suite.dim;
    const int n = cfg_.sample_size();
    const Matrix X = lhs_sample(dim, n, cfg_.sample_seed);

    std::vector<Vector> ys(m.size());
    InstanceCache cache;
    parallel_for(m.size(), cfg_.workers, [&](std::size_t i) {
        ys[i] = evaluate_sample(cache.affine(m.entries[i]), X, cfg_.sample_seed).y;
    });

    std::vector<std::string> xh;
    for (int d = 1; d <= dim; ++d) {
        xh.push_back("x" + std::to_string(d));
    }
    csv::Writer design(xh);
    for (Index r = 0; r < X.rows(); ++r) {
        std::vector<std::string> row;
        for (Index c = 0; c < X.cols(); ++c) {
            row.push_back(format_double(X(r, c)));
        }
        design.row(row);
    }
    std::vector<std::string> yh{"problem_id"};
    for (int k = 1; k <= n; ++k) {
        char buf[16];
        std::snprintf(buf, sizeof(buf), "y%03d", k);
        yh.push_back(buf);
    }
    csv::Writer values(yh);
    for (std::size_t i = 0; i < m.size(); ++i) {
        std::vector<std::string> row{m.entries[i].id};
        for (Index k = 0; k < ys[i].size(); ++k) {
            row.push_back(format_double(ys[i][k]));
        }
        values.row(row);
    }
    nlohmann::json meta;
    meta["n"] = n;
    meta["dim"] = dim;
    meta["sampler_seed"] = cfg_.sample_seed;
    meta["problems"] = m.size();
    meta["pipeline_hash"] = stage_hash(Stage::Sample);
    return {{"design.csv", stamp(Stage::Sample, design.str())},
            {"values.csv", stamp(Stage::Sample, values.str())},
            {"sample.json", dump(meta)}};
}

std::vector<Pipeline::Output> Pipeline::do_run()
{
    const SuiteManifest m = load_manifest();
    Portfolio everyone;
    everyone.name = "union";
    std::set<std::string> seen;
    for (const auto& name : cfg_.portfolios) {
        for (const auto& member : make_portfolio(name).members) {
            if (seen.insert(algorithm_name(member)).second) {
                everyone.members.push_back(member);
            }
        }
    }
    std::vector<std::vector<RunRecord>> per_problem(m.size());
    InstanceCache cache;
    parallel_for(m.size(), cfg_.workers, [&](std::size_t i) {
        const AffineInstance a = cache.affine(m.entries[i]);
        Problem p{a.id, a.dim(), [a](const Eigen::Ref<const Vector>& x) { return eval_affine(a, x); }};
        per_problem[i] = run_portfolio(p, everyone, cfg_.portfolio);
    });
    std::vector<RunRecord> records;
    for (auto& r : per_problem) {
        records.insert(records.end(), r.begin(), r.end());
    }
    std::vector<Output> out{{"runs.csv", stamp(Stage::Run, runs_to_csv(records))}};
    for (const auto& name : cfg_.portfolios) {
        const auto perf = normalized_precision(records, make_portfolio(name).member_names());
        out.push_back({"performance_" + file_token(name) + ".csv", stamp(Stage::Run, performance_to_csv(perf))});
    }
    return out;
}

std::vector<Pipeline::Output> Pipeline::do_features()
{
    const auto samples = load_samples();
    std::vector<std::string> ids;
    for (const auto& s : samples) {
        ids.push_back(s.problem_id);
    }
    FeatureRegistry registry;
    std::vector<Output> out;
    for (const auto& g : computed_groups(cfg_)) {
        std::vector<FeatureVector> rows(samples.size());
        TlaConfig tla;
        tla.max_dim = cfg_.tla_max_dim;
        parallel_for(samples.size(), cfg_.workers, [&](std::size_t i) {
            if (g == "tinytla") {
                rows[i] = tla_features(samples[i], tla);
            } else {
                rows[i] = ela_all(samples[i], g == "ela_scaled");
            }
        });
        auto fm = from_vectors(g, ids, rows);
        fm.source_hash = content_hash(features_to_csv(fm));
        out.push_back({g + ".csv", stamp(Stage::Features, features_to_csv(fm))});
        say("features: " + g + " (" + std::to_string(fm.width()) + " features)");
        registry.add(std::move(fm));
    }
    for (const auto& [g, path] : cfg_.imports) {
        auto fm = import_features(path, g, ids);
        out.push_back({file_token(g) + ".csv", stamp(Stage::Features, features_to_csv(fm))});
        say("features: imported " + g + " (" + std::to_string(fm.width()) + " features)");
        registry.add(std::move(fm));
    }
    nlohmann::json manifest;
    manifest["groups"] = registry.manifest();
    manifest["pipeline_hash"] = stage_hash(Stage::Features);
    out.push_back({"manifest.json", dump(manifest)});
    return out;
}

std::vector<Pipeline::Output> Pipeline::do_splits()
{
    const SuiteManifest m = load_manifest();
    std::vector<Output> out;
    for (Protocol p : cfg_.protocols) {
        const SplitPlan plan = make_split(m, p, cfg_.split_seed, cfg_.random_folds, cfg_.all_pairs);
        check_plan(plan, m);
        auto j = to_json(plan);
        j["pipeline_hash"] = stage_hash(Stage::Splits);
        out.push_back({protocol_name(p) + ".json", dump(j)});
        say("splits: " + protocol_name(p) + " (" + std::to_string(plan.folds.size()) + " folds)");
    }
    return out;
}

std::vector<Pipeline::Output> Pipeline::do_train_eval(std::vector<std::string>& warnings)
{
    std::vector<SplitPlan> plans;
    for (Protocol p : cfg_.protocols) {
        const fs::path path = dir(Stage::Splits) / (protocol_name(p) + ".json");
        try {
            plans.push_back(plan_from_json(nlohmann::json::parse(csv::read_text(path))));
        } catch (const nlohmann::json::exception& e) {
            throw DataError(path.string() + ": " + e.what());
        }
    }
    ForestConfig forest = cfg_.forest;
    forest.workers = cfg_.workers;

    std::vector<FoldResult> results;
    for (const auto& portfolio : cfg_.portfolios) {
        const auto perf = load_performance(portfolio);
        for (const auto& group : cfg_.feature_groups) {
            const auto features = load_group(group);
            for (const auto& plan : plans) {
                say("train-eval: " + portfolio + " / " + group + " / " + protocol_name(plan.protocol));
                auto eval = evaluate_plan(features, plan, perf, forest, portfolio);
                for (const auto& w : eval.warnings) {
                    warnings.push_back(portfolio + " / " + group + " / " + protocol_name(plan.protocol) + ": " + w);
                }
                results.insert(results.end(), eval.folds.begin(), eval.folds.end());
            }
        }
    }
    return {{"results.csv", stamp(Stage::TrainEval, results_to_csv(results))},
            {"importance.csv", stamp(Stage::TrainEval, importance_to_csv(results))}};
}

std::vector<Pipeline::Output> Pipeline::do_analyze()
{
    const auto& a = cfg_.analysis;
    const auto groups = unique_parts(cfg_.feature_groups);
    std::vector<FeatureMatrix> blocks;
    for (const auto& g : groups) {
        blocks.push_back(load_group(g));
    }
    std::vector<PerformanceMatrix> perfs;
    for (const auto& p : cfg_.portfolios) {
        perfs.push_back(load_performance(p));
    }
    const std::string h = stage_hash(Stage::Analyze);
    std::vector<Output> out;

    if (a.correlation) {
        for (const auto& fm : blocks) {
            FeatureMatrix view = fm;
            if (fm.group == "tinytla") {
                // one PCA per homology block, as done for the clustermap only
                std::map<std::string, std::vector<Index>> cols;
                for (Index c = 0; c < fm.width(); ++c) {
                    cols[block_of(fm.names[static_cast<std::size_t>(c)])].push_back(c);
                }
                nlohmann::json pca = nlohmann::json::array();
                view.names.clear();
                std::vector<Matrix> parts;
                for (const auto& [block, idx] : cols) {
                    Matrix data(fm.height(), static_cast<Index>(idx.size()));
                    for (std::size_t k = 0; k < idx.size(); ++k) {
                        data.col(static_cast<Index>(k)) = fm.values.col(idx[k]);
                    }
                    const int dims = std::min<int>(a.pca_dims, static_cast<int>(fm.height()));
                    const auto r = pca_reduce(data, dims);
                    for (Index k = 0; k < r.projection.cols(); ++k) {
                        char name[32];
                        std::snprintf(name, sizeof(name), "%s.pc%02d", block.c_str(), static_cast<int>(k + 1));
                        view.names.push_back(name);
                    }
                    parts.push_back(r.projection);
                    pca.push_back({{"block", block},
                                   {"rank", r.rank},
                                   {"explained", r.explained},
                                   {"shares", std::vector<double>(r.shares.data(), r.shares.data() + r.shares.size())},
                                   {"note", r.note}});
                }
                Index width = 0;
                for (const auto& p : parts) {
                    width += p.cols();
                }
                view.values.resize(fm.height(), width);
                Index at = 0;
                for (const auto& p : parts) {
                    view.values.middleCols(at, p.cols()) = p;
                    at += p.cols();
                }
                out.push_back({"pca_" + file_token(fm.group) + ".json",
                               dump({{"blocks", pca}, {"pipeline_hash", h}})});
            }
            const auto corr = spearman_matrix(view, cfg_.workers);
            std::vector<std::string> ordered;
            for (int k : corr.order) {
                ordered.push_back(corr.names[static_cast<std::size_t>(k)]);
            }
            out.push_back({"correlation_" + file_token(fm.group) + ".csv", stamp_csv(correlation_to_csv(corr), h)});
            out.push_back({"cluster_" + file_token(fm.group) + ".json",
                           dump({{"order", ordered}, {"pipeline_hash", h}})});
        }
    }
    if (a.consistency) {
        const auto pairs = cosine_consistency(blocks, a.consistency_pairs, a.seed);
        out.push_back({"pairs.csv", stamp_csv(pairs_to_csv(pairs, groups), h)});
    }
    for (std::size_t pi = 0; pi < perfs.size(); ++pi) {
        const auto& perf = perfs[pi];
        const std::string pt = file_token(cfg_.portfolios[pi]);
        for (const auto& fm : blocks) {
            const std::string gt = file_token(fm.group);
            if (a.alignment) {
                const auto al = alignment(fm, perf, a.alignment_problems, a.seed);
                out.push_back({"alignment_" + gt + "_" + pt + ".csv", stamp_csv(alignment_to_csv(al), h)});
                out.push_back({"curve_" + gt + "_" + pt + ".csv", stamp_csv(curve_to_csv(al.curve), h)});
            }
            if (a.distributions) {
                std::vector<std::string> header{"feature"};
                header.insert(header.end(), perf.algorithms.begin(), perf.algorithms.end());
                std::vector<Vector> rho(perf.algorithms.size());
                parallel_for(perf.algorithms.size(), cfg_.workers,
                             [&](std::size_t k) { rho[k] = per_feature_perf_corr(fm, perf, perf.algorithms[k]); });
                csv::Writer w(header);
                for (Index c = 0; c < fm.width(); ++c) {
                    std::vector<std::string> row{fm.names[static_cast<std::size_t>(c)]};
                    for (const auto& r : rho) {
                        row.push_back(format_double(r[c]));
                    }
                    w.row(row);
                }
                out.push_back({"perf_corr_" + gt + "_" + pt + ".csv", stamp_csv(w.str(), h)});
            }
        }
    }
    return out;
}

std::vector<Pipeline::Output> Pipeline::do_report()
{
    const auto results = load_results();
    const auto rows = summarize(results);
    const std::string h = stage_hash(Stage::Report);
    std::vector<Output> out{{"summary.csv", stamp_csv(summary_to_csv(rows), h)}};

    for (const auto& portfolio : cfg_.portfolios) {
        // model and dummy box per (group, protocol)
        std::vector<BoxSeries> boxes;
        double lo = 1.0;
        for (const auto& group : cfg_.feature_groups) {
            for (Protocol p : cfg_.protocols) {
                BoxSeries model{group + " / " + protocol_name(p), {}}, dummy{"", {}};
                for (const auto& r : results) {
                    if (r.portfolio == portfolio && r.feature_group == group && r.protocol == p) {
                        model.values.push_back(r.model_as);
                        dummy.values.push_back(r.dummy_as);
                        lo = std::min({lo, r.model_as, r.dummy_as});
                    }
                }
                boxes.push_back(model);
                boxes.push_back(dummy);
            }
        }
        lo = std::floor(lo * 20.0) / 20.0;
        out.push_back({"as_" + file_token(portfolio) + ".svg",
                       boxplot_svg("AS performance, " + portfolio, boxes, 2, {"model", "dummy"}, lo, 1.0)});
    }

    const auto& a = cfg_.analysis;
    for (const auto& g : unique_parts(cfg_.feature_groups)) {
        const std::string gt = file_token(g);
        if (a.correlation) {
            const fs::path p = dir(Stage::Analyze) / ("correlation_" + gt + ".csv");
            const auto t = csv::read(p);
            CorrelationMatrix c;
            c.names.assign(t.header.begin() + 1, t.header.end());
            c.rho.resize(static_cast<Index>(t.rows.size()), static_cast<Index>(t.rows.size()));
            for (std::size_t r = 0; r < t.rows.size(); ++r) {
                c.order.push_back(static_cast<int>(r));
                for (std::size_t k = 1; k < t.header.size(); ++k) {
                    c.rho(static_cast<Index>(r), static_cast<Index>(k - 1)) =
                        csv::to_double(t.rows[r][k], r, k, p.string());
                }
            }
            out.push_back({"heatmap_" + gt + ".svg", heatmap_svg("Spearman correlation, " + g, c)});
        }
        if (a.alignment) {
            for (const auto& portfolio : cfg_.portfolios) {
                const std::string pt = file_token(portfolio);
                const fs::path p = dir(Stage::Analyze) / ("curve_" + gt + "_" + pt + ".csv");
                const auto t = csv::read(p);
                std::vector<CurvePoint> curve;
                for (std::size_t r = 0; r < t.rows.size(); ++r) {
                    CurvePoint cp;
                    cp.feature_sim = csv::to_double(t.rows[r][0], r, 0, p.string());
                    cp.mean = csv::to_double(t.rows[r][1], r, 1, p.string());
                    cp.median = csv::to_double(t.rows[r][2], r, 2, p.string());
                    curve.push_back(cp);
                }
                out.push_back({"curve_" + gt + "_" + pt + ".svg",
                               curve_svg("Performance vs feature similarity, " + g + ", " + portfolio, curve)});
            }
        }
    }
    return out;
}

}  // namespace asbench
