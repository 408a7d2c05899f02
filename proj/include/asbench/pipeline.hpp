#ifndef ASBENCH_PIPELINE_HPP
#define ASBENCH_PIPELINE_HPP

#include "asbench/config.hpp"
#include "asbench/featurestore.hpp"
#include "asbench/perf.hpp"
#include "asbench/selector.hpp"

#include <filesystem>
#include <iosfwd>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

namespace asbench {

enum class Stage { Generate, Sample, Run, Features, Splits, TrainEval, Analyze, Report };

std::string stage_name(Stage s);
/// Throws UsageError for an unknown name.
Stage stage_from_name(const std::string& name);
const std::vector<Stage>& all_stages();
std::vector<Stage> stage_inputs(Stage s);

struct StageOutcome {
    Stage stage = Stage::Generate;
    bool cached = false;
    std::vector<std::string> files;
    std::vector<std::string> warnings;
};

/// Prefixes a CSV text with its `#config_hash=` line.
std::string stamp_csv(const std::string& text, const std::string& hash);
/// Content hash used in stage manifests.
std::string content_hash(const std::string& bytes);

/// Stage-cached experiment. Each stage writes into `<output>/<stage>/` along
/// with a `stage.json` that records its hash, its inputs' hashes and a content
/// hash per file. A stage whose hash and files match is not recomputed; a
/// stage directory or input written under a different config is refused
/// unless `force` is set.
class Pipeline {
public:
    explicit Pipeline(ExperimentConfig cfg, bool force = false, std::ostream* log = nullptr);

    const ExperimentConfig& config() const { return cfg_; }
    std::filesystem::path dir(Stage s) const;
    std::string stage_hash(Stage s) const;

    StageOutcome run(Stage s);
    /// Every stage in order.
    std::vector<StageOutcome> run_all();

    /// Manifest of a finished stage; throws DataError when absent.
    nlohmann::json stage_manifest(Stage s) const;

    // Loaders for finished stages.
    SuiteManifest load_manifest() const;
    std::vector<Sample> load_samples() const;
    PerformanceMatrix load_performance(const std::string& portfolio) const;
    FeatureMatrix load_group(const std::string& group) const;
    std::vector<FoldResult> load_results() const;

private:
    struct Output {
        std::string name;
        std::string text;
    };

    void check_inputs(Stage s, std::vector<std::string>& warnings) const;
    bool is_current(Stage s) const;
    void commit(Stage s, const std::vector<Output>& outputs, const std::vector<std::string>& warnings);
    std::string stamp(Stage s, const std::string& csv_text) const { return stamp_csv(csv_text, stage_hash(s)); }

    std::vector<Output> do_generate();
    std::vector<Output> do_sample();
    std::vector<Output> do_run();
    std::vector<Output> do_features();
    std::vector<Output> do_splits();
    std::vector<Output> do_train_eval(std::vector<std::string>& warnings);
    std::vector<Output> do_analyze();
    std::vector<Output> do_report();

    void say(const std::string& line) const;

    ExperimentConfig cfg_;
    bool force_;
    std::ostream* log_;
};

/// File-name-safe form of a portfolio or group name.
std::string file_token(const std::string& name);

}  // namespace asbench

#endif
