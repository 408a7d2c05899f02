// Command-line driver for the stage-cached experiment pipeline.

#include "asbench/config.hpp"
#include "asbench/pipeline.hpp"
#include "asbench/verify.hpp"
#include "asbench/csv.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

using namespace asbench;
namespace fs = std::filesystem;

namespace {

enum Exit { kOk = 0, kUsage = 1, kData = 2, kVerify = 3 };

struct Options {
    std::string config;
    std::string out;
    std::size_t workers = 0;
    bool force = false;
    bool quiet = false;
};

ExperimentConfig load(const Options& o)
{
    if (o.config.empty()) {
        throw UsageError("--config is required");
    }
    ExperimentConfig cfg = load_config(o.config);
    if (!o.out.empty()) {
        cfg.output = o.out;
    }
    if (o.workers > 0) {
        cfg.workers = o.workers;
    }
    return cfg;
}

int print_checks(const std::vector<CheckResult>& checks)
{
    int failed = 0;
    for (const auto& c : checks) {
        std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << c.detail << "\n";
        failed += c.pass ? 0 : 1;
    }
    std::cout << (failed ? std::to_string(failed) + " check(s) failed" : "all checks passed") << std::endl;
    return failed ? kVerify : kOk;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Algorithm-selection benchmark on affine recombinations of BBOB problems"};
    app.require_subcommand(1);
    Options o;

    auto add_common = [&](CLI::App* cmd, bool need_config) {
        auto* c = cmd->add_option("-c,--config", o.config, "experiment config (INI)");
        if (need_config) {
            c->required()->check(CLI::ExistingFile);
        }
        cmd->add_option("-o,--out", o.out, "output directory, overrides [output] dir");
        cmd->add_option("-j,--workers", o.workers, "worker threads, overrides [output] workers");
        cmd->add_flag("-f,--force", o.force, "overwrite or reuse artifacts from a different config");
        cmd->add_flag("-q,--quiet", o.quiet, "no progress output");
    };

    std::vector<std::pair<CLI::App*, Stage>> stage_cmds;
    for (Stage s : all_stages()) {
        auto* cmd = app.add_subcommand(stage_name(s), "run the " + stage_name(s) + " stage");
        add_common(cmd, true);
        stage_cmds.push_back({cmd, s});
    }
    auto* all = app.add_subcommand("all", "run every stage in order, reusing cached ones");
    add_common(all, true);

    auto* verify = app.add_subcommand("verify", "run the built-in oracle suites; with --config also check artifacts");
    add_common(verify, false);
    std::string scratch;
    bool skip_oracles = false;
    verify->add_option("--scratch", scratch, "scratch directory for the determinism replay");
    verify->add_flag("--artifacts-only", skip_oracles, "only check the artifacts of --config");

    auto* init = app.add_subcommand("init", "write a config file with every key at its default");
    std::string init_path;
    init->add_option("path", init_path, "where to write")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kUsage;
    }

    try {
        if (*init) {
            if (fs::exists(init_path)) {
                throw UsageError(init_path + " exists; not overwriting");
            }
            csv::write_text(init_path, ExperimentConfig{}.to_ini());
            return kOk;
        }
        if (*verify) {
            std::vector<CheckResult> checks;
            if (!skip_oracles) {
                const fs::path dir = scratch.empty() ? fs::temp_directory_path() / "asbench-verify" : fs::path(scratch);
                checks = builtin_oracles(dir, o.workers > 0 ? o.workers : 4);
            }
            if (!o.config.empty()) {
                const auto art = check_artifacts(load(o));
                checks.insert(checks.end(), art.begin(), art.end());
            } else if (skip_oracles) {
                throw UsageError("--artifacts-only needs --config");
            }
            return print_checks(checks);
        }
        Pipeline pipe(load(o), o.force, o.quiet ? nullptr : &std::cerr);
        if (*all) {
            pipe.run_all();
            return kOk;
        }
        for (const auto& [cmd, stage] : stage_cmds) {
            if (*cmd) {
                const auto r = pipe.run(stage);
                if (!o.quiet) {
                    for (const auto& f : r.files) {
                        std::cout << (pipe.dir(stage) / f).string() << "\n";
                    }
                }
            }
        }
        return kOk;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return kUsage;
    } catch (const InvariantError& e) {
        std::cerr << "internal check failed: " << e.what() << std::endl;
        return kVerify;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return kData;
    }
}
