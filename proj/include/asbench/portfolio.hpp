#ifndef ASBENCH_PORTFOLIO_HPP
#define ASBENCH_PORTFOLIO_HPP

#include "asbench/core.hpp"

#include <functional>
#include <string>
#include <variant>
#include <vector>

namespace asbench {

enum class DeSelection { random, best };
enum class DeCrossover { binary, exponential };

/// DE/<selection>/1/<crossover>.
struct DEConfig {
    std::string name;
    double cr = 0.5;
    double f = 0.5;
    DeSelection selection = DeSelection::random;
    DeCrossover crossover = DeCrossover::binary;
};

enum class InitialVelocity { zero, random };

/// Global-best PSO. With `adaptive`, inertia decays linearly from w to 0.4 while
/// the cognitive/social coefficients move 2.5 -> 0.5 and 0.5 -> 2.5.
struct PSOConfig {
    std::string name;
    InitialVelocity initial_velocity = InitialVelocity::zero;
    bool adaptive = false;
    double w = 0.9;
};

using AlgorithmConfig = std::variant<DEConfig, PSOConfig>;

const std::string& algorithm_name(const AlgorithmConfig& cfg);

/// DE1..DE5.
const std::vector<DEConfig>& de_configs();
/// PSO1..PSO5.
const std::vector<PSOConfig>& pso_configs();
AlgorithmConfig algorithm_by_name(const std::string& name);

struct Portfolio {
    std::string name;
    std::vector<AlgorithmConfig> members;

    std::vector<std::string> member_names() const;
};

/// One of "5DE", "5PSO", "5DE+5PSO", "2DE+2PSO".
Portfolio make_portfolio(const std::string& name);

using Objective = std::function<double(const Eigen::Ref<const Vector>&)>;

struct Problem {
    std::string id;
    int dim = 0;
    Objective f;
};

struct RunRecord {
    std::string problem_id;
    std::string algorithm;
    int run = 0;
    double best_y = 0.0;
    int budget = 0;
};

/// Per-iteration log; entry 0 describes the initial population.
struct RunTrace {
    std::vector<double> best_so_far;
    std::vector<double> inertia;
};

constexpr int kMinPopulation = 4;

/// Uniform initial population on the box, keyed by (master_seed, problem_id, run_index)
/// only, so every portfolio member of a run starts from the same points.
Matrix init_population(const std::string& problem_id, int dim, int pop_size, int run_index,
                       std::uint64_t master_seed);

RunRecord run_de(const DEConfig& cfg, const Problem& problem, const Matrix& pop0, int budget_iters,
                 std::uint64_t stream_seed, RunTrace* trace = nullptr);

RunRecord run_pso(const PSOConfig& cfg, const Problem& problem, const Matrix& pop0, int budget_iters,
                  std::uint64_t stream_seed, RunTrace* trace = nullptr);

RunRecord run_algorithm(const AlgorithmConfig& cfg, const Problem& problem, const Matrix& pop0, int budget_iters,
                        std::uint64_t stream_seed, RunTrace* trace = nullptr);

struct PortfolioSettings {
    int runs = 5;
    int budget = 100;
    int pop_size = 20;
    std::uint64_t master_seed = 1;
};

/// |portfolio| x runs records, sorted by (algorithm, run). Each algorithm's RNG
/// stream is derived from (master_seed, problem_id, algorithm, run).
std::vector<RunRecord> run_portfolio(const Problem& problem, const Portfolio& portfolio,
                                     const PortfolioSettings& settings);

std::string runs_to_csv(std::vector<RunRecord> records);
std::vector<RunRecord> runs_from_csv(const std::string& text, const std::string& origin);

}  // namespace asbench

#endif
