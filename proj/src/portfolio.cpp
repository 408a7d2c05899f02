#include "asbench/portfolio.hpp"
#include "asbench/bbob.hpp"
#include "asbench/csv.hpp"
#include "asbench/random.hpp"

#include <algorithm>
#include <tuple>

namespace asbench {

namespace {

constexpr double kVelocityFraction = 0.2;
constexpr double kFinalInertia = 0.4;

// Clamps a candidate into the box; returns a mask of clamped coordinates.
std::vector<bool> clamp_to_box(Eigen::Ref<Vector> x)
{
    std::vector<bool> clamped(static_cast<std::size_t>(x.size()), false);
    for (Index d = 0; d < x.size(); ++d) {
        if (x[d] < kDomainLower) {
            x[d] = kDomainLower;
            clamped[static_cast<std::size_t>(d)] = true;
        } else if (x[d] > kDomainUpper) {
            x[d] = kDomainUpper;
            clamped[static_cast<std::size_t>(d)] = true;
        }
    }
    return clamped;
}

Index argmin(const Vector& v)
{
    Index best = 0;
    for (Index i = 1; i < v.size(); ++i) {
        if (v[i] < v[best]) {
            best = i;
        }
    }
    return best;
}

Vector evaluate_all(const Problem& problem, const Matrix& pop)
{
    Vector y(pop.rows());
    for (Index i = 0; i < pop.rows(); ++i) {
        y[i] = problem.f(pop.row(i).transpose());
    }
    return y;
}

void check_population(const Problem& problem, const Matrix& pop0, int budget_iters)
{
    if (pop0.rows() < kMinPopulation) {
        throw UsageError("population size must be >= 4");
    }
    if (pop0.cols() != problem.dim) {
        throw UsageError("population dimension does not match problem " + problem.id);
    }
    if (budget_iters < 0) {
        throw UsageError("budget must be >= 0");
    }
}

}  // namespace

const std::string& algorithm_name(const AlgorithmConfig& cfg)
{
    return std::visit([](const auto& c) -> const std::string& { return c.name; }, cfg);
}

const std::vector<DEConfig>& de_configs()
{
    static const std::vector<DEConfig> configs{
        {"DE1", 0.5, 0.5, DeSelection::random, DeCrossover::binary},
        {"DE2", 0.6, 0.4, DeSelection::best, DeCrossover::exponential},
        {"DE3", 0.9, 0.7, DeSelection::best, DeCrossover::exponential},
        {"DE4", 0.3, 0.8, DeSelection::best, DeCrossover::binary},
        {"DE5", 0.8, 0.4, DeSelection::best, DeCrossover::binary},
    };
    return configs;
}

const std::vector<PSOConfig>& pso_configs()
{
    static const std::vector<PSOConfig> configs{
        {"PSO1", InitialVelocity::zero, true, 0.9},
        {"PSO2", InitialVelocity::zero, false, 0.9},
        {"PSO3", InitialVelocity::random, true, 0.9},
        {"PSO4", InitialVelocity::random, false, 0.9},
        {"PSO5", InitialVelocity::random, false, 0.7},
    };
    return configs;
}

AlgorithmConfig algorithm_by_name(const std::string& name)
{
    for (const auto& c : de_configs()) {
        if (c.name == name) {
            return c;
        }
    }
    for (const auto& c : pso_configs()) {
        if (c.name == name) {
            return c;
        }
    }
    throw UsageError("unknown algorithm '" + name + "'");
}

std::vector<std::string> Portfolio::member_names() const
{
    std::vector<std::string> out;
    for (const auto& m : members) {
        out.push_back(algorithm_name(m));
    }
    return out;
}

Portfolio make_portfolio(const std::string& name)
{
    Portfolio p;
    p.name = name;
    if (name == "5DE" || name == "5DE+5PSO") {
        for (const auto& c : de_configs()) {
            p.members.emplace_back(c);
        }
    }
    if (name == "5PSO" || name == "5DE+5PSO") {
        for (const auto& c : pso_configs()) {
            p.members.emplace_back(c);
        }
    }
    if (name == "2DE+2PSO") {
        for (const char* n : {"DE2", "DE5", "PSO1", "PSO3"}) {
            p.members.push_back(algorithm_by_name(n));
        }
    }
    if (p.members.empty()) {
        throw UsageError("unknown portfolio '" + name + "' (expected 5DE, 5PSO, 5DE+5PSO or 2DE+2PSO)");
    }
    return p;
}

Matrix init_population(const std::string& problem_id, int dim, int pop_size, int run_index,
                       std::uint64_t master_seed)
{
    if (pop_size < kMinPopulation) {
        throw UsageError("population size must be >= 4, got " + std::to_string(pop_size));
    }
    Rng rng(derive_seed(master_seed, "init", problem_id, static_cast<std::uint64_t>(run_index)));
    Matrix pop(pop_size, dim);
    for (int i = 0; i < pop_size; ++i) {
        for (int d = 0; d < dim; ++d) {
            pop(i, d) = rng.uniform(kDomainLower, kDomainUpper);
        }
    }
    return pop;
}

RunRecord run_de(const DEConfig& cfg, const Problem& problem, const Matrix& pop0, int budget_iters,
                 std::uint64_t stream_seed, RunTrace* trace)
{
    check_population(problem, pop0, budget_iters);
    Rng rng(stream_seed);
    const Index np = pop0.rows();
    const Index dim = pop0.cols();

    Matrix pop = pop0;
    Vector fit = evaluate_all(problem, pop);
    double best = fit.minCoeff();
    if (trace) {
        trace->best_so_far.assign(1, best);
        trace->inertia.clear();
    }

    Matrix next = pop;
    Vector next_fit = fit;
    Vector donor(dim);
    Vector trial(dim);
    for (int gen = 0; gen < budget_iters; ++gen) {
        const Index best_idx = argmin(fit);
        for (Index i = 0; i < np; ++i) {
            auto pick = [&](std::initializer_list<Index> exclude) {
                Index r;
                do {
                    r = static_cast<Index>(rng.below(static_cast<std::size_t>(np)));
                } while (std::find(exclude.begin(), exclude.end(), r) != exclude.end());
                return r;
            };
            Index base;
            if (cfg.selection == DeSelection::best) {
                base = best_idx;
            } else {
                base = pick({i});
            }
            const Index r1 = pick({i, base});
            const Index r2 = pick({i, base, r1});
            donor = pop.row(base).transpose() + cfg.f * (pop.row(r1) - pop.row(r2)).transpose();

            trial = pop.row(i).transpose();
            if (cfg.crossover == DeCrossover::binary) {
                const Index jrand = static_cast<Index>(rng.below(static_cast<std::size_t>(dim)));
                for (Index d = 0; d < dim; ++d) {
                    if (d == jrand || rng.uniform() < cfg.cr) {
                        trial[d] = donor[d];
                    }
                }
            } else {
                const Index start = static_cast<Index>(rng.below(static_cast<std::size_t>(dim)));
                Index len = 0;
                do {
                    trial[(start + len) % dim] = donor[(start + len) % dim];
                    ++len;
                } while (len < dim && rng.uniform() < cfg.cr);
            }
            clamp_to_box(trial);

            const double ft = problem.f(trial);
            if (ft <= fit[i]) {
                next.row(i) = trial.transpose();
                next_fit[i] = ft;
            } else {
                next.row(i) = pop.row(i);
                next_fit[i] = fit[i];
            }
        }
        pop.swap(next);
        fit.swap(next_fit);
        best = std::min(best, fit.minCoeff());
        if (trace) {
            trace->best_so_far.push_back(best);
        }
    }
    return {problem.id, cfg.name, 0, best, budget_iters};
}

RunRecord run_pso(const PSOConfig& cfg, const Problem& problem, const Matrix& pop0, int budget_iters,
                  std::uint64_t stream_seed, RunTrace* trace)
{
    check_population(problem, pop0, budget_iters);
    Rng rng(stream_seed);
    const Index np = pop0.rows();
    const Index dim = pop0.cols();
    const double vmax = kVelocityFraction * (kDomainUpper - kDomainLower);

    Matrix pos = pop0;
    Matrix vel = Matrix::Zero(np, dim);
    if (cfg.initial_velocity == InitialVelocity::random) {
        for (Index i = 0; i < np; ++i) {
            for (Index d = 0; d < dim; ++d) {
                vel(i, d) = rng.uniform(-vmax, vmax);
            }
        }
    }
    Vector fit = evaluate_all(problem, pos);
    Matrix pbest = pos;
    Vector pbest_fit = fit;
    Index g = argmin(pbest_fit);
    Vector gbest = pbest.row(g).transpose();
    double gbest_fit = pbest_fit[g];
    if (trace) {
        trace->best_so_far.assign(1, gbest_fit);
        trace->inertia.clear();
    }

    Vector x(dim);
    for (int t = 0; t < budget_iters; ++t) {
        double w = cfg.w;
        double c1 = 2.0;
        double c2 = 2.0;
        if (cfg.adaptive) {
            const double frac = budget_iters > 1 ? static_cast<double>(t) / (budget_iters - 1) : 0.0;
            w = cfg.w + (kFinalInertia - cfg.w) * frac;
            c1 = 2.5 - 2.0 * frac;
            c2 = 0.5 + 2.0 * frac;
        }
        if (trace) {
            trace->inertia.push_back(w);
        }
        for (Index i = 0; i < np; ++i) {
            for (Index d = 0; d < dim; ++d) {
                const double r1 = rng.uniform();
                const double r2 = rng.uniform();
                vel(i, d) = w * vel(i, d) + c1 * r1 * (pbest(i, d) - pos(i, d)) + c2 * r2 * (gbest[d] - pos(i, d));
            }
            x = pos.row(i).transpose() + vel.row(i).transpose();
            const auto clamped = clamp_to_box(x);
            for (Index d = 0; d < dim; ++d) {
                if (clamped[static_cast<std::size_t>(d)]) {
                    vel(i, d) = 0.0;
                }
            }
            pos.row(i) = x.transpose();
            fit[i] = problem.f(x);
            if (fit[i] < pbest_fit[i]) {
                pbest_fit[i] = fit[i];
                pbest.row(i) = pos.row(i);
            }
        }
        g = argmin(pbest_fit);
        if (pbest_fit[g] < gbest_fit) {
            gbest_fit = pbest_fit[g];
            gbest = pbest.row(g).transpose();
        }
        if (trace) {
            trace->best_so_far.push_back(gbest_fit);
        }
    }
    return {problem.id, cfg.name, 0, gbest_fit, budget_iters};
}

RunRecord run_algorithm(const AlgorithmConfig& cfg, const Problem& problem, const Matrix& pop0, int budget_iters,
                        std::uint64_t stream_seed, RunTrace* trace)
{
    return std::visit(
        [&](const auto& c) {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, DEConfig>) {
                return run_de(c, problem, pop0, budget_iters, stream_seed, trace);
            } else {
                return run_pso(c, problem, pop0, budget_iters, stream_seed, trace);
            }
        },
        cfg);
}

std::vector<RunRecord> run_portfolio(const Problem& problem, const Portfolio& portfolio,
                                     const PortfolioSettings& settings)
{
    if (settings.runs < 1) {
        throw UsageError("runs must be >= 1");
    }
    std::vector<RunRecord> records;
    records.reserve(portfolio.members.size() * static_cast<std::size_t>(settings.runs));
    for (int r = 0; r < settings.runs; ++r) {
        const Matrix pop0 = init_population(problem.id, problem.dim, settings.pop_size, r, settings.master_seed);
        for (const auto& member : portfolio.members) {
            const auto& name = algorithm_name(member);
            const auto seed = derive_seed(settings.master_seed, "algo", problem.id, fnv1a(name),
                                          static_cast<std::uint64_t>(r));
            auto rec = run_algorithm(member, problem, pop0, settings.budget, seed);
            rec.run = r;
            records.push_back(std::move(rec));
        }
    }
    std::stable_sort(records.begin(), records.end(), [](const RunRecord& a, const RunRecord& b) {
        return std::tie(a.algorithm, a.run) < std::tie(b.algorithm, b.run);
    });
    return records;
}

std::string runs_to_csv(std::vector<RunRecord> records)
{
    std::sort(records.begin(), records.end(), [](const RunRecord& a, const RunRecord& b) {
        return std::tie(a.problem_id, a.algorithm, a.run) < std::tie(b.problem_id, b.algorithm, b.run);
    });
    csv::Writer w({"problem_id", "algorithm", "run", "best_y", "budget"});
    for (const auto& r : records) {
        w.row({r.problem_id, r.algorithm, std::to_string(r.run), format_double(r.best_y), std::to_string(r.budget)});
    }
    return w.str();
}

std::vector<RunRecord> runs_from_csv(const std::string& text, const std::string& origin)
{
    const auto t = csv::parse(text, origin);
    const auto pid = t.column("problem_id");
    const auto alg = t.column("algorithm");
    const auto run = t.column("run");
    const auto by = t.column("best_y");
    const auto bud = t.column("budget");
    std::vector<RunRecord> out;
    out.reserve(t.rows.size());
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const auto& row = t.rows[i];
        out.push_back({row[pid], row[alg], static_cast<int>(csv::to_double(row[run], i, run, origin)),
                       csv::to_double(row[by], i, by, origin),
                       static_cast<int>(csv::to_double(row[bud], i, bud, origin))});
    }
    return out;
}

}  // namespace asbench
