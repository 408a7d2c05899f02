#include "asbench/perf.hpp"
#include "asbench/csv.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace asbench {

PerformanceMatrix PerformanceMatrix::rows(const std::vector<std::size_t>& idx) const
{
    PerformanceMatrix out;
    out.algorithms = algorithms;
    out.S.resize(static_cast<Index>(idx.size()), S.cols());
    for (std::size_t k = 0; k < idx.size(); ++k) {
        out.problems.push_back(problems.at(idx[k]));
        out.S.row(static_cast<Index>(k)) = S.row(static_cast<Index>(idx[k]));
    }
    return out;
}

std::size_t PerformanceMatrix::row_of(const std::string& problem_id) const
{
    auto it = std::find(problems.begin(), problems.end(), problem_id);
    if (it == problems.end()) {
        throw DataError("no performance row for problem '" + problem_id + "'");
    }
    return static_cast<std::size_t>(it - problems.begin());
}

PerformanceMatrix normalized_precision(const std::vector<RunRecord>& records,
                                       const std::vector<std::string>& algorithm_order)
{
    if (algorithm_order.empty()) {
        throw UsageError("normalized_precision needs at least one algorithm");
    }
    std::map<std::string, std::size_t> alg_index;
    for (std::size_t a = 0; a < algorithm_order.size(); ++a) {
        alg_index[algorithm_order[a]] = a;
    }

    // problem -> run -> per-algorithm best values
    std::map<std::string, std::map<int, std::vector<double>>> table;
    std::set<int> all_runs;
    for (const auto& r : records) {
        auto it = alg_index.find(r.algorithm);
        if (it == alg_index.end()) {
            continue;
        }
        auto& slot = table[r.problem_id][r.run];
        if (slot.empty()) {
            slot.assign(algorithm_order.size(), kInf);
        }
        slot[it->second] = r.best_y;
        all_runs.insert(r.run);
    }

    PerformanceMatrix perf;
    perf.algorithms = algorithm_order;
    perf.S = Matrix::Zero(static_cast<Index>(table.size()), static_cast<Index>(algorithm_order.size()));
    Index row = 0;
    for (const auto& [problem, runs] : table) {
        perf.problems.push_back(problem);
        for (int run : all_runs) {
            auto rit = runs.find(run);
            if (rit == runs.end()) {
                throw DataError("missing run " + std::to_string(run) + " for problem '" + problem + "'");
            }
            const auto& ys = rit->second;
            for (std::size_t a = 0; a < ys.size(); ++a) {
                if (ys[a] == kInf) {
                    throw DataError("missing record for problem '" + problem + "', algorithm '" +
                                    algorithm_order[a] + "', run " + std::to_string(run));
                }
            }
            const double b = *std::min_element(ys.begin(), ys.end());
            const double w = *std::max_element(ys.begin(), ys.end());
            for (std::size_t a = 0; a < ys.size(); ++a) {
                perf.S(row, static_cast<Index>(a)) += scaled_precision(ys[a], b, w);
            }
        }
        perf.S.row(row) /= static_cast<double>(all_runs.size());
        ++row;
    }
    return perf;
}

Vector dummy_target(const PerformanceMatrix& train)
{
    if (train.S.rows() == 0) {
        throw UsageError("dummy_target needs at least one training row");
    }
    // Row order must not matter: sum a sorted copy of each column.
    Vector out(train.S.cols());
    std::vector<double> col(static_cast<std::size_t>(train.S.rows()));
    for (Index a = 0; a < train.S.cols(); ++a) {
        for (Index p = 0; p < train.S.rows(); ++p) {
            col[static_cast<std::size_t>(p)] = train.S(p, a);
        }
        std::sort(col.begin(), col.end());
        double s = 0.0;
        for (double v : col) {
            s += v;
        }
        out[a] = s / static_cast<double>(col.size());
    }
    return out;
}

std::string performance_to_csv(const PerformanceMatrix& perf)
{
    std::vector<std::string> header{"problem_id"};
    header.insert(header.end(), perf.algorithms.begin(), perf.algorithms.end());
    csv::Writer w(header);
    for (std::size_t p = 0; p < perf.problems.size(); ++p) {
        std::vector<std::string> row{perf.problems[p]};
        for (Index a = 0; a < perf.S.cols(); ++a) {
            row.push_back(format_double(perf.S(static_cast<Index>(p), a)));
        }
        w.row(row);
    }
    return w.str();
}

PerformanceMatrix performance_from_csv(const std::string& text, const std::string& origin)
{
    const auto t = csv::parse(text, origin);
    if (t.header.size() < 2 || t.header[0] != "problem_id") {
        throw DataError(origin + ": expected header problem_id,<alg1>,...");
    }
    PerformanceMatrix perf;
    perf.algorithms.assign(t.header.begin() + 1, t.header.end());
    perf.S.resize(static_cast<Index>(t.rows.size()), static_cast<Index>(perf.algorithms.size()));
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        perf.problems.push_back(t.rows[r][0]);
        for (std::size_t c = 1; c < t.header.size(); ++c) {
            perf.S(static_cast<Index>(r), static_cast<Index>(c - 1)) = csv::to_double(t.rows[r][c], r, c, origin);
        }
    }
    return perf;
}

}  // namespace asbench
