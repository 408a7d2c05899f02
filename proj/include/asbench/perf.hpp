#ifndef ASBENCH_PERF_HPP
#define ASBENCH_PERF_HPP

#include "asbench/portfolio.hpp"

#include <string>
#include <vector>

namespace asbench {

/// Mean scaled precision per (problem, algorithm); lower is better.
struct PerformanceMatrix {
    std::vector<std::string> problems;
    std::vector<std::string> algorithms;
    Matrix S;

    /// Restriction to the given row indices, in that order.
    PerformanceMatrix rows(const std::vector<std::size_t>& idx) const;
    std::size_t row_of(const std::string& problem_id) const;
};

/// (y - b) / (w - b), or 0 when every algorithm tied (w == b).
template <typename Scalar>
Scalar scaled_precision(Scalar y, Scalar best, Scalar worst)
{
    if (y < best || y > worst) {
        throw InvariantError("scaled_precision: value outside [best, worst]");
    }
    if (worst == best) {
        return Scalar(0);
    }
    return (y - best) / (worst - best);
}

/// Scales every run against that run's best and worst algorithm, then averages
/// over runs. Rows follow sorted problem ids; columns follow `algorithm_order`.
/// Throws DataError naming the first missing (problem, algorithm, run) record.
PerformanceMatrix normalized_precision(const std::vector<RunRecord>& records,
                                       const std::vector<std::string>& algorithm_order);

/// Column means over the training rows; the single best solver is its argmin.
Vector dummy_target(const PerformanceMatrix& train);

std::string performance_to_csv(const PerformanceMatrix& perf);
PerformanceMatrix performance_from_csv(const std::string& text, const std::string& origin);

}  // namespace asbench

#endif
