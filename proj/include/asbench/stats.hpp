#ifndef ASBENCH_STATS_HPP
#define ASBENCH_STATS_HPP

#include "asbench/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace asbench {

/// Index of the smallest entry; ties resolve to the lowest index.
template <typename Derived>
Index argmin_lowest(const Eigen::DenseBase<Derived>& v)
{
    Index best = 0;
    for (Index i = 1; i < v.size(); ++i) {
        if (v.derived().coeff(i) < v.derived().coeff(best)) {
            best = i;
        }
    }
    return best;
}

/// Population standard deviation around the mean.
template <typename Derived>
typename Derived::Scalar population_sd(const Eigen::MatrixBase<Derived>& v)
{
    using Scalar = typename Derived::Scalar;
    if (v.size() == 0) {
        return Scalar(0);
    }
    const Scalar m = v.mean();
    return std::sqrt((v.array() - m).square().sum() / static_cast<Scalar>(v.size()));
}

/// Sample standard deviation (n - 1 denominator); 0 for fewer than two values.
template <typename Derived>
typename Derived::Scalar sample_sd(const Eigen::MatrixBase<Derived>& v)
{
    using Scalar = typename Derived::Scalar;
    if (v.size() < 2) {
        return Scalar(0);
    }
    const Scalar m = v.mean();
    return std::sqrt((v.array() - m).square().sum() / static_cast<Scalar>(v.size() - 1));
}

/// Fractional ranks in [0, n-1]; tied values share their average rank.
Vector average_ranks(const Eigen::Ref<const Vector>& v);

/// Pearson correlation; 0 when either input has zero variance.
double pearson(const Eigen::Ref<const Vector>& a, const Eigen::Ref<const Vector>& b);

/// Spearman rank correlation; 0 when either input is constant.
double spearman(const Eigen::Ref<const Vector>& a, const Eigen::Ref<const Vector>& b);

/// Linear-interpolation quantile (type 7) of unsorted data.
double quantile(std::vector<double> values, double q);

double median(std::vector<double> values);

/// Moment-based skewness (g1).
double skewness(const Eigen::Ref<const Vector>& v);

/// Moment-based excess kurtosis (g2).
double excess_kurtosis(const Eigen::Ref<const Vector>& v);

/// Row-wise Euclidean distance matrix of the rows of X.
template <typename Derived>
Matrix pairwise_distances(const Eigen::MatrixBase<Derived>& X)
{
    const Index n = X.rows();
    Matrix D = Matrix::Zero(n, n);
    for (Index i = 0; i < n; ++i) {
        for (Index j = i + 1; j < n; ++j) {
            const double d = (X.row(i) - X.row(j)).norm();
            D(i, j) = d;
            D(j, i) = d;
        }
    }
    return D;
}

/// Cosine similarity; 0 when either vector is zero.
template <typename A, typename B>
double cosine_similarity(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b)
{
    const double na = a.norm();
    const double nb = b.norm();
    if (na == 0.0 || nb == 0.0) {
        return 0.0;
    }
    return std::clamp(a.dot(b) / (na * nb), -1.0, 1.0);
}

/// Min-max scaling to [0, 1]; a constant vector maps to `constant_value`.
template <typename Derived>
Vector minmax_scale(const Eigen::MatrixBase<Derived>& v, double constant_value = 0.5)
{
    const double lo = v.minCoeff();
    const double hi = v.maxCoeff();
    if (!(hi > lo)) {
        return Vector::Constant(v.size(), constant_value);
    }
    return ((v.array() - lo) / (hi - lo)).matrix();
}

}  // namespace asbench

#endif
