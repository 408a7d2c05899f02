#include "asbench/stats.hpp"

namespace asbench {

Vector average_ranks(const Eigen::Ref<const Vector>& v)
{
    const Index n = v.size();
    std::vector<Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return v[a] < v[b]; });
    Vector ranks(n);
    Index i = 0;
    while (i < n) {
        Index j = i;
        while (j + 1 < n && v[order[static_cast<std::size_t>(j + 1)]] == v[order[static_cast<std::size_t>(i)]]) {
            ++j;
        }
        const double r = 0.5 * static_cast<double>(i + j);
        for (Index k = i; k <= j; ++k) {
            ranks[order[static_cast<std::size_t>(k)]] = r;
        }
        i = j + 1;
    }
    return ranks;
}

double pearson(const Eigen::Ref<const Vector>& a, const Eigen::Ref<const Vector>& b)
{
    if (a.size() != b.size()) {
        throw InvariantError("pearson: size mismatch");
    }
    if (a.size() < 2) {
        return 0.0;
    }
    const Vector ca = a.array() - a.mean();
    const Vector cb = b.array() - b.mean();
    const double sa = ca.squaredNorm();
    const double sb = cb.squaredNorm();
    if (sa <= 0.0 || sb <= 0.0) {
        return 0.0;
    }
    return std::clamp(ca.dot(cb) / std::sqrt(sa * sb), -1.0, 1.0);
}

double spearman(const Eigen::Ref<const Vector>& a, const Eigen::Ref<const Vector>& b)
{
    return pearson(average_ranks(a), average_ranks(b));
}

double quantile(std::vector<double> values, double q)
{
    if (values.empty()) {
        throw InvariantError("quantile of empty data");
    }
    std::sort(values.begin(), values.end());
    const double h = (static_cast<double>(values.size()) - 1.0) * q;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

double median(std::vector<double> values)
{
    return quantile(std::move(values), 0.5);
}

double skewness(const Eigen::Ref<const Vector>& v)
{
    const double m = v.mean();
    const double m2 = (v.array() - m).square().mean();
    if (m2 <= 0.0) {
        return 0.0;
    }
    const double m3 = (v.array() - m).cube().mean();
    return m3 / std::pow(m2, 1.5);
}

double excess_kurtosis(const Eigen::Ref<const Vector>& v)
{
    const double m = v.mean();
    const double m2 = (v.array() - m).square().mean();
    if (m2 <= 0.0) {
        return 0.0;
    }
    const double m4 = (v.array() - m).square().square().mean();
    return m4 / (m2 * m2) - 3.0;
}

}  // namespace asbench
