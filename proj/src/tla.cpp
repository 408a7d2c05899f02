#include "asbench/tla.hpp"
#include "asbench/stats.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <unordered_map>

namespace asbench {

Matrix tla_scaled_x(const Matrix& X, VolumeTransform transform)
{
    Matrix out(X.rows(), X.cols());
    for (Index c = 0; c < X.cols(); ++c) {
        Vector col = minmax_scale(X.col(c), 0.5);
        if (transform == VolumeTransform::RankCdf && X.rows() > 1) {
            // empirical CDF; constant columns land on 0.5 as well
            col = average_ranks(col) / static_cast<double>(X.rows() - 1);
        }
        out.col(c) = col;
    }
    return out;
}

Matrix tla_distance(const Sample& sample, double alpha, VolumeTransform transform)
{
    if (sample.size() < 2) {
        throw UsageError("tla_distance needs at least 2 points");
    }
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw UsageError("tla alpha must lie in [0, 1]");
    }
    const Matrix Dx = pairwise_distances(tla_scaled_x(sample.X, transform));
    const Vector ys = minmax_scale(sample.y, 0.5);
    const Matrix Dy = pairwise_distances(Matrix(ys));
    return alpha * Dx + (1.0 - alpha) * Dy;
}

double enclosing_radius(const Matrix& D)
{
    if (D.rows() == 0) {
        return 0.0;
    }
    return D.rowwise().maxCoeff().minCoeff();
}

namespace {

struct Simplex {
    std::array<int, 4> v{};
    int size = 0;
    double value = 0.0;
};

std::uint64_t simplex_key(const Simplex& s)
{
    std::uint64_t k = 0;
    for (int i = 0; i < s.size; ++i) {
        k = (k << 16) | static_cast<std::uint64_t>(s.v[static_cast<std::size_t>(i)] + 1);
    }
    return k;
}

bool filtration_less(const Simplex& a, const Simplex& b)
{
    if (a.value != b.value) {
        return a.value < b.value;
    }
    return std::lexicographical_compare(a.v.begin(), a.v.begin() + a.size, b.v.begin(), b.v.begin() + b.size);
}

// All simplices with `size` vertices whose diameter is within the threshold.
std::vector<Simplex> enumerate(const Matrix& D, int size, double threshold)
{
    const int n = static_cast<int>(D.rows());
    std::vector<Simplex> out;
    Simplex s;
    s.size = size;
    auto rec = [&](auto&& self, int depth, int start, double diam) -> void {
        if (depth == size) {
            s.value = diam;
            out.push_back(s);
            return;
        }
        for (int v = start; v < n; ++v) {
            double d = diam;
            bool ok = true;
            for (int k = 0; k < depth; ++k) {
                const double e = D(s.v[static_cast<std::size_t>(k)], v);
                if (e > threshold) {
                    ok = false;
                    break;
                }
                d = std::max(d, e);
            }
            if (!ok) {
                continue;
            }
            s.v[static_cast<std::size_t>(depth)] = v;
            self(self, depth + 1, v + 1, d);
        }
    };
    rec(rec, 0, 0, 0.0);
    std::sort(out.begin(), out.end(), filtration_less);
    return out;
}

using Column = std::vector<int>;  // sorted row indices, Z2 coefficients

void add_into(Column& target, const Column& source)
{
    Column out;
    out.reserve(target.size() + source.size());
    std::set_symmetric_difference(target.begin(), target.end(), source.begin(), source.end(),
                                  std::back_inserter(out));
    target.swap(out);
}

struct Reduction {
    std::vector<int> pivot_of_column;  // -1 for zero columns
    std::vector<int> column_of_row;    // -1 when the row is never a pivot
};

Reduction reduce(const std::vector<Simplex>& rows, const std::vector<Simplex>& cols)
{
    std::unordered_map<std::uint64_t, int> row_index;
    row_index.reserve(rows.size() * 2);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        row_index.emplace(simplex_key(rows[r]), static_cast<int>(r));
    }
    Reduction red;
    red.pivot_of_column.assign(cols.size(), -1);
    red.column_of_row.assign(rows.size(), -1);
    std::vector<Column> reduced(cols.size());
    for (std::size_t c = 0; c < cols.size(); ++c) {
        const Simplex& s = cols[c];
        Column col;
        for (int drop = 0; drop < s.size; ++drop) {
            Simplex face;
            face.size = s.size - 1;
            for (int k = 0, m = 0; k < s.size; ++k) {
                if (k != drop) {
                    face.v[static_cast<std::size_t>(m++)] = s.v[static_cast<std::size_t>(k)];
                }
            }
            const auto it = row_index.find(simplex_key(face));
            if (it == row_index.end()) {
                throw InvariantError("face missing from the filtration");
            }
            col.push_back(it->second);
        }
        std::sort(col.begin(), col.end());
        while (!col.empty()) {
            const int low = col.back();
            const int other = red.column_of_row[static_cast<std::size_t>(low)];
            if (other < 0) {
                break;
            }
            add_into(col, reduced[static_cast<std::size_t>(other)]);
        }
        if (!col.empty()) {
            red.pivot_of_column[c] = col.back();
            red.column_of_row[static_cast<std::size_t>(col.back())] = static_cast<int>(c);
        }
        reduced[c] = std::move(col);
    }
    return red;
}

int find_root(std::vector<int>& parent, int x)
{
    while (parent[static_cast<std::size_t>(x)] != x) {
        parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
        x = parent[static_cast<std::size_t>(x)];
    }
    return x;
}

void sort_pairs(std::vector<PersistencePair>& pairs)
{
    std::sort(pairs.begin(), pairs.end(), [](const PersistencePair& a, const PersistencePair& b) {
        return a.birth != b.birth ? a.birth < b.birth : a.death < b.death;
    });
}

}  // namespace

std::vector<PersistenceDiagram> vr_persistence(const Matrix& D, int max_dim, double threshold, bool allow_h2)
{
    if (D.rows() != D.cols()) {
        throw UsageError("distance matrix must be square");
    }
    if (max_dim < 0 || max_dim > 2) {
        throw UsageError("homology dimension must be 0, 1 or 2");
    }
    if (max_dim == 2 && (!allow_h2 || threshold <= 0.0)) {
        throw UsageError("H2 requires allow_h2 and an explicit edge threshold (cost grows with n^4)");
    }
    if (D.rows() > 65000) {
        throw UsageError("too many points for persistence");
    }
    const int n = static_cast<int>(D.rows());
    const double thr = threshold > 0.0 ? threshold : enclosing_radius(D);

    std::vector<PersistenceDiagram> out(static_cast<std::size_t>(max_dim + 1));
    for (int k = 0; k <= max_dim; ++k) {
        out[static_cast<std::size_t>(k)].dim = k;
    }
    if (n == 0) {
        return out;
    }

    // H0 needs every edge, not only those under the threshold.
    auto edges = enumerate(D, 2, kInf);
    std::vector<bool> positive(edges.size(), true);
    std::vector<int> parent(static_cast<std::size_t>(n));
    std::iota(parent.begin(), parent.end(), 0);
    auto& h0 = out[0].pairs;
    for (std::size_t e = 0; e < edges.size(); ++e) {
        const int a = find_root(parent, edges[e].v[0]);
        const int b = find_root(parent, edges[e].v[1]);
        if (a != b) {
            parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
            h0.push_back({0.0, edges[e].value});
            positive[e] = false;
        }
    }
    h0.push_back({0.0, kInf});
    sort_pairs(h0);
    if (max_dim == 0) {
        return out;
    }

    // Restrict to the threshold for higher dimensions (edges stay sorted).
    std::vector<Simplex> lower;
    std::vector<bool> lower_positive;
    for (std::size_t e = 0; e < edges.size(); ++e) {
        if (edges[e].value <= thr) {
            lower.push_back(edges[e]);
            lower_positive.push_back(positive[e]);
        }
    }
    for (int k = 1; k <= max_dim; ++k) {
        auto upper = enumerate(D, k + 2, thr);
        const Reduction red = reduce(lower, upper);
        auto& pairs = out[static_cast<std::size_t>(k)].pairs;
        for (std::size_t r = 0; r < lower.size(); ++r) {
            if (!lower_positive[r]) {
                continue;
            }
            const int c = red.column_of_row[r];
            if (c < 0) {
                pairs.push_back({lower[r].value, kInf});
            } else if (upper[static_cast<std::size_t>(c)].value > lower[r].value) {
                pairs.push_back({lower[r].value, upper[static_cast<std::size_t>(c)].value});
            }
        }
        sort_pairs(pairs);
        std::vector<bool> next_positive(upper.size());
        for (std::size_t c = 0; c < upper.size(); ++c) {
            next_positive[c] = red.pivot_of_column[c] < 0;
        }
        lower = std::move(upper);
        lower_positive = std::move(next_positive);
    }
    return out;
}

namespace {

// Gaussian mass of each of `resolution` equal bins on [0,1].
std::vector<double> bin_masses(double mu, double sigma, int resolution)
{
    std::vector<double> m(static_cast<std::size_t>(resolution));
    const double s = sigma * std::sqrt(2.0);
    double prev = std::erf((0.0 - mu) / s);
    for (int b = 0; b < resolution; ++b) {
        const double next = std::erf((static_cast<double>(b + 1) / resolution - mu) / s);
        m[static_cast<std::size_t>(b)] = 0.5 * (next - prev);
        prev = next;
    }
    return m;
}

}  // namespace

Vector persistence_image(const PersistenceDiagram& diagram, double sigma, int resolution)
{
    if (sigma <= 0.0 || resolution <= 0) {
        throw UsageError("persistence image needs sigma > 0 and resolution > 0");
    }
    const Index r = resolution;
    Vector img = Vector::Zero(diagram.dim == 0 ? r : r * r);
    for (const auto& p : diagram.pairs) {
        if (!std::isfinite(p.death)) {
            continue;
        }
        const double pers = p.death - p.birth;
        if (diagram.dim == 0) {
            const auto m = bin_masses(p.death, sigma, resolution);
            for (Index b = 0; b < r; ++b) {
                img[b] += pers * m[static_cast<std::size_t>(b)];
            }
        } else {
            const auto mb = bin_masses(p.birth, sigma, resolution);
            const auto mp = bin_masses(pers, sigma, resolution);
            for (Index i = 0; i < r; ++i) {
                for (Index j = 0; j < r; ++j) {
                    img[i * r + j] += pers * mb[static_cast<std::size_t>(i)] * mp[static_cast<std::size_t>(j)];
                }
            }
        }
    }
    // erf differences can round to tiny negatives far from the bar
    return img.cwiseMax(0.0);
}

std::vector<std::string> tla_feature_names(const TlaConfig& cfg)
{
    std::vector<std::string> names;
    char buf[48];
    for (int k = 0; k <= cfg.max_dim; ++k) {
        if (k == 0) {
            for (int b = 0; b < cfg.resolution; ++b) {
                std::snprintf(buf, sizeof(buf), "h0.pi_%02d", b);
                names.emplace_back(buf);
            }
        } else {
            for (int i = 0; i < cfg.resolution; ++i) {
                for (int j = 0; j < cfg.resolution; ++j) {
                    std::snprintf(buf, sizeof(buf), "h%d.pi_%02d_%02d", k, i, j);
                    names.emplace_back(buf);
                }
            }
        }
    }
    return names;
}

FeatureVector tla_features(const Sample& sample, const TlaConfig& cfg)
{
    const Matrix D = tla_distance(sample, cfg.alpha, cfg.transform);
    const auto diagrams = vr_persistence(D, cfg.max_dim, cfg.threshold, cfg.allow_h2);
    FeatureVector f;
    f.names = tla_feature_names(cfg);
    for (const auto& dgm : diagrams) {
        const Vector img = persistence_image(dgm, cfg.sigma, cfg.resolution);
        f.values.insert(f.values.end(), img.data(), img.data() + img.size());
    }
    if (f.names.size() != f.values.size()) {
        throw InvariantError("tla schema mismatch");
    }
    return f;
}

}  // namespace asbench
