#ifndef ASBENCH_CORE_HPP
#define ASBENCH_CORE_HPP

#include <Eigen/Dense>

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace asbench {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Index = Eigen::Index;

/// Bad arguments or configuration supplied by the caller (CLI exit code 1).
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Malformed, missing or inconsistent input data (CLI exit code 2).
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A broken internal invariant. Indicates a bug, never bad input.
class InvariantError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

constexpr double kInf = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------
// Hashing and seeding

/// 64-bit FNV-1a.
constexpr std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ULL)
{
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

constexpr std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t seed_key(std::uint64_t key) { return key; }
inline std::uint64_t seed_key(std::string_view key) { return fnv1a(key); }
inline std::uint64_t seed_key(const std::string& key) { return fnv1a(key); }
inline std::uint64_t seed_key(const char* key) { return fnv1a(key); }

/// Combines a seed with further integer or string keys; order-sensitive.
template <typename... Keys>
std::uint64_t derive_seed(std::uint64_t seed, const Keys&... keys)
{
    std::uint64_t h = splitmix64(seed);
    ((h = splitmix64(h ^ splitmix64(seed_key(keys)))), ...);
    return h;
}

std::string hex64(std::uint64_t h);

/// Named feature values for a single problem.
struct FeatureVector {
    std::vector<std::string> names;
    std::vector<double> values;

    void add(std::string name, double value)
    {
        names.push_back(std::move(name));
        values.push_back(value);
    }
    void append(const FeatureVector& other)
    {
        names.insert(names.end(), other.names.begin(), other.names.end());
        values.insert(values.end(), other.values.begin(), other.values.end());
    }
    /// Value of `name`; throws InvariantError when absent.
    double at(const std::string& name) const;
    std::size_t size() const { return values.size(); }
};

// ---------------------------------------------------------------------------
// Formatting

/// Shortest round-trip decimal representation; stable across platforms.
std::string format_double(double v);

std::string format_alpha(double alpha);

}  // namespace asbench

#endif
