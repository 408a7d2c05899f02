#ifndef ASBENCH_BBOB_HPP
#define ASBENCH_BBOB_HPP

#include "asbench/core.hpp"

#include <memory>

namespace asbench {

constexpr int kNumBbobClasses = 24;
constexpr int kMaxBbobInstance = 5;
constexpr double kDomainLower = -5.0;
constexpr double kDomainUpper = 5.0;

/// One instance of a noiseless BBOB function class on the box [-5, 5]^dim.
///
/// Instance data (optimum, rotations, peaks) is drawn from a seed keyed by
/// (class_id, instance_id, dim). Rotations are Gram-Schmidt orthonormalized
/// Gaussian matrices. Values are not bit-compatible with the COCO reference
/// implementation, but every class follows its documented definition.
struct BaseInstance {
    int class_id = 0;
    int instance_id = 0;
    int dim = 0;
    Vector x_opt;
    double f_opt = 0.0;
    std::uint64_t transform_seed = 0;

    // Transform data; which members are used depends on class_id.
    Matrix rot_r;
    Matrix rot_q;
    Vector signs;
    double schwefel_offset = 0.0;
    double raw_at_opt = 0.0;
    std::vector<Vector> peaks;
    std::vector<double> peak_weights;
    std::vector<Vector> peak_scales;

    /// f(x) for a point of matching dimension. Throws UsageError on mismatch.
    double evaluate(const Eigen::Ref<const Vector>& x) const;

    /// f(x_opt), cached at construction.
    double optimum_value() const { return raw_at_opt + f_opt; }

    /// The same function with `offset` added to every output.
    BaseInstance with_offset(double offset) const;
};

/// Builds instance `instance_id` (>= 1) of BBOB class `class_id` (1..24).
BaseInstance make_base_instance(int class_id, int instance_id, int dim);

/// A BBOB instance whose optimum is moved to `x_opt` by translating the
/// function. Only defined for the translation-generic classes
/// (all except 5, 9, 19, 20, 21, 22, 24); used to build parents with shared optima.
BaseInstance relocate_optimum(const BaseInstance& inst, const Vector& x_opt);

inline double eval_base(const BaseInstance& inst, const Eigen::Ref<const Vector>& x)
{
    return inst.evaluate(x);
}

std::string bbob_class_name(int class_id);

}  // namespace asbench

#endif
