#include "asbench/bbob.hpp"
#include "asbench/random.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>

namespace asbench {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kSchwefelOpt = 4.2096874633;
constexpr double kLunacekMu0 = 2.5;

// Position of coordinate i in [0, 1] across the dimensions.
double ramp(int i, int dim)
{
    return dim > 1 ? static_cast<double>(i) / (dim - 1) : 0.0;
}

Vector lambda_diag(double alpha, int dim)
{
    Vector out(dim);
    for (int i = 0; i < dim; ++i) {
        out[i] = std::pow(alpha, 0.5 * ramp(i, dim));
    }
    return out;
}

double t_osz(double x)
{
    if (x == 0.0) {
        return 0.0;
    }
    const double xh = std::log(std::abs(x));
    const double c1 = x > 0 ? 10.0 : 5.5;
    const double c2 = x > 0 ? 7.9 : 3.1;
    return (x > 0 ? 1.0 : -1.0) * std::exp(xh + 0.049 * (std::sin(c1 * xh) + std::sin(c2 * xh)));
}

Vector t_osz(const Vector& x)
{
    return x.unaryExpr([](double v) { return t_osz(v); });
}

Vector t_asy(const Vector& x, double beta)
{
    const int dim = static_cast<int>(x.size());
    Vector out = x;
    for (int i = 0; i < dim; ++i) {
        if (x[i] > 0) {
            out[i] = std::pow(x[i], 1.0 + beta * ramp(i, dim) * std::sqrt(x[i]));
        }
    }
    return out;
}

double f_pen(const Vector& x)
{
    double s = 0.0;
    for (double v : x) {
        const double e = std::abs(v) - 5.0;
        if (e > 0) {
            s += e * e;
        }
    }
    return s;
}

Matrix random_rotation(Rng& rng, int dim)
{
    Matrix m(dim, dim);
    for (int j = 0; j < dim; ++j) {
        for (int i = 0; i < dim; ++i) {
            m(i, j) = rng.normal();
        }
    }
    // Classical Gram-Schmidt over columns.
    for (int j = 0; j < dim; ++j) {
        for (int k = 0; k < j; ++k) {
            m.col(j) -= m.col(k).dot(m.col(j)) * m.col(k);
        }
        m.col(j).normalize();
    }
    return m;
}

double rounded_uniform(Rng& rng, double lo, double hi)
{
    double v = std::round(rng.uniform(lo, hi) * 1e4) / 1e4;
    return v == 0.0 ? -1e-5 : v;
}

double weierstrass_sum(double z)
{
    double s = 0.0;
    double half = 1.0;
    double three = 1.0;
    for (int k = 0; k <= 11; ++k) {
        s += half * std::cos(kTwoPi * three * (z + 0.5));
        half *= 0.5;
        three *= 3.0;
    }
    return s;
}

double schaffer_core(const Vector& z)
{
    const int dim = static_cast<int>(z.size());
    if (dim < 2) {
        return 0.0;
    }
    double acc = 0.0;
    for (int i = 0; i + 1 < dim; ++i) {
        const double s = std::sqrt(z[i] * z[i] + z[i + 1] * z[i + 1]);
        const double sq = std::sqrt(s);
        const double sn = std::sin(50.0 * std::pow(s, 0.2));
        acc += sq + sq * sn * sn;
    }
    acc /= (dim - 1);
    return acc * acc;
}

double rastrigin_core(const Vector& z)
{
    const double dim = static_cast<double>(z.size());
    double cos_sum = 0.0;
    for (double v : z) {
        cos_sum += std::cos(kTwoPi * v);
    }
    return 10.0 * (dim - cos_sum) + z.squaredNorm();
}

double rosenbrock_core(const Vector& z)
{
    double s = 0.0;
    for (Index i = 0; i + 1 < z.size(); ++i) {
        const double a = z[i] * z[i] - z[i + 1];
        const double b = z[i] - 1.0;
        s += 100.0 * a * a + b * b;
    }
    return s;
}

double schwefel_raw(const BaseInstance& in, const Vector& x)
{
    const int dim = in.dim;
    const Vector two_abs_opt = 2.0 * in.x_opt.cwiseAbs();
    Vector xh = 2.0 * in.signs.cwiseProduct(x);
    Vector zh = xh;
    for (int i = 1; i < dim; ++i) {
        zh[i] = xh[i] + 0.25 * (xh[i - 1] - two_abs_opt[i - 1]);
    }
    const Vector z = 100.0 * (lambda_diag(10.0, dim).cwiseProduct(zh - two_abs_opt) + two_abs_opt);
    double s = 0.0;
    for (double v : z) {
        s += v * std::sin(std::sqrt(std::abs(v)));
    }
    return -s / (100.0 * dim) + 100.0 * f_pen(z / 100.0);
}

double gallagher(const BaseInstance& in, const Vector& x)
{
    double best = -kInf;
    for (std::size_t k = 0; k < in.peaks.size(); ++k) {
        const Vector d = in.rot_r * (x - in.peaks[k]);
        const double q = d.cwiseProduct(in.peak_scales[k]).dot(d);
        best = std::max(best, in.peak_weights[k] * std::exp(-q / (2.0 * in.dim)));
    }
    const double t = t_osz(10.0 - best);
    return t * t + f_pen(x);
}

void init_gallagher(BaseInstance& in, Rng& rng, int num_peaks)
{
    const int dim = in.dim;
    const bool many = num_peaks == 101;
    const int others = num_peaks - 1;
    const double top_cond = many ? 1000.0 : 1.0e6;
    const double peak_box = many ? 5.0 : 4.9;
    const double opt_box = many ? 4.0 : 3.92;

    std::vector<double> conds(others);
    for (int j = 0; j < others; ++j) {
        conds[j] = std::pow(1000.0, 2.0 * j / (others - 1));
    }
    rng.shuffle(conds);

    auto scales_for = [&](double alpha) {
        Vector diag = lambda_diag(alpha, dim);
        std::vector<double> tmp(diag.data(), diag.data() + dim);
        rng.shuffle(tmp);
        Vector out(dim);
        for (int i = 0; i < dim; ++i) {
            // diagonal of C = Lambda^alpha / alpha^(1/4)
            out[i] = tmp[i] / std::pow(alpha, 0.25);
        }
        return out;
    };

    in.peaks.clear();
    in.peak_weights.clear();
    in.peak_scales.clear();
    Vector y1(dim);
    for (int i = 0; i < dim; ++i) {
        y1[i] = rng.uniform(-opt_box, opt_box);
    }
    in.peaks.push_back(y1);
    in.peak_weights.push_back(10.0);
    in.peak_scales.push_back(scales_for(top_cond));
    for (int k = 0; k < others; ++k) {
        Vector y(dim);
        for (int i = 0; i < dim; ++i) {
            y[i] = rng.uniform(-peak_box, peak_box);
        }
        in.peaks.push_back(y);
        in.peak_weights.push_back(1.1 + 8.0 * k / (others - 1));
        in.peak_scales.push_back(scales_for(conds[k]));
    }
    in.x_opt = y1;
}

double evaluate_raw(const BaseInstance& in, const Vector& x)
{
    const int dim = in.dim;
    const Vector shifted = x - in.x_opt;
    switch (in.class_id) {
    case 1:
        return shifted.squaredNorm();
    case 2: {
        const Vector z = t_osz(shifted);
        double s = 0.0;
        for (int i = 0; i < dim; ++i) {
            s += std::pow(10.0, 6.0 * ramp(i, dim)) * z[i] * z[i];
        }
        return s;
    }
    case 3: {
        const Vector z = lambda_diag(10.0, dim).cwiseProduct(t_asy(t_osz(shifted), 0.2));
        return rastrigin_core(z);
    }
    case 4: {
        Vector z = t_osz(shifted);
        for (int i = 0; i < dim; ++i) {
            double s = std::pow(10.0, 0.5 * ramp(i, dim));
            if (z[i] > 0 && i % 2 == 0) {
                s *= 10.0;
            }
            z[i] *= s;
        }
        return rastrigin_core(z) + 100.0 * f_pen(x);
    }
    case 5: {
        double s = 0.0;
        for (int i = 0; i < dim; ++i) {
            const double si = in.signs[i] * std::pow(10.0, ramp(i, dim));
            const double zi = in.x_opt[i] * x[i] < 25.0 ? x[i] : in.x_opt[i];
            s += 5.0 * std::abs(si) - si * zi;
        }
        return s;
    }
    case 6: {
        const Vector z = in.rot_q * lambda_diag(10.0, dim).asDiagonal() * (in.rot_r * shifted);
        double s = 0.0;
        for (int i = 0; i < dim; ++i) {
            const double si = z[i] * in.x_opt[i] > 0 ? 100.0 : 1.0;
            s += (si * z[i]) * (si * z[i]);
        }
        return std::pow(t_osz(s), 0.9);
    }
    case 7: {
        const Vector zh = lambda_diag(10.0, dim).cwiseProduct(in.rot_r * shifted);
        Vector zt(dim);
        for (int i = 0; i < dim; ++i) {
            zt[i] = std::abs(zh[i]) > 0.5 ? std::floor(0.5 + zh[i]) : std::floor(0.5 + 10.0 * zh[i]) / 10.0;
        }
        const Vector z = in.rot_q * zt;
        double s = 0.0;
        for (int i = 0; i < dim; ++i) {
            s += std::pow(10.0, 2.0 * ramp(i, dim)) * z[i] * z[i];
        }
        return 0.1 * std::max(std::abs(zh[0]) / 1e4, s) + f_pen(x);
    }
    case 8: {
        const double c = std::max(1.0, std::sqrt(static_cast<double>(dim)) / 8.0);
        return rosenbrock_core((c * shifted).array() + 1.0);
    }
    case 9: {
        const double c = std::max(1.0, std::sqrt(static_cast<double>(dim)) / 8.0);
        return rosenbrock_core((c * (in.rot_r * x)).array() + 0.5);
    }
    case 10: {
        const Vector z = t_osz(in.rot_r * shifted);
        double s = 0.0;
        for (int i = 0; i < dim; ++i) {
            s += std::pow(10.0, 6.0 * ramp(i, dim)) * z[i] * z[i];
        }
        return s;
    }
    case 11: {
        const Vector z = t_osz(in.rot_r * shifted);
        return 1e6 * z[0] * z[0] + z.tail(dim - 1).squaredNorm();
    }
    case 12: {
        const Vector z = in.rot_r * t_asy(in.rot_r * shifted, 0.5);
        return z[0] * z[0] + 1e6 * z.tail(dim - 1).squaredNorm();
    }
    case 13: {
        const Vector z = in.rot_q * lambda_diag(10.0, dim).asDiagonal() * (in.rot_r * shifted);
        return z[0] * z[0] + 100.0 * z.tail(dim - 1).norm();
    }
    case 14: {
        const Vector z = in.rot_r * shifted;
        double s = 0.0;
        for (int i = 0; i < dim; ++i) {
            s += std::pow(std::abs(z[i]), 2.0 + 4.0 * ramp(i, dim));
        }
        return std::sqrt(s);
    }
    case 15: {
        const Vector inner = in.rot_q * t_asy(t_osz(in.rot_r * shifted), 0.2);
        const Vector z = in.rot_r * lambda_diag(10.0, dim).asDiagonal() * inner;
        return rastrigin_core(z);
    }
    case 16: {
        const Vector inner = in.rot_q * t_osz(in.rot_r * shifted);
        const Vector z = in.rot_r * lambda_diag(0.01, dim).asDiagonal() * inner;
        const double f0 = weierstrass_sum(0.0);
        double s = 0.0;
        for (int i = 0; i < dim; ++i) {
            s += weierstrass_sum(z[i]);
        }
        const double t = s / dim - f0;
        return 10.0 * t * t * t + 10.0 / dim * f_pen(x);
    }
    case 17:
    case 18: {
        const double cond = in.class_id == 17 ? 10.0 : 1000.0;
        const Vector z = lambda_diag(cond, dim).asDiagonal() * (in.rot_q * t_asy(in.rot_r * shifted, 0.5));
        return schaffer_core(z) + 10.0 * f_pen(x);
    }
    case 19: {
        const double c = std::max(1.0, std::sqrt(static_cast<double>(dim)) / 8.0);
        const Vector z = (c * (in.rot_r * x)).array() + 0.5;
        double s = 0.0;
        for (int i = 0; i + 1 < dim; ++i) {
            const double a = z[i] * z[i] - z[i + 1];
            const double b = z[i] - 1.0;
            const double si = 100.0 * a * a + b * b;
            s += si / 4000.0 - std::cos(si);
        }
        return 10.0 * s / (dim - 1) + 10.0;
    }
    case 20:
        return schwefel_raw(in, x) - in.schwefel_offset;
    case 21:
    case 22:
        return gallagher(in, x);
    case 23: {
        const Vector z = in.rot_q * lambda_diag(100.0, dim).asDiagonal() * (in.rot_r * shifted);
        const double d2 = static_cast<double>(dim) * dim;
        const double expo = 10.0 / std::pow(static_cast<double>(dim), 1.2);
        double prod = 1.0;
        for (int i = 0; i < dim; ++i) {
            double s = 0.0;
            double p = 2.0;
            for (int j = 1; j <= 32; ++j) {
                const double v = p * z[i];
                s += std::abs(v - std::nearbyint(v)) / p;
                p *= 2.0;
            }
            prod *= std::pow(1.0 + (i + 1) * s, expo);
        }
        return 10.0 / d2 * prod - 10.0 / d2 + f_pen(x);
    }
    case 24: {
        const double dd = static_cast<double>(dim);
        const double s = 1.0 - 1.0 / (2.0 * std::sqrt(dd + 20.0) - 8.2);
        const double mu1 = -std::sqrt((kLunacekMu0 * kLunacekMu0 - 1.0) / s);
        const Vector xh = 2.0 * in.signs.cwiseProduct(x);
        const Vector z = in.rot_q * lambda_diag(100.0, dim).asDiagonal() *
                         (in.rot_r * (xh.array() - kLunacekMu0).matrix());
        const double a = (xh.array() - kLunacekMu0).square().sum();
        const double b = dd + s * (xh.array() - mu1).square().sum();
        double cos_sum = 0.0;
        for (double v : z) {
            cos_sum += std::cos(kTwoPi * v);
        }
        return std::min(a, b) + 10.0 * (dd - cos_sum) + 1e4 * f_pen(x);
    }
    default:
        throw UsageError("BBOB class id must be in 1..24, got " + std::to_string(in.class_id));
    }
}

}  // namespace

double BaseInstance::evaluate(const Eigen::Ref<const Vector>& x) const
{
    if (x.size() != dim) {
        throw UsageError("dimension mismatch: instance has dim " + std::to_string(dim) + ", point has " +
                         std::to_string(x.size()));
    }
    return evaluate_raw(*this, x) + f_opt;
}

BaseInstance BaseInstance::with_offset(double offset) const
{
    BaseInstance out = *this;
    out.f_opt += offset;
    return out;
}

BaseInstance make_base_instance(int class_id, int instance_id, int dim)
{
    if (class_id < 1 || class_id > kNumBbobClasses) {
        throw UsageError("BBOB class id must be in 1..24, got " + std::to_string(class_id));
    }
    if (instance_id < 1) {
        throw UsageError("instance id must be >= 1, got " + std::to_string(instance_id));
    }
    if (dim < 2) {
        throw UsageError("BBOB functions require dim >= 2, got " + std::to_string(dim));
    }

    BaseInstance in;
    in.class_id = class_id;
    in.instance_id = instance_id;
    in.dim = dim;
    in.transform_seed = derive_seed(0xBB0BULL, static_cast<std::uint64_t>(class_id),
                                    static_cast<std::uint64_t>(instance_id), static_cast<std::uint64_t>(dim));
    Rng rng(in.transform_seed);

    const double n1 = rng.normal();
    double n2 = rng.normal();
    if (n2 == 0.0) {
        n2 = 1e-12;
    }
    in.f_opt = std::clamp(std::round(100.0 * 100.0 * n1 / n2) / 100.0, -1000.0, 1000.0);

    in.rot_r = random_rotation(rng, dim);
    in.rot_q = random_rotation(rng, dim);
    in.signs = Vector(dim);
    for (int i = 0; i < dim; ++i) {
        in.signs[i] = rng.uniform() < 0.5 ? -1.0 : 1.0;
    }
    in.x_opt = Vector(dim);
    const double box = class_id == 8 ? 3.0 : 4.0;
    for (int i = 0; i < dim; ++i) {
        in.x_opt[i] = rounded_uniform(rng, -box, box);
    }

    const double c = std::max(1.0, std::sqrt(static_cast<double>(dim)) / 8.0);
    switch (class_id) {
    case 4:
        for (int i = 0; i < dim; i += 2) {
            in.x_opt[i] = std::abs(in.x_opt[i]);
        }
        break;
    case 5:
        in.x_opt = 5.0 * in.signs;
        break;
    case 9:
    case 19:
        in.x_opt = in.rot_r.transpose() * Vector::Constant(dim, 0.5 / c);
        break;
    case 20: {
        in.x_opt = 0.5 * kSchwefelOpt * in.signs;
        in.schwefel_offset = 0.0;
        in.schwefel_offset = schwefel_raw(in, in.x_opt);
        break;
    }
    case 21:
        init_gallagher(in, rng, 101);
        break;
    case 22:
        init_gallagher(in, rng, 21);
        break;
    case 24:
        in.x_opt = 0.5 * kLunacekMu0 * in.signs;
        break;
    default:
        break;
    }
    in.raw_at_opt = evaluate_raw(in, in.x_opt);
    return in;
}

BaseInstance relocate_optimum(const BaseInstance& inst, const Vector& x_opt)
{
    static constexpr std::array<int, 7> kStructured{5, 9, 19, 20, 21, 22, 24};
    if (std::find(kStructured.begin(), kStructured.end(), inst.class_id) != kStructured.end()) {
        throw UsageError("class " + std::to_string(inst.class_id) + " does not support relocating its optimum");
    }
    if (x_opt.size() != inst.dim) {
        throw UsageError("relocate_optimum: dimension mismatch");
    }
    BaseInstance out = inst;
    out.x_opt = x_opt;
    out.raw_at_opt = evaluate_raw(out, out.x_opt);
    return out;
}

std::string bbob_class_name(int class_id)
{
    static constexpr std::array<const char*, 24> kNames{
        "sphere",          "ellipsoid",          "rastrigin",       "buche_rastrigin",  "linear_slope",
        "attractive_sector", "step_ellipsoid",   "rosenbrock",      "rosenbrock_rotated", "ellipsoid_rotated",
        "discus",          "bent_cigar",         "sharp_ridge",     "different_powers", "rastrigin_rotated",
        "weierstrass",     "schaffers_f7",       "schaffers_f7_ill", "griewank_rosenbrock", "schwefel",
        "gallagher_101",   "gallagher_21",       "katsuura",        "lunacek_bi_rastrigin"};
    if (class_id < 1 || class_id > kNumBbobClasses) {
        throw UsageError("BBOB class id must be in 1..24");
    }
    return kNames[static_cast<std::size_t>(class_id - 1)];
}

}  // namespace asbench
