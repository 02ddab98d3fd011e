#pragma once

// Recovers a full raster from whichever pixel samples actually arrived.
//
// Each channel solves the basis-pursuit denoising problem
//
//   min_X  sum_{k in samples} (idct2(X)[k] - b_k)^2  +  C * sum_i |X_i|
//
// over 2D DCT coefficients X.  The solver is proximal gradient descent
// with a monotone safeguard: FISTA momentum is used while it helps and
// restarts whenever the accelerated step would raise the objective, so
// the recorded objective trace never increases.  The data term has
// Lipschitz constant 2 (orthonormal transform, unit mask), hence the
// fixed 0.25 step.
//
// Missing chroma is neutral, not zero: a channel with no samples at all
// comes back as flat 128 so grey imagery stays grey.

#include <cstdint>
#include <future>
#include <limits>
#include <set>
#include <unordered_map>
#include <vector>

#include "dct.hpp"
#include "image_model.hpp"
#include "pixel_sequence.hpp"

namespace pcsi {

// Dequantized sample values keyed by column-major linear pixel index.
using SampleMap = std::unordered_map<std::uint32_t, double>;

struct SolverConfig {
    double l1_weight = 4.0;   // C above, tuned for 0..255 pixel scale
    int max_iters = 500;
    double tolerance = 1e-6;  // relative objective decrease on accepted steps
    double step_size = 0.25;
    bool accelerate = true;
};

inline Matrix soft_threshold(const Matrix& v, double lambda) {
    return v.unaryExpr([lambda](double x) {
        const double mag = std::abs(x) - lambda;
        return mag > 0.0 ? (x < 0.0 ? -mag : mag) : 0.0;
    });
}

struct SolveResult {
    Matrix pixels;       // spatial channel, clamped to [0, 255]
    Matrix coeffs;       // DCT coefficients the pixels came from
    bool converged = false;
    int iterations = 0;
    std::vector<double> objectives;  // one entry per iteration, non-increasing
};

inline double objective(const Matrix& coeffs, const SampleMap& samples,
                        const DctPlan& plan, double l1_weight) {
    const Matrix spatial = plan.inverse(coeffs);
    double fit = 0.0;
    for (const auto& [k, value] : samples) {
        const double d = spatial(k % plan.rows(), k / plan.rows()) - value;
        fit += d * d;
    }
    return fit + l1_weight * coeffs.cwiseAbs().sum();
}

inline SolveResult solve_channel(const SampleMap& samples, int rows, int cols,
                                 const SolverConfig& config = {}) {
    if (samples.empty()) throw std::invalid_argument("no samples to solve from");
    if (config.step_size <= 0.0 || config.max_iters < 1 || config.tolerance < 0.0 ||
        config.l1_weight < 0.0)
        throw std::invalid_argument("bad solver configuration");

    const DctPlan plan(rows, cols);
    Matrix mask = Matrix::Zero(rows, cols);
    Matrix target = Matrix::Zero(rows, cols);
    for (const auto& [k, value] : samples) {
        if (k >= static_cast<std::uint32_t>(rows) * static_cast<std::uint32_t>(cols))
            throw std::invalid_argument("sample index outside image");
        if (!std::isfinite(value)) throw std::invalid_argument("sample value not finite");
        mask(k % rows, k / rows) = 1.0;
        target(k % rows, k / rows) = value;
    }

    const auto fit_of = [&](const Matrix& coeffs) {
        return (mask.array() * (plan.inverse(coeffs) - target).array()).matrix().squaredNorm();
    };
    const auto grad_of = [&](const Matrix& coeffs) {
        return Matrix(2.0 * plan.forward(
            (mask.array() * (plan.inverse(coeffs) - target).array()).matrix()));
    };
    const double lambda = config.l1_weight * config.step_size;

    SolveResult result;
    Matrix x = Matrix::Zero(rows, cols);
    Matrix z = x;
    double obj_x = fit_of(x) + config.l1_weight * x.cwiseAbs().sum();
    double t = 1.0;
    bool restarted = false;

    for (int it = 0; it < config.max_iters; ++it) {
        result.iterations = it + 1;
        const Matrix v = soft_threshold(z - config.step_size * grad_of(z), lambda);
        const double obj_v = fit_of(v) + config.l1_weight * v.cwiseAbs().sum();

        if (obj_v <= obj_x) {
            const double rel = (obj_x - obj_v) /
                               std::max(obj_x, std::numeric_limits<double>::min());
            if (config.accelerate) {
                const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
                z = v + ((t - 1.0) / t_next) * (v - x);
                t = t_next;
            } else {
                z = v;
            }
            x = v;
            obj_x = obj_v;
            restarted = false;
            result.objectives.push_back(obj_x);
            if (rel < config.tolerance) {
                result.converged = true;
                break;
            }
        } else {
            // The momentum point overshot; retry plainly from the last
            // accepted iterate.  Failing again from there means x is a
            // fixed point of the prox step, which is convergence.
            result.objectives.push_back(obj_x);
            if (restarted || !config.accelerate) {
                result.converged = true;
                break;
            }
            z = x;
            t = 1.0;
            restarted = true;
        }
    }

    result.coeffs = std::move(x);
    result.pixels = plan.inverse(result.coeffs).cwiseMax(0.0).cwiseMin(255.0);
    return result;
}

// Everything a receiver has accumulated for one image: dequantized
// luma/chroma samples plus which packets contributed.  Chroma keys are
// always a subset of luma keys since color pixels carry all three.
struct ReceivedPixelSet {
    std::uint16_t rows = 0;
    std::uint16_t cols = 0;
    ColorDepth depth{8};
    SampleMap y;
    SampleMap cb;
    SampleMap cr;
    std::set<std::uint16_t> packet_ids;
};

inline double psnr(const Image& a, const Image& b) {
    if (a.width() != b.width() || a.height() != b.height())
        throw std::invalid_argument("image dimensions differ");
    double se = 0.0;
    const auto& da = a.data();
    const auto& db = b.data();
    for (std::size_t i = 0; i < da.size(); ++i) {
        const double d = static_cast<double>(da[i]) - static_cast<double>(db[i]);
        se += d * d;
    }
    if (se == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(255.0 * 255.0 * da.size() / se);
}

inline Image reconstruct(const ReceivedPixelSet& received,
                         const SolverConfig& config = {}) {
    Image::check_extent(received.cols, received.rows);
    if (received.y.empty()) throw std::invalid_argument("no luma samples received");
    const int rows = received.rows;
    const int cols = received.cols;

    const auto solve_or_flat = [&](const SampleMap& samples) {
        if (samples.empty()) return Matrix::Constant(rows, cols, 128.0).eval();
        return solve_channel(samples, rows, cols, config).pixels;
    };
    auto fy = std::async(std::launch::async, [&] { return solve_or_flat(received.y); });
    auto fcb = std::async(std::launch::async, [&] { return solve_or_flat(received.cb); });
    auto fcr = std::async(std::launch::async, [&] { return solve_or_flat(received.cr); });
    const Matrix my = fy.get(), mcb = fcb.get(), mcr = fcr.get();

    Image out(cols, rows);
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            const YcbcrPixel px{
                detail::clamp_u8(detail::round_half_up(my(r, c))),
                detail::clamp_u8(detail::round_half_up(mcb(r, c))),
                detail::clamp_u8(detail::round_half_up(mcr(r, c)))};
            out.set(r, c, ycbcr_to_rgb(px));
        }
    }
    return out;
}

} // namespace pcsi
