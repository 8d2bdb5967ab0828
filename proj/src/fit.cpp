#include "omsim/fit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "omsim/errors.hpp"

namespace omsim {

namespace {

constexpr int kMaxIterations = 200;
constexpr double kStepTolerance = 1e-9;
constexpr double kGradientTolerance = 1e-12;

// Solve a 4x4 system by Gaussian elimination with partial pivoting.
bool solve4(std::array<std::array<double, 4>, 4> a, std::array<double, 4>& b) {
    for (int col = 0; col < 4; ++col) {
        int pivot = col;
        for (int r = col + 1; r < 4; ++r)
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        if (a[pivot][col] == 0.0) return false;
        std::swap(a[col], a[pivot]);
        std::swap(b[col], b[pivot]);
        for (int r = col + 1; r < 4; ++r) {
            const double f = a[r][col] / a[col][col];
            for (int c = col; c < 4; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    for (int col = 3; col >= 0; --col) {
        for (int r = 0; r < col; ++r) {
            b[r] -= a[r][col] / a[col][col] * b[col];
            a[r][col] = 0.0;
        }
        b[col] /= a[col][col];
    }
    return true;
}

struct ScaledProblem {
    std::vector<double> x;  // (omega - center_guess) / width_guess
    std::vector<double> y;  // value / y_scale
};

double sse(const ScaledProblem& p, const std::array<double, 4>& q) {
    // q = {amplitude, center, width, baseline} in scaled coordinates
    const double h = 0.25 * q[2] * q[2];
    double total = 0.0;
    for (std::size_t i = 0; i < p.x.size(); ++i) {
        const double dx = p.x[i] - q[1];
        const double r = q[0] * h / (dx * dx + h) + q[3] - p.y[i];
        total += r * r;
    }
    return total;
}

}  // namespace

LorentzianGuess guess_from_peak(const SpectrumTrace& trace) {
    if (trace.omega.size() < 5 || trace.omega.size() != trace.value.size())
        throw parameter_error("trace too short for a peak guess");

    std::vector<double> sorted = trace.value;
    std::sort(sorted.begin(), sorted.end());
    const double baseline = sorted[sorted.size() / 10];

    std::size_t peak = 0;
    for (std::size_t i = 1; i < trace.value.size(); ++i)
        if (trace.value[i] > trace.value[peak]) peak = i;

    LorentzianGuess g;
    g.center_rad_s = trace.omega[peak];
    g.baseline = baseline;
    g.amplitude = trace.value[peak] - baseline;

    const double half = baseline + 0.5 * g.amplitude;
    double lo = trace.omega.front();
    double hi = trace.omega.back();
    for (std::size_t i = peak; i-- > 0;)
        if (trace.value[i] <= half) {
            lo = trace.omega[i];
            break;
        }
    for (std::size_t i = peak + 1; i < trace.value.size(); ++i)
        if (trace.value[i] <= half) {
            hi = trace.omega[i];
            break;
        }
    g.width_rad_s = hi - lo;
    if (!(g.width_rad_s > 0.0))
        g.width_rad_s = 5.0 * (trace.omega[1] - trace.omega[0]);
    return g;
}

FitResult fit_lorentzian(const SpectrumTrace& trace,
                         const LorentzianGuess& guess) {
    const std::size_t n = trace.omega.size();
    if (n < 5 || n != trace.value.size())
        throw parameter_error("trace too short to fit");
    if (!(guess.width_rad_s > 0.0))
        throw parameter_error("width guess must be positive");

    // Rescale so the convergence thresholds are meaningful regardless of
    // the physical magnitudes (PSDs can sit at 1e-30 m^2/Hz).
    double y_scale = 0.0;
    for (const double v : trace.value) y_scale = std::max(y_scale, std::abs(v));
    if (y_scale == 0.0) y_scale = 1.0;

    ScaledProblem p;
    p.x.resize(n);
    p.y.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        p.x[i] = (trace.omega[i] - guess.center_rad_s) / guess.width_rad_s;
        p.y[i] = trace.value[i] / y_scale;
    }

    std::array<double, 4> q = {guess.amplitude / y_scale, 0.0, 1.0,
                               guess.baseline / y_scale};
    double current_sse = sse(p, q);
    double lambda = 1e-3;
    bool converged = false;
    int iter = 0;

    for (; iter < kMaxIterations; ++iter) {
        const double h = 0.25 * q[2] * q[2];
        std::array<std::array<double, 4>, 4> jtj{};
        std::array<double, 4> jtr{};
        for (std::size_t i = 0; i < n; ++i) {
            const double dx = p.x[i] - q[1];
            const double d = dx * dx + h;
            const double shape = h / d;
            const double r = q[0] * shape + q[3] - p.y[i];
            const std::array<double, 4> j = {
                shape,
                q[0] * h * 2.0 * dx / (d * d),
                q[0] * dx * dx * (0.5 * q[2]) / (d * d),
                1.0,
            };
            for (int a = 0; a < 4; ++a) {
                jtr[a] += j[a] * r;
                for (int b = a; b < 4; ++b) jtj[a][b] += j[a] * j[b];
            }
        }
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < a; ++b) jtj[a][b] = jtj[b][a];

        double grad_norm = 0.0;
        for (const double g : jtr) grad_norm += g * g;
        grad_norm = std::sqrt(grad_norm);
        if (grad_norm < kGradientTolerance) {
            converged = true;
            break;
        }

        double max_diag = 0.0;
        for (int a = 0; a < 4; ++a) max_diag = std::max(max_diag, jtj[a][a]);
        if (max_diag == 0.0) max_diag = 1.0;

        bool stepped = false;
        for (int attempt = 0; attempt < 40 && !stepped; ++attempt) {
            auto damped = jtj;
            for (int a = 0; a < 4; ++a)
                damped[a][a] += lambda * std::max(jtj[a][a], 1e-12 * max_diag);
            std::array<double, 4> delta = {-jtr[0], -jtr[1], -jtr[2], -jtr[3]};
            if (!solve4(damped, delta)) {
                lambda *= 10.0;
                continue;
            }
            std::array<double, 4> candidate = {q[0] + delta[0], q[1] + delta[1],
                                               q[2] + delta[2], q[3] + delta[3]};
            candidate[2] = std::abs(candidate[2]);  // width sign is immaterial
            const double candidate_sse = sse(p, candidate);
            if (candidate_sse <= current_sse) {
                double step = 0.0, scale = 0.0;
                for (int a = 0; a < 4; ++a) {
                    step += delta[a] * delta[a];
                    scale += candidate[a] * candidate[a];
                }
                q = candidate;
                current_sse = candidate_sse;
                lambda = std::max(lambda / 3.0, 1e-12);
                stepped = true;
                if (std::sqrt(step) < kStepTolerance * (1.0 + std::sqrt(scale)))
                    converged = true;
            } else {
                lambda *= 10.0;
            }
        }
        if (!stepped || converged) break;
    }

    FitResult out;
    out.amplitude = q[0] * y_scale;
    out.center_rad_s = guess.center_rad_s + q[1] * guess.width_rad_s;
    out.width_rad_s = std::abs(q[2]) * guess.width_rad_s;
    out.baseline = q[3] * y_scale;
    out.residual_norm = std::sqrt(current_sse / static_cast<double>(n));
    out.iterations = iter;
    // A fit that collapsed to amplitude ~ 0 found no resonance.
    if (!(q[0] > 1e-9) || !(out.width_rad_s > 0.0)) converged = false;
    out.converged = converged;
    return out;
}

}  // namespace omsim
