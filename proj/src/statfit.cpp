#include "pwe/statfit.hpp"

#include <algorithm>
#include <cmath>
#include <math.h>
#include <numeric>
#include <string>

namespace pwe::stats {

namespace {

// std::lgamma writes the global signgam on glibc; lgamma_r does not.
double log_gamma(double x) {
#if defined(__GLIBC__)
    int sign = 0;
    return ::lgamma_r(x, &sign);
#else
    return std::lgamma(x);
#endif
}

double floored(double x) { return std::max(x, kLogFloor); }

void check_gamma_params(double k, double theta) {
    if (!(k > 0.0) || !(theta > 0.0) || !std::isfinite(k) || !std::isfinite(theta)) {
        throw std::invalid_argument("gamma parameters must be finite and positive");
    }
}

void check_sigma(double sigma) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw std::invalid_argument("rayleigh sigma must be finite and positive");
    }
}

}  // namespace

DeviationDataset::DeviationDataset(std::vector<double> samples, ConfigTag tag)
    : samples_(std::move(samples)), tag_(tag) {
    for (double x : samples_) {
        if (!(x >= 0.0) || !std::isfinite(x)) {
            throw std::invalid_argument("deviation samples must be finite and non-negative");
        }
    }
}

double gamma_log_pdf(double x, double k, double theta) {
    check_gamma_params(k, theta);
    if (x < 0.0) {
        throw std::invalid_argument("gamma_pdf: x must be non-negative");
    }
    if (x == 0.0) {
        if (k < 1.0) {
            throw std::domain_error("gamma_pdf: density diverges at x = 0 for k < 1");
        }
        return k == 1.0 ? -std::log(theta) : -INFINITY;
    }
    return (k - 1.0) * std::log(x) - x / theta - log_gamma(k) - k * std::log(theta);
}

double gamma_pdf(double x, double k, double theta) { return std::exp(gamma_log_pdf(x, k, theta)); }

double rayleigh_log_pdf(double x, double sigma) {
    check_sigma(sigma);
    if (x < 0.0) {
        throw std::invalid_argument("rayleigh_pdf: x must be non-negative");
    }
    if (x == 0.0) {
        return -INFINITY;
    }
    const double s2 = sigma * sigma;
    return std::log(x) - std::log(s2) - x * x / (2.0 * s2);
}

double rayleigh_pdf(double x, double sigma) {
    check_sigma(sigma);
    if (x < 0.0) {
        throw std::invalid_argument("rayleigh_pdf: x must be non-negative");
    }
    const double s2 = sigma * sigma;
    return x / s2 * std::exp(-x * x / (2.0 * s2));
}

double digamma(double x) {
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw std::domain_error("digamma: x must be finite and positive");
    }
    double acc = 0.0;
    while (x < 6.0) {
        acc -= 1.0 / x;
        x += 1.0;
    }
    const double t = 1.0 / (x * x);
    // Bernoulli tail: B_2n / (2n x^2n), n = 1..7
    const double tail =
        t * (1.0 / 12 -
             t * (1.0 / 120 - t * (1.0 / 252 - t * (1.0 / 240 - t * (1.0 / 132 - t * (691.0 / 32760 - t / 12))))));
    return acc + std::log(x) - 0.5 / x - tail;
}

namespace {

struct LogMoments {
    double mean = 0.0;
    double mean_log = 0.0;
};

LogMoments log_moments(std::span<const double> samples) {
    LogMoments m;
    for (double x : samples) {
        m.mean += x;
        m.mean_log += std::log(floored(x));
    }
    const auto n = static_cast<double>(samples.size());
    m.mean /= n;
    m.mean_log /= n;
    return m;
}

}  // namespace

double gamma_shape_score(double k, std::span<const double> samples) {
    const auto m = log_moments(samples);
    return std::log(k) - digamma(k) - std::log(m.mean) + m.mean_log;
}

GammaFit fit_gamma_mle(const DeviationDataset &data) {
    const auto xs = data.samples();
    if (xs.size() < 2) {
        throw DegenerateData("gamma fit needs at least 2 samples, got " + std::to_string(xs.size()));
    }
    const double first = xs.front();
    if (std::all_of(xs.begin(), xs.end(), [&](double x) { return x == first; })) {
        throw DegenerateData("gamma fit is undefined when all samples are identical");
    }

    const auto m = log_moments(xs);
    // ln k - psi(k) decreases monotonically from +inf to 0, so a root needs rhs > 0.
    const double rhs = std::log(m.mean) - m.mean_log;
    if (!(rhs > 0.0)) {
        throw DegenerateData("gamma fit needs spread above the 1e-9 log floor");
    }
    const auto score = [&](double k) { return std::log(k) - digamma(k) - rhs; };

    constexpr double k_min = 1e-4;
    constexpr double k_max = 1e4;
    double var = 0.0;
    for (double x : xs) {
        const double d = x - m.mean;
        var += d * d;
    }
    var /= static_cast<double>(xs.size());
    double k0 = var > 0.0 ? m.mean * m.mean / var : 1.0;
    k0 = std::clamp(k0, k_min, k_max);

    double lo = k0;
    double hi = k0;
    if (score(k0) > 0.0) {
        while (score(hi) > 0.0) {
            lo = hi;
            if (hi >= k_max) {
                throw DegenerateData("gamma shape estimate exceeds " + std::to_string(k_max));
            }
            hi = std::min(hi * 2.0, k_max);
        }
    } else {
        while (score(lo) <= 0.0) {
            hi = lo;
            if (lo <= k_min) {
                throw DegenerateData("gamma shape estimate is below " + std::to_string(k_min));
            }
            lo = std::max(lo * 0.5, k_min);
        }
    }

    // score(lo) > 0 >= score(hi)
    double k = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        k = 0.5 * (lo + hi);
        if (k <= lo || k >= hi) {
            break;
        }
        const double g = score(k);
        if (g == 0.0) {
            break;
        }
        (g > 0.0 ? lo : hi) = k;
    }
    if (std::abs(score(lo)) < std::abs(score(k))) {
        k = lo;
    }
    if (std::abs(score(hi)) < std::abs(score(k))) {
        k = hi;
    }

    GammaFit fit;
    fit.k_hat = k;
    fit.theta_hat = m.mean / k;
    for (double x : xs) {
        fit.log_likelihood += gamma_log_pdf(floored(x), fit.k_hat, fit.theta_hat);
    }
    return fit;
}

RayleighFit fit_rayleigh_mle(const DeviationDataset &data) {
    const auto xs = data.samples();
    if (xs.empty()) {
        throw DegenerateData("rayleigh fit needs at least one sample");
    }
    double sum_sq = 0.0;
    for (double x : xs) {
        sum_sq += x * x;
    }
    if (!(sum_sq > 0.0)) {
        throw DegenerateData("rayleigh fit is undefined when every sample is zero");
    }
    RayleighFit fit;
    fit.sigma_hat = std::sqrt(sum_sq / (2.0 * static_cast<double>(xs.size())));
    for (double x : xs) {
        fit.log_likelihood += rayleigh_log_pdf(floored(x), fit.sigma_hat);
    }
    return fit;
}

Histogram make_histogram(const DeviationDataset &data, int n_bins) {
    if (n_bins < 2) {
        throw std::invalid_argument("histogram needs at least 2 bins");
    }
    const auto xs = data.samples();
    if (xs.empty()) {
        throw std::invalid_argument("histogram of an empty dataset");
    }
    double top = *std::max_element(xs.begin(), xs.end());
    if (top == 0.0) {
        top = 1.0;
    }
    const double width = top / n_bins;

    Histogram h;
    h.bin_edges.resize(n_bins + 1);
    for (int i = 0; i < n_bins; ++i) {
        h.bin_edges[i] = i * width;
    }
    h.bin_edges[n_bins] = top;
    h.counts.assign(n_bins, 0);
    for (double x : xs) {
        // Initial guess from division, then settle against the stored edges.
        int b = std::min(static_cast<int>(x / width), n_bins - 1);
        while (b > 0 && x < h.bin_edges[b]) {
            --b;
        }
        while (b < n_bins - 1 && x >= h.bin_edges[b + 1]) {
            ++b;
        }
        ++h.counts[b];
    }
    h.densities.resize(n_bins);
    const auto n = static_cast<double>(xs.size());
    for (int i = 0; i < n_bins; ++i) {
        h.densities[i] = static_cast<double>(h.counts[i]) / (n * (h.bin_edges[i + 1] - h.bin_edges[i]));
    }
    return h;
}

double kld_empirical(const DeviationDataset &data, const Pdf &model_pdf, int n_bins) {
    constexpr double eps = 1e-12;
    const auto h = make_histogram(data, n_bins);
    const auto n = static_cast<double>(data.size());

    std::vector<double> q(h.bins());
    double q_total = 0.0;
    for (std::size_t i = 0; i < h.bins(); ++i) {
        const double lo = h.bin_edges[i];
        const double hi = h.bin_edges[i + 1];
        const double mass = model_pdf(0.5 * (lo + hi)) * (hi - lo);
        q[i] = std::isfinite(mass) && mass > 0.0 ? mass : 0.0;
        q_total += q[i];
    }

    const double p_norm = 1.0 + eps * static_cast<double>(h.bins());
    const double q_norm = q_total + eps * static_cast<double>(h.bins());
    double kld = 0.0;
    for (std::size_t i = 0; i < h.bins(); ++i) {
        if (h.counts[i] == 0) {
            continue;
        }
        const double p = (static_cast<double>(h.counts[i]) / n + eps) / p_norm;
        const double qi = (q[i] + eps) / q_norm;
        kld += p * std::log(p / qi);
    }
    // Exact-match inputs can land a few ulps below zero.
    return std::max(kld, 0.0);
}

}  // namespace pwe::stats
