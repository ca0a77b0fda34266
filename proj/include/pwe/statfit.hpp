#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace pwe::stats {

/// Input that cannot be fitted (too few samples, all identical, all zero...).
class DegenerateData : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Samples are floored to this before any logarithm.
inline constexpr double kLogFloor = 1e-9;
inline constexpr int kDefaultBins = 10;

struct ConfigTag {
    double d_r = 0.0;
    int m_side = 0;
};

/// Pooled deviation samples (degrees) for one configuration. Immutable.
class DeviationDataset {
public:
    explicit DeviationDataset(std::vector<double> samples, ConfigTag tag = {});

    std::span<const double> samples() const { return samples_; }
    std::size_t size() const { return samples_.size(); }
    const ConfigTag &tag() const { return tag_; }

private:
    std::vector<double> samples_;
    ConfigTag tag_;
};

struct GammaFit {
    double k_hat = 0.0;      // shape
    double theta_hat = 0.0;  // scale
    double log_likelihood = 0.0;
};

struct RayleighFit {
    double sigma_hat = 0.0;
    double log_likelihood = 0.0;
};

struct Histogram {
    std::vector<double> bin_edges;
    std::vector<double> densities;
    std::vector<long long> counts;

    std::size_t bins() const { return densities.size(); }
};

using Pdf = std::function<double(double)>;

double gamma_pdf(double x, double k, double theta);
double gamma_log_pdf(double x, double k, double theta);
double rayleigh_pdf(double x, double sigma);
double rayleigh_log_pdf(double x, double sigma);

/// psi(x) for x > 0: upward recurrence to x >= 6, then the asymptotic series.
double digamma(double x);

/// Score equation of the gamma shape: ln k - psi(k) - ln(mean) + mean(ln x).
/// Samples are floored at kLogFloor.
double gamma_shape_score(double k, std::span<const double> samples);

GammaFit fit_gamma_mle(const DeviationDataset &data);
RayleighFit fit_rayleigh_mle(const DeviationDataset &data);

/// Equal-width bins over [0, max sample]; the top edge is inclusive.
Histogram make_histogram(const DeviationDataset &data, int n_bins = kDefaultBins);

/// Discrete KL divergence D(P||Q) between the empirical bin masses P and the
/// model masses Q (pdf at bin midpoint times width), both smoothed by
/// 1e-12 and renormalized. Bins with no samples contribute nothing.
double kld_empirical(const DeviationDataset &data, const Pdf &model_pdf, int n_bins = kDefaultBins);

}  // namespace pwe::stats
