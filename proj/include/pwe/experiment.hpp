#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "pwe/routing.hpp"
#include "pwe/scene.hpp"
#include "pwe/statfit.hpp"

namespace pwe {

/// Invalid experiment configuration; `key()` names the offending setting.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string key, const std::string &what)
        : std::runtime_error(key + ": " + what), key_(std::move(key)) {}
    const std::string &key() const { return key_; }

private:
    std::string key_;
};

struct ExperimentConfig {
    std::vector<double> d_r_values{0.15, 0.20, 0.25, 0.30, 0.35, 0.40, 0.45, 0.50, 0.55};
    std::vector<int> m_sides{4, 6, 8, 10};
    int n_trials = 100;
    std::uint64_t seed = 1;
    int n_bins = stats::kDefaultBins;
    SceneParams scene;
};

/// Throws ConfigError for the first invalid field.
void validate_config(const ExperimentConfig &config);

/// 64-bit stream used for all sampling: mt19937_64 with our own [0, 1) mapping
/// so draws do not depend on the standard library's distributions.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : engine_(seed) {}
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    std::uint64_t next() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);
/// Derived from the values, not list positions, so reordering the sweep
/// lists leaves every cell unchanged.
std::uint64_t cell_seed(std::uint64_t seed, double d_r, int m_side);
std::uint64_t trial_seed(std::uint64_t cell, int trial);

/// One desired DoA per antenna, uniform over the hemisphere around the array
/// boresight; directions whose ray misses every wall are redrawn.
/// Throws SceneError after 10^4 consecutive misses.
WavefrontSpec sample_wavefront(const Scene &scene, RngStream &rng);

struct FitReport {
    stats::ConfigTag config_tag;
    std::optional<stats::GammaFit> gamma;
    std::optional<stats::RayleighFit> rayleigh;
    std::optional<double> kld_gamma;
    std::optional<double> kld_rayleigh;
    long long n_samples = 0;
    long long n_failures = 0;
};

struct DeviationRecord {
    int trial = 0;
    int antenna = 0;
    double phi_deg = 0.0;
    int last_ris_id = 0;
    int path_len = 0;  // vertices from transmitter to last RIS, inclusive
};

struct CellResult {
    stats::DeviationDataset dataset;
    FitReport report;
    std::vector<DeviationRecord> records;  // trial-major, antenna order
    std::optional<stats::Histogram> histogram;
};

/// Fits both models and their KL scores; fits that the data cannot support
/// stay empty.
FitReport fit_report(const stats::DeviationDataset &data, int n_bins, long long n_failures);

/// Runs `n_trials` independent trials on a prebuilt scene and pools the
/// deviations. `threads` = 0 picks the hardware concurrency; results do not
/// depend on it.
CellResult run_trials(const Scene &scene, const PweGraph &graph, int n_trials, int n_bins, std::uint64_t seed,
                      stats::ConfigTag tag, unsigned threads = 1);

CellResult run_cell(const ExperimentConfig &config, double d_r, int m_side, unsigned threads = 1);

/// Every (d_r, m_side) pair, ordered by m_side then d_r.
std::vector<CellResult> run_sweep(const ExperimentConfig &config, unsigned threads = 1);

}  // namespace pwe
