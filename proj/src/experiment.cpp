#include "pwe/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <set>
#include <thread>

namespace pwe {

void validate_config(const ExperimentConfig &c) {
    if (c.d_r_values.empty()) {
        throw ConfigError("d_r_values", "must list at least one RIS side length");
    }
    for (double d : c.d_r_values) {
        if (!(d > 0.0) || !std::isfinite(d)) {
            throw ConfigError("d_r_values", "every value must be a positive length in meters");
        }
    }
    if (std::set<double>(c.d_r_values.begin(), c.d_r_values.end()).size() != c.d_r_values.size()) {
        throw ConfigError("d_r_values", "values must be distinct");
    }
    if (c.m_sides.empty()) {
        throw ConfigError("m_sides", "must list at least one array side");
    }
    for (int m : c.m_sides) {
        if (m < 1) {
            throw ConfigError("m_sides", "every value must be at least 1");
        }
    }
    if (std::set<int>(c.m_sides.begin(), c.m_sides.end()).size() != c.m_sides.size()) {
        throw ConfigError("m_sides", "values must be distinct");
    }
    if (c.n_trials < 1) {
        throw ConfigError("n_trials", "must be at least 1");
    }
    if (c.n_bins < 2) {
        throw ConfigError("n_bins", "must be at least 2");
    }
}

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
    // splitmix64 finalizer over a combined word
    std::uint64_t z = a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2));
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t cell_seed(std::uint64_t seed, double d_r, int m_side) {
    return mix_seed(mix_seed(seed, std::bit_cast<std::uint64_t>(d_r)), static_cast<std::uint64_t>(m_side));
}

std::uint64_t trial_seed(std::uint64_t cell, int trial) { return mix_seed(cell, static_cast<std::uint64_t>(trial)); }

WavefrontSpec sample_wavefront(const Scene &scene, RngStream &rng) {
    constexpr int kMaxRejections = 10000;
    const Vec3 b = normalized(scene.rx.boresight);
    const Vec3 e1 = any_orthogonal(b);
    const Vec3 e2 = cross(b, e1);

    WavefrontSpec spec;
    spec.doas.reserve(scene.rx.size());
    for (const auto &ant : scene.rx.antennas) {
        int rejected = 0;
        for (;;) {
            // cos(polar) uniform on (0, 1] gives uniform area on the hemisphere.
            const double cos_t = 1.0 - rng.uniform();
            const double sin_t = std::sqrt(std::max(0.0, 1.0 - cos_t * cos_t));
            const double az = 2.0 * std::numbers::pi * rng.uniform();
            const Vec3 doa = normalized(cos_t * b + sin_t * (std::cos(az) * e1 + std::sin(az) * e2));
            if (ray_wall_point(ant, doa, scene.walls)) {
                spec.doas.push_back(doa);
                break;
            }
            if (++rejected >= kMaxRejections) {
                throw SceneError("10000 consecutive sampled DoAs left the room model");
            }
        }
    }
    return spec;
}

FitReport fit_report(const stats::DeviationDataset &data, int n_bins, long long n_failures) {
    FitReport r;
    r.config_tag = data.tag();
    r.n_samples = static_cast<long long>(data.size());
    r.n_failures = n_failures;
    try {
        r.gamma = stats::fit_gamma_mle(data);
    } catch (const stats::DegenerateData &) {
    }
    try {
        r.rayleigh = stats::fit_rayleigh_mle(data);
    } catch (const stats::DegenerateData &) {
    }
    if (r.gamma) {
        const auto g = *r.gamma;
        r.kld_gamma = stats::kld_empirical(
            data, [g](double x) { return stats::gamma_pdf(x, g.k_hat, g.theta_hat); }, n_bins);
    }
    if (r.rayleigh) {
        const double sigma = r.rayleigh->sigma_hat;
        r.kld_rayleigh =
            stats::kld_empirical(data, [sigma](double x) { return stats::rayleigh_pdf(x, sigma); }, n_bins);
    }
    return r;
}

CellResult run_trials(const Scene &scene, const PweGraph &graph, int n_trials, int n_bins, std::uint64_t seed,
                      stats::ConfigTag tag, unsigned threads) {
    std::vector<RouteSet> outcomes(static_cast<std::size_t>(n_trials));
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;

    const auto worker = [&] {
        for (int t = next++; t < n_trials; t = next++) {
            try {
                RngStream rng(trial_seed(seed, t));
                outcomes[t] = get_routes(scene, graph, sample_wavefront(scene, rng));
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) {
                    error = std::current_exception();
                }
                next = n_trials;
            }
        }
    };

    if (threads == 0) {
        threads = std::max(1u, std::thread::hardware_concurrency());
    }
    threads = std::min<unsigned>(threads, static_cast<unsigned>(n_trials));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned i = 0; i < threads; ++i) {
            pool.emplace_back(worker);
        }
    }
    if (error) {
        std::rethrow_exception(error);
    }

    std::vector<double> samples;
    std::vector<DeviationRecord> records;
    long long failures = 0;
    for (int t = 0; t < n_trials; ++t) {
        for (const auto &route : outcomes[t].routes) {
            samples.push_back(route.phi_deg);
            records.push_back(
                {t, route.antenna, route.phi_deg, route.last_ris_id, static_cast<int>(route.path.size())});
        }
        failures += static_cast<long long>(outcomes[t].failures.size());
    }

    stats::DeviationDataset dataset(std::move(samples), tag);
    auto report = fit_report(dataset, n_bins, failures);
    std::optional<stats::Histogram> histogram;
    if (dataset.size() > 0) {
        histogram = stats::make_histogram(dataset, n_bins);
    }
    return CellResult{std::move(dataset), std::move(report), std::move(records), std::move(histogram)};
}

CellResult run_cell(const ExperimentConfig &config, double d_r, int m_side, unsigned threads) {
    const Scene scene = make_two_room_scene(config.scene, d_r, m_side);
    const PweGraph graph = build_graph(scene);
    return run_trials(scene, graph, config.n_trials, config.n_bins, cell_seed(config.seed, d_r, m_side),
                      stats::ConfigTag{d_r, m_side}, threads);
}

std::vector<CellResult> run_sweep(const ExperimentConfig &config, unsigned threads) {
    validate_config(config);
    auto d_rs = config.d_r_values;
    auto ms = config.m_sides;
    std::sort(d_rs.begin(), d_rs.end());
    std::sort(ms.begin(), ms.end());

    std::vector<CellResult> cells;
    cells.reserve(d_rs.size() * ms.size());
    for (int m : ms) {
        for (double d : d_rs) {
            cells.push_back(run_cell(config, d, m, threads));
        }
    }
    return cells;
}

}  // namespace pwe
