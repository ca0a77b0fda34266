// pwesim: command-line front end for the RIS wavefront routing simulator.
//
//   pwesim sweep --config cfg.json --out results/ [--seed N] [--threads T]
//   pwesim route --config cfg.json --spec doas.json --out routes.json
//   pwesim fit   --data deviations.csv --out fit.json [--bins 10]
//
// Exit codes: 0 ok, 1 malformed input, 2 scene/data fault, 3 I/O failure.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "pwe/experiment.hpp"
#include "pwe/graph.hpp"
#include "pwe/io.hpp"
#include "pwe/routing.hpp"
#include "pwe/scene.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

enum ExitCode : int { kOk = 0, kBadInput = 1, kFault = 2, kIoError = 3 };

struct Exit {
    int code;
    std::string message;
};

std::string read_file(const fs::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Exit{kIoError, "cannot read " + path.string()};
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path &path, const std::string &bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out || !out.write(bytes.data(), static_cast<std::streamsize>(bytes.size())) || !out.flush()) {
        throw Exit{kIoError, "cannot write " + path.string()};
    }
}

pwe::ExperimentConfig load_config(const fs::path &path) {
    const auto text = read_file(path);
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error &e) {
        throw Exit{kBadInput, "config " + path.string() + " is not valid JSON: " + e.what()};
    }
    try {
        return pwe::io::config_from_json(j);
    } catch (const pwe::ConfigError &e) {
        throw Exit{kBadInput, std::string("invalid config key ") + e.what()};
    }
}

int cmd_sweep(const fs::path &config_path, const fs::path &out_dir, std::optional<std::uint64_t> seed,
              unsigned threads) {
    const auto started = pwe::io::utc_timestamp();
    auto config = load_config(config_path);
    if (seed) {
        config.seed = *seed;
    }

    std::vector<pwe::CellResult> cells;
    try {
        cells = pwe::run_sweep(config, threads);
    } catch (const pwe::ConfigError &e) {
        throw Exit{kBadInput, std::string("invalid config key ") + e.what()};
    } catch (const pwe::SceneError &e) {
        throw Exit{kFault, std::string("scene fault: ") + e.what()};
    }

    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) {
        throw Exit{kIoError, "cannot create " + out_dir.string() + ": " + ec.message()};
    }
    const std::vector<std::pair<std::string, std::string>> files{
        {"deviations.csv", pwe::io::deviations_csv(cells)},
        {"fits.csv", pwe::io::fits_csv(cells)},
        {"histograms.csv", pwe::io::histograms_csv(cells)},
    };
    json inventory = json::array();
    for (const auto &[name, bytes] : files) {
        write_file(out_dir / name, bytes);
        inventory.push_back({{"name", name}, {"bytes", bytes.size()}, {"sha256", pwe::io::sha256_hex(bytes)}});
    }
    const json manifest{
        {"tool", pwe::io::kToolName},   {"version", pwe::io::kToolVersion},
        {"seed", config.seed},          {"config", pwe::io::config_to_json(config)},
        {"started_at", started},        {"finished_at", pwe::io::utc_timestamp()},
        {"files", inventory},
    };
    write_file(out_dir / "manifest.json", manifest.dump(2) + "\n");
    return kOk;
}

int cmd_route(const fs::path &config_path, const fs::path &spec_path, const fs::path &out_path) {
    const auto config = load_config(config_path);
    const double d_r = config.d_r_values.front();
    const int m_side = config.m_sides.front();

    json spec_json;
    try {
        spec_json = json::parse(read_file(spec_path));
    } catch (const json::parse_error &e) {
        throw Exit{kBadInput, "spec " + spec_path.string() + " is not valid JSON: " + e.what()};
    }
    pwe::WavefrontSpec spec;
    try {
        spec = pwe::io::wavefront_from_json(spec_json);
    } catch (const std::invalid_argument &e) {
        throw Exit{kBadInput, e.what()};
    }
    const auto m = static_cast<std::size_t>(m_side) * m_side;
    if (spec.doas.size() != m) {
        throw Exit{kBadInput, "spec lists " + std::to_string(spec.doas.size()) + " DoAs but the array has " +
                                  std::to_string(m) + " antennas"};
    }
    for (std::size_t i = 0; i < spec.doas.size(); ++i) {
        if (!pwe::is_unit(spec.doas[i], 1e-6)) {
            throw Exit{kFault, "DoA " + std::to_string(i) + " is not a unit vector"};
        }
    }

    pwe::RouteSet routes;
    try {
        const auto scene = pwe::make_two_room_scene(config.scene, d_r, m_side);
        const auto graph = pwe::build_graph(scene);
        routes = pwe::get_routes(scene, graph, spec);
    } catch (const pwe::SceneError &e) {
        throw Exit{kFault, std::string("scene fault: ") + e.what()};
    }
    auto out = pwe::io::route_set_to_json(routes);
    out["d_r"] = d_r;
    out["m_side"] = m_side;
    write_file(out_path, out.dump(2) + "\n");
    return kOk;
}

int cmd_fit(const fs::path &data_path, const fs::path &out_path, int bins) {
    const auto text = read_file(data_path);
    std::optional<pwe::stats::DeviationDataset> data;
    try {
        data.emplace(pwe::io::read_phi_column(text));
    } catch (const pwe::io::CsvError &e) {
        throw Exit{kBadInput, data_path.string() + ": " + e.what()};
    } catch (const std::invalid_argument &e) {
        throw Exit{kBadInput, data_path.string() + ": " + e.what()};
    }
    if (data->size() == 0) {
        throw Exit{kBadInput, data_path.string() + ": no phi_deg samples"};
    }
    if (bins < 2) {
        throw Exit{kBadInput, "--bins must be at least 2"};
    }
    const auto report = pwe::fit_report(*data, bins, 0);
    if (!report.gamma && !report.rayleigh) {
        throw Exit{kBadInput, data_path.string() + ": data cannot be fitted (all zero)"};
    }
    write_file(out_path, pwe::io::fit_report_to_json(report).dump(2) + "\n");
    return kOk;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"RIS wavefront routing simulator and deviation statistics"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    std::string spec_path;
    std::string data_path;
    std::optional<std::uint64_t> seed;
    unsigned threads = 0;
    int bins = pwe::stats::kDefaultBins;

    auto *sweep = app.add_subcommand("sweep", "run the (d_r, M) Monte-Carlo sweep");
    sweep->add_option("--config", config_path, "JSON experiment config")->required();
    sweep->add_option("--out", out_path, "output directory")->required();
    sweep->add_option("--seed", seed, "override the config seed");
    sweep->add_option("--threads", threads, "worker threads (0 = auto)");

    auto *route = app.add_subcommand("route", "route one wavefront through the scene");
    route->add_option("--config", config_path, "JSON experiment config (first d_r and m_side are used)")
        ->required();
    route->add_option("--spec", spec_path, "JSON file with {\"doas\": [[x,y,z], ...]}")->required();
    route->add_option("--out", out_path, "output JSON path")->required();

    auto *fit = app.add_subcommand("fit", "fit Gamma and Rayleigh models to phi_deg samples");
    fit->add_option("--data,data", data_path, "CSV with a phi_deg column")->required();
    fit->add_option("--out", out_path, "output JSON path")->required();
    fit->add_option("--bins", bins, "histogram bins for the KL scores");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kBadInput;
    }

    try {
        if (sweep->parsed()) {
            return cmd_sweep(config_path, out_path, seed, threads);
        }
        if (route->parsed()) {
            return cmd_route(config_path, spec_path, out_path);
        }
        return cmd_fit(data_path, out_path, bins);
    } catch (const Exit &e) {
        std::cerr << "pwesim: " << e.message << "\n";
        return e.code;
    } catch (const std::exception &e) {
        std::cerr << "pwesim: " << e.what() << "\n";
        return kFault;
    }
}
