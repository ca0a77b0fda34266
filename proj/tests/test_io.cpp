#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstring>
#include <random>

#include "pwe/io.hpp"

using namespace pwe;
using nlohmann::json;

namespace {

std::string key_error(const json &j) {
    try {
        io::config_from_json(j);
    } catch (const ConfigError &e) {
        return e.key();
    }
    return "";
}

ExperimentConfig small_config() {
    ExperimentConfig c;
    c.d_r_values = {0.5, 0.4};
    c.m_sides = {2};
    c.n_trials = 5;
    return c;
}

}  // namespace

TEST_CASE("format_double round-trips with the shortest text") {
    CHECK(io::format_double(0.1) == "0.1");
    CHECK(io::format_double(2.5) == "2.5");
    CHECK(io::format_double(3.0) == "3");
    CHECK(io::format_double(1e-300) == "1e-300");
    std::mt19937_64 rng(1);
    for (int i = 0; i < 20000; ++i) {
        std::uint64_t bits = rng();
        double x;
        std::memcpy(&x, &bits, sizeof x);
        if (!std::isfinite(x)) {
            continue;
        }
        const auto s = io::format_double(x);
        CHECK(io::parse_double(s) == x);
        CHECK(s.size() <= 24);
    }
}

TEST_CASE("config from flat JSON") {
    const auto c = io::config_from_json(json::parse(R"({
        "d_r_values": [0.2, 0.3], "m_sides": [2, 3], "n_trials": 7, "seed": 12345678901234,
        "n_bins": 12, "room_length": 6, "door_width": 1.0, "tx_position": [0.4, 2.0, 1.0],
        "rx_boresight": [0, 0, 2]
    })"));
    CHECK(c.d_r_values == std::vector<double>{0.2, 0.3});
    CHECK(c.m_sides == std::vector<int>{2, 3});
    CHECK(c.n_trials == 7);
    CHECK(c.seed == 12345678901234ULL);
    CHECK(c.n_bins == 12);
    CHECK(c.scene.room_length == 6.0);
    CHECK(c.scene.door_width == 1.0);
    CHECK(c.scene.tx_position == Vec3{0.4, 2.0, 1.0});
    CHECK(c.scene.room_width == SceneParams{}.room_width);

    const auto empty = io::config_from_json(json::object());
    CHECK(empty.d_r_values == ExperimentConfig{}.d_r_values);
    CHECK(empty.n_trials == 100);
}

TEST_CASE("config errors name the key") {
    CHECK(key_error(json::parse(R"({"d_r_values": [-1]})")) == "d_r_values");
    CHECK(key_error(json::parse(R"({"d_r_values": 0.3})")) == "d_r_values");
    CHECK(key_error(json::parse(R"({"m_sides": [2.5]})")) == "m_sides");
    CHECK(key_error(json::parse(R"({"n_trials": "many"})")) == "n_trials");
    CHECK(key_error(json::parse(R"({"n_trials": 0})")) == "n_trials");
    CHECK(key_error(json::parse(R"({"seed": -4})")) == "seed");
    CHECK(key_error(json::parse(R"({"rx_center": [1, 2]})")) == "rx_center");
    CHECK(key_error(json::parse(R"({"rx_boresight": [0, 0, 0]})")) == "rx_boresight");
    CHECK(key_error(json::parse(R"({"rx_spacing": 0})")) == "rx_spacing");
    CHECK(key_error(json::parse(R"({"ris_margin": -0.1})")) == "ris_margin");
    CHECK(key_error(json::parse(R"({"d_r_value": [0.3]})")) == "d_r_value");
    CHECK(key_error(json::parse("[1, 2]")) == "<root>");
}

TEST_CASE("config survives a JSON round trip") {
    ExperimentConfig c = small_config();
    c.seed = 99;
    c.scene.rx_center = {7.0, 2.0, 1.25};
    const auto back = io::config_from_json(io::config_to_json(c));
    CHECK(io::config_to_json(back) == io::config_to_json(c));
}

TEST_CASE("wavefront spec parsing") {
    const auto s = io::wavefront_from_json(json::parse(R"({"doas": [[0, 0, 1], [0.6, 0, 0.8]]})"));
    REQUIRE(s.doas.size() == 2);
    CHECK(s.doas[1] == Vec3{0.6, 0, 0.8});
    CHECK_THROWS_AS(io::wavefront_from_json(json::parse(R"({"doa": []})")), std::invalid_argument);
    CHECK_THROWS_AS(io::wavefront_from_json(json::parse(R"({"doas": [[0, 1]]})")), std::invalid_argument);
    CHECK_THROWS_AS(io::wavefront_from_json(json::parse(R"({"doas": [["a", 0, 1]]})")), std::invalid_argument);
}

TEST_CASE("emitted CSVs have the exact schemas and parse strictly") {
    const auto cells = run_sweep(small_config());
    const auto dev = io::deviations_csv(cells);
    const auto fits = io::fits_csv(cells);
    const auto hist = io::histograms_csv(cells);

    CHECK(dev.substr(0, dev.find('\n')) == "d_r,m_side,trial,antenna_index,phi_deg,last_ris_id,path_len");
    CHECK(fits.substr(0, fits.find('\n')) ==
          "d_r,m_side,n_samples,n_failures,k_hat,theta_hat,sigma_hat,kld_gamma,kld_rayleigh,loglik_gamma,"
          "loglik_rayleigh");
    CHECK(hist.substr(0, hist.find('\n')) == "d_r,m_side,bin_left,bin_right,count,density");

    const auto td = io::read_csv_strict(dev);
    const auto tf = io::read_csv_strict(fits);
    const auto th = io::read_csv_strict(hist);
    std::size_t n_records = 0;
    for (const auto &c : cells) {
        n_records += c.records.size();
    }
    CHECK(td.rows.size() == n_records);
    CHECK(tf.rows.size() == cells.size());
    CHECK(th.rows.size() == cells.size() * 10);

    // Cells come out ordered by (m_side, d_r); values parse back exactly.
    CHECK(tf.rows[0][tf.column("d_r")] == "0.4");
    CHECK(tf.rows[1][tf.column("d_r")] == "0.5");
    const auto phis = io::read_phi_column(dev);
    std::size_t i = 0;
    for (const auto &c : cells) {
        for (double x : c.dataset.samples()) {
            CHECK(phis[i++] == x);
        }
        CHECK(io::parse_double(tf.rows[&c - cells.data()][tf.column("k_hat")]) == c.report.gamma->k_hat);
    }
}

TEST_CASE("fits.csv leaves missing estimates empty") {
    CellResult c{stats::DeviationDataset({0.0, 0.0}, {0.3, 1}), {}, {}, std::nullopt};
    c.report = fit_report(c.dataset, 10, 3);
    CHECK_FALSE(c.report.gamma);
    CHECK_FALSE(c.report.rayleigh);
    const std::vector<CellResult> cells{c};
    const auto fits = io::fits_csv(cells);
    CHECK(fits.substr(fits.find('\n') + 1) == "0.3,1,2,3,,,,,,,\n");
    CHECK(io::read_csv_strict(fits).rows.size() == 1);
}

TEST_CASE("strict CSV reader rejects malformed input") {
    CHECK_THROWS_AS(io::read_csv_strict(""), io::CsvError);
    CHECK_THROWS_AS(io::read_csv_strict("a,b\r\n1,2\r\n"), io::CsvError);
    CHECK_THROWS_AS(io::read_csv_strict("a,b\n1,2"), io::CsvError);
    CHECK_THROWS_AS(io::read_csv_strict("a,b\n1,2,3\n"), io::CsvError);
    CHECK_THROWS_AS(io::read_csv_strict("a,b\n1\n"), io::CsvError);
    CHECK_THROWS_AS(io::read_csv_strict("a,b\n\"1\",2\n"), io::CsvError);
    const auto t = io::read_csv_strict("a,b\n1,2\n,4\n");
    CHECK(t.rows.size() == 2);
    CHECK(t.rows[1][0].empty());
    CHECK_THROWS_AS(t.column("c"), io::CsvError);

    CHECK_THROWS_AS(io::parse_double(""), io::CsvError);
    CHECK_THROWS_AS(io::parse_double("1.5x"), io::CsvError);
    CHECK_THROWS_AS(io::parse_double("nan"), io::CsvError);
    CHECK_THROWS_AS(io::parse_double(" 1"), io::CsvError);
    CHECK(io::parse_double("-2.5e3") == -2500.0);

    CHECK_THROWS_AS(io::read_phi_column("x\n1\n"), io::CsvError);
    CHECK(io::read_phi_column("phi_deg,other\n3,a\n4,b\n") == std::vector<double>{3, 4});
}

TEST_CASE("SHA-256 known-answer vectors") {
    CHECK(io::sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(io::sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("UTC timestamps are ISO 8601") {
    const auto ts = io::utc_timestamp();
    CHECK(ts.size() == 20);
    CHECK(ts[4] == '-');
    CHECK(ts[10] == 'T');
    CHECK(ts.back() == 'Z');
}

TEST_CASE("route and fit JSON shapes") {
    RouteSet rs;
    rs.routes.push_back(Route{0, 5, {0, 6}, {0, 0, 1}, 1.5});
    rs.failures.push_back(FailedAntenna{1, RouteFailure::Unreachable});
    const auto j = io::route_set_to_json(rs);
    CHECK(j["routes"][0]["last_ris_id"] == 5);
    CHECK(j["routes"][0]["path"] == json::array({0, 6}));
    CHECK(j["routes"][0]["phi_deg"] == 1.5);
    CHECK(j["failures"][0]["reason"] == "unreachable");

    const auto r = fit_report(stats::DeviationDataset({3.0, 4.0}), 10, 0);
    const auto f = io::fit_report_to_json(r);
    CHECK(f["n"] == 2);
    CHECK(f["rayleigh"]["sigma_hat"] == 2.5);
    CHECK(f["gamma"]["k_hat"].is_number());
    CHECK(f["kld_gamma"].is_number());
}
