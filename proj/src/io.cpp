#include "pwe/io.hpp"

#include <openssl/evp.h>

#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <functional>
#include <map>

namespace pwe::io {

using nlohmann::json;

std::string format_double(double x) {
    std::array<char, 32> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return std::string(buf.data(), res.ptr);
}

namespace {

double as_number(const json &v, const std::string &key) {
    if (!v.is_number()) {
        throw ConfigError(key, "expected a number");
    }
    return v.get<double>();
}

int as_int(const json &v, const std::string &key) {
    if (!v.is_number_integer()) {
        throw ConfigError(key, "expected an integer");
    }
    return v.get<int>();
}

Vec3 as_vec3(const json &v, const std::string &key) {
    if (!v.is_array() || v.size() != 3 || !std::all_of(v.begin(), v.end(), [](const json &e) { return e.is_number(); })) {
        throw ConfigError(key, "expected an array of 3 numbers");
    }
    return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
}

json vec3_json(const Vec3 &v) { return json::array({v.x, v.y, v.z}); }

}  // namespace

ExperimentConfig config_from_json(const json &j) {
    if (!j.is_object()) {
        throw ConfigError("<root>", "config must be a JSON object");
    }
    ExperimentConfig c;
    auto &s = c.scene;
    const std::map<std::string, std::function<void(const json &, const std::string &)>> handlers{
        {"d_r_values",
         [&](const json &v, const std::string &k) {
             if (!v.is_array()) {
                 throw ConfigError(k, "expected an array of numbers");
             }
             c.d_r_values.clear();
             for (const auto &e : v) {
                 c.d_r_values.push_back(as_number(e, k));
             }
         }},
        {"m_sides",
         [&](const json &v, const std::string &k) {
             if (!v.is_array()) {
                 throw ConfigError(k, "expected an array of integers");
             }
             c.m_sides.clear();
             for (const auto &e : v) {
                 c.m_sides.push_back(as_int(e, k));
             }
         }},
        {"n_trials", [&](const json &v, const std::string &k) { c.n_trials = as_int(v, k); }},
        {"n_bins", [&](const json &v, const std::string &k) { c.n_bins = as_int(v, k); }},
        {"seed",
         [&](const json &v, const std::string &k) {
             if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
                 throw ConfigError(k, "expected a non-negative integer");
             }
             c.seed = v.get<std::uint64_t>();
         }},
        {"room_length", [&](const json &v, const std::string &k) { s.room_length = as_number(v, k); }},
        {"room_width", [&](const json &v, const std::string &k) { s.room_width = as_number(v, k); }},
        {"room_height", [&](const json &v, const std::string &k) { s.room_height = as_number(v, k); }},
        {"wall_thickness", [&](const json &v, const std::string &k) { s.wall_thickness = as_number(v, k); }},
        {"door_width", [&](const json &v, const std::string &k) { s.door_width = as_number(v, k); }},
        {"door_height", [&](const json &v, const std::string &k) { s.door_height = as_number(v, k); }},
        {"tx_position", [&](const json &v, const std::string &k) { s.tx_position = as_vec3(v, k); }},
        {"rx_center", [&](const json &v, const std::string &k) { s.rx_center = as_vec3(v, k); }},
        {"rx_boresight",
         [&](const json &v, const std::string &k) {
             s.rx_boresight = as_vec3(v, k);
             if (!(norm(s.rx_boresight) > 0.0)) {
                 throw ConfigError(k, "must be a nonzero vector");
             }
         }},
        {"rx_spacing",
         [&](const json &v, const std::string &k) {
             s.rx_spacing = as_number(v, k);
             if (!(s.rx_spacing > 0.0)) {
                 throw ConfigError(k, "must be positive");
             }
         }},
        {"ris_margin",
         [&](const json &v, const std::string &k) {
             s.ris_margin = as_number(v, k);
             if (s.ris_margin < 0.0) {
                 throw ConfigError(k, "must be non-negative");
             }
         }},
    };
    for (const auto &[key, value] : j.items()) {
        const auto it = handlers.find(key);
        if (it == handlers.end()) {
            throw ConfigError(key, "unknown key");
        }
        it->second(value, key);
    }
    validate_config(c);
    return c;
}

json config_to_json(const ExperimentConfig &c) {
    const auto &s = c.scene;
    return json{
        {"d_r_values", c.d_r_values},
        {"m_sides", c.m_sides},
        {"n_trials", c.n_trials},
        {"n_bins", c.n_bins},
        {"seed", c.seed},
        {"room_length", s.room_length},
        {"room_width", s.room_width},
        {"room_height", s.room_height},
        {"wall_thickness", s.wall_thickness},
        {"door_width", s.door_width},
        {"door_height", s.door_height},
        {"tx_position", vec3_json(s.tx_position)},
        {"rx_center", vec3_json(s.rx_center)},
        {"rx_boresight", vec3_json(s.rx_boresight)},
        {"rx_spacing", s.rx_spacing},
        {"ris_margin", s.ris_margin},
    };
}

WavefrontSpec wavefront_from_json(const json &j) {
    if (!j.is_object() || !j.contains("doas") || !j["doas"].is_array()) {
        throw std::invalid_argument("wavefront spec must be an object with a \"doas\" array");
    }
    WavefrontSpec spec;
    for (const auto &e : j["doas"]) {
        if (!e.is_array() || e.size() != 3 ||
            !std::all_of(e.begin(), e.end(), [](const json &x) { return x.is_number(); })) {
            throw std::invalid_argument("each DoA must be an array of 3 numbers");
        }
        spec.doas.push_back({e[0].get<double>(), e[1].get<double>(), e[2].get<double>()});
    }
    return spec;
}

json route_set_to_json(const RouteSet &rs) {
    json routes = json::array();
    for (const auto &r : rs.routes) {
        routes.push_back({{"antenna", r.antenna},
                          {"last_ris_id", r.last_ris_id},
                          {"path", r.path},
                          {"realized_doa", vec3_json(r.realized_doa)},
                          {"phi_deg", r.phi_deg}});
    }
    json failures = json::array();
    for (const auto &f : rs.failures) {
        failures.push_back({{"antenna", f.antenna}, {"reason", std::string(to_string(f.reason))}});
    }
    return json{{"routes", routes}, {"failures", failures}};
}

json fit_report_to_json(const FitReport &r) {
    json out{{"n", r.n_samples}};
    out["gamma"] = r.gamma ? json{{"k_hat", r.gamma->k_hat},
                                  {"theta_hat", r.gamma->theta_hat},
                                  {"log_likelihood", r.gamma->log_likelihood}}
                           : json(nullptr);
    out["rayleigh"] = r.rayleigh ? json{{"sigma_hat", r.rayleigh->sigma_hat},
                                        {"log_likelihood", r.rayleigh->log_likelihood}}
                                 : json(nullptr);
    out["kld_gamma"] = r.kld_gamma ? json(*r.kld_gamma) : json(nullptr);
    out["kld_rayleigh"] = r.kld_rayleigh ? json(*r.kld_rayleigh) : json(nullptr);
    return out;
}

namespace {

std::string opt(const std::optional<double> &v) { return v ? format_double(*v) : std::string(); }

std::string cell_prefix(const CellResult &c) {
    return format_double(c.report.config_tag.d_r) + "," + std::to_string(c.report.config_tag.m_side);
}

}  // namespace

std::string deviations_csv(std::span<const CellResult> cells) {
    std::string out = "d_r,m_side,trial,antenna_index,phi_deg,last_ris_id,path_len\n";
    for (const auto &c : cells) {
        const auto prefix = cell_prefix(c);
        for (const auto &r : c.records) {
            out += prefix + "," + std::to_string(r.trial) + "," + std::to_string(r.antenna) + "," +
                   format_double(r.phi_deg) + "," + std::to_string(r.last_ris_id) + "," +
                   std::to_string(r.path_len) + "\n";
        }
    }
    return out;
}

std::string fits_csv(std::span<const CellResult> cells) {
    std::string out = "d_r,m_side,n_samples,n_failures,k_hat,theta_hat,sigma_hat,kld_gamma,kld_rayleigh,"
                      "loglik_gamma,loglik_rayleigh\n";
    for (const auto &c : cells) {
        const auto &r = c.report;
        const auto g = r.gamma;
        const auto ry = r.rayleigh;
        out += cell_prefix(c) + "," + std::to_string(r.n_samples) + "," + std::to_string(r.n_failures) + "," +
               opt(g ? std::optional(g->k_hat) : std::nullopt) + "," +
               opt(g ? std::optional(g->theta_hat) : std::nullopt) + "," +
               opt(ry ? std::optional(ry->sigma_hat) : std::nullopt) + "," + opt(r.kld_gamma) + "," +
               opt(r.kld_rayleigh) + "," + opt(g ? std::optional(g->log_likelihood) : std::nullopt) + "," +
               opt(ry ? std::optional(ry->log_likelihood) : std::nullopt) + "\n";
    }
    return out;
}

std::string histograms_csv(std::span<const CellResult> cells) {
    std::string out = "d_r,m_side,bin_left,bin_right,count,density\n";
    for (const auto &c : cells) {
        if (!c.histogram) {
            continue;
        }
        const auto prefix = cell_prefix(c);
        const auto &h = *c.histogram;
        for (std::size_t i = 0; i < h.bins(); ++i) {
            out += prefix + "," + format_double(h.bin_edges[i]) + "," + format_double(h.bin_edges[i + 1]) + "," +
                   std::to_string(h.counts[i]) + "," + format_double(h.densities[i]) + "\n";
        }
    }
    return out;
}

std::size_t CsvTable::column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) {
            return i;
        }
    }
    throw CsvError("missing column \"" + std::string(name) + "\"");
}

namespace {

std::vector<std::string> split_fields(std::string_view line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
        const auto comma = line.find(',', start);
        fields.emplace_back(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start));
        if (comma == std::string_view::npos) {
            return fields;
        }
        start = comma + 1;
    }
}

}  // namespace

CsvTable read_csv_strict(std::string_view text) {
    if (text.find('\r') != std::string_view::npos) {
        throw CsvError("CR characters are not allowed; use LF line endings");
    }
    if (text.find('"') != std::string_view::npos) {
        throw CsvError("quoted fields are not supported");
    }
    if (text.empty()) {
        throw CsvError("empty document: a header row is required");
    }
    if (text.back() != '\n') {
        throw CsvError("last line must end with LF");
    }
    CsvTable table;
    std::size_t pos = 0;
    std::size_t line_no = 0;
    while (pos < text.size()) {
        const auto nl = text.find('\n', pos);
        const auto line = text.substr(pos, nl - pos);
        pos = nl + 1;
        ++line_no;
        auto fields = split_fields(line);
        if (line_no == 1) {
            table.header = std::move(fields);
            continue;
        }
        if (fields.size() != table.header.size()) {
            throw CsvError("line " + std::to_string(line_no) + " has " + std::to_string(fields.size()) +
                           " fields, header has " + std::to_string(table.header.size()));
        }
        table.rows.push_back(std::move(fields));
    }
    return table;
}

double parse_double(std::string_view field) {
    double v = 0.0;
    const auto *end = field.data() + field.size();
    const auto res = std::from_chars(field.data(), end, v);
    if (res.ec != std::errc() || res.ptr != end || !std::isfinite(v)) {
        throw CsvError("not a finite number: \"" + std::string(field) + "\"");
    }
    return v;
}

std::vector<double> read_phi_column(std::string_view text) {
    const auto table = read_csv_strict(text);
    const auto col = table.column("phi_deg");
    std::vector<double> out;
    out.reserve(table.rows.size());
    for (const auto &row : table.rows) {
        out.push_back(parse_double(row[col]));
    }
    return out;
}

std::string sha256_hex(std::string_view bytes) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md.data(), &len, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("SHA-256 digest failed");
    }
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 0xf];
    }
    return out;
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::array<char, 32> buf{};
    std::strftime(buf.data(), buf.size(), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf.data();
}

}  // namespace pwe::io
