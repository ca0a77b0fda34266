#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "pwe/experiment.hpp"
#include "pwe/routing.hpp"

namespace pwe::io {

/// Malformed CSV input (ragged rows, missing column, bad number, CR line ends).
class CsvError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr std::string_view kToolName = "pwesim";
inline constexpr std::string_view kToolVersion = "0.1.0";

/// Shortest decimal text that parses back to exactly `x`.
std::string format_double(double x);

/// Flat JSON object -> config. Unknown keys and wrong types throw ConfigError
/// naming the key; values are then checked with validate_config.
ExperimentConfig config_from_json(const nlohmann::json &j);
nlohmann::json config_to_json(const ExperimentConfig &config);

/// {"doas": [[x, y, z], ...]}
WavefrontSpec wavefront_from_json(const nlohmann::json &j);

nlohmann::json route_set_to_json(const RouteSet &routes);
nlohmann::json fit_report_to_json(const FitReport &report);

std::string deviations_csv(std::span<const CellResult> cells);
std::string fits_csv(std::span<const CellResult> cells);
std::string histograms_csv(std::span<const CellResult> cells);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Index of a header column; throws CsvError if absent.
    std::size_t column(std::string_view name) const;
};

/// Header row required, LF line endings only, every row as wide as the
/// header, no quoting.
CsvTable read_csv_strict(std::string_view text);

/// Parses a finite double occupying the whole field.
double parse_double(std::string_view field);

/// phi_deg column of a CSV document.
std::vector<double> read_phi_column(std::string_view text);

std::string sha256_hex(std::string_view bytes);
std::string utc_timestamp();

}  // namespace pwe::io
