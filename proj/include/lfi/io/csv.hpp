#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "lfi/core/param_vector.hpp"
#include "lfi/core/timeseries.hpp"
#include "lfi/smc/population.hpp"
#include "lfi/smc/predictive.hpp"
#include "lfi/smc/smc_abc.hpp"

namespace lfi::io {

inline constexpr std::string_view kDatasetHeader = "day,volume_mm3";

/// Parses a `day,volume_mm3` CSV. Row numbers in errors count data rows
/// from 1 (the header is not a row).
Dataset parse_dataset(std::string_view text, std::string_view source = "<dataset>");
Dataset load_dataset(const std::filesystem::path& path);

/// Same file format for the oracle models, whose summary may be negative:
/// only the time ordering is checked.
std::vector<Observation> load_observations(const std::filesystem::path& path);
std::vector<Observation> parse_observations(std::string_view text, std::string_view source);

/// RFC 4180 writer: CRLF record separators, fields quoted when needed.
class CsvWriter {
  public:
    explicit CsvWriter(const std::vector<std::string>& header);
    CsvWriter& field(std::string_view value);
    CsvWriter& field(double value);
    CsvWriter& field(std::size_t value);
    void end_row();
    const std::string& str() const noexcept { return out_; }

  private:
    std::string out_;
    std::size_t columns_;
    std::size_t in_row_ = 0;
};

/// Rows of a CSV file split into fields (quoted fields supported).
std::vector<std::vector<std::string>> parse_csv(std::string_view text);

std::vector<std::string> population_columns(const std::vector<std::string>& names);
std::string population_csv(const smc::Population& pop);

/// Reads particles back; `names` must match the header's parameter columns.
std::vector<ParamVector> parse_population(std::string_view text, const std::vector<std::string>& names,
                                          std::string_view source);

std::vector<std::string> trace_columns();
std::string trace_csv(const smc::RunTrace& trace);

std::vector<std::string> trajectory_columns();
std::string trajectory_csv(const std::vector<Observation>& rows);

std::vector<std::string> bands_columns();
std::string bands_csv(const smc::PredictiveBands& bands);
std::vector<std::string> draws_columns();
std::string draws_csv(const smc::PredictiveBands& bands);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace lfi::io
