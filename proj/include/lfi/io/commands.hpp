#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lfi/core/model.hpp"
#include "lfi/io/config.hpp"

namespace lfi::io {

/// Command-line overrides and switches shared by the subcommands.
struct CommandOptions {
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> workers;
    std::optional<std::filesystem::path> output_dir;
    std::optional<std::filesystem::path> population;  // predict
    std::optional<std::size_t> draws;                 // predict
    bool positions = false;                           // simulate
    std::function<void(std::string_view)> log;        // progress lines
};

/// --workers, then [run] workers, then $LFI_WORKERS, then 1.
unsigned resolve_workers(const RunConfig& config, const CommandOptions& options);

/// Observed summary and the grid it lives on (measurement days for the
/// VCBM, a single point for the oracle models).
struct Observed {
    std::vector<double> grid;
    std::vector<double> values;
};

/// Loads [data] or simulates [synthetic] (stream: synthetic seed, label 0).
Observed observed_data(const RunConfig& config);

/// Model named by the config, producing one value per grid point.
std::unique_ptr<Model> make_model(const RunConfig& config, std::span<const double> grid);

/// Each command writes its files into the output directory and a
/// *metadata.json that is enough to re-run it.
void calibrate(RunConfig config, const CommandOptions& options);
void simulate(RunConfig config, const CommandOptions& options);
void predict(RunConfig config, const CommandOptions& options);

struct VerifyReport {
    std::vector<std::string> lines;
    bool identical = true;
};

/// Re-runs every command recorded in `dir` into a scratch directory and
/// compares the data files byte for byte.
VerifyReport verify(const std::filesystem::path& dir, const CommandOptions& options);

/// Applies --seed / --output-dir to a loaded config.
void apply_overrides(RunConfig& config, const CommandOptions& options);

}  // namespace lfi::io
