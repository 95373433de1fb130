#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lfi/core/prior.hpp"
#include "lfi/oracle/oracle_models.hpp"
#include "lfi/smc/smc_abc.hpp"
#include "lfi/vcbm/vcbm.hpp"

namespace lfi::io {

/// Model name plus the parameters of whichever model it names.
struct ModelSpec {
    std::string name;  // "vcbm", "gaussian_mean" or "binomial"
    vcbm::VcbmConfig vcbm;
    double sigma = 1.0;
    int n_obs = 10;
    int n_trials = 20;
};

/// Synthetic observed data: simulate the model once at theta.
struct SyntheticSpec {
    std::vector<std::pair<std::string, double>> theta;
    std::optional<double> days;              // vcbm horizon; defaults to the last measurement day
    std::vector<double> measurement_days;    // vcbm only; defaults to every whole day
    std::optional<std::uint64_t> seed;       // defaults to [run] seed
};

struct RunConfig {
    ModelSpec model;
    std::vector<std::string> prior_names;
    std::vector<Marginal> prior_marginals;
    smc::SmcConfig smc;
    std::optional<std::filesystem::path> data_path;
    std::optional<SyntheticSpec> synthetic;
    std::uint64_t seed = 0;
    std::optional<unsigned> workers;
    std::filesystem::path output_dir = "output";
    std::size_t predict_draws = 1000;

    /// "section.key" of every value that came from a default.
    std::vector<std::string> defaults_applied;

    Prior prior() const { return Prior(prior_names, prior_marginals); }
};

/// Parses the sectioned key-value format. Syntax errors report
/// `<source>:<line>` and the key; semantic problems are collected and
/// reported together, one line per offending field.
RunConfig parse_config(std::string_view text, std::string_view source = "<config>");

/// Reads and parses a file and checks that the data file exists. Relative
/// paths are resolved against the working directory.
RunConfig load_config(const std::filesystem::path& path);

/// Canonical text of a resolved config: every key, defaults included, in
/// a fixed order. parse_config(render_config(c)) reproduces c.
std::string render_config(const RunConfig& config);

}  // namespace lfi::io
