#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "lfi/core/error.hpp"
#include "lfi/io/commands.hpp"
#include "lfi/io/config.hpp"

namespace {

constexpr int kValidationExit = 2;
constexpr int kRuntimeExit = 3;

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Likelihood-free calibration of stochastic tumour growth models"};
    app.require_subcommand(1);
#ifdef LFI_VERSION
    app.set_version_flag("--version", std::string(LFI_VERSION));
#endif

    lfi::io::CommandOptions options;
    std::string config_path, verify_dir, output_dir, population;
    std::uint64_t seed = 0;
    unsigned workers = 0;
    std::size_t draws = 0;
    bool quiet = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("config", config_path, "Run configuration file")->required();
        sub->add_option("--seed", seed, "Override [run] seed");
        sub->add_option("--workers", workers, "Worker threads (default: [run] workers, then $LFI_WORKERS, then 1)")
            ->check(CLI::PositiveNumber);
        sub->add_option("--output-dir", output_dir, "Override [run] output_dir");
        sub->add_flag("--quiet,-q", quiet, "No progress output");
    };

    auto* calibrate = app.add_subcommand("calibrate", "Run SMC-ABC and write population.csv, trace.csv, metadata.json");
    add_common(calibrate);
    auto* simulate = app.add_subcommand("simulate", "One forward run at [synthetic.theta]; writes trajectory.csv");
    add_common(simulate);
    simulate->add_flag("--positions", options.positions, "Also write per-day cell positions (vcbm)");
    auto* predict = app.add_subcommand("predict", "Posterior predictive bands from a calibrated population");
    add_common(predict);
    predict->add_option("--population", population, "population.csv (default: <output_dir>/population.csv)");
    predict->add_option("--draws", draws, "Number of predictive draws (default: [predict] draws)")
        ->check(CLI::PositiveNumber);
    auto* verify = app.add_subcommand("verify", "Re-run an output directory and compare its files byte for byte");
    verify->add_option("output_dir", verify_dir, "Directory written by calibrate, simulate or predict")->required();
    verify->add_option("--workers", workers, "Worker threads for the re-run")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kValidationExit;
    }

    auto given = [](CLI::App* sub, const char* name) {
        const CLI::Option* opt = sub->get_option_no_throw(name);
        return opt != nullptr && opt->count() > 0;
    };
    for (CLI::App* sub : {calibrate, simulate, predict, verify}) {
        if (given(sub, "--seed")) options.seed = seed;
        if (given(sub, "--workers")) options.workers = workers;
        if (given(sub, "--output-dir")) options.output_dir = output_dir;
        if (given(sub, "--population")) options.population = population;
        if (given(sub, "--draws")) options.draws = draws;
    }
    if (!quiet) options.log = [](std::string_view line) { std::cerr << line << '\n'; };

    try {
        if (*verify) {
            const auto report = lfi::io::verify(verify_dir, options);
            for (const auto& line : report.lines) std::cout << line << '\n';
            if (!report.identical) {
                std::cerr << "verify: outputs differ from the recorded run\n";
                return kRuntimeExit;
            }
            return 0;
        }
        lfi::io::RunConfig config = lfi::io::load_config(config_path);
        lfi::io::apply_overrides(config, options);
        if (*calibrate) lfi::io::calibrate(std::move(config), options);
        if (*simulate) lfi::io::simulate(std::move(config), options);
        if (*predict) lfi::io::predict(std::move(config), options);
        return 0;
    } catch (const lfi::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kValidationExit;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kRuntimeExit;
    }
}
