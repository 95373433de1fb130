#include "lfi/io/commands.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <sstream>

#include <unistd.h>

#include "json.hpp"

#include "lfi/core/error.hpp"
#include "lfi/core/format.hpp"
#include "lfi/core/rng.hpp"
#include "lfi/io/csv.hpp"
#include "lfi/oracle/oracle_models.hpp"
#include "lfi/smc/predictive.hpp"
#include "lfi/smc/smc_abc.hpp"
#include "lfi/vcbm/vcbm.hpp"

#ifndef LFI_VERSION
#define LFI_VERSION "unknown"
#endif

namespace lfi::io {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

constexpr std::uint64_t kSyntheticLabel = 0;
constexpr std::uint64_t kCalibrateLabel = 1;
constexpr std::uint64_t kPredictLabel = 2;

constexpr const char* kCalibrateMeta = "metadata.json";
constexpr const char* kSimulateMeta = "simulate_metadata.json";
constexpr const char* kPredictMeta = "predict_metadata.json";

void log(const CommandOptions& o, const std::string& line) {
    if (o.log) o.log(line);
}

std::uint64_t synthetic_seed(const RunConfig& c) { return c.synthetic && c.synthetic->seed ? *c.synthetic->seed : c.seed; }

ParamVector synthetic_theta(const RunConfig& c) {
    if (!c.synthetic) throw ValidationError("this command needs a [synthetic] block with [synthetic.theta]");
    std::vector<double> values;
    for (const auto& [k, v] : c.synthetic->theta) values.push_back(v);
    return ParamVector(c.prior_names, std::move(values));
}

bool is_vcbm(const RunConfig& c) { return c.model.name == "vcbm"; }

// Typed value for the structured config echo.
json typed(const std::string& v) {
    if (v == "true") return true;
    if (v == "false") return false;
    if (v.find(',') != std::string::npos && v.find('(') == std::string::npos) {
        json arr = json::array();
        std::stringstream ss(v);
        std::string part;
        while (std::getline(ss, part, ',')) arr.push_back(typed(part.substr(part.find_first_not_of(' '))));
        return arr;
    }
    char* end = nullptr;
    const long long i = std::strtoll(v.c_str(), &end, 10);
    if (!v.empty() && *end == '\0') return i;
    const double d = std::strtod(v.c_str(), &end);
    if (!v.empty() && *end == '\0') return d;
    return v;
}

json structured(const std::string& text) {
    json out = json::object();
    std::string section;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        if (line.empty()) continue;
        if (line.front() == '[') {
            section = line.substr(1, line.size() - 2);
            out[section] = json::object();
            continue;
        }
        const auto eq = line.find(" = ");
        out[section][line.substr(0, eq)] = typed(line.substr(eq + 3));
    }
    return out;
}

json columns_of(const std::vector<std::string>& cols) {
    json j = json::array();
    for (const auto& c : cols) j.push_back(c);
    return j;
}

json base_metadata(const std::string& command, const RunConfig& c, unsigned workers) {
    const std::string text = render_config(c);
    json m;
    m["command"] = command;
    m["version"] = LFI_VERSION;
    m["config_text"] = text;
    m["config"] = structured(text);
    m["defaults_applied"] = c.defaults_applied;
    m["seed"] = c.seed;
    m["workers"] = workers;
    m["rng_scheme"] = std::string(kRngScheme);
    if (is_vcbm(c)) m["units"] = {{"length", "cell diameters"}, {"mm_per_cell_diameter", c.model.vcbm.mm_per_cell_diameter},
                                 {"time", "days"}, {"g_age", "timesteps"}, {"volume", "mm^3"}};
    return m;
}

json observed_json(const Observed& obs) {
    json rows = json::array();
    for (std::size_t i = 0; i < obs.grid.size(); ++i) rows.push_back({obs.grid[i], obs.values[i]});
    return {{"columns", columns_of(trajectory_columns())}, {"rows", rows}};
}

void write_json(const fs::path& path, const json& j) { write_file(path, j.dump(2) + "\n"); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

fs::path prepare_output(const RunConfig& c) {
    fs::create_directories(c.output_dir);
    return c.output_dir;
}

}  // namespace

void apply_overrides(RunConfig& config, const CommandOptions& options) {
    if (options.seed) config.seed = *options.seed;
    if (options.output_dir) config.output_dir = *options.output_dir;
}

unsigned resolve_workers(const RunConfig& config, const CommandOptions& options) {
    if (options.workers) {
        if (*options.workers < 1) throw ValidationError("--workers must be >= 1");
        return *options.workers;
    }
    if (config.workers) return *config.workers;
    if (const char* env = std::getenv("LFI_WORKERS"); env && *env) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (*end != '\0' || v < 1 || v > 4096)
            throw ValidationError("LFI_WORKERS must be a positive integer, got '" + std::string(env) + "'");
        return static_cast<unsigned>(v);
    }
    return 1;
}

std::unique_ptr<Model> make_model(const RunConfig& c, std::span<const double> grid) {
    const auto& m = c.model;
    if (m.name == "vcbm") return std::make_unique<vcbm::VcbmModel>(m.vcbm, std::vector<double>(grid.begin(), grid.end()));
    if (grid.size() != 1) throw ValidationError(m.name + " has a scalar summary; the dataset must have exactly one row");
    if (m.name == "gaussian_mean") {
        oracle::GaussianMeanModel spec;
        spec.sigma = m.sigma;
        spec.n_obs = m.n_obs;
        if (!c.prior_marginals.empty())
            if (const auto* n = std::get_if<NormalDist>(&c.prior_marginals.front().family())) {
                spec.prior_mean = n->mean;
                spec.prior_sd = n->sd;
            }
        return std::make_unique<oracle::GaussianMean>(spec);
    }
    if (m.name == "binomial") {
        oracle::BinomialModel spec;
        spec.n_trials = m.n_trials;
        if (!c.prior_marginals.empty())
            if (const auto* b = std::get_if<BetaDist>(&c.prior_marginals.front().family())) {
                spec.prior_a = b->a;
                spec.prior_b = b->b;
            }
        return std::make_unique<oracle::Binomial>(spec);
    }
    throw ValidationError("unknown model '" + m.name + "'");
}

Observed observed_data(const RunConfig& c) {
    Observed obs;
    if (c.data_path) {
        const auto rows = is_vcbm(c) ? load_dataset(*c.data_path).rows() : load_observations(*c.data_path);
        for (const auto& r : rows) {
            obs.grid.push_back(r.time);
            obs.values.push_back(r.volume);
        }
        if (is_vcbm(c) && obs.grid.front() < 0.0)
            throw ValidationError(c.data_path->string() + ": vcbm measurement days must be >= 0");
        return obs;
    }
    if (!c.synthetic) throw ValidationError("config has neither [data] nor [synthetic]");
    const ParamVector theta = synthetic_theta(c);
    Stream rng = StreamKey(synthetic_seed(c)).child(kSyntheticLabel).open();
    if (is_vcbm(c)) {
        const auto& syn = *c.synthetic;
        const auto traj = vcbm::simulate(vcbm::VcbmParams::from(theta), c.model.vcbm, *syn.days, syn.measurement_days, rng);
        obs.grid = traj.times();
        obs.values = traj.volumes();
    } else {
        obs.grid = {0.0};
        obs.values = make_model(c, obs.grid)->simulate(theta, rng);
    }
    return obs;
}

void calibrate(RunConfig c, const CommandOptions& options) {
    const auto t0 = std::chrono::steady_clock::now();
    const unsigned workers = resolve_workers(c, options);
    const Observed obs = observed_data(c);
    const auto model = make_model(c, obs.grid);
    const Prior prior = c.prior();
    smc::Problem problem{*model, prior, obs.values};
    smc::SmcConfig sc = c.smc;
    sc.workers = workers;

    auto observer = [&](const smc::IterationView& v) {
        const auto& r = v.record;
        log(options, "iteration " + std::to_string(r.iteration) + ": epsilon " + format_double(r.epsilon) +
                         ", unique " + std::to_string(r.n_unique_particles) + ", acceptance " +
                         format_double(r.mcmc_acceptance_rate) + ", simulations " +
                         std::to_string(r.cumulative_simulations));
    };
    const smc::RunResult result = smc::run(problem, sc, StreamKey(c.seed).child(kCalibrateLabel), observer);

    const fs::path dir = prepare_output(c);
    write_file(dir / "population.csv", population_csv(result.population));
    write_file(dir / "trace.csv", trace_csv(result.trace));

    json m = base_metadata("calibrate", c, workers);
    m["observed"] = observed_json(obs);
    m["stop_reason"] = std::string(smc::to_string(result.stop_reason));
    m["total_simulations"] = result.simulations;
    m["iterations"] = result.trace.empty() ? 0 : result.trace.back().iteration;
    m["final_epsilon"] = result.population.epsilon;
    m["wall_time_seconds"] = seconds_since(t0);
    m["outputs"] = {{"population.csv", {{"columns", columns_of(population_columns(c.prior_names))}}},
                    {"trace.csv", {{"columns", columns_of(trace_columns())}}}};
    write_json(dir / kCalibrateMeta, m);
    log(options, "stop: " + std::string(smc::to_string(result.stop_reason)) + " after " +
                     std::to_string(result.simulations) + " simulations; wrote " + dir.string());
}

void simulate(RunConfig c, const CommandOptions& options) {
    const auto t0 = std::chrono::steady_clock::now();
    const unsigned workers = resolve_workers(c, options);
    const ParamVector theta = synthetic_theta(c);
    Stream rng = StreamKey(synthetic_seed(c)).child(kSyntheticLabel).open();

    std::vector<Observation> rows;
    std::string positions;
    if (is_vcbm(c)) {
        const auto& syn = *c.synthetic;
        CsvWriter pw({"day", "cell", "kind", "x", "y"});
        vcbm::DayObserver observer;
        if (options.positions)
            observer = [&](double day, const vcbm::TissueState& s) {
                for (std::size_t i = 0; i < s.size(); ++i) {
                    pw.field(day).field(i).field(s.kinds[i] == vcbm::CellKind::cancer ? "cancer" : "healthy");
                    pw.field(s.positions[i].x).field(s.positions[i].y);
                    pw.end_row();
                }
            };
        const auto traj = vcbm::simulate(vcbm::VcbmParams::from(theta), c.model.vcbm, *syn.days,
                                         syn.measurement_days, rng, observer);
        rows = traj.rows();
        if (options.positions) positions = pw.str();
    } else {
        const double value = make_model(c, std::vector<double>{0.0})->simulate(theta, rng).front();
        rows.push_back({0.0, value});
    }

    const fs::path dir = prepare_output(c);
    write_file(dir / "trajectory.csv", trajectory_csv(rows));
    json outputs = {{"trajectory.csv", {{"columns", columns_of(trajectory_columns())}}}};
    if (options.positions && is_vcbm(c)) {
        write_file(dir / "positions.csv", positions);
        outputs["positions.csv"] = {{"columns", columns_of({"day", "cell", "kind", "x", "y"})}};
    }
    json m = base_metadata("simulate", c, workers);
    m["synthetic_seed"] = synthetic_seed(c);
    m["positions"] = options.positions && is_vcbm(c);
    m["wall_time_seconds"] = seconds_since(t0);
    m["outputs"] = outputs;
    write_json(dir / kSimulateMeta, m);
    log(options, "wrote " + (dir / "trajectory.csv").string());
}

void predict(RunConfig c, const CommandOptions& options) {
    const auto t0 = std::chrono::steady_clock::now();
    const unsigned workers = resolve_workers(c, options);
    const std::size_t draws = options.draws ? *options.draws : c.predict_draws;
    if (draws < 1) throw ValidationError("--draws must be >= 1");
    const fs::path pop_path = options.population ? *options.population : c.output_dir / "population.csv";

    // A population written by calibrate sits next to its metadata; refuse
    // to mix models.
    const fs::path sibling = pop_path.parent_path() / kCalibrateMeta;
    if (fs::is_regular_file(sibling)) {
        const json meta = json::parse(read_file(sibling), nullptr, false);
        if (!meta.is_discarded() && meta.contains("config") && meta["config"].contains("model")) {
            const std::string produced = meta["config"]["model"].value("name", "");
            if (!produced.empty() && produced != c.model.name)
                throw ValidationError("population " + pop_path.string() + " was produced by model '" + produced +
                                      "' but the config names model '" + c.model.name + "'");
        }
    }
    const std::string pop_text = read_file(pop_path);
    const auto thetas = parse_population(pop_text, c.prior_names, pop_path.string());

    const Observed obs = observed_data(c);
    const auto model = make_model(c, obs.grid);
    const smc::PredictiveBands bands =
        smc::posterior_predictive(thetas, *model, obs.grid, draws, StreamKey(c.seed).child(kPredictLabel), workers);

    const fs::path dir = prepare_output(c);
    write_file(dir / "predictive_bands.csv", bands_csv(bands));
    write_file(dir / "predictive_draws.csv", draws_csv(bands));
    json m = base_metadata("predict", c, workers);
    m["observed"] = observed_json(obs);
    m["draws"] = draws;
    m["model_failures_retried"] = bands.failures;
    m["population_csv"] = pop_text;
    m["wall_time_seconds"] = seconds_since(t0);
    m["outputs"] = {{"predictive_bands.csv", {{"columns", columns_of(bands_columns())}}},
                    {"predictive_draws.csv", {{"columns", columns_of(draws_columns())}}}};
    write_json(dir / kPredictMeta, m);
    log(options, "wrote " + (dir / "predictive_bands.csv").string());
}

VerifyReport verify(const fs::path& dir, const CommandOptions& options) {
    static std::atomic<unsigned> counter{0};
    VerifyReport report;
    bool any = false;
    for (const char* meta_name : {kCalibrateMeta, kSimulateMeta, kPredictMeta}) {
        const fs::path meta_path = dir / meta_name;
        if (!fs::is_regular_file(meta_path)) continue;
        any = true;
        const json meta = json::parse(read_file(meta_path), nullptr, false);
        if (meta.is_discarded() || !meta.contains("config_text") || !meta.contains("command"))
            throw ValidationError(meta_path.string() + ": not a metadata file");
        const std::string command = meta["command"];

        const fs::path scratch = fs::temp_directory_path() /
                                 ("lfi-verify-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        fs::remove_all(scratch);
        fs::create_directories(scratch);
        struct Cleanup {
            fs::path p;
            ~Cleanup() {
                std::error_code ec;
                fs::remove_all(p, ec);
            }
        } cleanup{scratch};

        RunConfig c = parse_config(meta["config_text"].get<std::string>(), meta_path.string() + " (config_text)");
        c.output_dir = scratch / "out";
        if (c.data_path) {
            if (!meta.contains("observed"))
                throw ValidationError(meta_path.string() + ": data-driven run without embedded observations");
            std::vector<Observation> rows;
            for (const auto& r : meta["observed"]["rows"]) rows.push_back({r[0].get<double>(), r[1].get<double>()});
            c.data_path = scratch / "observed.csv";
            write_file(*c.data_path, trajectory_csv(rows));
        }
        CommandOptions o;
        o.workers = options.workers ? options.workers : std::optional<unsigned>(meta.value("workers", 1u));
        o.log = {};
        if (command == "calibrate") {
            calibrate(c, o);
        } else if (command == "simulate") {
            o.positions = meta.value("positions", false);
            simulate(c, o);
        } else if (command == "predict") {
            o.population = scratch / "population.csv";
            write_file(*o.population, meta["population_csv"].get<std::string>());
            o.draws = meta["draws"].get<std::size_t>();
            predict(c, o);
        } else {
            throw ValidationError(meta_path.string() + ": unknown command '" + command + "'");
        }

        for (const auto& [file, info] : meta["outputs"].items()) {
            (void)info;
            const fs::path original = dir / file;
            const fs::path rerun = c.output_dir / file;
            const bool same = fs::is_regular_file(original) && fs::is_regular_file(rerun) &&
                              read_file(original) == read_file(rerun);
            report.identical = report.identical && same;
            report.lines.push_back(command + " " + file + ": " + (same ? "identical" : "MISMATCH"));
        }
    }
    if (!any) throw ValidationError("no metadata files found in '" + dir.string() + "'");
    return report;
}

}  // namespace lfi::io
