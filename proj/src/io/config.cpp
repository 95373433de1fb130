#include "lfi/io/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "lfi/core/error.hpp"
#include "lfi/core/format.hpp"

namespace lfi::io {
namespace {

const std::set<std::string, std::less<>> kSections = {"model", "prior", "smc",     "data",
                                                      "synthetic", "synthetic.theta", "run", "predict"};

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

struct Entry {
    std::string key;
    std::string value;
    int line = 0;
};

struct Section {
    int line = 0;
    std::vector<Entry> entries;
};

// Interprets raw entries; every problem is recorded and parsing continues.
class Reader {
  public:
    Reader(std::string_view source, std::map<std::string, Section, std::less<>> sections)
        : source_(source), sections_(std::move(sections)) {}

    bool has(std::string_view section) const { return sections_.count(section) > 0; }
    const Section* section(std::string_view name) const {
        const auto it = sections_.find(name);
        return it == sections_.end() ? nullptr : &it->second;
    }

    void error(int line, std::string_view key, const std::string& message) {
        std::string out(source_);
        if (line > 0) out += ":" + std::to_string(line);
        out += ": ";
        if (!key.empty()) out += "key '" + std::string(key) + "': ";
        out += message;
        errors_.push_back(std::move(out));
    }
    void error(const std::string& message) { errors_.push_back(std::string(source_) + ": " + message); }

    // Marks a key as consumed and returns it, or nullptr if absent.
    const Entry* take(std::string_view section, std::string_view key) {
        const auto it = sections_.find(section);
        if (it == sections_.end()) return nullptr;
        for (const Entry& e : it->second.entries)
            if (e.key == key) {
                used_.insert(std::string(section) + "." + e.key);
                return &e;
            }
        return nullptr;
    }

    void reject_unused(std::string_view section) {
        const auto it = sections_.find(section);
        if (it == sections_.end()) return;
        for (const Entry& e : it->second.entries)
            if (!used_.count(std::string(section) + "." + e.key)) {
                error(e.line, e.key, "unknown key in [" + std::string(section) + "]");
                used_.insert(std::string(section) + "." + e.key);
            }
    }

    const std::vector<std::string>& errors() const { return errors_; }

  private:
    std::string_view source_;
    std::map<std::string, Section, std::less<>> sections_;
    std::set<std::string> used_;
    std::vector<std::string> errors_;
};

std::optional<double> parse_number(std::string_view text) {
    text = trim(text);
    for (std::string_view fn : {"log", "exp"}) {
        if (text.size() > fn.size() + 2 && text.substr(0, fn.size()) == fn && text[fn.size()] == '(' &&
            text.back() == ')') {
            const auto inner = parse_number(text.substr(fn.size() + 1, text.size() - fn.size() - 2));
            if (!inner) return std::nullopt;
            const double v = fn == "log" ? std::log(*inner) : std::exp(*inner);
            if (!std::isfinite(v)) return std::nullopt;
            return v;
        }
    }
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty() || !std::isfinite(v))
        return std::nullopt;
    return v;
}

template <class Int>
std::optional<Int> parse_integer(std::string_view text) {
    text = trim(text);
    Int v{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) return std::nullopt;
    return v;
}

std::optional<bool> parse_bool(std::string_view text) {
    text = trim(text);
    if (text == "true") return true;
    if (text == "false") return false;
    return std::nullopt;
}

std::vector<std::string_view> split_commas(std::string_view text) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const auto comma = text.find(',', start);
        parts.push_back(trim(text.substr(start, comma == std::string_view::npos ? comma : comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return parts;
}

// family(arg, ...) with numeric arguments (log/exp allowed).
std::optional<Marginal> parse_distribution(std::string_view text, std::string& why) {
    text = trim(text);
    const auto open = text.find('(');
    if (open == std::string_view::npos || text.back() != ')') {
        why = "expected a distribution such as beta(1, 1), got '" + std::string(text) + "'";
        return std::nullopt;
    }
    const std::string family(trim(text.substr(0, open)));
    std::vector<double> args;
    for (std::string_view part : split_commas(text.substr(open + 1, text.size() - open - 2))) {
        const auto v = parse_number(part);
        if (!v) {
            why = "invalid distribution argument '" + std::string(part) + "'";
            return std::nullopt;
        }
        args.push_back(*v);
    }
    if (args.size() != 2) {
        why = family + " takes 2 arguments, got " + std::to_string(args.size());
        return std::nullopt;
    }
    try {
        if (family == "uniform") return Marginal::uniform(args[0], args[1]);
        if (family == "beta") return Marginal::beta(args[0], args[1]);
        if (family == "lognormal") return Marginal::lognormal(args[0], args[1]);
        if (family == "normal") return Marginal::normal(args[0], args[1]);
    } catch (const ValidationError& e) {
        why = e.what();
        return std::nullopt;
    }
    why = "unknown distribution family '" + family + "' (expected uniform, beta, lognormal or normal)";
    return std::nullopt;
}

class Interpreter {
  public:
    Interpreter(Reader& r, RunConfig& c) : r_(r), c_(c) {}

    void real(std::string_view section, std::string_view key, double& out) {
        if (const Entry* e = r_.take(section, key)) {
            if (const auto v = parse_number(e->value))
                out = *v;
            else
                r_.error(e->line, key, "expected a real number, got '" + e->value + "'");
        } else {
            defaulted(section, key);
        }
    }
    void optional_real(std::string_view section, std::string_view key, std::optional<double>& out) {
        if (const Entry* e = r_.take(section, key)) {
            if (const auto v = parse_number(e->value))
                out = *v;
            else
                r_.error(e->line, key, "expected a real number, got '" + e->value + "'");
        }
    }
    template <class Int>
    void integer(std::string_view section, std::string_view key, Int& out, bool record_default = true) {
        if (const Entry* e = r_.take(section, key)) {
            if (const auto v = parse_integer<Int>(e->value))
                out = *v;
            else
                r_.error(e->line, key, "expected an integer, got '" + e->value + "'");
        } else if (record_default) {
            defaulted(section, key);
        }
    }
    void boolean(std::string_view section, std::string_view key, bool& out) {
        if (const Entry* e = r_.take(section, key)) {
            if (const auto v = parse_bool(e->value))
                out = *v;
            else
                r_.error(e->line, key, "expected true or false, got '" + e->value + "'");
        } else {
            defaulted(section, key);
        }
    }
    void real_list(std::string_view section, std::string_view key, std::vector<double>& out) {
        const Entry* e = r_.take(section, key);
        if (!e) return;
        out.clear();
        for (std::string_view part : split_commas(e->value)) {
            if (const auto v = parse_number(part)) {
                out.push_back(*v);
            } else {
                r_.error(e->line, key, "expected a comma-separated list of reals, got '" + std::string(part) + "'");
                return;
            }
        }
    }

    void defaulted(std::string_view section, std::string_view key) {
        c_.defaults_applied.push_back(std::string(section) + "." + std::string(key));
    }

  private:
    Reader& r_;
    RunConfig& c_;
};

void read_model(Reader& r, Interpreter& in, RunConfig& c) {
    ModelSpec& m = c.model;
    const Entry* name = r.take("model", "name");
    if (!r.has("model")) {
        r.error("missing [model] section");
        return;
    }
    if (!name) {
        r.error(r.section("model")->line, "name", "model.name is required");
        return;
    }
    m.name = name->value;
    if (m.name == "vcbm") {
        vcbm::VcbmConfig& v = m.vcbm;
        in.real("model", "spring_constant", v.spring_constant);
        in.real("model", "rest_length", v.rest_length);
        in.real("model", "dt", v.dt);
        in.integer("model", "steps_per_day", v.steps_per_day);
        in.integer("model", "initial_tumour_cells", v.initial_tumour_cells);
        in.real("model", "healthy_annulus_width", v.healthy_annulus_width);
        in.real("model", "domain_half_width", v.domain_half_width);
        in.integer("model", "max_cells", v.max_cells);
        in.real("model", "cell_cycle_jitter", v.cell_cycle_jitter);
        in.real("model", "max_spring_length", v.max_spring_length);
        in.real("model", "repad_margin", v.repad_margin);
        in.real("model", "mm_per_cell_diameter", v.mm_per_cell_diameter);
        if (const Entry* e = r.take("model", "volume_formula")) {
            if (e->value == "caliper")
                v.volume_formula = vcbm::VolumeFormula::caliper;
            else if (e->value == "ellipsoid")
                v.volume_formula = vcbm::VolumeFormula::ellipsoid;
            else
                r.error(e->line, "volume_formula", "expected caliper or ellipsoid, got '" + e->value + "'");
        } else {
            in.defaulted("model", "volume_formula");
        }
        for (const std::string& p : v.problems()) r.error("model." + p);
    } else if (m.name == "gaussian_mean") {
        in.real("model", "sigma", m.sigma);
        in.integer("model", "n_obs", m.n_obs);
        if (!(m.sigma > 0.0)) r.error("model.sigma must be > 0");
        if (m.n_obs < 1) r.error("model.n_obs must be >= 1");
    } else if (m.name == "binomial") {
        in.integer("model", "n_trials", m.n_trials);
        if (m.n_trials < 1) r.error("model.n_trials must be >= 1");
    } else {
        r.error(name->line, "name", "unknown model '" + m.name + "' (expected vcbm, gaussian_mean or binomial)");
        return;
    }
    r.reject_unused("model");
}

void read_prior(Reader& r, RunConfig& c) {
    const Section* s = r.section("prior");
    if (!s || s->entries.empty()) {
        r.error("missing or empty [prior] section");
        return;
    }
    for (const Entry& e : s->entries) {
        r.take("prior", e.key);
        std::string why;
        if (auto m = parse_distribution(e.value, why)) {
            c.prior_names.push_back(e.key);
            c.prior_marginals.push_back(*m);
        } else {
            r.error(e.line, e.key, why);
        }
    }
    const auto& names = c.prior_names;
    if (c.model.name == "vcbm") {
        for (const char* want : {"p0", "p_psc", "d_max", "g_age"})
            if (std::find(names.begin(), names.end(), want) == names.end())
                r.error(s->line, want, "vcbm prior is missing parameter '" + std::string(want) + "'");
        for (const Entry& e : s->entries)
            if (e.key != "p0" && e.key != "p_psc" && e.key != "d_max" && e.key != "g_age")
                r.error(e.line, e.key, "vcbm has no parameter '" + e.key + "'");
    } else if ((c.model.name == "gaussian_mean" || c.model.name == "binomial") && s->entries.size() != 1) {
        r.error(s->line, "", c.model.name + " takes exactly one parameter, prior has " +
                                 std::to_string(s->entries.size()));
    }
}

void read_smc(Reader& r, Interpreter& in, RunConfig& c) {
    smc::SmcConfig& s = c.smc;
    in.integer("smc", "n_particles", s.n_particles);
    in.real("smc", "alpha", s.alpha);
    in.optional_real("smc", "target_epsilon", s.target_epsilon);
    in.integer("smc", "max_simulations", s.max_simulations);
    in.real("smc", "acceptance_floor", s.acceptance_floor);
    in.real("smc", "mcmc_tuning", s.mcmc_tuning);
    in.integer("smc", "max_mcmc_steps", s.max_mcmc_steps);
    in.real("smc", "initial_acceptance", s.initial_acceptance);
    in.boolean("smc", "move_retained", s.move_retained);
    in.boolean("smc", "unconstrained_proposals", s.unconstrained_proposals);
    in.integer("smc", "max_init_retries", s.max_init_retries);
    r.reject_unused("smc");
    for (const std::string& p : s.problems())
        if (p.rfind("workers", 0) != 0) r.error("smc." + p);
}

void read_data(Reader& r, Interpreter& in, RunConfig& c) {
    const bool data = r.has("data");
    const bool synthetic = r.has("synthetic") || r.has("synthetic.theta");
    if (data && synthetic) {
        r.error(r.section("data")->line, "", "[data] and [synthetic] are mutually exclusive");
    } else if (!data && !synthetic) {
        r.error("one of [data] or [synthetic] is required");
    }
    if (data) {
        if (const Entry* e = r.take("data", "path")) {
            c.data_path = std::filesystem::path(e->value);
        } else {
            r.error(r.section("data")->line, "path", "data.path is required");
        }
        r.reject_unused("data");
    }
    if (!synthetic) return;

    SyntheticSpec syn;
    in.optional_real("synthetic", "days", syn.days);
    in.real_list("synthetic", "measurement_days", syn.measurement_days);
    if (const Entry* e = r.take("synthetic", "seed")) {
        if (const auto v = parse_integer<std::uint64_t>(e->value))
            syn.seed = *v;
        else
            r.error(e->line, "seed", "expected a non-negative integer, got '" + e->value + "'");
    }
    r.reject_unused("synthetic");

    const Section* theta = r.section("synthetic.theta");
    if (!theta) {
        r.error("[synthetic] needs a [synthetic.theta] section");
    } else {
        for (const Entry& e : theta->entries) {
            r.take("synthetic.theta", e.key);
            if (std::find(c.prior_names.begin(), c.prior_names.end(), e.key) == c.prior_names.end()) {
                r.error(e.line, e.key, "synthetic.theta has a component not in the prior");
                continue;
            }
            if (const auto v = parse_number(e.value))
                syn.theta.emplace_back(e.key, *v);
            else
                r.error(e.line, e.key, "expected a real number, got '" + e.value + "'");
        }
    }
    // Store in prior order.
    std::vector<std::pair<std::string, double>> ordered;
    for (const std::string& name : c.prior_names) {
        const auto it = std::find_if(syn.theta.begin(), syn.theta.end(), [&](const auto& kv) { return kv.first == name; });
        if (it == syn.theta.end()) {
            if (theta) r.error(theta->line, name, "synthetic.theta is missing component '" + name + "'");
        } else {
            ordered.push_back(*it);
        }
    }
    syn.theta = std::move(ordered);

    if (c.model.name == "vcbm") {
        if (syn.theta.size() == c.prior_names.size() && !c.prior_names.empty()) {
            try {
                std::vector<std::string> names;
                std::vector<double> values;
                for (const auto& [k, v] : syn.theta) {
                    names.push_back(k);
                    values.push_back(v);
                }
                vcbm::VcbmParams::from(ParamVector(names, values));
            } catch (const Error& e) {
                r.error(std::string("synthetic.theta: ") + e.what());
            }
        }
        if (syn.days && !(*syn.days >= 0.0)) r.error("synthetic.days must be >= 0");
        if (syn.measurement_days.empty()) {
            if (syn.days) {
                for (int d = 0; d <= static_cast<int>(std::floor(*syn.days + 1e-9)); ++d) syn.measurement_days.push_back(d);
            } else {
                r.error("synthetic needs days or measurement_days for vcbm");
            }
        }
        if (!syn.days && !syn.measurement_days.empty()) syn.days = syn.measurement_days.back();
        for (std::size_t i = 0; i < syn.measurement_days.size(); ++i) {
            const double t = syn.measurement_days[i];
            if (!(t >= 0.0) || (syn.days && t > *syn.days))
                r.error("synthetic.measurement_days: day " + format_double(t) + " outside [0, days]");
            if (i > 0 && !(t > syn.measurement_days[i - 1]))
                r.error("synthetic.measurement_days must be strictly increasing");
        }
    } else if (syn.days || !syn.measurement_days.empty()) {
        r.error("synthetic.days and synthetic.measurement_days apply to vcbm only");
    }
    c.synthetic = std::move(syn);
}

void read_run(Reader& r, Interpreter& in, RunConfig& c) {
    in.integer("run", "seed", c.seed);
    if (const Entry* e = r.take("run", "workers")) {
        const auto v = parse_integer<unsigned>(e->value);
        if (!v || *v < 1)
            r.error(e->line, "workers", "expected an integer >= 1, got '" + e->value + "'");
        else
            c.workers = *v;
    }
    if (const Entry* e = r.take("run", "output_dir")) {
        if (e->value.empty())
            r.error(e->line, "output_dir", "must not be empty");
        else
            c.output_dir = e->value;
    } else {
        in.defaulted("run", "output_dir");
    }
    r.reject_unused("run");
    in.integer("predict", "draws", c.predict_draws);
    if (c.predict_draws < 1) r.error("predict.draws must be >= 1");
    r.reject_unused("predict");
}

}  // namespace

RunConfig parse_config(std::string_view text, std::string_view source) {
    std::map<std::string, Section, std::less<>> sections;
    std::string current;
    int line_no = 0;
    std::size_t pos = 0;
    auto fail = [&](const std::string& msg) {
        throw ValidationError(std::string(source) + ":" + std::to_string(line_no) + ": " + msg);
    };
    while (pos <= text.size()) {
        const auto end = text.find('\n', pos);
        std::string_view line = text.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
        pos = end == std::string_view::npos ? text.size() + 1 : end + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty() || line.front() == ';') continue;
        if (line.front() == '[') {
            if (line.back() != ']') fail("unterminated section header");
            current = std::string(trim(line.substr(1, line.size() - 2)));
            if (!kSections.count(current)) fail("unknown section [" + current + "]");
            if (sections.count(current)) fail("duplicate section [" + current + "]");
            sections[current].line = line_no;
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) fail("expected 'key = value', got '" + std::string(line) + "'");
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (key.empty()) fail("missing key before '='");
        if (current.empty()) fail("key '" + key + "' appears before any section header");
        if (value.empty()) fail("key '" + key + "': missing value");
        auto& entries = sections[current].entries;
        for (const Entry& e : entries)
            if (e.key == key)
                fail("key '" + key + "': duplicate in [" + current + "] (first set on line " + std::to_string(e.line) +
                     ")");
        entries.push_back({key, value, line_no});
    }

    RunConfig c;
    Reader r(source, std::move(sections));
    Interpreter in(r, c);
    read_model(r, in, c);
    read_prior(r, c);
    read_smc(r, in, c);
    read_data(r, in, c);
    read_run(r, in, c);
    if (!r.errors().empty()) {
        std::string msg = "invalid configuration:";
        for (const std::string& e : r.errors()) msg += "\n  " + e;
        throw ValidationError(msg);
    }
    return c;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot read config file '" + path.string() + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    RunConfig config = parse_config(buffer.str(), path.string());
    if (config.data_path && !std::filesystem::is_regular_file(*config.data_path))
        throw ValidationError(path.string() + ": key 'path': data file '" + config.data_path->string() +
                              "' does not exist");
    return config;
}

std::string render_config(const RunConfig& c) {
    std::ostringstream o;
    auto kv = [&](std::string_view key, const std::string& value) { o << key << " = " << value << "\n"; };
    auto num = [](double v) { return format_double(v); };
    auto list = [&](const std::vector<double>& v) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + num(v[i]);
        return s;
    };

    o << "[model]\n";
    kv("name", c.model.name);
    if (c.model.name == "vcbm") {
        const auto& v = c.model.vcbm;
        kv("spring_constant", num(v.spring_constant));
        kv("rest_length", num(v.rest_length));
        kv("dt", num(v.dt));
        kv("steps_per_day", std::to_string(v.steps_per_day));
        kv("initial_tumour_cells", std::to_string(v.initial_tumour_cells));
        kv("healthy_annulus_width", num(v.healthy_annulus_width));
        kv("domain_half_width", num(v.domain_half_width));
        kv("max_cells", std::to_string(v.max_cells));
        kv("cell_cycle_jitter", num(v.cell_cycle_jitter));
        kv("max_spring_length", num(v.max_spring_length));
        kv("repad_margin", num(v.repad_margin));
        kv("mm_per_cell_diameter", num(v.mm_per_cell_diameter));
        kv("volume_formula", v.volume_formula == vcbm::VolumeFormula::caliper ? "caliper" : "ellipsoid");
    } else if (c.model.name == "gaussian_mean") {
        kv("sigma", num(c.model.sigma));
        kv("n_obs", std::to_string(c.model.n_obs));
    } else if (c.model.name == "binomial") {
        kv("n_trials", std::to_string(c.model.n_trials));
    }

    o << "\n[prior]\n";
    for (std::size_t i = 0; i < c.prior_names.size(); ++i) kv(c.prior_names[i], c.prior_marginals[i].describe());

    const auto& s = c.smc;
    o << "\n[smc]\n";
    kv("n_particles", std::to_string(s.n_particles));
    kv("alpha", num(s.alpha));
    if (s.target_epsilon) kv("target_epsilon", num(*s.target_epsilon));
    kv("max_simulations", std::to_string(s.max_simulations));
    kv("acceptance_floor", num(s.acceptance_floor));
    kv("mcmc_tuning", num(s.mcmc_tuning));
    kv("max_mcmc_steps", std::to_string(s.max_mcmc_steps));
    kv("initial_acceptance", num(s.initial_acceptance));
    kv("move_retained", s.move_retained ? "true" : "false");
    kv("unconstrained_proposals", s.unconstrained_proposals ? "true" : "false");
    kv("max_init_retries", std::to_string(s.max_init_retries));

    if (c.data_path) {
        o << "\n[data]\n";
        kv("path", c.data_path->generic_string());
    }
    if (c.synthetic) {
        const auto& syn = *c.synthetic;
        o << "\n[synthetic]\n";
        if (syn.days) kv("days", num(*syn.days));
        if (!syn.measurement_days.empty()) kv("measurement_days", list(syn.measurement_days));
        if (syn.seed) kv("seed", std::to_string(*syn.seed));
        o << "\n[synthetic.theta]\n";
        for (const auto& [k, v] : syn.theta) kv(k, num(v));
    }

    o << "\n[run]\n";
    kv("seed", std::to_string(c.seed));
    if (c.workers) kv("workers", std::to_string(*c.workers));
    kv("output_dir", c.output_dir.generic_string());

    o << "\n[predict]\n";
    kv("draws", std::to_string(c.predict_draws));
    return o.str();
}

}  // namespace lfi::io
