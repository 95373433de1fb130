#include "lfi/io/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "lfi/core/error.hpp"
#include "lfi/core/format.hpp"

namespace lfi::io {
namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

bool parse_real(std::string_view text, double& out) {
    text = trim(text);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc() && ptr == text.data() + text.size() && !text.empty();
}

std::string join(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) out += (i ? "," : "") + fields[i];
    return out;
}

// Rows after the header as (row number, day, value); checks shape only.
std::vector<Observation> parse_rows(std::string_view text, std::string_view source, bool check_volume) {
    const auto rows = parse_csv(text);
    if (rows.empty()) throw ValidationError(std::string(source) + ": empty file (expected header '" +
                                            std::string(kDatasetHeader) + "')");
    if (join(rows.front()) != kDatasetHeader)
        throw ValidationError(std::string(source) + ": header must be '" + std::string(kDatasetHeader) + "', got '" +
                              join(rows.front()) + "'");
    std::vector<Observation> out;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        const std::string where = std::string(source) + ": row " + std::to_string(r);
        if (row.size() != 2)
            throw ValidationError(where + ": expected 2 fields, got " + std::to_string(row.size()));
        Observation o{};
        if (!parse_real(row[0], o.time) || !std::isfinite(o.time))
            throw ValidationError(where + ": day '" + row[0] + "' is not a finite number");
        if (!parse_real(row[1], o.volume) || !std::isfinite(o.volume))
            throw ValidationError(where + ": volume_mm3 '" + row[1] + "' is not a finite number");
        if (check_volume && o.volume < 0.0)
            throw ValidationError(where + ": volume_mm3 must be >= 0, got " + row[1]);
        if (!out.empty() && !(o.time > out.back().time))
            throw ValidationError(where + ": days must be strictly increasing (" + row[0] + " after " +
                                  format_double(out.back().time) + ")");
        out.push_back(o);
    }
    if (out.empty()) throw ValidationError(std::string(source) + ": dataset is empty");
    return out;
}

}  // namespace

std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool quoted = false, any = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
            continue;
        }
        if (c == '"') {
            quoted = true;
            any = true;
        } else if (c == ',') {
            row.push_back(std::move(field));
            field.clear();
            any = true;
        } else if (c == '\n' || c == '\r') {
            if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
            if (any || !field.empty()) {
                row.push_back(std::move(field));
                rows.push_back(std::move(row));
            }
            row.clear();
            field.clear();
            any = false;
        } else {
            field += c;
        }
    }
    if (any || !field.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
    }
    for (auto& r : rows)
        for (auto& f : r) f = std::string(trim(f));
    return rows;
}

Dataset parse_dataset(std::string_view text, std::string_view source) {
    return Dataset(parse_rows(text, source, true));
}

Dataset load_dataset(const std::filesystem::path& path) { return parse_dataset(read_file(path), path.string()); }

std::vector<Observation> parse_observations(std::string_view text, std::string_view source) {
    return parse_rows(text, source, false);
}

std::vector<Observation> load_observations(const std::filesystem::path& path) {
    return parse_observations(read_file(path), path.string());
}

CsvWriter::CsvWriter(const std::vector<std::string>& header) : columns_(header.size()) {
    for (const std::string& h : header) field(h);
    end_row();
}

CsvWriter& CsvWriter::field(std::string_view value) {
    if (in_row_++ > 0) out_ += ',';
    if (value.find_first_of(",\"\r\n") == std::string_view::npos) {
        out_ += value;
        return *this;
    }
    out_ += '"';
    for (char c : value) {
        if (c == '"') out_ += '"';
        out_ += c;
    }
    out_ += '"';
    return *this;
}

CsvWriter& CsvWriter::field(double value) { return field(std::string_view(format_double(value))); }
CsvWriter& CsvWriter::field(std::size_t value) { return field(std::string_view(std::to_string(value))); }

void CsvWriter::end_row() {
    if (in_row_ != columns_)
        throw Error("internal: CSV row has " + std::to_string(in_row_) + " fields, header has " +
                    std::to_string(columns_));
    out_ += "\r\n";
    in_row_ = 0;
}

std::vector<std::string> population_columns(const std::vector<std::string>& names) {
    std::vector<std::string> cols{"particle"};
    cols.insert(cols.end(), names.begin(), names.end());
    cols.push_back("distance");
    return cols;
}

std::string population_csv(const smc::Population& pop) {
    if (pop.particles.empty()) throw Error("internal: empty population");
    const auto& names = pop.particles.front().theta.names();
    CsvWriter w(population_columns(names));
    for (std::size_t i = 0; i < pop.size(); ++i) {
        const auto& p = pop.particles[i];
        w.field(i);
        for (double v : p.theta.values()) w.field(v);
        w.field(p.distance);
        w.end_row();
    }
    return w.str();
}

std::vector<ParamVector> parse_population(std::string_view text, const std::vector<std::string>& names,
                                          std::string_view source) {
    const auto rows = parse_csv(text);
    const auto want = population_columns(names);
    if (rows.empty() || rows.front() != want)
        throw ValidationError(std::string(source) + ": population header '" + (rows.empty() ? "" : join(rows.front())) +
                              "' does not match the configured prior (expected '" + join(want) + "')");
    const auto shared = ParamVector::make_names(names);
    std::vector<ParamVector> out;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        const std::string where = std::string(source) + ": row " + std::to_string(r);
        if (row.size() != want.size())
            throw ValidationError(where + ": expected " + std::to_string(want.size()) + " fields");
        std::vector<double> values(names.size());
        for (std::size_t k = 0; k < names.size(); ++k)
            if (!parse_real(row[k + 1], values[k]) || !std::isfinite(values[k]))
                throw ValidationError(where + ": " + names[k] + " '" + row[k + 1] + "' is not a finite number");
        out.emplace_back(shared, std::move(values));
    }
    if (out.empty()) throw ValidationError(std::string(source) + ": population is empty");
    return out;
}

std::vector<std::string> trace_columns() {
    return {"iteration", "epsilon", "n_unique_particles", "mcmc_acceptance_rate", "mcmc_steps",
            "cumulative_simulations"};
}

std::string trace_csv(const smc::RunTrace& trace) {
    CsvWriter w(trace_columns());
    for (const auto& t : trace) {
        w.field(t.iteration).field(t.epsilon).field(t.n_unique_particles);
        w.field(t.mcmc_acceptance_rate).field(t.mcmc_steps).field(t.cumulative_simulations);
        w.end_row();
    }
    return w.str();
}

std::vector<std::string> trajectory_columns() { return {"day", "volume_mm3"}; }

std::string trajectory_csv(const std::vector<Observation>& rows) {
    CsvWriter w(trajectory_columns());
    for (const auto& o : rows) {
        w.field(o.time).field(o.volume);
        w.end_row();
    }
    return w.str();
}

std::vector<std::string> bands_columns() { return {"day", "q025", "q50", "q975"}; }

std::string bands_csv(const smc::PredictiveBands& b) {
    CsvWriter w(bands_columns());
    for (std::size_t t = 0; t < b.grid.size(); ++t) {
        w.field(b.grid[t]).field(b.q025[t]).field(b.q50[t]).field(b.q975[t]);
        w.end_row();
    }
    return w.str();
}

std::vector<std::string> draws_columns() { return {"draw", "particle", "day", "volume_mm3"}; }

std::string draws_csv(const smc::PredictiveBands& b) {
    CsvWriter w(draws_columns());
    for (std::size_t d = 0; d < b.draws.size(); ++d)
        for (std::size_t t = 0; t < b.grid.size(); ++t) {
            w.field(d).field(b.particle_index[d]).field(b.grid[t]).field(b.draws[d][t]);
            w.end_row();
        }
    return w.str();
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot read '" + path.string() + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error("write failed for '" + path.string() + "'");
}

}  // namespace lfi::io
