#include "lfi/core/timeseries.hpp"

#include <algorithm>
#include <cmath>

#include "lfi/core/error.hpp"
#include "lfi/core/format.hpp"

namespace lfi {

TimeSeries::TimeSeries(std::vector<Observation> rows) : rows_(std::move(rows)) {
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        const auto& r = rows_[i];
        if (!std::isfinite(r.time) || !std::isfinite(r.volume))
            throw ValidationError("row " + std::to_string(i + 1) + ": non-finite value");
        if (r.volume < 0.0)
            throw ValidationError("row " + std::to_string(i + 1) + ": negative volume " + format_double(r.volume));
        if (i > 0 && !(r.time > rows_[i - 1].time))
            throw ValidationError("row " + std::to_string(i + 1) + ": time " + format_double(r.time) +
                                  " is not strictly increasing");
    }
}

std::vector<double> TimeSeries::times() const {
    std::vector<double> out;
    out.reserve(rows_.size());
    for (const auto& r : rows_) out.push_back(r.time);
    return out;
}

std::vector<double> TimeSeries::volumes() const {
    std::vector<double> out;
    out.reserve(rows_.size());
    for (const auto& r : rows_) out.push_back(r.volume);
    return out;
}

std::vector<double> interpolate_onto(const TimeSeries& series, std::span<const double> grid) {
    const auto& rows = series.rows();
    if (rows.empty()) throw ValidationError("cannot interpolate an empty series");
    std::vector<double> out;
    out.reserve(grid.size());
    for (const double t : grid) {
        if (t < rows.front().time || t > rows.back().time)
            throw ValidationError("grid time " + format_double(t) + " outside series range");
        const auto hi = std::lower_bound(rows.begin(), rows.end(), t,
                                         [](const Observation& r, double v) { return r.time < v; });
        if (hi->time == t) {
            out.push_back(hi->volume);
            continue;
        }
        const auto lo = hi - 1;
        const double w = (t - lo->time) / (hi->time - lo->time);
        out.push_back(lo->volume + w * (hi->volume - lo->volume));
    }
    return out;
}

}  // namespace lfi
