#pragma once

#include <span>
#include <vector>

namespace lfi {

struct Observation {
    double time;
    double volume;
};

/// (time, volume) series with strictly increasing times and non-negative
/// volumes. Used both for observed datasets and simulated trajectories.
class TimeSeries {
  public:
    TimeSeries() = default;
    /// Throws ValidationError if the invariants do not hold.
    explicit TimeSeries(std::vector<Observation> rows);

    std::size_t size() const noexcept { return rows_.size(); }
    bool empty() const noexcept { return rows_.empty(); }
    const std::vector<Observation>& rows() const noexcept { return rows_; }
    std::vector<double> times() const;
    /// Raw volumes: the summary statistic of a dataset.
    std::vector<double> volumes() const;

  private:
    std::vector<Observation> rows_;
};

using Dataset = TimeSeries;
using TumourTrajectory = TimeSeries;

/// Linear interpolation of the series onto grid; grid points outside the
/// series' time range are an error.
std::vector<double> interpolate_onto(const TimeSeries& series, std::span<const double> grid);

}  // namespace lfi
