#pragma once

#include <span>
#include <vector>

namespace lfi {

/// Euclidean distance of two summary vectors.
double euclidean_distance(std::span<const double> a, std::span<const double> b);

/// Discrepancy between simulated and observed summaries: Euclidean norm,
/// optionally with per-component non-negative weights (sqrt(sum w_i d_i^2)).
class Distance {
  public:
    Distance() = default;
    explicit Distance(std::vector<double> weights);

    double operator()(std::span<const double> simulated, std::span<const double> observed) const;
    const std::vector<double>& weights() const noexcept { return weights_; }

  private:
    std::vector<double> weights_;
};

}  // namespace lfi
