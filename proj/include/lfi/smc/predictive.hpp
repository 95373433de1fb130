#pragma once

#include <span>
#include <vector>

#include "lfi/core/model.hpp"
#include "lfi/core/param_vector.hpp"
#include "lfi/core/rng.hpp"

namespace lfi::smc {

struct PredictiveBands {
    std::vector<double> grid;
    std::vector<double> q025;
    std::vector<double> q50;
    std::vector<double> q975;
    std::vector<std::size_t> particle_index;   // per draw
    std::vector<std::vector<double>> draws;    // draws[d][t]
    std::size_t failures = 0;                  // ModelFailure retries
};

/// Sample-quantile with linear interpolation between order statistics
/// (Hyndman & Fan type 7). `sorted` must be ascending and non-empty.
double quantile_sorted(std::span<const double> sorted, double p);

/// Simulates m_draws particles drawn uniformly from `thetas`, each with its
/// own stream, and summarises pointwise quantiles on `grid`. The model's
/// output must have one value per grid point.
PredictiveBands posterior_predictive(std::span<const ParamVector> thetas, const Model& model,
                                     std::span<const double> grid, std::size_t m_draws, const StreamKey& key,
                                     unsigned workers);

}  // namespace lfi::smc
