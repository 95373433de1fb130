#include "lfi/smc/predictive.hpp"

#include <algorithm>
#include <cmath>

#include <boost/random/uniform_int_distribution.hpp>

#include "lfi/core/error.hpp"
#include "lfi/core/parallel.hpp"

namespace lfi::smc {
namespace {
constexpr std::size_t kMaxPredictiveRetries = 100;
}

double quantile_sorted(std::span<const double> sorted, double p) {
    if (sorted.empty()) throw ValidationError("quantile of an empty sample");
    const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

PredictiveBands posterior_predictive(std::span<const ParamVector> thetas, const Model& model,
                                     std::span<const double> grid, std::size_t m_draws, const StreamKey& key,
                                     unsigned workers) {
    if (m_draws == 0) throw ValidationError("draws must be >= 1");
    if (thetas.empty()) throw ValidationError("posterior predictive needs a non-empty population");

    PredictiveBands out;
    out.grid.assign(grid.begin(), grid.end());
    out.particle_index.resize(m_draws);
    {
        Stream pick_rng = key.child(0).open();
        boost::random::uniform_int_distribution<std::size_t> pick(0, thetas.size() - 1);
        for (auto& idx : out.particle_index) idx = pick(pick_rng);
    }

    out.draws.resize(m_draws);
    std::vector<std::size_t> failures(m_draws, 0);
    parallel_for(m_draws, workers, [&](std::size_t d) {
        for (std::size_t attempt = 0; attempt <= kMaxPredictiveRetries; ++attempt) {
            Stream rng = key.child({1, d, attempt}).open();
            try {
                auto sim = model.simulate(thetas[out.particle_index[d]], rng);
                if (sim.size() != grid.size())
                    throw ValidationError("model output length " + std::to_string(sim.size()) +
                                          " does not match the grid length " + std::to_string(grid.size()));
                out.draws[d] = std::move(sim);
                return;
            } catch (const ModelFailure&) {
                ++failures[d];
            }
        }
        throw ModelFailure("posterior predictive draw " + std::to_string(d) + " failed repeatedly");
    });
    for (auto f : failures) out.failures += f;

    std::vector<double> column(m_draws);
    for (std::size_t t = 0; t < grid.size(); ++t) {
        for (std::size_t d = 0; d < m_draws; ++d) column[d] = out.draws[d][t];
        std::sort(column.begin(), column.end());
        out.q025.push_back(quantile_sorted(column, 0.025));
        out.q50.push_back(quantile_sorted(column, 0.5));
        out.q975.push_back(quantile_sorted(column, 0.975));
    }
    return out;
}

}  // namespace lfi::smc
