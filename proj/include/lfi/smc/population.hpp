#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "lfi/core/distance.hpp"
#include "lfi/core/model.hpp"
#include "lfi/core/param_vector.hpp"
#include "lfi/core/prior.hpp"

namespace lfi::smc {

struct Particle {
    ParamVector theta;
    std::vector<double> summary;
    double distance = 0.0;
};

struct Population {
    std::vector<Particle> particles;
    double epsilon = 0.0;
    std::size_t iteration = 0;

    std::size_t size() const noexcept { return particles.size(); }
};

/// Everything that defines the ABC target: model, prior, observed summary
/// and discrepancy. Holds references; the caller keeps model and prior alive.
struct Problem {
    const Model& model;
    const Prior& prior;
    std::vector<double> observed;
    Distance distance{};

    double discrepancy(std::span<const double> simulated) const { return distance(simulated, observed); }
};

/// Number of distinct parameter vectors in the population.
std::size_t count_unique(const Population& pop);

}  // namespace lfi::smc
