#pragma once

#include <string_view>
#include <vector>

#include "lfi/core/param_vector.hpp"
#include "lfi/core/rng.hpp"

namespace lfi {

/// An implicit model: can be simulated, has no tractable likelihood.
///
/// simulate() returns the summary on the model's observation grid and must
/// be safe to call concurrently from several threads (each with its own
/// Stream). Throws ModelFailure when no output can be produced for theta.
class Model {
  public:
    virtual ~Model() = default;

    virtual std::string_view name() const = 0;
    virtual std::vector<double> simulate(const ParamVector& theta, Stream& rng) const = 0;
};

}  // namespace lfi
