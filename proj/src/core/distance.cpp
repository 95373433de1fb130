#include "lfi/core/distance.hpp"

#include <cmath>

#include "lfi/core/error.hpp"

namespace lfi {

double euclidean_distance(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        throw ValidationError("summary length mismatch: " + std::to_string(a.size()) + " vs " +
                              std::to_string(b.size()));
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        sum += d * d;
    }
    return std::sqrt(sum);
}

Distance::Distance(std::vector<double> weights) : weights_(std::move(weights)) {
    for (double w : weights_)
        if (!std::isfinite(w) || w < 0.0) throw ValidationError("distance weights must be finite and >= 0");
}

double Distance::operator()(std::span<const double> simulated, std::span<const double> observed) const {
    if (weights_.empty()) return euclidean_distance(simulated, observed);
    if (simulated.size() != observed.size() || weights_.size() != observed.size())
        throw ValidationError("summary/weight length mismatch");
    double sum = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        const double d = simulated[i] - observed[i];
        sum += weights_[i] * d * d;
    }
    return std::sqrt(sum);
}

}  // namespace lfi
