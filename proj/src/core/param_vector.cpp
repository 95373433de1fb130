#include "lfi/core/param_vector.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "lfi/core/error.hpp"

namespace lfi {

ParamVector::ParamVector(std::vector<std::string> names, std::vector<double> values)
    : ParamVector(make_names(std::move(names)), std::move(values)) {}

ParamVector::ParamVector(Names names, std::vector<double> values)
    : names_(std::move(names)), values_(std::move(values)) {
    validate();
}

ParamVector::Names ParamVector::make_names(std::vector<std::string> names) {
    std::unordered_set<std::string> seen;
    for (const auto& n : names) {
        if (n.empty()) throw ValidationError("parameter name must not be empty");
        if (!seen.insert(n).second) throw ValidationError("duplicate parameter name '" + n + "'");
    }
    return std::make_shared<const std::vector<std::string>>(std::move(names));
}

void ParamVector::validate() const {
    if (!names_) throw ValidationError("parameter vector has no names");
    if (names_->size() != values_.size()) {
        throw ValidationError("parameter vector has " + std::to_string(names_->size()) + " names but " +
                              std::to_string(values_.size()) + " values");
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) {
            throw ValidationError("parameter '" + (*names_)[i] + "' is not finite");
        }
    }
}

const std::vector<std::string>& ParamVector::names() const {
    static const std::vector<std::string> empty;
    return names_ ? *names_ : empty;
}

double ParamVector::at(std::string_view name) const {
    const auto& n = names();
    const auto it = std::find(n.begin(), n.end(), name);
    if (it == n.end()) throw ValidationError("unknown parameter '" + std::string(name) + "'");
    return values_[static_cast<std::size_t>(it - n.begin())];
}

ParamVector ParamVector::with_values(std::vector<double> values) const {
    return ParamVector(names_, std::move(values));
}

bool operator==(const ParamVector& a, const ParamVector& b) {
    return a.values_ == b.values_ && (a.names_ == b.names_ || a.names() == b.names());
}

}  // namespace lfi
