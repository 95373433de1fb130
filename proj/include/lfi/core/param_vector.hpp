#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lfi {

/// A point in parameter space with named components.
///
/// Names are shared between copies, so copying a ParamVector costs one
/// vector of doubles. Construction rejects duplicate names, length
/// mismatches and non-finite values.
class ParamVector {
  public:
    using Names = std::shared_ptr<const std::vector<std::string>>;

    ParamVector() = default;
    ParamVector(std::vector<std::string> names, std::vector<double> values);
    ParamVector(Names names, std::vector<double> values);

    static Names make_names(std::vector<std::string> names);

    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }
    double at(std::string_view name) const;
    std::span<const double> values() const noexcept { return values_; }
    const std::vector<std::string>& names() const;
    const Names& shared_names() const noexcept { return names_; }

    /// Same names, new values (validated).
    ParamVector with_values(std::vector<double> values) const;

    friend bool operator==(const ParamVector& a, const ParamVector& b);

  private:
    void validate() const;

    Names names_;
    std::vector<double> values_;
};

}  // namespace lfi
