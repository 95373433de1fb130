#pragma once

#include <string>
#include <variant>
#include <vector>

#include "lfi/core/param_vector.hpp"
#include "lfi/core/rng.hpp"

namespace lfi {

struct UniformDist {
    double lower;
    double upper;
};

struct BetaDist {
    double a;
    double b;
};

struct LogNormalDist {
    double mu;
    double sigma;
};

struct NormalDist {
    double mean;
    double sd;
};

/// One-dimensional prior marginal.
///
/// Each family also carries a bijection to the real line used by the MCMC
/// proposal: logit for bounded supports, log for LogNormal, identity for
/// Normal.
class Marginal {
  public:
    using Family = std::variant<UniformDist, BetaDist, LogNormalDist, NormalDist>;

    /// Throws ValidationError on invalid hyperparameters.
    explicit Marginal(Family family);

    static Marginal uniform(double lower, double upper) { return Marginal(UniformDist{lower, upper}); }
    static Marginal beta(double a, double b) { return Marginal(BetaDist{a, b}); }
    static Marginal lognormal(double mu, double sigma) { return Marginal(LogNormalDist{mu, sigma}); }
    static Marginal normal(double mean, double sd) { return Marginal(NormalDist{mean, sd}); }

    const Family& family() const noexcept { return family_; }

    /// Log density; -inf outside the support.
    double logpdf(double x) const;
    double sample(Stream& rng) const;
    double mean() const;
    double variance() const;

    double to_unconstrained(double x) const;
    double from_unconstrained(double z) const;
    /// log |dx/dz| at z.
    double log_jacobian(double z) const;

    /// Canonical config-syntax rendering, e.g. "beta(1, 10000)".
    std::string describe() const;

  private:
    Family family_;
    double log_norm_ = 0.0;  // family-dependent normalising constant
};

/// Independent product prior over named components.
class Prior {
  public:
    Prior() = default;
    Prior(std::vector<std::string> names, std::vector<Marginal> marginals);

    std::size_t dimension() const noexcept { return marginals_.size(); }
    const std::vector<std::string>& names() const { return *names_; }
    const ParamVector::Names& shared_names() const noexcept { return names_; }
    const std::vector<Marginal>& marginals() const noexcept { return marginals_; }

    ParamVector sample(Stream& rng) const;
    /// Sum of marginal log densities. Throws ValidationError on a dimension
    /// or name mismatch.
    double logpdf(const ParamVector& theta) const;

  private:
    ParamVector::Names names_;
    std::vector<Marginal> marginals_;
};

}  // namespace lfi
