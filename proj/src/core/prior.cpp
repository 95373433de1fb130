#include "lfi/core/prior.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <boost/random/beta_distribution.hpp>

#include "lfi/core/error.hpp"
#include "lfi/core/format.hpp"

namespace lfi {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kPosInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

bool finite_all(std::initializer_list<double> xs) {
    for (double x : xs)
        if (!std::isfinite(x)) return false;
    return true;
}

double softplus(double x) { return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

double sigmoid(double z) { return z >= 0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z)); }

// (p - 1) * log(x), with the 0 * log(0) = 0 convention for p == 1.
double power_term(double p, double x) {
    if (x > 0) return (p - 1.0) * std::log(x);
    if (p == 1.0) return 0.0;
    return p > 1.0 ? kNegInf : kPosInf;
}

}  // namespace

Marginal::Marginal(Family family) : family_(family) {
    std::visit(Overloaded{
                   [&](const UniformDist& d) {
                       if (!finite_all({d.lower, d.upper}) || !(d.lower < d.upper))
                           throw ValidationError("uniform(a, b) requires finite a < b");
                       log_norm_ = -std::log(d.upper - d.lower);
                   },
                   [&](const BetaDist& d) {
                       if (!finite_all({d.a, d.b}) || !(d.a > 0) || !(d.b > 0))
                           throw ValidationError("beta(a, b) requires a > 0 and b > 0");
                       log_norm_ = std::lgamma(d.a + d.b) - std::lgamma(d.a) - std::lgamma(d.b);
                   },
                   [&](const LogNormalDist& d) {
                       if (!finite_all({d.mu, d.sigma}) || !(d.sigma > 0))
                           throw ValidationError("lognormal(mu, sigma) requires sigma > 0");
                       log_norm_ = -std::log(d.sigma) - 0.5 * std::log(2.0 * std::numbers::pi);
                   },
                   [&](const NormalDist& d) {
                       if (!finite_all({d.mean, d.sd}) || !(d.sd > 0))
                           throw ValidationError("normal(mean, sd) requires sd > 0");
                       log_norm_ = -std::log(d.sd) - 0.5 * std::log(2.0 * std::numbers::pi);
                   },
               },
               family_);
}

double Marginal::logpdf(double x) const {
    if (std::isnan(x)) return kNegInf;
    return std::visit(Overloaded{
                          [&](const UniformDist& d) {
                              return (x < d.lower || x > d.upper) ? kNegInf : log_norm_;
                          },
                          [&](const BetaDist& d) {
                              if (x < 0.0 || x > 1.0) return kNegInf;
                              return log_norm_ + power_term(d.a, x) + power_term(d.b, 1.0 - x);
                          },
                          [&](const LogNormalDist& d) {
                              if (!(x > 0.0) || std::isinf(x)) return kNegInf;
                              const double u = (std::log(x) - d.mu) / d.sigma;
                              return log_norm_ - std::log(x) - 0.5 * u * u;
                          },
                          [&](const NormalDist& d) {
                              if (std::isinf(x)) return kNegInf;
                              const double u = (x - d.mean) / d.sd;
                              return log_norm_ - 0.5 * u * u;
                          },
                      },
                      family_);
}

double Marginal::sample(Stream& rng) const {
    return std::visit(Overloaded{
                          [&](const UniformDist& d) { return d.lower + (d.upper - d.lower) * rng.uniform(); },
                          [&](const BetaDist& d) {
                              boost::random::beta_distribution<double> dist(d.a, d.b);
                              return dist(rng);
                          },
                          [&](const LogNormalDist& d) { return std::exp(d.mu + d.sigma * rng.normal()); },
                          [&](const NormalDist& d) { return d.mean + d.sd * rng.normal(); },
                      },
                      family_);
}

double Marginal::mean() const {
    return std::visit(Overloaded{
                          [](const UniformDist& d) { return 0.5 * (d.lower + d.upper); },
                          [](const BetaDist& d) { return d.a / (d.a + d.b); },
                          [](const LogNormalDist& d) { return std::exp(d.mu + 0.5 * d.sigma * d.sigma); },
                          [](const NormalDist& d) { return d.mean; },
                      },
                      family_);
}

double Marginal::variance() const {
    return std::visit(Overloaded{
                          [](const UniformDist& d) {
                              const double w = d.upper - d.lower;
                              return w * w / 12.0;
                          },
                          [](const BetaDist& d) {
                              const double s = d.a + d.b;
                              return d.a * d.b / (s * s * (s + 1.0));
                          },
                          [](const LogNormalDist& d) {
                              const double s2 = d.sigma * d.sigma;
                              return std::expm1(s2) * std::exp(2.0 * d.mu + s2);
                          },
                          [](const NormalDist& d) { return d.sd * d.sd; },
                      },
                      family_);
}

double Marginal::to_unconstrained(double x) const {
    return std::visit(Overloaded{
                          [&](const UniformDist& d) {
                              const double u = (x - d.lower) / (d.upper - d.lower);
                              return std::log(u) - std::log1p(-u);
                          },
                          [&](const BetaDist&) { return std::log(x) - std::log1p(-x); },
                          [&](const LogNormalDist&) { return std::log(x); },
                          [&](const NormalDist&) { return x; },
                      },
                      family_);
}

double Marginal::from_unconstrained(double z) const {
    return std::visit(Overloaded{
                          [&](const UniformDist& d) { return d.lower + (d.upper - d.lower) * sigmoid(z); },
                          [&](const BetaDist&) { return sigmoid(z); },
                          [&](const LogNormalDist&) { return std::exp(z); },
                          [&](const NormalDist&) { return z; },
                      },
                      family_);
}

double Marginal::log_jacobian(double z) const {
    return std::visit(Overloaded{
                          [&](const UniformDist& d) {
                              return std::log(d.upper - d.lower) - softplus(-z) - softplus(z);
                          },
                          [&](const BetaDist&) { return -softplus(-z) - softplus(z); },
                          [&](const LogNormalDist&) { return z; },
                          [&](const NormalDist&) { return 0.0; },
                      },
                      family_);
}

std::string Marginal::describe() const {
    auto call = [](const char* fn, double a, double b) {
        return std::string(fn) + "(" + format_double(a) + ", " + format_double(b) + ")";
    };
    return std::visit(Overloaded{
                          [&](const UniformDist& d) { return call("uniform", d.lower, d.upper); },
                          [&](const BetaDist& d) { return call("beta", d.a, d.b); },
                          [&](const LogNormalDist& d) { return call("lognormal", d.mu, d.sigma); },
                          [&](const NormalDist& d) { return call("normal", d.mean, d.sd); },
                      },
                      family_);
}

Prior::Prior(std::vector<std::string> names, std::vector<Marginal> marginals)
    : names_(ParamVector::make_names(std::move(names))), marginals_(std::move(marginals)) {
    if (names_->size() != marginals_.size())
        throw ValidationError("prior has " + std::to_string(names_->size()) + " names but " +
                              std::to_string(marginals_.size()) + " marginals");
    if (marginals_.empty()) throw ValidationError("prior must have at least one parameter");
}

ParamVector Prior::sample(Stream& rng) const {
    std::vector<double> values;
    values.reserve(marginals_.size());
    for (const auto& m : marginals_) values.push_back(m.sample(rng));
    return ParamVector(names_, std::move(values));
}

double Prior::logpdf(const ParamVector& theta) const {
    if (theta.size() != marginals_.size())
        throw ValidationError("parameter dimension " + std::to_string(theta.size()) +
                              " does not match prior dimension " + std::to_string(marginals_.size()));
    if (theta.shared_names() != names_ && theta.names() != *names_)
        throw ValidationError("parameter names do not match the prior");
    double total = 0.0;
    for (std::size_t i = 0; i < marginals_.size(); ++i) {
        total += marginals_[i].logpdf(theta[i]);
        if (total == kNegInf) return kNegInf;
    }
    return total;
}

}  // namespace lfi
