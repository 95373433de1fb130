#pragma once

#include <string_view>
#include <vector>

#include "lfi/core/model.hpp"

namespace lfi::oracle {

/// y_1..y_n ~ Normal(theta, sigma^2), theta ~ Normal(prior_mean, prior_sd^2).
/// Summary: the sample mean, which is sufficient.
struct GaussianMeanModel {
    double sigma = 1.0;
    int n_obs = 10;
    double prior_mean = 0.0;
    double prior_sd = 1.0;

    void validate() const;
};

struct NormalPosterior {
    double mean;
    double sd;
};

/// Sample mean of n_obs Normal(theta, sigma^2) draws.
double gaussian_simulate(double theta, const GaussianMeanModel& model, Stream& rng);

/// Conjugate posterior given the observed mean. n_obs == 0 returns the prior.
NormalPosterior gaussian_exact_posterior(const GaussianMeanModel& model, double y_bar);

/// y ~ Binomial(n_trials, theta), theta ~ Beta(prior_a, prior_b).
/// Summary: y / n_trials.
struct BinomialModel {
    int n_trials = 20;
    double prior_a = 1.0;
    double prior_b = 1.0;

    void validate() const;
};

struct BetaPosterior {
    double a;
    double b;

    double mean() const { return a / (a + b); }
    double variance() const { return a * b / ((a + b) * (a + b) * (a + b + 1.0)); }
};

/// Observed proportion y / n_trials for one Binomial draw.
double binomial_simulate(double theta, const BinomialModel& model, Stream& rng);

/// Beta(a + y, b + n - y), with y = n * proportion (rounded).
BetaPosterior binomial_exact_posterior(const BinomialModel& model, int successes);

/// Model adapters over a one-dimensional parameter named by the prior.
class GaussianMean final : public Model {
  public:
    explicit GaussianMean(GaussianMeanModel spec);
    std::string_view name() const override { return "gaussian_mean"; }
    std::vector<double> simulate(const ParamVector& theta, Stream& rng) const override;
    const GaussianMeanModel& spec() const noexcept { return spec_; }

  private:
    GaussianMeanModel spec_;
};

class Binomial final : public Model {
  public:
    explicit Binomial(BinomialModel spec);
    std::string_view name() const override { return "binomial"; }
    std::vector<double> simulate(const ParamVector& theta, Stream& rng) const override;
    const BinomialModel& spec() const noexcept { return spec_; }

  private:
    BinomialModel spec_;
};

}  // namespace lfi::oracle
