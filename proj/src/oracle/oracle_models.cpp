#include "lfi/oracle/oracle_models.hpp"

#include <cmath>

#include <boost/random/binomial_distribution.hpp>

#include "lfi/core/error.hpp"

namespace lfi::oracle {

void GaussianMeanModel::validate() const {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ValidationError("sigma must be > 0");
    if (n_obs < 0) throw ValidationError("n_obs must be >= 0");
    if (!(prior_sd > 0.0) || !std::isfinite(prior_sd)) throw ValidationError("prior_sd must be > 0");
    if (!std::isfinite(prior_mean)) throw ValidationError("prior_mean must be finite");
}

double gaussian_simulate(double theta, const GaussianMeanModel& model, Stream& rng) {
    if (model.n_obs < 1) throw ValidationError("gaussian_simulate: n_obs must be >= 1");
    double sum = 0.0;
    for (int i = 0; i < model.n_obs; ++i) sum += theta + model.sigma * rng.normal();
    return sum / model.n_obs;
}

NormalPosterior gaussian_exact_posterior(const GaussianMeanModel& model, double y_bar) {
    model.validate();
    const double prior_precision = 1.0 / (model.prior_sd * model.prior_sd);
    const double data_precision = model.n_obs / (model.sigma * model.sigma);
    const double var = 1.0 / (prior_precision + data_precision);
    const double mean = var * (prior_precision * model.prior_mean + data_precision * y_bar);
    return {mean, std::sqrt(var)};
}

void BinomialModel::validate() const {
    if (n_trials < 1) throw ValidationError("n_trials must be >= 1");
    if (!(prior_a > 0.0) || !(prior_b > 0.0)) throw ValidationError("binomial prior requires a > 0 and b > 0");
}

double binomial_simulate(double theta, const BinomialModel& model, Stream& rng) {
    if (!(theta >= 0.0 && theta <= 1.0)) throw ModelFailure("binomial success probability outside [0, 1]");
    boost::random::binomial_distribution<int, double> dist(model.n_trials, theta);
    return static_cast<double>(dist(rng)) / model.n_trials;
}

BetaPosterior binomial_exact_posterior(const BinomialModel& model, int successes) {
    model.validate();
    if (successes < 0 || successes > model.n_trials) throw ValidationError("successes outside [0, n_trials]");
    return {model.prior_a + successes, model.prior_b + (model.n_trials - successes)};
}

GaussianMean::GaussianMean(GaussianMeanModel spec) : spec_(spec) {
    spec_.validate();
    if (spec_.n_obs < 1) throw ValidationError("n_obs must be >= 1 for simulation");
}

std::vector<double> GaussianMean::simulate(const ParamVector& theta, Stream& rng) const {
    if (theta.size() != 1) throw ValidationError("gaussian_mean expects a single parameter");
    return {gaussian_simulate(theta[0], spec_, rng)};
}

Binomial::Binomial(BinomialModel spec) : spec_(spec) { spec_.validate(); }

std::vector<double> Binomial::simulate(const ParamVector& theta, Stream& rng) const {
    if (theta.size() != 1) throw ValidationError("binomial expects a single parameter");
    return {binomial_simulate(theta[0], spec_, rng)};
}

}  // namespace lfi::oracle
