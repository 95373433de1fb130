#include <cmath>
#include <functional>
#include <vector>

#include "doctest.h"
#include "lfi/core/error.hpp"
#include "lfi/oracle/oracle_models.hpp"
#include "lfi/smc/smc_abc.hpp"
#include "oracles.hpp"

using namespace lfi;
using namespace lfi::oracle;

namespace {

struct Moments {
    double mean;
    double sd;
};

Moments moments(const std::vector<double>& x) {
    double m = 0.0;
    for (double v : x) m += v;
    m /= static_cast<double>(x.size());
    double s = 0.0;
    for (double v : x) s += (v - m) * (v - m);
    return {m, std::sqrt(s / static_cast<double>(x.size() - 1))};
}

std::vector<double> thetas(const smc::Population& pop) {
    std::vector<double> out;
    for (const auto& p : pop.particles) out.push_back(p.theta[0]);
    return out;
}

// Posterior moments of theta under prior x likelihood by quadrature.
Moments quadrature(const std::function<double(double)>& unnormalised, double lo, double hi) {
    const std::size_t n = 200000;
    const double z = testing::simpson(unnormalised, lo, hi, n);
    const double m = testing::simpson([&](double t) { return t * unnormalised(t); }, lo, hi, n) / z;
    const double v = testing::simpson([&](double t) { return (t - m) * (t - m) * unnormalised(t); }, lo, hi, n) / z;
    return {m, std::sqrt(v)};
}

}  // namespace

TEST_CASE("gaussian_simulate") {
    Stream rng = derive_stream(1, {});
    const GaussianMeanModel sharp{1e-9, 10, 0.0, 1.0};
    CHECK(std::abs(gaussian_simulate(0.7, sharp, rng) - 0.7) < 1e-6);

    const GaussianMeanModel big{1.0, 10000, 0.0, 1.0};
    CHECK(std::abs(gaussian_simulate(0.0, big, rng)) < 0.04);

    Stream a = derive_stream(9, {1});
    Stream b = derive_stream(9, {1});
    const GaussianMeanModel m{1.0, 10, 0.0, 1.0};
    CHECK(gaussian_simulate(0.3, m, a) == gaussian_simulate(0.3, m, b));

    CHECK_THROWS_AS(GaussianMeanModel({0.0, 10, 0.0, 1.0}).validate(), ValidationError);
    CHECK_THROWS_AS(GaussianMeanModel({1.0, 10, 0.0, -1.0}).validate(), ValidationError);
}

TEST_CASE("gaussian exact posterior") {
    const GaussianMeanModel m{1.0, 10, 0.0, 1.0};
    const auto post = gaussian_exact_posterior(m, 1.0);
    CHECK(post.mean == doctest::Approx(10.0 / 11.0).epsilon(1e-14));
    CHECK(post.sd * post.sd == doctest::Approx(1.0 / 11.0).epsilon(1e-14));

    // Against quadrature of prior x likelihood of the sufficient statistic.
    const auto q = quadrature(
        [](double t) { return std::exp(-0.5 * t * t) * std::exp(-0.5 * 10.0 * (1.0 - t) * (1.0 - t)); }, -8.0, 8.0);
    CHECK(post.mean == doctest::Approx(q.mean).epsilon(1e-9));
    CHECK(post.sd == doctest::Approx(q.sd).epsilon(1e-9));

    const auto prior_only = gaussian_exact_posterior({1.0, 0, 0.3, 2.0}, 5.0);
    CHECK(prior_only.mean == 0.3);
    CHECK(prior_only.sd == 2.0);

    const auto flat = gaussian_exact_posterior({2.0, 8, 0.0, 1e6}, 1.5);
    CHECK(flat.mean == doctest::Approx(1.5).epsilon(1e-9));
    CHECK(flat.sd * flat.sd == doctest::Approx(4.0 / 8.0).epsilon(1e-9));
}

TEST_CASE("binomial exact posterior") {
    const BinomialModel m{10, 1.0, 1.0};
    const auto post = binomial_exact_posterior(m, 5);
    CHECK(post.a == 6.0);
    CHECK(post.b == 6.0);
    CHECK(post.mean() == 0.5);

    const auto zero = binomial_exact_posterior({20, 2.0, 3.0}, 0);
    CHECK(zero.a == 2.0);
    CHECK(zero.b == 23.0);

    CHECK_THROWS_AS(binomial_exact_posterior(m, 11), ValidationError);
    CHECK_THROWS_AS(binomial_exact_posterior(m, -1), ValidationError);
}

TEST_CASE("binomial posterior moments match quadrature") {
    Stream rng = derive_stream(4, {});
    for (int trial = 0; trial < 20; ++trial) {
        const double a = 0.5 + 5.0 * rng.uniform();
        const double b = 0.5 + 5.0 * rng.uniform();
        const int n = 1 + static_cast<int>(rng.uniform() * 50);
        const int y = static_cast<int>(rng.uniform() * (n + 1));
        CAPTURE(a);
        CAPTURE(b);
        CAPTURE(n);
        CAPTURE(y);
        const auto post = binomial_exact_posterior({n, a, b}, y);
        // t = u^k near 0 and 1 - u^k near 1 smooth the endpoint singularities.
        const double k = 4.0;
        auto f = [&](double t) { return std::pow(t, a - 1 + y) * std::pow(1 - t, b - 1 + n - y); };
        auto in_u = [&](const std::function<double(double)>& g) {
            auto left = [&](double u) { return g(std::pow(u, k)) * k * std::pow(u, k - 1); };
            auto right = [&](double u) { return g(1.0 - std::pow(u, k)) * k * std::pow(u, k - 1); };
            const double cut = std::pow(0.5, 1.0 / k);  // t = 1/2
            return testing::simpson(left, 0.0, cut, 400000) + testing::simpson(right, 0.0, cut, 400000);
        };
        const double z = in_u(f);
        const double m1 = in_u([&](double t) { return t * f(t); }) / z;
        const double m2 = in_u([&](double t) { return t * t * f(t); }) / z;
        CHECK(post.mean() == doctest::Approx(m1).epsilon(1e-6));
        CHECK(post.variance() == doctest::Approx(m2 - m1 * m1).epsilon(1e-6));
    }
}

TEST_CASE("binomial_simulate") {
    Stream rng = derive_stream(5, {});
    const BinomialModel m{50, 1.0, 1.0};
    double sum = 0.0;
    for (int i = 0; i < 20000; ++i) {
        const double y = binomial_simulate(0.3, m, rng);
        CHECK(y >= 0.0);
        CHECK(y <= 1.0);
        CHECK(std::abs(y * 50 - std::round(y * 50)) < 1e-9);
        sum += y;
    }
    CHECK(std::abs(sum / 20000 - 0.3) < 3.0 * std::sqrt(0.3 * 0.7 / 50 / 20000));
    CHECK_THROWS_AS(binomial_simulate(1.2, m, rng), ModelFailure);
}

namespace {

// Runs SMC to epsilon = level x (sd of prior-predictive distances) for three
// levels and checks that the errors against the exact posterior shrink.
void check_convergence(const Model& model, const Prior& prior, double observed, Moments exact) {
    const smc::Problem problem{model, prior, {observed}};
    Stream rng = derive_stream(1, {});
    std::vector<double> d;
    for (int i = 0; i < 10000; ++i) d.push_back(problem.discrepancy(model.simulate(prior.sample(rng), rng)));
    const double spread = moments(d).sd;

    std::vector<double> mean_err, sd_err;
    for (double level : {0.5, 0.2, 0.05}) {
        smc::SmcConfig c;
        c.n_particles = 1000;
        c.target_epsilon = level * spread;
        c.max_simulations = 1000000;
        const auto r = smc::run(problem, c, StreamKey(77));
        CHECK(r.stop_reason == smc::StopReason::target_epsilon);
        const auto m = moments(thetas(r.population));
        mean_err.push_back(std::abs(m.mean - exact.mean));
        sd_err.push_back(std::abs(m.sd - exact.sd) / exact.sd);
        MESSAGE(model.name() << " level " << level << " eps " << r.population.epsilon << " mean " << m.mean
                             << " sd " << m.sd);
    }
    // A mean error already below Monte Carlo resolution cannot shrink further.
    const double resolution = 2.0 * exact.sd / std::sqrt(1000.0);
    CHECK((mean_err[2] < mean_err[0] || mean_err[2] < resolution));
    CHECK(sd_err[2] < sd_err[0]);
    CHECK(sd_err[1] < sd_err[0]);
}

}  // namespace

TEST_CASE("SMC error shrinks as the tolerance tightens") {
    const GaussianMeanModel g{1.0, 10, 0.0, 1.0};
    const auto gp = gaussian_exact_posterior(g, 1.0);
    check_convergence(GaussianMean(g), Prior({"theta"}, {Marginal::normal(0.0, 1.0)}), 1.0, {gp.mean, gp.sd});

    const BinomialModel b{100, 1.0, 1.0};
    const auto bp = binomial_exact_posterior(b, 30);
    check_convergence(Binomial(b), Prior({"theta"}, {Marginal::beta(1.0, 1.0)}), 0.3,
                      {bp.mean(), std::sqrt(bp.variance())});
}

TEST_CASE("SMC and rejection ABC agree at the same tolerance") {
    const GaussianMean model({1.0, 10, 0.0, 1.0});
    const Prior prior({"theta"}, {Marginal::normal(0.0, 1.0)});
    const smc::Problem problem{model, prior, {1.0}};
    smc::SmcConfig c;
    c.n_particles = 1000;
    c.target_epsilon = 0.05;
    c.max_simulations = 1000000;
    const auto r = smc::run(problem, c, StreamKey(5));
    const double eps = r.population.epsilon;

    std::vector<double> reference;
    Stream rng = derive_stream(55, {});
    while (reference.size() < 1000) {
        const auto theta = prior.sample(rng);
        if (problem.discrepancy(model.simulate(theta, rng)) <= eps) reference.push_back(theta[0]);
    }
    const auto ks = testing::ks_two_sample(thetas(r.population), reference);
    CAPTURE(ks.statistic);
    CHECK(ks.p_value > 1e-3);
    const auto a = moments(thetas(r.population));
    const auto b = moments(reference);
    CHECK(std::abs(a.mean - b.mean) < 3.0 * std::sqrt((a.sd * a.sd + b.sd * b.sd) / 1000.0));
}
