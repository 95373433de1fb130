#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "lfi/core/distance.hpp"
#include "lfi/core/error.hpp"
#include "lfi/core/format.hpp"
#include "lfi/core/parallel.hpp"
#include "lfi/core/param_vector.hpp"
#include "lfi/core/prior.hpp"
#include "lfi/core/rng.hpp"
#include "lfi/core/timeseries.hpp"
#include "oracles.hpp"

using namespace lfi;

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::vector<double> draws(const Marginal& m, std::size_t n, std::uint64_t seed) {
    Stream rng = derive_stream(seed, {0});
    std::vector<double> out(n);
    for (double& x : out) x = m.sample(rng);
    return out;
}

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double variance_of(const std::vector<double>& v) {
    const double m = mean_of(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return s / static_cast<double>(v.size() - 1);
}

double median_of(std::vector<double> v) {
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2), v.end());
    return v[v.size() / 2];
}

}  // namespace

TEST_CASE("param vector rejects duplicate names, length mismatch and non-finite values") {
    CHECK_THROWS_AS(ParamVector({"a", "a"}, {1.0, 2.0}), ValidationError);
    CHECK_THROWS_AS(ParamVector({"a", "b"}, {1.0}), ValidationError);
    CHECK_THROWS_AS(ParamVector({"a"}, {std::nan("")}), ValidationError);
    CHECK_THROWS_AS(ParamVector({"a"}, {INFINITY}), ValidationError);
    const ParamVector theta({"p0", "g_age"}, {0.2, 114.0});
    CHECK(theta.at("g_age") == 114.0);
    CHECK_THROWS_AS(theta.at("d_max"), ValidationError);
    CHECK(theta.with_values({0.3, 100.0}).names() == theta.names());
}

TEST_CASE("beta(1,1) draws are uniform on [0,1]") {
    const auto x = draws(Marginal::beta(1, 1), 100000, 1);
    CHECK(std::abs(mean_of(x) - 0.5) < 0.01);
    CHECK(*std::min_element(x.begin(), x.end()) >= 0.0);
    CHECK(*std::max_element(x.begin(), x.end()) <= 1.0);
}

TEST_CASE("invalid hyperparameters are rejected at construction") {
    CHECK_THROWS_AS(Marginal::lognormal(std::log(30.0), 0.0), ValidationError);
    CHECK_THROWS_AS(Marginal::lognormal(std::log(30.0), -1.0), ValidationError);
    CHECK_THROWS_AS(Marginal::beta(0.0, 1.0), ValidationError);
    CHECK_THROWS_AS(Marginal::beta(1.0, -2.0), ValidationError);
    CHECK_THROWS_AS(Marginal::uniform(1.0, 1.0), ValidationError);
    CHECK_THROWS_AS(Marginal::uniform(2.0, 1.0), ValidationError);
    CHECK_THROWS_AS(Marginal::normal(0.0, 0.0), ValidationError);
}

TEST_CASE("lognormal(log 30, 1) has median 30") {
    const auto x = draws(Marginal::lognormal(std::log(30.0), 1.0), 100000, 2);
    CHECK(std::abs(median_of(x) - 30.0) < 1.0);
}

TEST_CASE("empirical moments of 1e5 draws match the analytic moments within 3 standard errors") {
    const std::vector<Marginal> families{Marginal::beta(1, 1),       Marginal::beta(1, 1e4),
                                         Marginal::beta(2.5, 0.7),   Marginal::lognormal(std::log(30.0), 1.0),
                                         Marginal::lognormal(std::log(160.0), 1.0), Marginal::uniform(-2.0, 5.0),
                                         Marginal::normal(1.5, 0.3)};
    std::uint64_t seed = 10;
    for (const auto& m : families) {
        CAPTURE(m.describe());
        const std::size_t n = 100000;
        const auto x = draws(m, n, seed++);
        // Standard error of the mean is sd/sqrt(n); for the variance use the
        // sample fourth central moment.
        const double se_mean = std::sqrt(m.variance() / static_cast<double>(n));
        CHECK(std::abs(mean_of(x) - m.mean()) < 3.0 * se_mean);
        const double mu = mean_of(x);
        double m4 = 0.0;
        for (double v : x) m4 += std::pow(v - mu, 4);
        m4 /= static_cast<double>(n);
        const double se_var = std::sqrt((m4 - m.variance() * m.variance()) / static_cast<double>(n));
        CHECK(std::abs(variance_of(x) - m.variance()) < 3.0 * se_var);
    }
}

TEST_CASE("prior log density") {
    CHECK(Marginal::beta(1, 1).logpdf(0.3) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(Marginal::beta(1, 1).logpdf(1.5) == kNegInf);
    CHECK(Marginal::beta(1, 1).logpdf(-0.1) == kNegInf);
    CHECK(Marginal::lognormal(0, 1).logpdf(-1.0) == kNegInf);
    CHECK(Marginal::lognormal(0, 1).logpdf(0.0) == kNegInf);
    CHECK(Marginal::uniform(0, 2).logpdf(2.5) == kNegInf);

    // Beta(1, b) at the lower boundary: density b.
    const double at_zero = Marginal::beta(1, 1e4).logpdf(0.0);
    CHECK(at_zero == doctest::Approx(std::log(1e4)).epsilon(1e-12));
    CHECK(at_zero == doctest::Approx(std::log(testing::beta_density(0.0, 1, 1e4))).epsilon(1e-12));

    for (double x : {1e-6, 1e-4, 3e-4, 0.01}) {
        CAPTURE(x);
        CHECK(std::exp(Marginal::beta(1, 1e4).logpdf(x)) ==
              doctest::Approx(testing::beta_density(x, 1, 1e4)).epsilon(1e-9));
    }
    for (double x : {0.05, 0.3, 0.77}) {
        CHECK(std::exp(Marginal::beta(2.5, 0.7).logpdf(x)) ==
              doctest::Approx(testing::beta_density(x, 2.5, 0.7)).epsilon(1e-9));
    }
    // lognormal density integrates to one
    const Marginal ln = Marginal::lognormal(std::log(30.0), 1.0);
    const double mass = testing::simpson([&](double x) { return std::exp(ln.logpdf(x)); }, 1e-9, 3000.0, 200000);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("joint prior density is the sum of marginal log densities") {
    const Prior prior({"p0", "p_psc", "d_max", "g_age"},
                      {Marginal::beta(1, 1), Marginal::beta(1, 1e4), Marginal::lognormal(std::log(30.0), 1.0),
                       Marginal::lognormal(std::log(160.0), 1.0)});
    const ParamVector theta({"p0", "p_psc", "d_max", "g_age"}, {0.2, 1e-5, 31.0, 114.0});
    double expected = 0.0;
    for (std::size_t i = 0; i < 4; ++i) expected += prior.marginals()[i].logpdf(theta[i]);
    CHECK(prior.logpdf(theta) == doctest::Approx(expected).epsilon(1e-15));

    CHECK_THROWS_AS(prior.logpdf(ParamVector({"p0"}, {0.2})), ValidationError);
    CHECK_THROWS_AS(prior.logpdf(ParamVector({"a", "b", "c", "d"}, {0.2, 1e-5, 31.0, 114.0})), ValidationError);

    Stream rng = derive_stream(5, {1});
    for (int i = 0; i < 10000; ++i) CHECK(prior.logpdf(prior.sample(rng)) > kNegInf);
}

TEST_CASE("unconstrained transforms are inverse bijections") {
    for (const auto& m : {Marginal::beta(2, 3), Marginal::lognormal(1.0, 0.5), Marginal::uniform(-1, 4),
                          Marginal::normal(0, 2)}) {
        for (double z : {-3.0, -0.5, 0.0, 1.2, 4.0}) {
            CHECK(m.to_unconstrained(m.from_unconstrained(z)) == doctest::Approx(z).epsilon(1e-9));
            // log|dx/dz| against a central difference
            const double h = 1e-6;
            const double dx = (m.from_unconstrained(z + h) - m.from_unconstrained(z - h)) / (2 * h);
            CHECK(m.log_jacobian(z) == doctest::Approx(std::log(std::abs(dx))).epsilon(1e-5));
        }
    }
}

TEST_CASE("distance examples") {
    const std::vector<double> a{1, 2, 3};
    CHECK(euclidean_distance(a, a) == 0.0);
    CHECK(euclidean_distance(std::vector<double>{0, 0}, std::vector<double>{3, 4}) == 5.0);
    CHECK_THROWS_AS(euclidean_distance(std::vector<double>{0, 0}, std::vector<double>{1}), ValidationError);
    CHECK_THROWS_AS(Distance({1.0, -1.0}), ValidationError);

    const Distance weighted({4.0, 1.0});
    CHECK(weighted(std::vector<double>{1, 0}, std::vector<double>{0, 0}) == 2.0);
}

TEST_CASE("distance matches the elementwise formula and is a metric") {
    Stream rng = derive_stream(7, {2});
    const Distance dist;
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 1 + trial % 6;
        std::vector<double> x(n), y(n), z(n);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = rng.normal();
            y[i] = rng.normal();
            z[i] = rng.normal();
        }
        long double sum = 0;
        for (std::size_t i = 0; i < n; ++i) sum += (long double)(x[i] - y[i]) * (x[i] - y[i]);
        CHECK(dist(x, y) == doctest::Approx(static_cast<double>(std::sqrt(sum))).epsilon(1e-14));
        CHECK(dist(x, y) == dist(y, x));
        CHECK(dist(x, x) == 0.0);
        CHECK(dist(x, y) > 0.0);
        CHECK(dist(x, z) <= dist(x, y) + dist(y, z) + 1e-12);
    }
}

TEST_CASE("streams are reproducible and distinct per label path") {
    Stream a = derive_stream(42, {0});
    Stream b = derive_stream(42, {0});
    for (int i = 0; i < 100; ++i) CHECK(a() == b());

    Stream c = derive_stream(42, {0});
    Stream d = derive_stream(42, {1});
    int same = 0;
    for (int i = 0; i < 100; ++i) same += c() == d();
    CHECK(same == 0);

    // Golden values for (42, [3, 7]).
    Stream g = derive_stream(42, {3, 7});
    CHECK(g() == 0xf783a048b06668d8ULL);
    CHECK(g() == 0xb0ba0b3cf1363136ULL);
    CHECK(g() == 0xb63c1d969e47b5f2ULL);
    Stream gn = derive_stream(42, {3, 7});
    CHECK(gn.normal() == -0.86621773415301229);

    CHECK(StreamKey(42).child(3).child(7).open().state() == derive_stream(42, {3, 7}).state());
    CHECK(StreamKey(42).child({3, 7}).open().state() == derive_stream(42, {3, 7}).state());
}

TEST_CASE("disjoint label paths share no 100-draw prefix") {
    const std::vector<std::vector<std::uint64_t>> paths{{}, {0}, {1}, {0, 0}, {0, 1}, {1, 0}, {3, 7}, {7, 3}, {0, 0, 0}};
    std::vector<std::vector<std::uint64_t>> seqs;
    for (std::uint64_t seed : {0ULL, 1ULL, 42ULL}) {
        for (const auto& p : paths) {
            Stream s = derive_stream(seed, p);
            std::vector<std::uint64_t> v(100);
            for (auto& x : v) x = s();
            seqs.push_back(v);
        }
    }
    for (std::size_t i = 0; i < seqs.size(); ++i)
        for (std::size_t j = i + 1; j < seqs.size(); ++j) {
            // no shared window of 100 draws at any small offset
            for (std::size_t off = 0; off < 3; ++off)
                CHECK(!std::equal(seqs[i].begin() + static_cast<std::ptrdiff_t>(off), seqs[i].end(),
                                  seqs[j].begin()));
        }
}

TEST_CASE("uniform doubles lie in [0, 1)") {
    Stream s = derive_stream(3, {});
    for (int i = 0; i < 100000; ++i) {
        const double u = s.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("time series invariants and interpolation") {
    CHECK_THROWS_AS(TimeSeries({{0, 1}, {0, 2}}), ValidationError);
    CHECK_THROWS_AS(TimeSeries({{0, 1}, {1, -2}}), ValidationError);
    const TimeSeries ts({{0, 1}, {2, 3}, {4, 2}});
    const std::vector<double> grid{0, 1, 2, 3, 4};
    const auto v = interpolate_onto(ts, grid);
    CHECK(v == std::vector<double>{1, 2, 3, 2.5, 2});
    CHECK_THROWS_AS(interpolate_onto(ts, std::vector<double>{5}), ValidationError);
    CHECK(ts.volumes() == std::vector<double>{1, 3, 2});
}

TEST_CASE("double formatting round-trips") {
    Stream s = derive_stream(9, {});
    for (int i = 0; i < 10000; ++i) {
        const double x = (s.uniform() - 0.5) * std::pow(10.0, static_cast<int>(s.uniform() * 40) - 20);
        CHECK(std::stod(format_double(x)) == x);
    }
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(1e-5) == "1e-05");
}

TEST_CASE("parallel_for writes every slot and rethrows the lowest failing index") {
    for (unsigned workers : {1u, 3u, 8u}) {
        std::vector<int> out(1000, -1);
        parallel_for(out.size(), workers, [&](std::size_t i) { out[i] = static_cast<int>(i) * 2; });
        for (std::size_t i = 0; i < out.size(); ++i) CHECK(out[i] == static_cast<int>(i) * 2);

        try {
            parallel_for(100, workers, [&](std::size_t i) {
                if (i == 17 || i == 60) throw std::runtime_error("fail " + std::to_string(i));
            });
            FAIL("expected an exception");
        } catch (const std::runtime_error& e) {
            CHECK(std::string(e.what()) == "fail 17");
        }
    }
}
