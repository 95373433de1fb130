#include "lfi/smc/smc_abc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <boost/random/uniform_int_distribution.hpp>

#include "lfi/core/error.hpp"
#include "lfi/core/format.hpp"
#include "lfi/core/parallel.hpp"

namespace lfi::smc {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Labels under the run key.
constexpr std::uint64_t kInitLabel = 0;
constexpr std::uint64_t kResampleLabel = 1;
constexpr std::uint64_t kMoveLabel = 2;

// Simulates and checks the summary; NaN summaries count as model failure.
std::vector<double> simulate_checked(const Problem& problem, const ParamVector& theta, Stream& rng) {
    auto summary = problem.model.simulate(theta, rng);
    if (summary.size() != problem.observed.size())
        throw ValidationError("model '" + std::string(problem.model.name()) + "' produced " +
                              std::to_string(summary.size()) + " summary values, observed has " +
                              std::to_string(problem.observed.size()));
    for (double v : summary)
        if (!std::isfinite(v)) throw ModelFailure("non-finite summary value");
    return summary;
}

}  // namespace

std::size_t count_unique(const Population& pop) {
    std::vector<std::span<const double>> values;
    values.reserve(pop.size());
    for (const auto& p : pop.particles) values.push_back(p.theta.values());
    auto less = [](std::span<const double> a, std::span<const double> b) {
        return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
    };
    std::sort(values.begin(), values.end(), less);
    auto equal = [](std::span<const double> a, std::span<const double> b) {
        return std::equal(a.begin(), a.end(), b.begin(), b.end());
    };
    return static_cast<std::size_t>(std::unique(values.begin(), values.end(), equal) - values.begin());
}

std::size_t SmcConfig::retained_count() const {
    return static_cast<std::size_t>(std::floor(alpha * static_cast<double>(n_particles)));
}

std::vector<std::string> SmcConfig::problems() const {
    std::vector<std::string> out;
    if (n_particles < 10) out.emplace_back("n_particles must be >= 10");
    if (!(alpha > 0.0 && alpha < 1.0)) out.emplace_back("alpha must lie in (0, 1)");
    if (retained_count() < 1) out.emplace_back("alpha: floor(alpha * n_particles) must be >= 1");
    if (target_epsilon && !(*target_epsilon >= 0.0)) out.emplace_back("target_epsilon must be >= 0");
    if (max_simulations < n_particles) out.emplace_back("max_simulations must be >= n_particles");
    if (!(acceptance_floor > 0.0 && acceptance_floor < 1.0))
        out.emplace_back("acceptance_floor must lie in (0, 1)");
    if (!(mcmc_tuning > 0.0 && mcmc_tuning < 1.0)) out.emplace_back("mcmc_tuning must lie in (0, 1)");
    if (max_mcmc_steps < 1) out.emplace_back("max_mcmc_steps must be >= 1");
    if (!(initial_acceptance >= 0.0 && initial_acceptance <= 1.0))
        out.emplace_back("initial_acceptance must lie in [0, 1]");
    if (workers < 1) out.emplace_back("workers must be >= 1");
    return out;
}

void SmcConfig::validate() const {
    const auto found = problems();
    if (found.empty()) return;
    std::string msg = found.front();
    for (std::size_t i = 1; i < found.size(); ++i) msg += "; " + found[i];
    throw ValidationError(msg);
}

std::string_view to_string(StopReason reason) {
    switch (reason) {
        case StopReason::target_epsilon: return "target_epsilon";
        case StopReason::acceptance_floor: return "acceptance_floor";
        case StopReason::max_simulations: return "max_simulations";
        case StopReason::degenerate_population: return "degenerate_population";
    }
    return "unknown";
}

InitResult initialize(const Problem& problem, const SmcConfig& config, const StreamKey& key) {
    const std::size_t n = config.n_particles;
    std::vector<Particle> particles(n);
    std::vector<std::size_t> attempts(n, 0);

    parallel_for(n, config.workers, [&](std::size_t i) {
        for (std::size_t attempt = 0; attempt <= config.max_init_retries; ++attempt) {
            Stream rng = key.child({i, attempt}).open();
            ParamVector theta = problem.prior.sample(rng);
            ++attempts[i];
            try {
                auto summary = simulate_checked(problem, theta, rng);
                const double d = problem.discrepancy(summary);
                particles[i] = Particle{std::move(theta), std::move(summary), d};
                return;
            } catch (const ModelFailure&) {
            }
        }
        throw ModelFailure("initialization: particle " + std::to_string(i) + " failed " +
                           std::to_string(config.max_init_retries + 1) + " consecutive prior draws");
    });

    InitResult out;
    out.simulations = std::accumulate(attempts.begin(), attempts.end(), std::size_t{0});
    double eps = 0.0;
    for (const auto& p : particles) eps = std::max(eps, p.distance);
    out.population = Population{std::move(particles), eps, 0};
    return out;
}

std::optional<ToleranceStep> adapt_tolerance(const Population& pop, double alpha) {
    const std::size_t n = pop.size();
    const auto keep = static_cast<std::size_t>(std::floor(alpha * static_cast<double>(n)));
    if (keep < 1 || keep > n) throw ValidationError("alpha leaves no particles to retain");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return pop.particles[a].distance < pop.particles[b].distance;
    });
    const double next = pop.particles[order[keep - 1]].distance;
    if (!(next < pop.epsilon)) return std::nullopt;

    order.resize(keep);
    std::sort(order.begin(), order.end());
    ToleranceStep step;
    step.epsilon = next;
    step.retained.reserve(keep);
    for (std::size_t i : order) step.retained.push_back(pop.particles[i]);
    return step;
}

Population resample(std::vector<Particle> retained, std::size_t n, double epsilon, Stream& rng) {
    if (retained.empty()) throw ValidationError("resample: retained set is empty");
    const std::size_t keep = retained.size();
    Population pop;
    pop.epsilon = epsilon;
    pop.particles = std::move(retained);
    pop.particles.reserve(n);
    boost::random::uniform_int_distribution<std::size_t> pick(0, keep - 1);
    while (pop.particles.size() < n) pop.particles.push_back(pop.particles[pick(rng)]);
    return pop;
}

Proposal::Proposal(Eigen::MatrixXd factor, bool unconstrained)
    : factor_(std::move(factor)), unconstrained_(unconstrained) {}

Proposal Proposal::identity(std::size_t dimension, bool unconstrained) {
    const auto d = static_cast<Eigen::Index>(dimension);
    return Proposal(Eigen::MatrixXd::Zero(d, d), unconstrained);
}

Proposal Proposal::from_particles(std::span<const Particle> particles, const Prior& prior, bool unconstrained) {
    const std::size_t dim = prior.dimension();
    const auto d = static_cast<Eigen::Index>(dim);
    std::vector<Eigen::VectorXd> rows;
    rows.reserve(particles.size());
    for (const auto& p : particles) {
        Eigen::VectorXd z(d);
        bool finite = true;
        for (std::size_t j = 0; j < dim; ++j) {
            const double v = unconstrained ? prior.marginals()[j].to_unconstrained(p.theta[j]) : p.theta[j];
            finite = finite && std::isfinite(v);
            z[static_cast<Eigen::Index>(j)] = v;
        }
        if (finite) rows.push_back(std::move(z));
    }
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(d, d);
    if (rows.size() >= 2) {
        Eigen::VectorXd mean = Eigen::VectorXd::Zero(d);
        for (const auto& z : rows) mean += z;
        mean /= static_cast<double>(rows.size());
        for (const auto& z : rows) {
            const Eigen::VectorXd c = z - mean;
            cov.noalias() += c * c.transpose();
        }
        cov /= static_cast<double>(rows.size() - 1);
    }
    cov *= 2.38 * 2.38 / static_cast<double>(dim);

    // Symmetric square root; tolerates singular covariances.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
    const Eigen::VectorXd lambda = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    Eigen::MatrixXd factor = eig.eigenvectors() * lambda.asDiagonal();
    return Proposal(std::move(factor), unconstrained);
}

double MoveResult::acceptance_rate() const {
    return steps_attempted == 0 ? 0.0 : static_cast<double>(accepted) / static_cast<double>(steps_attempted);
}

MoveResult mcmc_move(Population& pop, std::span<const std::size_t> moved, double epsilon, const Problem& problem,
                     std::size_t steps, const Proposal& proposal, const StreamKey& key, unsigned workers) {
    if (steps < 1) throw ValidationError("mcmc_move: steps must be >= 1");
    const std::size_t dim = problem.prior.dimension();
    const auto& marginals = problem.prior.marginals();
    const Eigen::MatrixXd& factor = proposal.factor();
    if (static_cast<std::size_t>(factor.rows()) != dim || static_cast<std::size_t>(factor.cols()) != dim)
        throw ValidationError("mcmc_move: proposal dimension does not match the prior");
    const bool unconstrained = proposal.unconstrained();

    struct SlotStats {
        std::size_t accepted = 0, simulations = 0, failures = 0;
    };
    std::vector<SlotStats> stats(moved.size());

    parallel_for(moved.size(), workers, [&](std::size_t k) {
        const std::size_t slot = moved[k];
        Particle& particle = pop.particles[slot];
        Stream rng = key.child(slot).open();
        SlotStats& st = stats[k];

        Eigen::VectorXd xi(static_cast<Eigen::Index>(dim));
        std::vector<double> next(dim);
        double log_prior = problem.prior.logpdf(particle.theta);

        for (std::size_t s = 0; s < steps; ++s) {
            for (std::size_t j = 0; j < dim; ++j) xi[static_cast<Eigen::Index>(j)] = rng.normal();
            const Eigen::VectorXd delta = factor * xi;
            const double u = rng.uniform();

            double log_jac_ratio = 0.0;
            bool valid = true;
            for (std::size_t j = 0; j < dim; ++j) {
                const double dj = delta[static_cast<Eigen::Index>(j)];
                const double x = particle.theta[j];
                if (dj == 0.0) {
                    next[j] = x;
                    continue;
                }
                if (!unconstrained) {
                    next[j] = x + dj;
                    continue;
                }
                const double z = marginals[j].to_unconstrained(x);
                const double z_new = z + dj;
                next[j] = marginals[j].from_unconstrained(z_new);
                // Proposals that saturate the transform have no representable preimage.
                if (!std::isfinite(marginals[j].to_unconstrained(next[j]))) valid = false;
                log_jac_ratio += marginals[j].log_jacobian(z_new) - marginals[j].log_jacobian(z);
            }
            if (!valid) continue;

            bool finite = true;
            for (double v : next) finite = finite && std::isfinite(v);
            if (!finite) continue;
            ParamVector candidate = particle.theta.with_values(next);
            const double log_prior_new = problem.prior.logpdf(candidate);
            if (log_prior_new == kNegInf) continue;  // zero prior density: no simulation

            ++st.simulations;
            std::vector<double> summary;
            try {
                summary = simulate_checked(problem, candidate, rng);
            } catch (const ModelFailure&) {
                ++st.failures;
                continue;
            }
            const double dist = problem.discrepancy(summary);
            const double log_ratio = log_prior_new - log_prior + log_jac_ratio;
            if (dist <= epsilon && std::log(u) < log_ratio) {
                particle.theta = std::move(candidate);
                particle.summary = std::move(summary);
                particle.distance = dist;
                log_prior = log_prior_new;
                ++st.accepted;
            }
        }
    });

    MoveResult out;
    out.steps_attempted = steps * moved.size();
    for (const auto& st : stats) {
        out.accepted += st.accepted;
        out.simulations += st.simulations;
        out.failures += st.failures;
    }
    return out;
}

std::size_t choose_mcmc_steps(double p_acc_previous, double c, std::size_t r_max) {
    if (!(p_acc_previous >= 0.0 && p_acc_previous <= 1.0))
        throw ValidationError("choose_mcmc_steps: acceptance rate must lie in [0, 1]");
    if (!(c > 0.0 && c < 1.0)) throw ValidationError("choose_mcmc_steps: c must lie in (0, 1)");
    if (p_acc_previous == 0.0) return r_max;
    if (p_acc_previous == 1.0) return 1;
    // The 1e-9 slack keeps exact integer ratios from rounding up.
    const double r = std::ceil(std::log(c) / std::log1p(-p_acc_previous) - 1e-9);
    if (!(r < static_cast<double>(r_max))) return r_max;
    return std::max<std::size_t>(1, static_cast<std::size_t>(r));
}

RunResult run(const Problem& problem, const SmcConfig& config, const StreamKey& key,
              const IterationObserver& observer) {
    config.validate();
    if (problem.observed.empty()) throw ValidationError("observed summary is empty");
    for (double v : problem.observed)
        if (!std::isfinite(v)) throw ValidationError("observed summary contains a non-finite value");

    RunResult result;
    auto init = initialize(problem, config, key.child(kInitLabel));
    result.simulations = init.simulations;
    Population pop = std::move(init.population);

    auto emit = [&](double previous_epsilon, std::size_t retained, const TraceRecord& record) {
        result.trace.push_back(record);
        if (observer) observer(IterationView{pop, previous_epsilon, retained, result.trace.back()});
    };

    emit(std::numeric_limits<double>::infinity(), pop.size(),
         TraceRecord{0, pop.epsilon, count_unique(pop), std::numeric_limits<double>::quiet_NaN(), 0,
                     result.simulations});

    auto finish = [&](StopReason reason) {
        result.stop_reason = reason;
        result.population = std::move(pop);
        return std::move(result);
    };

    if (config.target_epsilon && pop.epsilon <= *config.target_epsilon) return finish(StopReason::target_epsilon);
    if (result.simulations >= config.max_simulations) return finish(StopReason::max_simulations);

    double previous_acceptance = config.initial_acceptance;
    for (std::size_t t = 1;; ++t) {
        const std::size_t n = config.n_particles;
        const std::size_t keep = config.retained_count();
        const std::size_t n_moved = config.move_retained ? n : n - keep;
        const std::size_t remaining = config.max_simulations - result.simulations;
        if (remaining < n_moved) return finish(StopReason::max_simulations);

        auto step = adapt_tolerance(pop, config.alpha);
        if (!step) return finish(StopReason::degenerate_population);

        std::size_t r_t = choose_mcmc_steps(previous_acceptance, config.mcmc_tuning, config.max_mcmc_steps);
        r_t = std::min(r_t, remaining / n_moved);

        const Proposal proposal = Proposal::from_particles(step->retained, problem.prior, config.unconstrained_proposals);
        const double previous_epsilon = pop.epsilon;
        Stream resample_rng = key.child({kResampleLabel, t}).open();
        pop = resample(std::move(step->retained), n, step->epsilon, resample_rng);
        pop.iteration = t;

        std::vector<std::size_t> moved(n_moved);
        std::iota(moved.begin(), moved.end(), n - n_moved);
        const MoveResult move =
            mcmc_move(pop, moved, pop.epsilon, problem, r_t, proposal, key.child({kMoveLabel, t}), config.workers);
        result.simulations += move.simulations;
        previous_acceptance = move.acceptance_rate();

        emit(previous_epsilon, keep,
             TraceRecord{t, pop.epsilon, count_unique(pop), previous_acceptance, r_t, result.simulations});

        if (config.target_epsilon && pop.epsilon <= *config.target_epsilon) return finish(StopReason::target_epsilon);
        if (previous_acceptance < config.acceptance_floor) return finish(StopReason::acceptance_floor);
        if (result.simulations >= config.max_simulations) return finish(StopReason::max_simulations);
    }
}

}  // namespace lfi::smc
