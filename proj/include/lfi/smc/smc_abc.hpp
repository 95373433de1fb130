#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "lfi/core/rng.hpp"
#include "lfi/smc/population.hpp"

namespace lfi::smc {

struct SmcConfig {
    std::size_t n_particles = 1000;
    double alpha = 0.5;
    std::optional<double> target_epsilon;
    std::size_t max_simulations = 100000;
    double acceptance_floor = 0.01;
    double mcmc_tuning = 0.01;  // c: chance a stuck duplicate never moves
    std::size_t max_mcmc_steps = 500;
    // R_t for the first move, before any acceptance rate has been observed.
    double initial_acceptance = 0.5;
    // Also move the retained particles, not just the resampled duplicates.
    bool move_retained = false;
    // Random walk in logit/log space; false walks in the original space.
    bool unconstrained_proposals = true;
    std::size_t max_init_retries = 100;
    unsigned workers = 1;

    /// floor(alpha * N)
    std::size_t retained_count() const;
    /// One message per offending field, each starting with the field name.
    std::vector<std::string> problems() const;
    /// Throws ValidationError listing every problem.
    void validate() const;
};

enum class StopReason { target_epsilon, acceptance_floor, max_simulations, degenerate_population };

std::string_view to_string(StopReason reason);

struct TraceRecord {
    std::size_t iteration = 0;
    double epsilon = 0.0;
    std::size_t n_unique_particles = 0;
    double mcmc_acceptance_rate = 0.0;  // NaN for the initial population
    std::size_t mcmc_steps = 0;
    std::size_t cumulative_simulations = 0;
};

using RunTrace = std::vector<TraceRecord>;

struct InitResult {
    Population population;
    std::size_t simulations = 0;
};

/// Draws N prior particles, simulates each, and sets epsilon to the largest
/// distance. A ModelFailure at a prior draw is retried with a fresh draw;
/// the simulation count includes failed attempts.
InitResult initialize(const Problem& problem, const SmcConfig& config, const StreamKey& key);

struct ToleranceStep {
    double epsilon = 0.0;
    std::vector<Particle> retained;
};

/// The floor(alpha N) particles of lowest distance (ties broken by index)
/// and the largest distance among them. std::nullopt when that distance
/// would not be strictly below pop.epsilon.
std::optional<ToleranceStep> adapt_tolerance(const Population& pop, double alpha);

/// Population of size n: the retained particles in their original order,
/// then n - |retained| uniform draws with replacement from them.
Population resample(std::vector<Particle> retained, std::size_t n, double epsilon, Stream& rng);

/// Gaussian random-walk proposal.
class Proposal {
  public:
    /// `factor` is any square root F of the covariance (cov = F F^T).
    Proposal(Eigen::MatrixXd factor, bool unconstrained);

    /// 2.38^2 / d times the empirical covariance of the particles' (possibly
    /// transformed) parameters, summed in index order.
    static Proposal from_particles(std::span<const Particle> particles, const Prior& prior, bool unconstrained);
    /// Zero covariance: every proposal equals the current state.
    static Proposal identity(std::size_t dimension, bool unconstrained);

    const Eigen::MatrixXd& factor() const noexcept { return factor_; }
    bool unconstrained() const noexcept { return unconstrained_; }

  private:
    Eigen::MatrixXd factor_;
    bool unconstrained_;
};

struct MoveResult {
    std::size_t steps_attempted = 0;
    std::size_t accepted = 0;
    std::size_t simulations = 0;
    std::size_t failures = 0;

    double acceptance_rate() const;
};

/// `steps` Metropolis-Hastings updates of each particle in `moved`,
/// targeting prior x 1[distance <= epsilon]. Each slot i draws from
/// key.child(i), so results do not depend on the worker count.
MoveResult mcmc_move(Population& pop, std::span<const std::size_t> moved, double epsilon, const Problem& problem,
                     std::size_t steps, const Proposal& proposal, const StreamKey& key, unsigned workers);

/// ceil(log c / log(1 - p_acc)) clamped to [1, r_max]; r_max when p_acc == 0.
std::size_t choose_mcmc_steps(double p_acc_previous, double c, std::size_t r_max);

/// Per-iteration view handed to an observer (diagnostics, invariant checks).
struct IterationView {
    const Population& population;
    double previous_epsilon;
    std::size_t retained;
    const TraceRecord& record;
};

using IterationObserver = std::function<void(const IterationView&)>;

struct RunResult {
    Population population;
    RunTrace trace;
    StopReason stop_reason = StopReason::degenerate_population;
    std::size_t simulations = 0;
};

/// Adaptive replenishment SMC-ABC. Iterates tolerance adaptation,
/// resampling and MCMC moves until a stopping rule fires.
RunResult run(const Problem& problem, const SmcConfig& config, const StreamKey& key,
              const IterationObserver& observer = {});

}  // namespace lfi::smc
