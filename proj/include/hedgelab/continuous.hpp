#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace hedgelab {

struct StartOutsideInterval : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct GridMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InsufficientSamples : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Brownian block: S follows the Brownian motion stopped when |W| first
/// hits a (on A~ = {S_sigma = 1} u {X = 1}) or b (off A~), where sigma is
/// the first hit of level one and X is revealed at sigma.
struct ContinuousBlockParams {
    double epsilon = 0.5;  // (0, 1/2]
    double M = 2.0;        // > 0
    double a = 2.0;        // [2, 3]
    double b = 3.0;        // [2, 3], != a

    void validate() const;
};

/// Probability that a driftless martingale path from `start` hits +level
/// before -level: (level + start) / (2 level).
double hitting_prob(double start, double level);

struct OutcomeSample {
    int s_sigma = 1;  // +-1
    int x = 0;
    bool in_a_tilde = false;
    double s_T = 0;
    double f = 0;  // M x 1{s_sigma = -1}, in {0, M}

    // Category index (s_sigma, x, sign of s_T) in {0..7}, matching the
    // atom order of the discrete block.
    int category() const {
        return ((s_sigma > 0 ? 0 : 1) << 2) | (x << 1) | (s_T > 0 ? 0 : 1);
    }
};

/// Draws (S_sigma, X, S_T) from the exact joint law.
OutcomeSample sample_outcome(const ContinuousBlockParams& params, std::mt19937_64& rng);

/// Exact probabilities of the eight outcome categories; identical to the
/// discrete block's atom probabilities.
std::vector<double> category_probs(const ContinuousBlockParams& params);

/// Scaled symmetric random walk witnessing the stopping-time structure.
/// On-grid levels make the hitting probabilities exactly the continuous
/// ones (gambler's ruin), so the terminal law is unbiased.
struct PathSample {
    double grid_step = 0;          // time step; spatial step = sqrt(grid_step)
    std::vector<double> path;      // walk positions from 0 through T
    int sigma_index = -1;
    int t_index = -1;
    OutcomeSample outcome;
};

PathSample simulate_path(const ContinuousBlockParams& params, double grid_step,
                         std::mt19937_64& rng);

/// Default time step putting 1, a and b on the spatial grid.
double default_grid_step(const ContinuousBlockParams& params);

/// Position c_before held on [0, sigma), c_after on [sigma, T]. The gain is
/// u = c_before S_sigma + c_after (S_T - S_sigma).
struct TestStrategy {
    double c_before = 0;
    double c_after = 0;
};

/// Deterministic per-stream sums; streams are merged in fixed order, so
/// serial and parallel accumulation give identical results.
struct OutcomeTally {
    long long n = 0;
    std::vector<long long> category_count = std::vector<long long>(8, 0);
    double sum_f = 0, sum_f2 = 0;
    // Per test strategy.
    std::vector<double> sum_fu, sum_fu2, sum_abs_u, sum_incr, sum_incr2;

    void merge(const OutcomeTally& o);
};

inline constexpr int kMcStreams = 64;

OutcomeTally accumulate_outcomes_serial(const ContinuousBlockParams& params,
                                        const std::vector<TestStrategy>& strategies,
                                        long long n_samples, std::uint64_t seed);
OutcomeTally accumulate_outcomes_parallel(const ContinuousBlockParams& params,
                                          const std::vector<TestStrategy>& strategies,
                                          long long n_samples, std::uint64_t seed);

std::vector<long long> path_terminal_counts_serial(const ContinuousBlockParams& params,
                                                   double grid_step, long long n_paths,
                                                   std::uint64_t seed);
std::vector<long long> path_terminal_counts_parallel(const ContinuousBlockParams& params,
                                                     double grid_step, long long n_paths,
                                                     std::uint64_t seed);

struct McCheck {
    std::string name;
    double estimate = 0;
    double target = 0;
    double tolerance = 0;  // 4 standard errors (or a critical value)
    bool pass = false;
};

struct McReport {
    long long n_samples = 0;
    std::uint64_t seed = 0;
    std::vector<McCheck> checks;
    bool pass = true;

    void add(McCheck check) {
        pass = pass && check.pass;
        checks.push_back(std::move(check));
    }
};

/// Monte Carlo verification of the continuous-block identities: moments of
/// f, the hitting-law conditionals, E[X | S_T = +-a], a chi-squared fit of
/// the joint (S_sigma, X, S_T) law, the correlation bound E[fu] <= eps M
/// ||u||_1 for each test strategy, and the martingale spot check on the
/// post-sigma gain.
McReport mc_verify(const ContinuousBlockParams& params, long long n_samples, std::uint64_t seed,
                   const std::vector<TestStrategy>& strategies);

/// Upper-tail probability of the chi-squared distribution.
double chi_squared_sf(double x, int dof);

}  // namespace hedgelab
