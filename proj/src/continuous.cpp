#include <hedgelab/continuous.hpp>

#include <cmath>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hedgelab {

void ContinuousBlockParams::validate() const {
    if (!(epsilon > 0 && epsilon <= 0.5))
        throw std::invalid_argument("epsilon must lie in (0, 1/2]");
    if (!(M > 0)) throw std::invalid_argument("M must be > 0");
    if (!(a >= 2 && a <= 3) || !(b >= 2 && b <= 3))
        throw std::invalid_argument("a and b must lie in [2, 3]");
    if (a == b) throw std::invalid_argument("a and b must be distinct");
}

double hitting_prob(double start, double level) {
    if (!(level > 0) || std::abs(start) >= level)
        throw StartOutsideInterval("start must lie strictly inside (-level, level)");
    return (level + start) / (2 * level);
}

namespace {

// Portable uniform in [0, 1): distributions in <random> are not pinned by
// the standard, so draw the 53 top bits directly.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::mt19937_64 stream_rng(std::uint64_t seed, int stream) {
    return std::mt19937_64(splitmix64(seed ^ (0x853c49e6748fea9bULL + stream)));
}

long steps_on_grid(double value, double spatial_step) {
    double q = value / spatial_step;
    long k = std::lround(q);
    if (std::abs(q - static_cast<double>(k)) > 1e-9 || k <= 0)
        throw GridMismatch("level is not an integer multiple of the spatial step");
    return k;
}

}  // namespace

OutcomeSample sample_outcome(const ContinuousBlockParams& params, std::mt19937_64& rng) {
    OutcomeSample out;
    out.s_sigma = uniform01(rng) < 0.5 ? 1 : -1;
    out.x = uniform01(rng) < params.epsilon ? 1 : 0;
    out.in_a_tilde = out.s_sigma == 1 || out.x == 1;
    double level = out.in_a_tilde ? params.a : params.b;
    bool up = uniform01(rng) < hitting_prob(out.s_sigma, level);
    out.s_T = up ? level : -level;
    out.f = (out.x == 1 && out.s_sigma == -1) ? params.M : 0.0;
    return out;
}

std::vector<double> category_probs(const ContinuousBlockParams& params) {
    std::vector<double> p(8, 0.0);
    for (int s1 : {1, -1}) {
        for (int x : {0, 1}) {
            double level = (s1 == 1 || x == 1) ? params.a : params.b;
            double up = hitting_prob(s1, level);
            for (int sign : {1, -1}) {
                int cat = ((s1 > 0 ? 0 : 1) << 2) | (x << 1) | (sign > 0 ? 0 : 1);
                p[cat] = 0.5 * (x ? params.epsilon : 1 - params.epsilon) *
                         (sign > 0 ? up : 1 - up);
            }
        }
    }
    return p;
}

double default_grid_step(const ContinuousBlockParams& params) {
    for (int k = 4; k <= 512; k += 4) {
        double step = 1.0 / k;
        double qa = params.a / step, qb = params.b / step;
        if (std::abs(qa - std::round(qa)) < 1e-9 && std::abs(qb - std::round(qb)) < 1e-9)
            return step * step;
    }
    throw GridMismatch("no spatial grid up to 1/512 carries both levels");
}

PathSample simulate_path(const ContinuousBlockParams& params, double grid_step,
                         std::mt19937_64& rng) {
    PathSample ps;
    ps.grid_step = grid_step;
    double spatial = std::sqrt(grid_step);
    long k_one = steps_on_grid(1.0, spatial);
    long k_a = steps_on_grid(params.a, spatial);
    long k_b = steps_on_grid(params.b, spatial);

    long pos = 0;
    ps.path.push_back(0.0);
    while (std::labs(pos) != k_one) {
        pos += uniform01(rng) < 0.5 ? 1 : -1;
        ps.path.push_back(pos * spatial);
    }
    ps.sigma_index = static_cast<int>(ps.path.size()) - 1;
    ps.outcome.s_sigma = pos > 0 ? 1 : -1;
    ps.outcome.x = uniform01(rng) < params.epsilon ? 1 : 0;
    ps.outcome.in_a_tilde = ps.outcome.s_sigma == 1 || ps.outcome.x == 1;
    long k_target = ps.outcome.in_a_tilde ? k_a : k_b;
    while (std::labs(pos) != k_target) {
        pos += uniform01(rng) < 0.5 ? 1 : -1;
        ps.path.push_back(pos * spatial);
    }
    ps.t_index = static_cast<int>(ps.path.size()) - 1;
    ps.outcome.s_T = pos * spatial;
    ps.outcome.f =
        (ps.outcome.x == 1 && ps.outcome.s_sigma == -1) ? params.M : 0.0;
    return ps;
}

void OutcomeTally::merge(const OutcomeTally& o) {
    n += o.n;
    for (int c = 0; c < 8; ++c) category_count[c] += o.category_count[c];
    sum_f += o.sum_f;
    sum_f2 += o.sum_f2;
    auto add_all = [](std::vector<double>& dst, const std::vector<double>& src) {
        if (dst.empty()) dst.assign(src.size(), 0.0);
        for (size_t i = 0; i < src.size(); ++i) dst[i] += src[i];
    };
    add_all(sum_fu, o.sum_fu);
    add_all(sum_fu2, o.sum_fu2);
    add_all(sum_abs_u, o.sum_abs_u);
    add_all(sum_incr, o.sum_incr);
    add_all(sum_incr2, o.sum_incr2);
}

namespace {

OutcomeTally run_outcome_stream(const ContinuousBlockParams& params,
                                const std::vector<TestStrategy>& strategies, long long count,
                                std::mt19937_64 rng) {
    OutcomeTally tally;
    size_t ns = strategies.size();
    tally.sum_fu.assign(ns, 0.0);
    tally.sum_fu2.assign(ns, 0.0);
    tally.sum_abs_u.assign(ns, 0.0);
    tally.sum_incr.assign(ns, 0.0);
    tally.sum_incr2.assign(ns, 0.0);
    for (long long i = 0; i < count; ++i) {
        OutcomeSample s = sample_outcome(params, rng);
        ++tally.n;
        ++tally.category_count[s.category()];
        tally.sum_f += s.f;
        tally.sum_f2 += s.f * s.f;
        for (size_t j = 0; j < ns; ++j) {
            double incr = strategies[j].c_after * (s.s_T - s.s_sigma);
            double u = strategies[j].c_before * s.s_sigma + incr;
            tally.sum_fu[j] += s.f * u;
            tally.sum_fu2[j] += s.f * u * s.f * u;
            tally.sum_abs_u[j] += std::abs(u);
            tally.sum_incr[j] += incr;
            tally.sum_incr2[j] += incr * incr;
        }
    }
    return tally;
}

long long stream_count(long long n_samples, int stream) {
    long long base = n_samples / kMcStreams;
    return base + (stream < n_samples % kMcStreams ? 1 : 0);
}

}  // namespace

OutcomeTally accumulate_outcomes_serial(const ContinuousBlockParams& params,
                                        const std::vector<TestStrategy>& strategies,
                                        long long n_samples, std::uint64_t seed) {
    OutcomeTally total;
    for (int k = 0; k < kMcStreams; ++k)
        total.merge(run_outcome_stream(params, strategies, stream_count(n_samples, k),
                                       stream_rng(seed, k)));
    return total;
}

OutcomeTally accumulate_outcomes_parallel(const ContinuousBlockParams& params,
                                          const std::vector<TestStrategy>& strategies,
                                          long long n_samples, std::uint64_t seed) {
    std::vector<OutcomeTally> parts(kMcStreams);
#pragma omp parallel for schedule(dynamic)
    for (int k = 0; k < kMcStreams; ++k)
        parts[k] = run_outcome_stream(params, strategies, stream_count(n_samples, k),
                                      stream_rng(seed, k));
    OutcomeTally total;
    for (int k = 0; k < kMcStreams; ++k) total.merge(parts[k]);
    return total;
}

namespace {

std::vector<long long> run_path_stream(const ContinuousBlockParams& params, double grid_step,
                                       long long count, std::mt19937_64 rng) {
    std::vector<long long> counts(8, 0);
    for (long long i = 0; i < count; ++i)
        ++counts[simulate_path(params, grid_step, rng).outcome.category()];
    return counts;
}

}  // namespace

std::vector<long long> path_terminal_counts_serial(const ContinuousBlockParams& params,
                                                   double grid_step, long long n_paths,
                                                   std::uint64_t seed) {
    std::vector<long long> total(8, 0);
    for (int k = 0; k < kMcStreams; ++k) {
        auto part =
            run_path_stream(params, grid_step, stream_count(n_paths, k), stream_rng(seed, k));
        for (int c = 0; c < 8; ++c) total[c] += part[c];
    }
    return total;
}

std::vector<long long> path_terminal_counts_parallel(const ContinuousBlockParams& params,
                                                     double grid_step, long long n_paths,
                                                     std::uint64_t seed) {
    std::vector<std::vector<long long>> parts(kMcStreams);
#pragma omp parallel for schedule(dynamic)
    for (int k = 0; k < kMcStreams; ++k)
        parts[k] =
            run_path_stream(params, grid_step, stream_count(n_paths, k), stream_rng(seed, k));
    std::vector<long long> total(8, 0);
    for (int k = 0; k < kMcStreams; ++k)
        for (int c = 0; c < 8; ++c) total[c] += parts[k][c];
    return total;
}

namespace {

// Regularized incomplete gamma functions (series / continued fraction).
double gamma_p_series(double a, double x) {
    double term = 1.0 / a, sum = term, ap = a;
    for (int i = 0; i < 500; ++i) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::abs(term) < std::abs(sum) * 1e-15) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q_contfrac(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
    for (int i = 1; i <= 500; ++i) {
        double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-15) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double chi_squared_sf(double x, int dof) {
    if (x <= 0) return 1.0;
    double a = dof / 2.0, hx = x / 2.0;
    if (hx < a + 1.0) return 1.0 - gamma_p_series(a, hx);
    return gamma_q_contfrac(a, hx);
}

McReport mc_verify(const ContinuousBlockParams& params, long long n_samples, std::uint64_t seed,
                   const std::vector<TestStrategy>& strategies) {
    params.validate();
    if (n_samples < 10000) throw InsufficientSamples("need at least 10^4 samples");

    McReport report;
    report.n_samples = n_samples;
    report.seed = seed;
    OutcomeTally tally = accumulate_outcomes_parallel(params, strategies, n_samples, seed);
    std::vector<double> probs = category_probs(params);
    double n = static_cast<double>(n_samples);
    double q = params.epsilon / 2;  // P(f = M)

    auto add_est = [&](std::string name, double est, double target, double se) {
        report.add({std::move(name), est, target, 4 * se, std::abs(est - target) <= 4 * se});
    };

    add_est("E[f] = M eps/2", tally.sum_f / n, params.M * q,
            params.M * std::sqrt(q * (1 - q) / n));
    add_est("E[f^2] = M^2 eps/2", tally.sum_f2 / n, params.M * params.M * q,
            params.M * params.M * std::sqrt(q * (1 - q) / n));

    const auto& c = tally.category_count;
    // Hitting law given A~ and the value of S_sigma. s_sigma = +1 is always
    // inside A~; s_sigma = -1 needs x = 1.
    {
        double cond = static_cast<double>(c[0] + c[1] + c[2] + c[3]);
        double t = hitting_prob(1, params.a);
        add_est("P(S_T = a | A~, S_sigma = +1)", (c[0] + c[2]) / cond, t,
                std::sqrt(t * (1 - t) / cond));
    }
    {
        double cond = static_cast<double>(c[6] + c[7]);
        double t = hitting_prob(-1, params.a);
        add_est("P(S_T = a | A~, S_sigma = -1)", cond > 0 ? c[6] / cond : 0.0, t,
                cond > 0 ? std::sqrt(t * (1 - t) / cond) : 1.0);
    }
    // E[X | S_T = +-a] against the discrete closed form.
    {
        double event = static_cast<double>(c[0] + c[2] + c[6]);
        double t = (probs[2] + probs[6]) / (probs[0] + probs[2] + probs[6]);
        add_est("E[X | S_T = a]", event > 0 ? (c[2] + c[6]) / event : 0.0, t,
                event > 0 ? std::sqrt(t * (1 - t) / event) : 1.0);
    }
    {
        double event = static_cast<double>(c[1] + c[3] + c[7]);
        double t = (probs[3] + probs[7]) / (probs[1] + probs[3] + probs[7]);
        add_est("E[X | S_T = -a]", event > 0 ? (c[3] + c[7]) / event : 0.0, t,
                event > 0 ? std::sqrt(t * (1 - t) / event) : 1.0);
    }
    // Chi-squared fit of the full joint law, significance 1e-3.
    {
        double stat = 0;
        for (int cat = 0; cat < 8; ++cat) {
            double expected = n * probs[cat];
            double diff = c[cat] - expected;
            stat += diff * diff / expected;
        }
        double pvalue = chi_squared_sf(stat, 7);
        report.add({"chi^2 fit of (S_sigma, X, S_T) law", stat, 0.0, 0.0, pvalue >= 1e-3});
    }
    // Correlation bound and martingale spot check per strategy.
    for (size_t j = 0; j < strategies.size(); ++j) {
        const TestStrategy& st = strategies[j];
        std::string tag = " [H = (" + std::to_string(st.c_before) + ", " +
                          std::to_string(st.c_after) + ")]";
        double mean_fu = tally.sum_fu[j] / n;
        double var_fu = tally.sum_fu2[j] / n - mean_fu * mean_fu;
        double se_fu = std::sqrt(std::max(var_fu, 0.0) / n);
        double bound = params.epsilon * params.M * (tally.sum_abs_u[j] / n);
        report.add({"E[fu] <= eps M ||u||_1" + tag, mean_fu, bound, 4 * se_fu,
                    mean_fu <= bound + 4 * se_fu});

        double mean_incr = tally.sum_incr[j] / n;
        double var_incr = tally.sum_incr2[j] / n - mean_incr * mean_incr;
        double se_incr = std::sqrt(std::max(var_incr, 0.0) / n);
        report.add({"E[Y_T - Y_sigma] = 0" + tag, mean_incr, 0.0, 4 * se_incr,
                    std::abs(mean_incr) <= 4 * se_incr});
    }
    return report;
}

}  // namespace hedgelab
