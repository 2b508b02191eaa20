#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <vector>

namespace kimura {

/// Monte-Carlo setup for the discrete Wright-Fisher chain. Either a fixed
/// initial frequency (rounded to the nearest gene count) or a sampler drawing
/// initial frequencies x, from which the start count is Binomial(2N, x) so
/// that the initial mean frequency is preserved exactly.
struct WFConfig {
    std::uint64_t pop_size = 100; // N individuals; gene count is 2N
    std::size_t n_generations = 1000;
    std::size_t n_replicates = 10000;
    std::optional<double> initial_frequency;
    std::function<double(std::mt19937_64&)> initial_sampler;
    std::uint64_t rng_seed = 0;
};

/// One generation of resampling: Binomial(2N, k/2N), absorbing at 0 and 2N.
/// Exact inverse-transform sampling for 2N <= 64, the standard library's
/// binomial sampler above that.
std::uint64_t wf_step(std::uint64_t k, std::uint64_t two_n, std::mt19937_64& rng);

struct FixationEstimate {
    double p_fix_0 = 0.0;  // fraction absorbed at 0
    double p_fix_1 = 0.0;  // fraction absorbed at 2N
    double se_fix_0 = 0.0; // binomial standard errors of the two fractions
    double se_fix_1 = 0.0;
    std::size_t n_absorbed = 0;
    std::vector<double> mean_frequency; // per generation, replicate average
    std::vector<double> se_frequency;   // standard error of that average
};

/// Replicate-averaged absorption frequencies and mean-frequency trace.
/// Absorbed replicates stay at their absorbing value for the remaining
/// generations, so the mean trace is a martingale estimate throughout.
/// Replicate r uses an engine seeded from (rng_seed, r); results are
/// reproducible for a fixed seed regardless of evaluation order.
FixationEstimate estimate_fixation(const WFConfig& config);

/// Inverse-CDF sampler for a density on (delta, 1-delta), built from a dense
/// trapezoid table. Used to start Wright-Fisher runs from a PDE initial
/// density.
std::function<double(std::mt19937_64&)>
make_density_sampler(const std::function<double(double)>& density, double delta,
                     std::size_t table_size = 4096);

} // namespace kimura
