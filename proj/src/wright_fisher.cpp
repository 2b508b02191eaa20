#include "kimura/wright_fisher.hpp"

#include <algorithm>
#include <cmath>

#include "kimura/errors.hpp"

namespace kimura {

namespace {

std::uint64_t binomial_inverse_transform(std::uint64_t n, double p,
                                         std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double u = unif(rng);
    // walk the pmf via the ratio recurrence
    const double odds = p / (1.0 - p);
    double pmf = std::pow(1.0 - p, static_cast<double>(n));
    double cdf = pmf;
    std::uint64_t k = 0;
    while (u > cdf && k < n) {
        pmf *= odds * static_cast<double>(n - k) / static_cast<double>(k + 1);
        cdf += pmf;
        ++k;
    }
    return k;
}

std::uint64_t sample_binomial(std::uint64_t n, double p, std::mt19937_64& rng) {
    if (p <= 0.0) return 0;
    if (p >= 1.0) return n;
    if (n <= 64) return binomial_inverse_transform(n, p, rng);
    std::binomial_distribution<std::uint64_t> dist(n, p);
    return dist(rng);
}

} // namespace

std::uint64_t wf_step(std::uint64_t k, std::uint64_t two_n, std::mt19937_64& rng) {
    if (k == 0 || k >= two_n) return std::min(k, two_n);
    return sample_binomial(two_n, static_cast<double>(k) / static_cast<double>(two_n),
                           rng);
}

FixationEstimate estimate_fixation(const WFConfig& config) {
    const std::uint64_t two_n = 2 * config.pop_size;
    if (two_n < 2) throw ConfigError("population must hold at least 2 genes");
    if (config.n_replicates < 1) throw ConfigError("need at least one replicate");
    if (!config.initial_frequency && !config.initial_sampler) {
        throw ConfigError("either an initial frequency or a sampler is required");
    }

    const std::size_t gens = config.n_generations;
    const std::size_t reps = config.n_replicates;
    std::vector<double> sum(gens + 1, 0.0), sum_sq(gens + 1, 0.0);
    std::size_t fixed_lo = 0, fixed_hi = 0;

    for (std::size_t r = 0; r < reps; ++r) {
        std::seed_seq seq{static_cast<std::uint32_t>(config.rng_seed),
                          static_cast<std::uint32_t>(config.rng_seed >> 32),
                          static_cast<std::uint32_t>(r),
                          static_cast<std::uint32_t>(r >> 16)};
        std::mt19937_64 rng(seq);

        std::uint64_t k;
        if (config.initial_frequency) {
            const double p = std::clamp(*config.initial_frequency, 0.0, 1.0);
            k = static_cast<std::uint64_t>(
                std::llround(p * static_cast<double>(two_n)));
        } else {
            const double x = std::clamp(config.initial_sampler(rng), 0.0, 1.0);
            k = sample_binomial(two_n, x, rng);
        }

        for (std::size_t t = 0; t <= gens; ++t) {
            const double freq =
                static_cast<double>(k) / static_cast<double>(two_n);
            sum[t] += freq;
            sum_sq[t] += freq * freq;
            if (t < gens) k = wf_step(k, two_n, rng);
        }
        if (k == 0) ++fixed_lo;
        if (k == two_n) ++fixed_hi;
    }

    FixationEstimate est;
    const double n = static_cast<double>(reps);
    est.p_fix_0 = static_cast<double>(fixed_lo) / n;
    est.p_fix_1 = static_cast<double>(fixed_hi) / n;
    est.se_fix_0 = std::sqrt(std::max(0.0, est.p_fix_0 * (1.0 - est.p_fix_0) / n));
    est.se_fix_1 = std::sqrt(std::max(0.0, est.p_fix_1 * (1.0 - est.p_fix_1) / n));
    est.n_absorbed = fixed_lo + fixed_hi;
    est.mean_frequency.resize(gens + 1);
    est.se_frequency.resize(gens + 1);
    for (std::size_t t = 0; t <= gens; ++t) {
        const double mean = sum[t] / n;
        est.mean_frequency[t] = mean;
        const double var = std::max(0.0, sum_sq[t] / n - mean * mean);
        est.se_frequency[t] = std::sqrt(var / n);
    }
    return est;
}

std::function<double(std::mt19937_64&)>
make_density_sampler(const std::function<double(double)>& density, double delta,
                     std::size_t table_size) {
    if (table_size < 2) throw ConfigError("sampler table needs at least 2 nodes");
    std::vector<double> xs(table_size), cdf(table_size);
    const double span = 1.0 - 2.0 * delta;
    for (std::size_t i = 0; i < table_size; ++i) {
        xs[i] = delta + span * static_cast<double>(i) /
                            static_cast<double>(table_size - 1);
    }
    cdf[0] = 0.0;
    double prev = std::max(0.0, density(xs[0]));
    for (std::size_t i = 1; i < table_size; ++i) {
        const double cur = std::max(0.0, density(xs[i]));
        cdf[i] = cdf[i - 1] + 0.5 * (prev + cur) * (xs[i] - xs[i - 1]);
        prev = cur;
    }
    const double total = cdf.back();
    if (!(total > 0.0)) throw ConfigError("density integrates to zero");
    for (double& c : cdf) c /= total;

    return [xs = std::move(xs), cdf = std::move(cdf)](std::mt19937_64& rng) {
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        const double u = unif(rng);
        const auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
        if (it == cdf.begin()) return xs.front();
        const std::size_t i = static_cast<std::size_t>(it - cdf.begin());
        if (i >= cdf.size()) return xs.back();
        const double c0 = cdf[i - 1], c1 = cdf[i];
        const double w = c1 > c0 ? (u - c0) / (c1 - c0) : 0.0;
        return xs[i - 1] + w * (xs[i] - xs[i - 1]);
    };
}

} // namespace kimura
