#include "ifs/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ifs/parallel.hpp"

namespace ifs {

namespace {
constexpr double kGoldenFrac = 0.6180339887498949;
}

BirkhoffResult birkhoff_average(const IFSystem& sys, CirclePoint x,
                                const std::function<double(double)>& phi, long n, Stream& stream) {
    if (n < 1) throw std::invalid_argument("birkhoff_average: n must be >= 1");
    const int n_batches = static_cast<int>(std::min<long>(32, n));
    const long batch_len = n / n_batches;

    double sum = 0.0;
    std::vector<double> batch_sums(static_cast<std::size_t>(n_batches), 0.0);
    CirclePoint p = x;
    for (long m = 0; m < n; ++m) {
        Word w = sample_word(sys, stream, 1);
        p = apply(sys.gen(w.letters[0]), p);
        double v = phi(p.position);
        sum += v;
        long b = m / batch_len;
        if (b < n_batches) batch_sums[static_cast<std::size_t>(b)] += v;
    }

    BirkhoffResult res;
    res.average = sum / static_cast<double>(n);
    if (n_batches > 1) {
        double mean_bm = 0.0;
        std::vector<double> means(batch_sums.size());
        for (std::size_t b = 0; b < batch_sums.size(); ++b) {
            means[b] = batch_sums[b] / static_cast<double>(batch_len);
            mean_bm += means[b];
        }
        mean_bm /= static_cast<double>(n_batches);
        double var = 0.0;
        for (double m : means) var += (m - mean_bm) * (m - mean_bm);
        var /= static_cast<double>(n_batches - 1);
        res.batch_means_sigma = std::sqrt(var / static_cast<double>(n_batches));
    }
    return res;
}

namespace {

std::vector<double> base_point_set(int count) {
    std::vector<double> pts(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) pts[static_cast<std::size_t>(i)] = wrap01(0.11 + i * kGoldenFrac);
    return pts;
}

EPropertyTable eproperty_grid(const IFSystem& sys, const GridFunction& f,
                              const std::vector<double>& deltas, int n_horizon, int base_points) {
    const auto bases = base_point_set(base_points);
    std::vector<double> moduli(deltas.size(), 0.0);
    GridFunction fn = f;
    for (int n = 0; n <= n_horizon; ++n) {
        for (double x : bases) {
            double fx = fn.interp(x);
            for (std::size_t d = 0; d < deltas.size(); ++d) {
                for (double side : {-1.0, 1.0}) {
                    double diff = std::abs(fn.interp(x + side * deltas[d]) - fx);
                    moduli[d] = std::max(moduli[d], diff);
                }
            }
        }
        if (n < n_horizon) fn = dual_step_grid(fn, sys);
    }
    EPropertyTable table;
    table.deltas = deltas;
    table.moduli = std::move(moduli);
    table.std_errors.assign(deltas.size(), 0.0);
    table.n_horizon = n_horizon;
    table.base_points = base_points;
    table.method = "grid";
    return table;
}

EPropertyTable eproperty_mc(const IFSystem& sys, const GridFunction& f,
                            const std::vector<double>& deltas, int n_horizon, int base_points,
                            long samples, Stream& stream, int threads) {
    const auto bases = base_point_set(base_points);
    const std::size_t n_d = deltas.size();
    const std::size_t n_b = bases.size();
    const std::size_t n_t = static_cast<std::size_t>(n_horizon + 1);
    const std::size_t cells = n_b * n_d * 2 * n_t;

    // Common random words couple the center and offset trajectories, so
    // the difference estimator has low variance.
    const long n_blocks = 64;
    std::vector<std::vector<double>> block_sum(static_cast<std::size_t>(n_blocks)),
        block_sumsq(static_cast<std::size_t>(n_blocks));
    std::vector<long> block_count(static_cast<std::size_t>(n_blocks), 0);
    for (long blk = 0; blk < n_blocks; ++blk) {
        block_sum[static_cast<std::size_t>(blk)].assign(cells, 0.0);
        block_sumsq[static_cast<std::size_t>(blk)].assign(cells, 0.0);
    }
    auto cell = [&](std::size_t b, std::size_t d, int side, std::size_t t) {
        return ((b * n_d + d) * 2 + static_cast<std::size_t>(side)) * n_t + t;
    };

    parallel_for(n_blocks, threads, [&](long blk) {
        Stream local = stream.substream(static_cast<std::uint64_t>(blk));
        long count = samples / n_blocks + (blk < samples % n_blocks ? 1 : 0);
        auto& sums = block_sum[static_cast<std::size_t>(blk)];
        auto& sumsqs = block_sumsq[static_cast<std::size_t>(blk)];
        std::vector<double> center(n_b), offs(n_b * n_d * 2);
        for (long s = 0; s < count; ++s) {
            Word w = sample_word(sys, local, n_horizon);
            for (std::size_t b = 0; b < n_b; ++b) center[b] = bases[b];
            for (std::size_t b = 0; b < n_b; ++b)
                for (std::size_t d = 0; d < n_d; ++d)
                    for (int side = 0; side < 2; ++side)
                        offs[(b * n_d + d) * 2 + static_cast<std::size_t>(side)] =
                            wrap01(bases[b] + (side == 0 ? -1.0 : 1.0) * deltas[d]);
            for (std::size_t t = 0; t < n_t; ++t) {
                for (std::size_t b = 0; b < n_b; ++b) {
                    double fc = f.interp(center[b]);
                    for (std::size_t d = 0; d < n_d; ++d) {
                        for (int side = 0; side < 2; ++side) {
                            double diff =
                                f.interp(offs[(b * n_d + d) * 2 + static_cast<std::size_t>(side)]) -
                                fc;
                            std::size_t c = cell(b, d, side, t);
                            sums[c] += diff;
                            sumsqs[c] += diff * diff;
                        }
                    }
                }
                if (t + 1 < n_t) {
                    const Homeo& g = sys.gen(w.letters[t]);
                    for (double& p : center) p = wrap01(g.lift(p));
                    for (double& p : offs) p = wrap01(g.lift(p));
                }
            }
        }
        block_count[static_cast<std::size_t>(blk)] = count;
    });

    // Deterministic block-ordered reduction.
    std::vector<double> sum(cells, 0.0), sumsq(cells, 0.0);
    long total = 0;
    for (long blk = 0; blk < n_blocks; ++blk) {
        for (std::size_t c = 0; c < cells; ++c) {
            sum[c] += block_sum[static_cast<std::size_t>(blk)][c];
            sumsq[c] += block_sumsq[static_cast<std::size_t>(blk)][c];
        }
        total += block_count[static_cast<std::size_t>(blk)];
    }

    EPropertyTable table;
    table.deltas = deltas;
    table.moduli.assign(n_d, 0.0);
    table.std_errors.assign(n_d, 0.0);
    for (std::size_t d = 0; d < n_d; ++d) {
        double best = -1.0;
        std::size_t best_cell = 0;
        for (std::size_t b = 0; b < n_b; ++b) {
            for (int side = 0; side < 2; ++side) {
                for (std::size_t t = 0; t < n_t; ++t) {
                    std::size_t c = cell(b, d, side, t);
                    double mean = std::abs(sum[c] / static_cast<double>(total));
                    if (mean > best) {
                        best = mean;
                        best_cell = c;
                    }
                }
            }
        }
        table.moduli[d] = best;
        if (total > 1) {
            double mean = sum[best_cell] / static_cast<double>(total);
            double var = (sumsq[best_cell] - static_cast<double>(total) * mean * mean) /
                         static_cast<double>(total - 1);
            table.std_errors[d] = std::sqrt(std::max(0.0, var) / static_cast<double>(total));
        }
    }
    table.n_horizon = n_horizon;
    table.base_points = base_points;
    table.method = "mc";
    return table;
}

}  // namespace

EPropertyTable eproperty_modulus(const IFSystem& sys, const GridFunction& f,
                                 const std::vector<double>& deltas, int n_horizon, int base_points,
                                 EPropertyMethod method, long mc_samples, Stream& stream,
                                 int threads) {
    if (n_horizon < 1) throw std::invalid_argument("eproperty_modulus: n_horizon must be >= 1");
    for (std::size_t i = 0; i + 1 < deltas.size(); ++i)
        if (!(deltas[i] > deltas[i + 1]))
            throw std::invalid_argument("eproperty_modulus: deltas must be strictly decreasing");
    for (double d : deltas)
        if (!(d > 0.0 && d < 0.5))
            throw std::invalid_argument("eproperty_modulus: deltas must lie in (0, 1/2)");

    if (method == EPropertyMethod::Grid) return eproperty_grid(sys, f, deltas, n_horizon, base_points);
    return eproperty_mc(sys, f, deltas, n_horizon, base_points, mc_samples, stream, threads);
}

}  // namespace ifs
