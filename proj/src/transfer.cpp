#include "ifs/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ifs/parallel.hpp"

namespace ifs {

ParticleMeasure markov_step(const ParticleMeasure& mu, const IFSystem& sys) {
    const long k = sys.size();
    const long projected = k * static_cast<long>(mu.size());
    if (projected > kMaxExactAtoms)
        throw CapacityError("markov_step: exact step would create " + std::to_string(projected) +
                            " atoms; use the resampling policy");
    ParticleMeasure out;
    out.positions.reserve(static_cast<std::size_t>(projected));
    out.weights.reserve(static_cast<std::size_t>(projected));
    for (std::size_t a = 0; a < mu.size(); ++a) {
        for (int i = 0; i < k; ++i) {
            out.positions.push_back(sys.generators[static_cast<std::size_t>(i)].lift(mu.positions[a]));
            out.positions.back() = wrap01(out.positions.back());
            out.weights.push_back(sys.probs[static_cast<std::size_t>(i)] * mu.weights[a]);
        }
    }
    return out;
}

namespace {

// Systematic resampling over the position-sorted atoms: stratifying
// along the circle keeps the W1 error of one resampling pass at O(1/N)
// instead of the O(1/sqrt(N)) of order-agnostic quantile selection.
ParticleMeasure systematic_resample(const ParticleMeasure& mu, long n, double u01) {
    std::vector<std::size_t> order(mu.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return mu.positions[a] < mu.positions[b]; });

    ParticleMeasure out;
    out.positions.resize(static_cast<std::size_t>(n));
    out.weights.assign(static_cast<std::size_t>(n), 1.0 / static_cast<double>(n));
    double total = 0.0;
    for (double w : mu.weights) total += w;
    double cum = mu.weights[order[0]];
    std::size_t idx = 0;
    for (long j = 0; j < n; ++j) {
        double target = (u01 + static_cast<double>(j)) / static_cast<double>(n) * total;
        while (cum < target && idx + 1 < mu.size()) cum += mu.weights[order[++idx]];
        out.positions[static_cast<std::size_t>(j)] = mu.positions[order[idx]];
    }
    return out;
}

}  // namespace

ParticleMeasure markov_step(const ParticleMeasure& mu, const IFSystem& sys, long resample_to,
                            Stream& stream) {
    ParticleMeasure exact = markov_step(mu, sys);
    return systematic_resample(exact, resample_to, stream.next_double());
}

GridFunction dual_step_grid(const GridFunction& f, const IFSystem& sys) {
    const int n = f.size();
    std::vector<double> out(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < sys.size(); ++i) {
        const Homeo& g = sys.generators[static_cast<std::size_t>(i)];
        const double p = sys.probs[static_cast<std::size_t>(i)];
        for (int j = 0; j < n; ++j) {
            double x = static_cast<double>(j) / static_cast<double>(n);
            out[static_cast<std::size_t>(j)] += p * f.interp(g.lift(x));
        }
    }
    return GridFunction(std::move(out));
}

McEstimate dual_mc(const IFSystem& sys, const std::function<double(double)>& f, CirclePoint x,
                   long n, long samples, Stream& stream) {
    if (n < 0 || samples < 1) throw std::invalid_argument("dual_mc: need n >= 0, samples >= 1");
    // Welford accumulation: exact zero spread for constant integrands.
    double mean = 0.0, m2 = 0.0;
    for (long s = 0; s < samples; ++s) {
        CirclePoint p = x;
        for (long step = 0; step < n; ++step) {
            Word w = sample_word(sys, stream, 1);
            p = apply(sys.gen(w.letters[0]), p);
        }
        double v = f(p.position);
        double d1 = v - mean;
        mean += d1 / static_cast<double>(s + 1);
        m2 += d1 * (v - mean);
    }
    McEstimate est;
    est.mean = mean;
    if (samples > 1)
        est.std_error = std::sqrt(m2 / static_cast<double>(samples - 1) /
                                  static_cast<double>(samples));
    return est;
}

McEstimate dual_mc(const IFSystem& sys, const GridFunction& f, CirclePoint x, long n, long samples,
                   Stream& stream) {
    return dual_mc(sys, [&f](double t) { return f.interp(t); }, x, n, samples, stream);
}

InvariantEstimate invariant_measure_estimate(const IFSystem& sys, long n_steps, long n_particles,
                                             Stream& stream) {
    if (n_steps < 1 || n_particles < 1)
        throw std::invalid_argument("invariant_measure_estimate: steps and particles must be >= 1");
    ParticleMeasure mu = ParticleMeasure::uniform_lattice(n_particles);
    ParticleMeasure halfway;
    const long half = n_steps / 2;
    for (long s = 0; s < n_steps; ++s) {
        mu = markov_step(mu, sys, n_particles, stream);
        if (s + 1 == half) halfway = mu;
    }
    InvariantEstimate est;
    est.convergence_w1 = half >= 1 ? wasserstein_circle(halfway, mu) : 0.0;
    est.measure = std::move(mu);
    return est;
}

namespace {

std::vector<long> power_checkpoints(long n) {
    std::vector<long> cps;
    for (long c = 1; c < n; c *= 2) cps.push_back(c);
    cps.push_back(n);
    return cps;
}

}  // namespace

StabilityReport stability_test(const IFSystem& sys, const std::vector<ParticleMeasure>& inits,
                               long n, long resample_to, const Stream& stream, int threads) {
    if (inits.size() < 2) throw std::invalid_argument("stability_test: need at least two initial measures");
    StabilityReport rep;
    rep.checkpoints = power_checkpoints(n);

    const std::size_t n_inits = inits.size();
    std::vector<std::vector<ParticleMeasure>> snapshots(n_inits);
    // Common random draws: every initial measure evolves against an
    // identical copy of the stream, so equal inputs stay bitwise equal
    // and pairwise distances measure only the initial disagreement.
    parallel_for(static_cast<long>(n_inits), threads, [&](long task) {
        Stream local = stream;
        ParticleMeasure mu = inits[static_cast<std::size_t>(task)];
        std::size_t next_cp = 0;
        for (long s = 1; s <= n; ++s) {
            mu = markov_step(mu, sys, resample_to, local);
            if (next_cp < rep.checkpoints.size() && s == rep.checkpoints[next_cp]) {
                snapshots[static_cast<std::size_t>(task)].push_back(mu);
                ++next_cp;
            }
        }
    });

    for (std::size_t c = 0; c < rep.checkpoints.size(); ++c) {
        for (std::size_t i = 0; i < n_inits; ++i) {
            for (std::size_t j = i + 1; j < n_inits; ++j) {
                StabilityEntry e;
                e.step = rep.checkpoints[c];
                e.i = static_cast<int>(i);
                e.j = static_cast<int>(j);
                e.w1 = wasserstein_circle(snapshots[i][c], snapshots[j][c]);
                rep.series.push_back(e);
                if (c + 1 == rep.checkpoints.size())
                    rep.final_max_w1 = std::max(rep.final_max_w1, e.w1);
            }
        }
    }
    return rep;
}

ParticleMeasure omega_measure(const IFSystem& sys, const Word& w, const ParticleMeasure& mu0) {
    if (w.empty()) throw std::invalid_argument("omega_measure: empty word");
    ParticleMeasure out = mu0;
    // Fold the word once, then map all atoms through the chain in
    // backward order (last letter first).
    for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) {
        const Homeo& g = sys.gen(*it);
        for (double& p : out.positions) p = wrap01(g.lift(p));
    }
    return out;
}

}  // namespace ifs
