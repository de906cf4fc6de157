#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include "ifs/measure.hpp"
#include "ifs/rng.hpp"
#include "ifs/system.hpp"

namespace ifs {

// Raised when an exact step would exceed the atom capacity; switch to
// the resampling policy instead.
class CapacityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr long kMaxExactAtoms = 10'000'000;

// One exact application of the measure evolution: every atom (x, w)
// spawns (g_i(x), p_i w) for all generators, so support grows k-fold.
ParticleMeasure markov_step(const ParticleMeasure& mu, const IFSystem& sys);

// Exact step followed by systematic (low-variance) resampling down to
// resample_to equally weighted atoms, consuming one uniform draw.
ParticleMeasure markov_step(const ParticleMeasure& mu, const IFSystem& sys, long resample_to,
                            Stream& stream);

// Dual operator on grid functions: out(x_j) = sum_i p_i f(g_i(x_j)),
// with circular linear interpolation of f off the nodes.
GridFunction dual_step_grid(const GridFunction& f, const IFSystem& sys);

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
};

// Monte Carlo estimate of the n-step dual action at x: the mean of f at
// the endpoint of the forward orbit over `samples` independent words.
McEstimate dual_mc(const IFSystem& sys, const std::function<double(double)>& f, CirclePoint x,
                   long n, long samples, Stream& stream);
McEstimate dual_mc(const IFSystem& sys, const GridFunction& f, CirclePoint x, long n, long samples,
                   Stream& stream);

struct InvariantEstimate {
    ParticleMeasure measure;
    // W1 between the measures after n_steps/2 and n_steps.
    double convergence_w1 = 0.0;
};

// Pushes the uniform lattice measure through n_steps resampled
// evolution steps.
InvariantEstimate invariant_measure_estimate(const IFSystem& sys, long n_steps, long n_particles,
                                             Stream& stream);

struct StabilityEntry {
    long step = 0;
    int i = 0, j = 0;
    double w1 = 0.0;
};

struct StabilityReport {
    std::vector<long> checkpoints;  // powers of two up to n, plus n
    std::vector<StabilityEntry> series;
    double final_max_w1 = 0.0;
};

// Evolves every initial measure with a common resampling budget and
// common random draws (identical streams), recording pairwise W1 at
// power-of-two checkpoints. Identical inputs therefore stay identical.
StabilityReport stability_test(const IFSystem& sys, const std::vector<ParticleMeasure>& inits,
                               long n, long resample_to, const Stream& stream, int threads = 1);

// Pushforward of mu0 under the backward composition of w; atom count
// and weights are unchanged.
ParticleMeasure omega_measure(const IFSystem& sys, const Word& w, const ParticleMeasure& mu0);

}  // namespace ifs
