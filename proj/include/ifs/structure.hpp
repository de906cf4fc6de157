#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ifs/rng.hpp"
#include "ifs/transfer.hpp"

namespace ifs {

enum class ActionKind { Equicontinuous, Contractive, Inconclusive };

struct ContractionRound {
    long rotation_power = 0;   // leading base-generator power this round
    int map_index = 0;         // contracting generator applied afterwards
    double ratio = 0.0;        // arc length ratio achieved by the round
    bool pigeonhole = false;   // placed inside the probe window with ratio <= alpha
};

struct ContractionSearchResult {
    bool achieved = false;
    Word word;                 // forward word: first letter acts first
    double final_length = 0.0; // re-evaluated by folding image_arc over the word
    double initial_length = 0.0;
    double probe_alpha = 0.0;
    Arc probe_arc;             // arc I found in the probe phase
    double probe_margin = 0.0; // epsilon: the probe window is I extended by 2 eps
    int base_index = 0;        // designated dense-orbit generator (1-based)
    int contracting_index = 0; // designated contracting generator (1-based)
    std::vector<ContractionRound> rounds;
    std::string note;
};

struct SearchOptions {
    int probe_starts = 64;
    std::vector<double> probe_lengths = {0.5, 0.375, 0.25, 0.125, 0.0625};
    long placement_cap = 10000;  // per-round scan cap for base-generator powers
    long fallback_cap = 1024;    // scan cap when the arc does not fit the window
    double alpha_slack = 0.2;    // alpha = r + slack * (1 - r)
    int base_index = 0;          // 1-based; 0 = pick automatically
    int contracting_index = 0;   // 1-based; 0 = pick automatically
};

// Designated dense-orbit generator: the one whose rotation-number
// estimate is farthest from every rational with denominator <= 20,
// among generators whose eps-net check passes. 1-based; 0 if none.
int pick_base_generator(const IFSystem& sys);

// Pigeonhole contraction loop: find a probe arc I whose image under a
// non-isometric generator g shrinks by factor alpha, then repeatedly
// place the current arc inside the widened window I' with powers of the
// base generator and apply g, which is guaranteed to multiply the
// length by at most alpha whenever enough disjoint placements fit.
// Stops when the length ratio reaches target_ratio or the word length
// reaches budget; on budget exhaustion, returns the best word so far.
ContractionSearchResult contraction_word_search(const IFSystem& sys, const Arc& J,
                                                double target_ratio, long budget,
                                                const SearchOptions& opts = {});

struct ClassificationWitness {
    Arc arc;
    Word word;
    double final_length = 0.0;
};

struct Classification {
    ActionKind kind = ActionKind::Inconclusive;
    std::optional<ClassificationWitness> witness;
    std::vector<bool> isometry_flags;
    std::string note;
};

// Either every generator is an isometry (equicontinuous action) or a
// witness word shrinking witness_arc below tol * |witness_arc| is
// produced. Budget exhaustion yields Inconclusive with the best witness
// so far, never a silent drop.
Classification classify(const IFSystem& sys, int probe_arcs, long shrink_budget, double tol,
                        const Arc& witness_arc = Arc(CirclePoint(0.3), 0.1));

// Largest beta (to within resolution) such that the arc [x, x + beta]
// can be contracted to 1e-2 of its length within the given word budget.
double contractible_radius(const IFSystem& sys, CirclePoint x, double resolution, long budget);

struct SymmetryReport {
    int M = 1;                      // order of the commuting rotation
    int p = 1, q = 1;               // r = p/q reduced; q == M when M > 1
    double r = 1.0;
    double r_hat = 1.0;             // median of the sampled radii
    double commutation_residual = 0.0;
    bool success = false;
    bool low_confidence = false;
    std::vector<std::pair<double, double>> radius_samples;  // (x, r_hat(x))
};

struct SymmetryOptions {
    double radius_resolution = 1.0 / 64.0;
    long radius_budget = 30000;
    double snap_tol = 0.0;  // 0 = 2 * radius_resolution
    int grid = 1024;        // commutation residual grid
};

// Estimates the maximal contractible arc length r from sampled radii,
// snaps it to the smallest-denominator rational within tolerance, and
// measures how well the rotation by r commutes with every generator.
SymmetryReport detect_symmetry(const IFSystem& sys, int denominator_cap, double tol, int samples,
                               const SymmetryOptions& opts = {});

struct OmegaCluster {
    double center = 0.0;  // circular mean
    double mass = 0.0;
    double diameter = 0.0;
};

struct OmegaClusters {
    std::vector<OmegaCluster> clusters;
    int m_hat = 0;          // clusters holding at least 1/(2 m_cap) mass
    bool converged = false; // all diameters <= gap_threshold / 4
    Word word;
};

// Samples a backward word, pushes mu0 through it and clusters the atoms
// by circular gaps larger than gap_threshold.
OmegaClusters omega_atoms(const IFSystem& sys, Stream& stream, long n_backward,
                          const ParticleMeasure& mu0, double gap_threshold, int m_cap = 8);

struct InterleaveResult {
    bool ok = false;
    std::vector<Word> words_x, words_y;       // n words each, all of equal length
    std::vector<CirclePoint> chain;           // alternating images, 2n points
    double separation = 0.0;                  // min circular gap achieved
    int achieved_pairs = 0;
    std::string note;
};

// Builds equal-length words i_1..i_n, j_1..j_n such that the images
// g_{i_1}(x) < g_{j_1}(y) < ... < g_{i_n}(x) < g_{j_n}(y) alternate
// inside an arc shorter than half the circle with positive gaps. Uses
// a contraction word to funnel both points into a tiny arc and base
// generator powers to schedule the placements.
InterleaveResult interleave_search(const IFSystem& sys, CirclePoint x, CirclePoint y, int n,
                                   long budget);

}  // namespace ifs
