#include "ifs/structure.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace ifs {

namespace {

constexpr double kGoldenFrac = 0.6180339887498949;

double irrationality_score(double rho, int max_q) {
    double best = 1.0;
    for (int q = 1; q <= max_q; ++q) {
        double p = std::round(rho * q);
        best = std::min(best, std::abs(rho - p / q));
    }
    return best;
}

}  // namespace

int pick_base_generator(const IFSystem& sys) {
    int best = 0;
    double best_score = -1.0;
    for (int i = 1; i <= sys.size(); ++i) {
        const Homeo& g = sys.gen(i);
        auto net = dense_orbit_check(g, CirclePoint(0.1), 0.01, 20000);
        if (!net.net_achieved) continue;
        double rho = rotation_number(g, 4096, CirclePoint(0.1));
        double score = irrationality_score(wrap01(rho), 20);
        if (score > best_score) {
            best_score = score;
            best = i;
        }
    }
    return best;
}

namespace {

struct Probe {
    bool found = false;
    int g_index = 0;  // 1-based
    Arc arc;          // arc I with |g(I)| <= alpha |I|
    double ratio = 1.0;
    double alpha = 1.0;
    double eps = 0.0;  // window I' = [start, start + |I| + 2 eps]
};

double image_length(const Homeo& g, double start, double len) {
    return g.lift(start + len) - g.lift(start);
}

Probe probe_contracting_arc(const IFSystem& sys, const SearchOptions& opts, int skip_index) {
    Probe probe;
    std::vector<int> candidates;
    if (opts.contracting_index > 0) {
        candidates.push_back(opts.contracting_index);
    } else {
        for (int i = 1; i <= sys.size(); ++i) {
            if (i == skip_index) continue;
            if (!is_isometry(sys.gen(i), 128, 1e-9)) candidates.push_back(i);
        }
        if (candidates.empty()) {
            // Fall back to every generator; the probe will simply fail
            // to find a shrinking arc for isometries.
            for (int i = 1; i <= sys.size(); ++i) candidates.push_back(i);
        }
    }
    for (int gi : candidates) {
        const Homeo& g = sys.gen(gi);
        for (double len : opts.probe_lengths) {
            for (int s = 0; s < opts.probe_starts; ++s) {
                double start = static_cast<double>(s) / opts.probe_starts;
                double ratio = image_length(g, start, len) / len;
                if (ratio < probe.ratio) {
                    probe.ratio = ratio;
                    probe.arc = Arc(CirclePoint(start), len);
                    probe.g_index = gi;
                }
            }
        }
    }
    if (probe.ratio >= 1.0 - 1e-9) return probe;

    probe.found = true;
    probe.alpha = probe.ratio + (1.0 - probe.ratio) * 0.2;
    const Homeo& g = sys.gen(probe.g_index);
    const double s0 = probe.arc.start.position;
    const double L = probe.arc.length;
    double lo = 0.0, hi = (1.0 - L) / 2.0 - 1e-9;
    for (int it = 0; it < 50; ++it) {
        double mid = 0.5 * (lo + hi);
        if (image_length(g, s0, L + 2.0 * mid) <= probe.alpha * L)
            lo = mid;
        else
            hi = mid;
    }
    probe.eps = lo;
    return probe;
}

Arc fold_image(const IFSystem& sys, const Word& w, Arc a) {
    for (int letter : w.letters) a = image_arc(sys.gen(letter), a);
    return a;
}

}  // namespace

ContractionSearchResult contraction_word_search(const IFSystem& sys, const Arc& J,
                                                double target_ratio, long budget,
                                                const SearchOptions& opts) {
    if (!(target_ratio > 0.0 && target_ratio < 1.0))
        throw std::invalid_argument("contraction_word_search: target_ratio must be in (0, 1)");
    if (!(J.length > 0.0 && J.length < 1.0))
        throw std::invalid_argument("contraction_word_search: arc length must be in (0, 1)");

    ContractionSearchResult res;
    res.initial_length = J.length;

    int base = opts.base_index > 0 ? opts.base_index : pick_base_generator(sys);
    if (base == 0)
        throw std::invalid_argument(
            "contraction_word_search: no generator passes the dense-orbit proxy");
    res.base_index = base;

    Probe probe = probe_contracting_arc(sys, opts, base);
    if (!probe.found) {
        res.note = "no shrinking arc found in the probe phase";
        res.final_length = J.length;
        return res;
    }
    res.probe_alpha = probe.alpha;
    res.probe_arc = probe.arc;
    res.probe_margin = probe.eps;
    res.contracting_index = probe.g_index;

    const Homeo& g1 = sys.gen(base);
    const Homeo& g = sys.gen(probe.g_index);
    const double window_len = probe.arc.length + 2.0 * probe.eps;
    const double window_start = probe.arc.start.position;

    Arc cur = J;
    while (cur.length / J.length > target_ratio &&
           static_cast<long>(res.word.size()) < budget) {
        const bool fits_window = cur.length <= window_len;
        const long cap = fits_window ? opts.placement_cap : opts.fallback_cap;

        Arc scan = cur;
        long best_n = -1;
        double best_ratio = 2.0;
        Arc best_arc = cur;
        bool pigeonhole = false;
        for (long nn = 0; nn <= cap; ++nn) {
            double img = image_length(g, scan.start.position, scan.length);
            double ratio = img / scan.length;
            bool contained = fits_window &&
                             wrap01(scan.start.position - window_start) <= window_len - scan.length;
            if (contained && ratio <= probe.alpha) {
                best_n = nn;
                best_ratio = ratio;
                best_arc = scan;
                pigeonhole = true;
                break;
            }
            if (ratio < best_ratio) {
                best_n = nn;
                best_ratio = ratio;
                best_arc = scan;
            }
            scan = image_arc(g1, scan);
        }
        if (best_n < 0 || best_ratio >= 1.0 - 1e-12) {
            res.note = "search stalled: no placement shrinks the current arc";
            break;
        }
        if (static_cast<long>(res.word.size()) + best_n + 1 > budget) {
            res.note = "budget exhausted";
            break;
        }
        res.word.append_run(base, best_n);
        res.word.append(probe.g_index);
        cur = image_arc(g, best_arc);
        res.rounds.push_back({best_n, probe.g_index, best_ratio, pigeonhole});
    }

    // Authoritative final length: fold image_arc letter by letter, the
    // same computation a replay performs.
    Arc refolded = fold_image(sys, res.word, J);
    res.final_length = refolded.length;
    res.achieved = !res.word.empty() && res.final_length <= target_ratio * J.length;
    if (!res.achieved && res.note.empty()) res.note = "budget exhausted";
    return res;
}

Classification classify(const IFSystem& sys, int probe_arcs, long shrink_budget, double tol,
                        const Arc& witness_arc) {
    Classification cls;
    for (const auto& g : sys.generators) cls.isometry_flags.push_back(is_isometry(g, 128, 1e-9));

    int base = pick_base_generator(sys);
    if (base == 0)
        throw std::invalid_argument("classify: no generator passes the dense-orbit proxy");

    if (std::all_of(cls.isometry_flags.begin(), cls.isometry_flags.end(),
                    [](bool b) { return b; })) {
        cls.kind = ActionKind::Equicontinuous;
        cls.note = "all generators are isometries on every probed arc";
        return cls;
    }

    SearchOptions opts;
    opts.probe_starts = probe_arcs;
    opts.base_index = base;
    auto search = contraction_word_search(sys, witness_arc, tol, shrink_budget, opts);
    ClassificationWitness w{witness_arc, search.word, search.final_length};
    if (search.achieved) {
        cls.kind = ActionKind::Contractive;
        cls.witness = std::move(w);
    } else {
        cls.kind = ActionKind::Inconclusive;
        cls.witness = std::move(w);
        cls.note = "non-isometric generator found but the contraction search did not reach the "
                   "target within budget: " + search.note;
    }
    return cls;
}

double contractible_radius(const IFSystem& sys, CirclePoint x, double resolution, long budget) {
    if (!(resolution > 0.0 && resolution < 1.0))
        throw std::invalid_argument("contractible_radius: resolution must be in (0, 1)");
    int base = pick_base_generator(sys);
    SearchOptions opts;
    opts.base_index = base;
    opts.placement_cap = 4096;
    auto shrinks = [&](double beta) {
        double len = std::min(beta, 1.0 - 1e-9);
        auto r = contraction_word_search(sys, Arc(x, len), 1e-2, budget, opts);
        return r.achieved;
    };
    double lo = 0.0, hi = 1.0;
    while (hi - lo > resolution) {
        double mid = 0.5 * (lo + hi);
        if (shrinks(mid))
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

SymmetryReport detect_symmetry(const IFSystem& sys, int denominator_cap, double tol, int samples,
                               const SymmetryOptions& opts) {
    if (samples < 1) throw std::invalid_argument("detect_symmetry: samples must be >= 1");
    SymmetryReport rep;
    const double snap_tol = opts.snap_tol > 0.0 ? opts.snap_tol : 2.0 * opts.radius_resolution;

    std::vector<double> radii;
    for (int i = 0; i < samples; ++i) {
        double x = wrap01(0.05 + i * kGoldenFrac);
        double r = contractible_radius(sys, CirclePoint(x), opts.radius_resolution,
                                       opts.radius_budget);
        rep.radius_samples.emplace_back(x, r);
        radii.push_back(r);
    }
    std::sort(radii.begin(), radii.end());
    rep.r_hat = radii[radii.size() / 2];

    auto residual_for = [&](double angle) {
        const Homeo R = Homeo::rotation(angle);
        double worst = 0.0;
        for (const auto& g : sys.generators) {
            for (int j = 0; j < opts.grid; ++j) {
                CirclePoint p(static_cast<double>(j) / opts.grid);
                worst = std::max(worst, dist(apply(g, apply(R, p)), apply(R, apply(g, p))));
            }
        }
        return worst;
    };

    if (rep.r_hat >= 1.0 - snap_tol - opts.radius_resolution) {
        rep.M = 1;
        rep.p = rep.q = 1;
        rep.r = 1.0;
        rep.commutation_residual = 0.0;  // the identity commutes with everything
        rep.success = true;
        return rep;
    }

    // Smallest denominator within the snap window; the radius estimate
    // brackets the true rational, so the simplest consistent fraction
    // is the right one.
    int found_q = 0, found_p = 0;
    for (int q = 1; q <= denominator_cap && found_q == 0; ++q) {
        int p = static_cast<int>(std::round(rep.r_hat * q));
        if (p < 1 || p > q) continue;
        if (std::abs(rep.r_hat - static_cast<double>(p) / q) <= snap_tol) {
            found_p = p;
            found_q = q;
        }
    }
    if (found_q == 0) {
        rep.M = 1;
        rep.p = rep.q = 1;
        rep.r = 1.0;
        rep.low_confidence = true;
        rep.commutation_residual = 0.0;
        rep.success = false;
        return rep;
    }
    int g = std::gcd(found_p, found_q);
    rep.p = found_p / g;
    rep.q = found_q / g;
    rep.M = rep.q;
    rep.r = static_cast<double>(rep.p) / rep.q;
    rep.commutation_residual = residual_for(rep.r);
    rep.success = rep.commutation_residual <= tol;
    return rep;
}

OmegaClusters omega_atoms(const IFSystem& sys, Stream& stream, long n_backward,
                          const ParticleMeasure& mu0, double gap_threshold, int m_cap) {
    if (n_backward < 1) throw std::invalid_argument("omega_atoms: n_backward must be >= 1");
    OmegaClusters out;
    out.word = sample_word(sys, stream, n_backward);
    ParticleMeasure om = omega_measure(sys, out.word, mu0);

    const std::size_t m = om.size();
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return om.positions[a] < om.positions[b]; });

    std::vector<std::size_t> cuts;  // gap after sorted index i exceeds threshold
    double max_gap = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        double here = om.positions[order[i]];
        double next = (i + 1 < m) ? om.positions[order[i + 1]] : om.positions[order[0]] + 1.0;
        double gap = next - here;
        max_gap = std::max(max_gap, gap);
        if (gap > gap_threshold) cuts.push_back(i);
    }

    auto make_cluster = [&](std::size_t first, std::size_t count) {
        OmegaCluster c;
        double sx = 0.0, sy = 0.0;
        double start = om.positions[order[first % m]];
        double end = start;
        for (std::size_t k = 0; k < count; ++k) {
            std::size_t idx = order[(first + k) % m];
            double w = om.weights[idx];
            c.mass += w;
            sx += w * std::cos(2.0 * std::numbers::pi * om.positions[idx]);
            sy += w * std::sin(2.0 * std::numbers::pi * om.positions[idx]);
            end = om.positions[idx];
        }
        c.center = wrap01(std::atan2(sy, sx) / (2.0 * std::numbers::pi));
        c.diameter = count > 1 ? wrap01(end - start) : 0.0;
        return c;
    };

    if (cuts.empty()) {
        OmegaCluster c = make_cluster(0, m);
        c.diameter = m > 1 ? 1.0 - max_gap : 0.0;
        out.clusters.push_back(c);
    } else {
        for (std::size_t c = 0; c < cuts.size(); ++c) {
            std::size_t first = (cuts[c] + 1) % m;
            std::size_t last_cut = cuts[(c + 1) % cuts.size()];
            std::size_t count = (last_cut + m - first) % m + 1;
            out.clusters.push_back(make_cluster(first, count));
        }
    }
    std::sort(out.clusters.begin(), out.clusters.end(),
              [](const OmegaCluster& a, const OmegaCluster& b) { return a.mass > b.mass; });

    const double mass_floor = 1.0 / (2.0 * m_cap);
    out.m_hat = static_cast<int>(std::count_if(out.clusters.begin(), out.clusters.end(),
                                               [&](const OmegaCluster& c) { return c.mass >= mass_floor; }));
    out.converged = std::all_of(out.clusters.begin(), out.clusters.end(), [&](const OmegaCluster& c) {
        return c.diameter <= gap_threshold / 4.0;
    });
    return out;
}

namespace {

// Positions of g1^j(p) for j = 0..cap.
std::vector<double> power_orbit(const Homeo& g1, double p, long cap) {
    std::vector<double> orbit(static_cast<std::size_t>(cap + 1));
    orbit[0] = wrap01(p);
    for (long j = 1; j <= cap; ++j) orbit[static_cast<std::size_t>(j)] = wrap01(g1.lift(orbit[static_cast<std::size_t>(j - 1)]));
    return orbit;
}

}  // namespace

InterleaveResult interleave_search(const IFSystem& sys, CirclePoint x, CirclePoint y, int n,
                                   long budget) {
    if (n < 1) throw std::invalid_argument("interleave_search: n must be >= 1");
    InterleaveResult out;

    int base = pick_base_generator(sys);
    if (base == 0) {
        out.note = "no generator passes the dense-orbit proxy";
        return out;
    }
    const Homeo& g1 = sys.gen(base);

    const int slots = 2 * n;
    // Tightest slot window the layout below can ever request; the
    // funnel target is derived from it so the funnelled arc always
    // fits.
    const double window_min = (0.15 / (slots - 1)) / 8.0;

    // Contraction word u funnelling a moderately long arc into one of
    // width well below the slot window.
    SearchOptions opts;
    opts.base_index = base;
    const long u_budget = std::min(budget / 2, 20000L);
    ContractionSearchResult u;
    Arc funnel;
    bool have_u = false;
    for (double arc_len : {0.4, 0.2, 0.1}) {
        Arc A(CirclePoint(0.55), arc_len);
        double target = std::min(0.25 * window_min, 0.05) / arc_len;
        auto attempt = contraction_word_search(sys, A, target, u_budget, opts);
        if (attempt.achieved) {
            u = attempt;
            funnel = A;
            have_u = true;
            break;
        }
    }
    if (!have_u) {
        out.note = "no contraction word found within budget";
        return out;
    }
    Arc funneled = funnel;
    for (int letter : u.word.letters) funneled = image_arc(sys.gen(letter), funneled);
    const double eta = funneled.length;
    const double ref_mid = wrap01(funneled.start.position + 0.5 * eta);

    // Slot layout: because the final placement power is pinned to each
    // slot, the middle placement must absorb the slot offsets, so the
    // whole chain span has to sit well inside the funnel's interior
    // width, with slack left over for the scheduler.
    const double interior = funnel.length - 2.0 * (0.05 * funnel.length + eta);
    const double span = std::clamp(0.7 * interior, 0.1, 0.3);
    const double slot_gap = span / (slots - 1);
    const double window = std::max(slot_gap / 8.0, 1.25 * eta);
    const double slot_base = 0.03;

    const long cap_entry = 4096, cap_place = 4096;
    const long cap_mid = cap_entry + cap_place + 512;

    // Entry powers: rotate each start point strictly inside the funnel
    // arc. Several candidates per point keep the length-equalization
    // below from being pinned to one fixed offset.
    const double margin = 0.05 * funnel.length + eta;
    auto entry_powers = [&](CirclePoint p) {
        std::vector<long> cands;
        CirclePoint q = p;
        for (long a = 0; a <= cap_entry && cands.size() < 32; ++a) {
            double off = wrap01(q.position - funnel.start.position);
            if (off >= margin && off <= funnel.length - margin) cands.push_back(a);
            q = apply(g1, q);
        }
        return cands;
    };
    std::vector<long> a_x = entry_powers(x), a_y = entry_powers(y);
    if (a_x.empty() || a_y.empty()) {
        out.note = "entry placement failed within cap";
        return out;
    }

    std::vector<double> mid_orbit = power_orbit(g1, ref_mid, cap_mid);

    // Placement power must return the funneled points to the interior
    // of the funnel arc; the reference midpoint stands in for both
    // points, which differ from it by at most eta.
    std::vector<char> b_ok(static_cast<std::size_t>(cap_mid + 1), 0);
    for (long b = 0; b <= cap_mid; ++b) {
        double off = wrap01(mid_orbit[static_cast<std::size_t>(b)] - funnel.start.position);
        b_ok[static_cast<std::size_t>(b)] = (off >= margin && off <= funnel.length - margin) ? 1 : 0;
    }

    // Candidate final powers steering the reference midpoint into each
    // slot window.
    std::vector<std::vector<long>> slot_cands(static_cast<std::size_t>(slots));
    for (int k = 0; k < slots; ++k) {
        double target = slot_base + k * slot_gap;
        for (long c = 0; c <= cap_place && slot_cands[static_cast<std::size_t>(k)].size() < 48; ++c) {
            if (dist(CirclePoint(mid_orbit[static_cast<std::size_t>(c)]), CirclePoint(target)) <=
                window - eta)
                slot_cands[static_cast<std::size_t>(k)].push_back(c);
        }
        if (slot_cands[static_cast<std::size_t>(k)].empty()) {
            out.note = "no rotation power reaches slot " + std::to_string(k) + " within cap";
            return out;
        }
    }

    // Choose a common letter budget R = a + b + c for every word; the
    // per-slot (a, b, c) splits are otherwise free.
    long r_min = 0;
    for (int k = 0; k < slots; ++k) {
        const auto& as = (k % 2 == 0) ? a_x : a_y;
        r_min = std::max(r_min, as.front() + slot_cands[static_cast<std::size_t>(k)].front());
    }
    std::vector<long> chosen_a(static_cast<std::size_t>(slots), -1),
        chosen_b(static_cast<std::size_t>(slots), -1),
        chosen_c(static_cast<std::size_t>(slots), -1);
    bool scheduled = false;
    for (long R = r_min; R <= r_min + 2048 && !scheduled; ++R) {
        bool all_ok = true;
        for (int k = 0; k < slots && all_ok; ++k) {
            const auto& as = (k % 2 == 0) ? a_x : a_y;
            bool found = false;
            for (long a : as) {
                for (long c : slot_cands[static_cast<std::size_t>(k)]) {
                    long b = R - a - c;
                    if (b >= 0 && b <= cap_mid && b_ok[static_cast<std::size_t>(b)]) {
                        chosen_a[static_cast<std::size_t>(k)] = a;
                        chosen_b[static_cast<std::size_t>(k)] = b;
                        chosen_c[static_cast<std::size_t>(k)] = c;
                        found = true;
                        break;
                    }
                }
                if (found) break;
            }
            all_ok = found;
        }
        scheduled = all_ok;
    }
    if (!scheduled) {
        out.note = "could not equalize word lengths across slots";
        return out;
    }

    for (int k = 0; k < slots; ++k) {
        Word w;
        w.append_run(base, chosen_a[static_cast<std::size_t>(k)]);
        w.letters.insert(w.letters.end(), u.word.letters.begin(), u.word.letters.end());
        w.append_run(base, chosen_b[static_cast<std::size_t>(k)]);
        w.letters.insert(w.letters.end(), u.word.letters.begin(), u.word.letters.end());
        w.append_run(base, chosen_c[static_cast<std::size_t>(k)]);
        CirclePoint p = compose_apply(sys.generators, w, (k % 2 == 0) ? x : y,
                                      ComposeOrder::Forward);
        out.chain.push_back(p);
        if (k % 2 == 0)
            out.words_x.push_back(std::move(w));
        else
            out.words_y.push_back(std::move(w));
    }

    double min_gap = 1.0;
    for (int k = 0; k + 1 < slots; ++k)
        min_gap = std::min(min_gap, wrap01(out.chain[static_cast<std::size_t>(k + 1)].position -
                                           out.chain[static_cast<std::size_t>(k)].position));
    out.separation = min_gap;
    out.ok = ordered_chain(out.chain);
    out.achieved_pairs = out.ok ? n : 0;
    if (!out.ok) out.note = "assembled chain failed the ordering check";
    return out;
}

}  // namespace ifs
