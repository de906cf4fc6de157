#include "ifs/runner.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "ifs/experiments.hpp"
#include "ifs/parallel.hpp"

namespace ifs {

using nlohmann::json;

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

class CsvWriter {
public:
    explicit CsvWriter(std::string header) { rows_.push_back(std::move(header)); }
    template <typename... Cols>
    void row(const Cols&... cols) {
        std::string line;
        ((line += cell(cols) + ","), ...);
        if (!line.empty()) line.pop_back();
        rows_.push_back(std::move(line));
    }
    void write(const std::filesystem::path& path) const {
        std::ofstream out(path, std::ios::binary);
        for (const auto& r : rows_) out << r << "\n";
    }

private:
    static std::string cell(double v) { return fmt(v); }
    static std::string cell(long v) { return std::to_string(v); }
    static std::string cell(int v) { return std::to_string(v); }
    static std::string cell(std::size_t v) { return std::to_string(v); }
    static std::string cell(const std::string& s) { return s; }
    static std::string cell(const char* s) { return s; }
    std::vector<std::string> rows_;
};

void write_json(const std::filesystem::path& path, const json& j) {
    std::ofstream out(path, std::ios::binary);
    out << j.dump(2) << "\n";
}

json word_to_json(const Word& w) { return json(w.letters); }

struct Ctx {
    const ExperimentConfig& cfg;
    std::filesystem::path dir;
    int threads;
    json summary;
};

RunOutcome finish(Ctx& ctx, int code, const std::string& msg) {
    ctx.summary["version"] = kVersion;
    ctx.summary["experiment"] = ctx.cfg.experiment;
    ctx.summary["seed"] = ctx.cfg.seed;
    ctx.summary["parameters"] = ctx.cfg.parameters;
    ctx.summary["system"] = system_to_json(ctx.cfg.system);
    ctx.summary["exit_code"] = code;
    if (!msg.empty()) ctx.summary["message"] = msg;
    write_json(ctx.dir / "summary.json", ctx.summary);
    return {code, msg, ctx.summary};
}

RunOutcome run_validate(Ctx& ctx) {
    auto rep = validate_system(ctx.cfg.system);
    CsvWriter csv("generator,isometry,rotation_number_estimate");
    for (std::size_t i = 0; i < rep.generators.size(); ++i)
        csv.row(static_cast<long>(i + 1), rep.generators[i].isometry ? 1 : 0,
                rep.generators[i].rotation_number_estimate);
    csv.write(ctx.dir / "series.csv");
    ctx.summary["ok"] = rep.ok;
    ctx.summary["issues"] = rep.issues;
    return finish(ctx, rep.ok ? kExitOk : kExitConfig,
                  rep.ok ? "" : "system failed validation");
}

RunOutcome run_classify(Ctx& ctx) {
    const auto& p = ctx.cfg.parameters;
    int probe_arcs = p.value("probe_arcs", 64);
    long budget = p.value("budget", 10000L);
    double tol = p.value("tol", 1e-3);
    Arc witness_arc(CirclePoint(0.3), 0.1);
    if (p.contains("witness_arc"))
        witness_arc = Arc(CirclePoint(p["witness_arc"].value("start", 0.3)),
                          p["witness_arc"].value("length", 0.1));

    auto cls = classify(ctx.cfg.system, probe_arcs, budget, tol, witness_arc);
    const char* kind = cls.kind == ActionKind::Equicontinuous ? "equicontinuous"
                       : cls.kind == ActionKind::Contractive  ? "contractive"
                                                              : "inconclusive";
    ctx.summary["kind"] = kind;
    ctx.summary["isometry_flags"] = cls.isometry_flags;
    if (!cls.note.empty()) ctx.summary["note"] = cls.note;

    CsvWriter csv("step,letter,arc_start,arc_length");
    if (cls.witness) {
        const auto& w = *cls.witness;
        ctx.summary["witness"] = {{"arc_start", w.arc.start.position},
                                  {"arc_length", w.arc.length},
                                  {"final_length", w.final_length},
                                  {"word_length", w.word.size()}};
        json witness;
        witness["arc"] = {{"start", w.arc.start.position}, {"length", w.arc.length}};
        witness["final_length"] = w.final_length;
        witness["word"] = word_to_json(w.word);
        write_json(ctx.dir / "witness.json", witness);

        Arc a = w.arc;
        csv.row(0L, 0, a.start.position, a.length);
        long step = 0;
        for (int letter : w.word.letters) {
            a = image_arc(ctx.cfg.system.gen(letter), a);
            csv.row(++step, letter, a.start.position, a.length);
        }
    }
    csv.write(ctx.dir / "series.csv");
    return finish(ctx, cls.kind == ActionKind::Inconclusive ? kExitInconclusive : kExitOk,
                  cls.note);
}

RunOutcome run_stability(Ctx& ctx) {
    const auto& p = ctx.cfg.parameters;
    long n = p.value("n", 500L);
    long n_particles = p.value("n_particles", 100000L);
    std::vector<ParticleMeasure> inits;
    if (p.contains("inits")) {
        for (const auto& ij : p["inits"]) inits.push_back(measure_from_json(ij));
    } else {
        inits.push_back(ParticleMeasure::dirac(0.0));
        inits.push_back(ParticleMeasure::uniform_lattice(n_particles));
    }
    Stream stream(ctx.cfg.seed);
    auto rep = stability_test(ctx.cfg.system, inits, n, n_particles, stream, ctx.threads);

    CsvWriter csv("step,pair_i,pair_j,w1");
    for (const auto& e : rep.series) csv.row(e.step, e.i, e.j, e.w1);
    csv.write(ctx.dir / "series.csv");
    ctx.summary["final_max_w1"] = rep.final_max_w1;
    ctx.summary["checkpoints"] = rep.checkpoints;
    ctx.summary["n_inits"] = inits.size();
    return finish(ctx, kExitOk, "");
}

RunOutcome run_symmetry(Ctx& ctx) {
    const auto& p = ctx.cfg.parameters;
    int cap = p.value("denominator_cap", 64);
    double tol = p.value("tol", 1e-9);
    int samples = p.value("samples", 16);
    SymmetryOptions opts;
    opts.radius_resolution = p.value("radius_resolution", 1.0 / 64.0);
    opts.radius_budget = p.value("radius_budget", 30000L);

    auto rep = detect_symmetry(ctx.cfg.system, cap, tol, samples, opts);
    CsvWriter csv("sample_index,x,r_hat");
    for (std::size_t i = 0; i < rep.radius_samples.size(); ++i)
        csv.row(static_cast<long>(i), rep.radius_samples[i].first, rep.radius_samples[i].second);
    csv.write(ctx.dir / "series.csv");

    ctx.summary["M"] = rep.M;
    ctx.summary["p"] = rep.p;
    ctx.summary["q"] = rep.q;
    ctx.summary["r"] = rep.r;
    ctx.summary["r_hat"] = rep.r_hat;
    ctx.summary["commutation_residual"] = rep.commutation_residual;
    ctx.summary["success"] = rep.success;
    ctx.summary["low_confidence"] = rep.low_confidence;

    // Pushforward invariance of the estimated invariant measure under
    // the detected rotation.
    if (p.contains("invariance")) {
        long steps = p["invariance"].value("n_steps", 2000L);
        long parts = p["invariance"].value("n_particles", 10000L);
        Stream stream = Stream(ctx.cfg.seed).substream(17);
        auto inv = invariant_measure_estimate(ctx.cfg.system, steps, parts, stream);
        ParticleMeasure rotated = inv.measure;
        for (double& x : rotated.positions) x = wrap01(x + rep.r);
        ctx.summary["r_invariance_w1"] = wasserstein_circle(rotated, inv.measure);
        ctx.summary["invariant_convergence_w1"] = inv.convergence_w1;
    }
    return finish(ctx, rep.success ? kExitOk : kExitInconclusive,
                  rep.success ? "" : "symmetry detection inconclusive");
}

RunOutcome run_omega(Ctx& ctx) {
    const auto& p = ctx.cfg.parameters;
    long n_backward = p.value("n_backward", 300L);
    long n_atoms = p.value("n_atoms", 1000L);
    double gap = p.value("gap_threshold", 0.02);
    int m_cap = p.value("m_cap", 8);

    Stream stream(ctx.cfg.seed);
    auto res = omega_atoms(ctx.cfg.system, stream, n_backward,
                           ParticleMeasure::uniform_lattice(n_atoms), gap, m_cap);
    CsvWriter csv("cluster,center,mass,diameter");
    for (std::size_t c = 0; c < res.clusters.size(); ++c)
        csv.row(static_cast<long>(c), res.clusters[c].center, res.clusters[c].mass,
                res.clusters[c].diameter);
    csv.write(ctx.dir / "series.csv");
    write_json(ctx.dir / "witness.json", json{{"word", word_to_json(res.word)}});

    ctx.summary["m_hat"] = res.m_hat;
    ctx.summary["n_clusters"] = res.clusters.size();
    ctx.summary["converged"] = res.converged;
    json clusters = json::array();
    for (const auto& c : res.clusters)
        clusters.push_back({{"center", c.center}, {"mass", c.mass}, {"diameter", c.diameter}});
    ctx.summary["clusters"] = clusters;
    return finish(ctx, res.converged ? kExitOk : kExitInconclusive,
                  res.converged ? "" : "clusters not well separated; increase n_backward");
}

RunOutcome run_slln(Ctx& ctx) {
    const auto& p = ctx.cfg.parameters;
    long n = p.value("n", 200000L);
    int seeds = p.value("seeds", 10);
    std::vector<double> starts = p.value("starts", std::vector<double>{0.0, 0.2, 0.4, 0.6, 0.8});
    TestFunction phi = function_from_json(p.value("phi", json()));
    long mu_steps = 4000, mu_particles = 20000;
    if (p.contains("target")) {
        mu_steps = p["target"].value("n_steps", mu_steps);
        mu_particles = p["target"].value("n_particles", mu_particles);
    }

    Stream mu_stream = Stream(ctx.cfg.seed).substream(0xA11CE);
    auto inv = invariant_measure_estimate(ctx.cfg.system, mu_steps, mu_particles, mu_stream);
    double target = 0.0;
    for (std::size_t i = 0; i < inv.measure.size(); ++i)
        target += inv.measure.weights[i] * phi.fn(inv.measure.positions[i]);

    struct Row {
        int seed_idx, start_idx;
        double start, average, sigma;
        bool pass;
    };
    std::vector<Row> rows(static_cast<std::size_t>(seeds * starts.size()));
    parallel_for(static_cast<long>(rows.size()), ctx.threads, [&](long task) {
        int s = static_cast<int>(task) / static_cast<int>(starts.size());
        int k = static_cast<int>(task) % static_cast<int>(starts.size());
        Stream stream = Stream(ctx.cfg.seed, static_cast<std::uint64_t>(s + 1)).substream(
            static_cast<std::uint64_t>(k));
        auto res = birkhoff_average(ctx.cfg.system, CirclePoint(starts[static_cast<std::size_t>(k)]),
                                    phi.fn, n, stream);
        bool pass = std::abs(res.average - target) <= 3.0 * res.batch_means_sigma;
        rows[static_cast<std::size_t>(task)] =
            Row{s, k, starts[static_cast<std::size_t>(k)], res.average, res.batch_means_sigma, pass};
    });

    CsvWriter csv("seed_index,start_index,start,average,batch_sigma,pass");
    int seeds_passing = 0;
    for (int s = 0; s < seeds; ++s) {
        bool all = true;
        for (std::size_t k = 0; k < starts.size(); ++k) {
            const Row& r = rows[static_cast<std::size_t>(s) * starts.size() + k];
            all = all && r.pass;
            csv.row(r.seed_idx, r.start_idx, r.start, r.average, r.sigma, r.pass ? 1 : 0);
        }
        if (all) ++seeds_passing;
    }
    csv.write(ctx.dir / "series.csv");
    ctx.summary["target"] = target;
    ctx.summary["phi"] = phi.spec;
    ctx.summary["seeds_passing"] = seeds_passing;
    ctx.summary["seeds_total"] = seeds;
    ctx.summary["n"] = n;
    return finish(ctx, kExitOk, "");
}

RunOutcome run_eproperty(Ctx& ctx) {
    const auto& p = ctx.cfg.parameters;
    std::vector<double> deltas = p.value(
        "deltas", std::vector<double>{1.0 / 8, 1.0 / 16, 1.0 / 32, 1.0 / 64, 1.0 / 128, 1.0 / 256,
                                      1.0 / 512, 1.0 / 1024});
    int horizon = p.value("n_horizon", 200);
    int base_points = p.value("base_points", 64);
    long samples = p.value("samples", 4096L);
    int grid_n = p.value("grid_n", 4096);
    std::string method_name = p.value("method", "grid");
    EPropertyMethod method =
        method_name == "mc" ? EPropertyMethod::MonteCarlo : EPropertyMethod::Grid;
    TestFunction f = function_from_json(p.value("f", json()));
    GridFunction grid_f = GridFunction::sample(grid_n, f.fn);

    Stream stream(ctx.cfg.seed);
    auto table = eproperty_modulus(ctx.cfg.system, grid_f, deltas, horizon, base_points, method,
                                   samples, stream, ctx.threads);
    CsvWriter csv("delta,modulus,stderr");
    for (std::size_t i = 0; i < table.deltas.size(); ++i)
        csv.row(table.deltas[i], table.moduli[i], table.std_errors[i]);
    csv.write(ctx.dir / "series.csv");

    ctx.summary["method"] = table.method;
    ctx.summary["n_horizon"] = table.n_horizon;
    ctx.summary["base_points"] = table.base_points;
    ctx.summary["f"] = f.spec;
    ctx.summary["deltas"] = table.deltas;
    ctx.summary["moduli"] = table.moduli;
    ctx.summary["std_errors"] = table.std_errors;
    // The truncated sup over n underestimates the true modulus; the
    // horizon is recorded so tables are comparable.
    ctx.summary["sup_truncated_at"] = table.n_horizon;
    return finish(ctx, kExitOk, "");
}

}  // namespace

RunOutcome run_config(const ExperimentConfig& cfg, const std::string& output_dir, int threads) {
    std::filesystem::path dir = output_dir.empty() ? cfg.output_dir : output_dir;
    if (dir.empty()) return {kExitConfig, "no output directory given (config output_dir or --output)", {}};
    std::filesystem::create_directories(dir);
    Ctx ctx{cfg, dir, threads < 1 ? 1 : threads, json::object()};

    if (cfg.experiment != "validate") {
        auto rep = validate_system(cfg.system);
        if (!rep.ok) {
            std::string msg = "system failed validation:";
            for (const auto& i : rep.issues) msg += "\n  - " + i;
            return {kExitConfig, msg, {}};
        }
    }

    try {
        if (cfg.experiment == "validate") return run_validate(ctx);
        if (cfg.experiment == "classify") return run_classify(ctx);
        if (cfg.experiment == "stability") return run_stability(ctx);
        if (cfg.experiment == "symmetry") return run_symmetry(ctx);
        if (cfg.experiment == "omega") return run_omega(ctx);
        if (cfg.experiment == "slln") return run_slln(ctx);
        if (cfg.experiment == "eproperty") return run_eproperty(ctx);
    } catch (const CapacityError& e) {
        return {kExitCapacity, e.what(), {}};
    } catch (const ConfigError& e) {
        return {kExitConfig, e.what(), {}};
    } catch (const std::invalid_argument& e) {
        return {kExitConfig, e.what(), {}};
    }
    return {kExitConfig, "unknown experiment \"" + cfg.experiment + "\"", {}};
}

}  // namespace ifs
