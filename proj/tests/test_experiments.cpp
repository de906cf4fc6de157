#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "fixtures.hpp"
#include "ifs/experiments.hpp"
#include "ifs/runner.hpp"

using namespace ifs;
namespace fx = fixtures;

namespace {

double cos1(double x) { return std::cos(2 * std::numbers::pi * x); }

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("birkhoff_average") {
    SUBCASE("constant integrand is exact") {
        Stream s(1);
        auto res = birkhoff_average(fx::demo_contractive(), CirclePoint(0.1),
                                    [](double) { return 2.5; }, 5000, s);
        CHECK(res.average == doctest::Approx(2.5).epsilon(1e-15));
        CHECK(res.batch_means_sigma == doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("golden rotation equidistributes the cosine") {
        IFSystem sys{{Homeo::rotation(fx::kGolden)}, {1.0}};
        Stream s(2);
        auto res = birkhoff_average(sys, CirclePoint(0.0), cos1, 100000, s);
        CHECK(std::abs(res.average) <= 1e-2);
    }
    SUBCASE("batch sigma reflects the spread") {
        Stream s(3);
        auto res = birkhoff_average(fx::demo_contractive(), CirclePoint(0.0), cos1, 20000, s);
        CHECK(res.batch_means_sigma > 0.0);
        CHECK(res.batch_means_sigma < 0.2);
    }
    SUBCASE("averages from several starts agree pairwise") {
        IFSystem sys = fx::demo_contractive();
        const std::vector<double> starts{0.0, 0.2, 0.4, 0.6, 0.8};
        int passing_seeds = 0;
        for (int seed = 0; seed < 10; ++seed) {
            std::vector<BirkhoffResult> rs;
            for (std::size_t k = 0; k < starts.size(); ++k) {
                Stream s = Stream(500 + seed).substream(k);
                rs.push_back(birkhoff_average(sys, CirclePoint(starts[k]), cos1, 50000, s));
            }
            bool all = true;
            for (std::size_t i = 0; i < rs.size(); ++i)
                for (std::size_t j = i + 1; j < rs.size(); ++j)
                    all = all && std::abs(rs[i].average - rs[j].average) <=
                                     3.0 * (rs[i].batch_means_sigma + rs[j].batch_means_sigma);
            if (all) ++passing_seeds;
        }
        CHECK(passing_seeds >= 9);
    }
}

TEST_CASE("eproperty_modulus") {
    const std::vector<double> deltas{1.0 / 8, 1.0 / 32, 1.0 / 128};
    GridFunction f = GridFunction::sample(4096, cos1);

    SUBCASE("rotation system matches the modulus of continuity of f") {
        Stream s(4);
        auto table = eproperty_modulus(fx::two_rotations(), f, deltas, 50, 64,
                                       EPropertyMethod::Grid, 0, s);
        for (std::size_t i = 0; i < deltas.size(); ++i) {
            double omega_f = 2.0 * std::sin(std::numbers::pi * deltas[i]);
            CHECK(table.moduli[i] == doctest::Approx(omega_f).epsilon(0.05));
        }
    }
    SUBCASE("constant function has zero modulus") {
        Stream s(5);
        GridFunction one = GridFunction::constant(1024, 1.0);
        auto table = eproperty_modulus(fx::demo_contractive(), one, deltas, 20, 16,
                                       EPropertyMethod::Grid, 0, s);
        for (double m : table.moduli) CHECK(m == doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("monte carlo method couples and is deterministic") {
        Stream s1(6), s2(6);
        auto t1 = eproperty_modulus(fx::demo_contractive(), f, deltas, 30, 8,
                                    EPropertyMethod::MonteCarlo, 512, s1);
        auto t2 = eproperty_modulus(fx::demo_contractive(), f, deltas, 30, 8,
                                    EPropertyMethod::MonteCarlo, 512, s2);
        CHECK(t1.moduli == t2.moduli);
        CHECK(t1.std_errors == t2.std_errors);
        // Thread count must not change the reduction.
        Stream s3(6);
        auto t4 = eproperty_modulus(fx::demo_contractive(), f, deltas, 30, 8,
                                    EPropertyMethod::MonteCarlo, 512, s3, 4);
        CHECK(t4.moduli == t1.moduli);
    }
    SUBCASE("coupled words: replaying the stream reproduces the table") {
        // One base point, one word: the modulus must equal the largest
        // coupled difference along that exact word.
        IFSystem sys = fx::demo_contractive();
        const double delta = 0.1;
        const int horizon = 3;
        Stream s(99);
        auto table = eproperty_modulus(sys, f, {delta}, horizon, 1, EPropertyMethod::MonteCarlo,
                                       1, s);

        Stream replay = Stream(99).substream(0);
        Word w = sample_word(sys, replay, horizon);
        double x0 = wrap01(0.11);  // first low-discrepancy base point
        CirclePoint xc(x0), xm(x0 - delta), xp(x0 + delta);
        double worst = 0.0;
        for (int t = 0; t <= horizon; ++t) {
            worst = std::max({worst, std::abs(f.interp(xm.position) - f.interp(xc.position)),
                              std::abs(f.interp(xp.position) - f.interp(xc.position))});
            if (t < horizon) {
                const Homeo& g = sys.gen(w.letters[static_cast<std::size_t>(t)]);
                xc = apply(g, xc);
                xm = apply(g, xm);
                xp = apply(g, xp);
            }
        }
        CHECK(table.moduli[0] == doctest::Approx(worst).epsilon(1e-12));
    }
    SUBCASE("deltas must decrease") {
        Stream s(7);
        CHECK_THROWS_AS(eproperty_modulus(fx::two_rotations(), f, {0.1, 0.2}, 10, 8,
                                          EPropertyMethod::Grid, 0, s),
                        std::invalid_argument);
    }
}

TEST_CASE("config parsing") {
    const char* text = R"({
        "system": {"generators": [{"type": "rotation", "angle": 0.25},
                                   {"type": "sine", "a": 0.0, "b": 0.5}],
                    "probs": [0.5, 0.5]},
        "experiment": "classify",
        "parameters": {"budget": 2000},
        "seed": 7,
        "output_dir": "unused"
    })";
    auto cfg = parse_config_text(text);
    CHECK(cfg.experiment == "classify");
    CHECK(cfg.seed == 7);
    CHECK(cfg.system.size() == 2);
    CHECK(cfg.system.gen(1).kind() == Homeo::Kind::Rotation);

    SUBCASE("missing seed is a config error naming the field") {
        const char* no_seed = R"({
            "system": {"generators": [{"type": "rotation", "angle": 0.25}], "probs": [1.0]},
            "experiment": "validate"
        })";
        try {
            parse_config_text(no_seed);
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(std::string(e.what()).find("seed") != std::string::npos);
        }
    }
    SUBCASE("unknown experiment is rejected") {
        const char* bad = R"({
            "system": {"generators": [{"type": "rotation", "angle": 0.25}], "probs": [1.0]},
            "experiment": "frobnicate",
            "seed": 1
        })";
        CHECK_THROWS_AS(parse_config_text(bad), ConfigError);
    }
    SUBCASE("homeo serialization round-trips") {
        for (const Homeo& h : {Homeo::rotation(0.375), Homeo::sine_perturbed(0.1, -0.25),
                               fx::pl_half_periodic()}) {
            Homeo back = homeo_from_json(homeo_to_json(h));
            for (int i = 0; i < 100; ++i) {
                CirclePoint x(i / 100.0);
                CHECK(dist(apply(h, x), apply(back, x)) <= 1e-12);
            }
        }
    }
}

TEST_CASE("run_config writes deterministic artifacts") {
    namespace fsys = std::filesystem;
    const char* text = R"({
        "system": {"generators": [{"type": "rotation", "angle": 0.41421356237309515},
                                   {"type": "rotation", "angle": 0.7320508075688772}],
                    "probs": [0.5, 0.5]},
        "experiment": "stability",
        "parameters": {"n": 32, "n_particles": 500,
                        "inits": [{"type": "dirac", "x": 0.0}, {"type": "uniform", "n": 500}]},
        "seed": 11
    })";
    auto cfg = parse_config_text(text);
    fsys::path base = fsys::temp_directory_path() / "ifs_runner_test";
    fsys::remove_all(base);

    auto out1 = run_config(cfg, (base / "a").string());
    CHECK(out1.exit_code == kExitOk);
    CHECK(fsys::exists(base / "a" / "summary.json"));
    CHECK(fsys::exists(base / "a" / "series.csv"));

    auto out2 = run_config(cfg, (base / "b").string());
    CHECK(slurp(base / "a" / "series.csv") == slurp(base / "b" / "series.csv"));
    CHECK(out1.summary["final_max_w1"] == out2.summary["final_max_w1"]);

    SUBCASE("classify run emits a witness replay file") {
        const char* ctext = R"({
            "system": {"generators": [{"type": "rotation", "angle": 0.6180339887498949},
                                       {"type": "sine", "a": 0.0, "b": 0.5}],
                        "probs": [0.5, 0.5]},
            "experiment": "classify",
            "parameters": {"budget": 10000, "tol": 0.001},
            "seed": 3
        })";
        auto ccfg = parse_config_text(ctext);
        auto out = run_config(ccfg, (base / "c").string());
        CHECK(out.exit_code == kExitOk);
        CHECK(out.summary["kind"] == "contractive");
        CHECK(fsys::exists(base / "c" / "witness.json"));
    }
    SUBCASE("invalid system yields a config exit") {
        auto bad = cfg;
        bad.system.probs = {0.9, 0.2};
        auto out = run_config(bad, (base / "d").string());
        CHECK(out.exit_code == kExitConfig);
    }
    SUBCASE("atom budget overflow yields a capacity exit") {
        auto big = cfg;
        big.parameters["n_particles"] = 6000000;
        big.parameters["inits"] = nlohmann::json::array(
            {{{"type", "dirac"}, {"x", 0.0}}, {{"type", "uniform"}, {"n", 6000000}}});
        auto out = run_config(big, (base / "e").string());
        CHECK(out.exit_code == kExitCapacity);
        CHECK(out.message.find("resampl") != std::string::npos);
    }
}
