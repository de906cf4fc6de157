#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <stdexcept>

#include "ifs/circle.hpp"
#include "ifs/rng.hpp"

using namespace ifs;

TEST_CASE("dist matches the normalized circle metric") {
    CHECK(dist(CirclePoint(0.1), CirclePoint(0.4)) == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(dist(CirclePoint(0.95), CirclePoint(0.05)) == doctest::Approx(0.1).epsilon(1e-12));
    Stream rng(42);
    for (int i = 0; i < 64; ++i) {
        CirclePoint x(rng.next_double());
        CHECK(dist(x, x) == 0.0);
    }
}

TEST_CASE("dist is a metric bounded by 1/2") {
    Stream rng(7);
    for (int i = 0; i < 200; ++i) {
        CirclePoint x(rng.next_double()), y(rng.next_double()), z(rng.next_double());
        CHECK(dist(x, y) == dist(y, x));
        CHECK(dist(x, y) <= 0.5);
        CHECK(dist(x, z) <= dist(x, y) + dist(y, z) + 1e-15);
    }
}

TEST_CASE("ordered_chain") {
    CHECK(ordered_chain(std::vector<CirclePoint>{0.1, 0.2, 0.3}));
    CHECK(ordered_chain(std::vector<CirclePoint>{0.9, 0.0, 0.1}));
    CHECK_FALSE(ordered_chain(std::vector<CirclePoint>{0.1, 0.8}));
    CHECK_THROWS_AS(ordered_chain(std::vector<CirclePoint>{0.1}), std::invalid_argument);

    SUBCASE("invariant under a common rotation") {
        Stream rng(11);
        for (int trial = 0; trial < 100; ++trial) {
            std::vector<CirclePoint> pts;
            double base = rng.next_double();
            int m = 2 + static_cast<int>(rng.next_u64() % 5);
            for (int i = 0; i < m; ++i) pts.push_back(CirclePoint(base + rng.next_double() * 0.6));
            bool before = ordered_chain(pts);
            double c = rng.next_double();
            std::vector<CirclePoint> rotated;
            for (auto p : pts) rotated.push_back(CirclePoint(p.position + c));
            CHECK(ordered_chain(rotated) == before);
        }
    }
}

TEST_CASE("arc_between") {
    Arc a = arc_between(CirclePoint(0.2), CirclePoint(0.5));
    CHECK(a.start.position == doctest::Approx(0.2));
    CHECK(a.length == doctest::Approx(0.3));

    Arc b = arc_between(CirclePoint(0.8), CirclePoint(0.1));
    CHECK(b.start.position == doctest::Approx(0.8));
    CHECK(b.length == doctest::Approx(0.3));

    Arc c = arc_between(CirclePoint(0.4), CirclePoint(0.4));
    CHECK(c.length == 0.0);

    SUBCASE("complementary lengths") {
        Stream rng(3);
        for (int i = 0; i < 100; ++i) {
            CirclePoint x(rng.next_double()), y(rng.next_double());
            if (x.position == y.position) continue;
            CHECK(arc_between(x, y).length + arc_between(y, x).length ==
                  doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("arc_contains") {
    CHECK(arc_contains(Arc(CirclePoint(0.9), 0.2), CirclePoint(0.05)));
    CHECK_FALSE(arc_contains(Arc(CirclePoint(0.1), 0.2), CirclePoint(0.5)));
    CHECK(arc_contains(Arc(CirclePoint(0.3), 0.0), CirclePoint(0.3)));
    CHECK(arc_contains(Arc(CirclePoint(0.25), 1.0), CirclePoint(0.99)));
}

TEST_CASE("Arc validates its length") {
    CHECK_THROWS_AS(Arc(CirclePoint(0.0), -0.5), std::invalid_argument);
    CHECK_THROWS_AS(Arc(CirclePoint(0.0), 1.5), std::invalid_argument);
    CHECK(Arc(CirclePoint(0.0), 1e-14).length >= 0.0);
}

TEST_CASE("wrap01 reduces exactly into [0, 1)") {
    CHECK(wrap01(1.0) == 0.0);
    CHECK(wrap01(-0.25) == doctest::Approx(0.75));
    CHECK(wrap01(3.75) == doctest::Approx(0.75));
    CHECK(wrap01(-1e-18) < 1.0);
    CHECK(wrap01(-1e-18) >= 0.0);
}
