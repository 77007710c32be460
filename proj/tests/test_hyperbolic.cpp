#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "geoflow/hyperbolic.hpp"
#include "geoflow/numerics.hpp"

using namespace geoflow;
using hyp::BoundaryPoint;
using hyp::Complex;
using hyp::DiskPoint;
using hyp::Isometry;

namespace {

// Truncated-limit evaluation of the Busemann function: d(x, xi_T) - d(y, xi_T)
// with xi_T at hyperbolic distance T from the origin along the ray to xi.
// 1 - r^2 is carried analytically; the subtraction would otherwise lose the
// 1e-13 resolution the T = 30 truncation provides.
double busemann_truncated(const BoundaryPoint& xi, const DiskPoint& x, const DiskPoint& y,
                          double T) {
    double e = std::exp(-T);
    double r = (1.0 - e) / (1.0 + e);
    double one_minus_r2 = 4.0 * e / ((1.0 + e) * (1.0 + e));
    Complex w = r * xi.u;
    auto stable_d = [&](const DiskPoint& p) {
        double A = std::abs(1.0 - std::conj(w) * p.z);
        double B = std::abs(p.z - w);
        return 2.0 * std::log(A + B) - std::log(1.0 - std::norm(p.z)) - std::log(one_minus_r2);
    };
    return stable_d(x) - stable_d(y);
}

DiskPoint random_point(std::mt19937_64& rng, double rmax = 0.9) {
    std::uniform_real_distribution<double> ur(0.0, rmax), ua(0.0, num::kTwoPi);
    double r = ur(rng), t = ua(rng);
    return DiskPoint{Complex{r * std::cos(t), r * std::sin(t)}};
}

Isometry random_isometry(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> ua(0.0, num::kTwoPi);
    auto p = random_point(rng, 0.8);
    return Isometry::translation_to(p.z) * Isometry::rotation(ua(rng));
}

}  // namespace

TEST_CASE("apply: identity and inverse") {
    DiskPoint p{Complex{0.3, 0.0}};
    auto q = Isometry::identity()(p);
    CHECK(std::abs(q.z - p.z) == 0.0);

    std::mt19937_64 rng(12345);
    for (int i = 0; i < 50; ++i) {
        Isometry g = random_isometry(rng);
        DiskPoint x = random_point(rng);
        DiskPoint back = g.inverse()(g(x));
        CHECK(std::abs(back.z - x.z) < 1e-12);
    }
}

TEST_CASE("apply: Cayley conjugation of the half-plane shift") {
    // z -> z + 1 on the half-plane, moved to the disk; the disk image of i
    // must map to the disk image of 1 + i.
    Isometry g = Isometry::from_halfplane(1, 1, 0, 1);
    auto cayley = [](Complex z) { return (z - Complex{0, 1}) / (z + Complex{0, 1}); };
    DiskPoint from{cayley({0, 1})};
    DiskPoint expect{cayley({1, 1})};
    CHECK(std::abs(g(from).z - expect.z) < 1e-12);
}

TEST_CASE("distance: radius value against quadrature of the metric") {
    CHECK(hyp::distance(DiskPoint{{0, 0}}, DiskPoint{{0, 0}}) == 0.0);

    // integrate 2/(1 - t^2) dt from 0 to 0.5
    double oracle = num::integrate([](double t) { return 2.0 / (1.0 - t * t); }, 0.0, 0.5, 1e-13);
    double d = hyp::distance(DiskPoint{{0, 0}}, DiskPoint{{0.5, 0}});
    CHECK(d == doctest::Approx(oracle).epsilon(1e-10));
    CHECK(d == doctest::Approx(1.0986122886681098).epsilon(1e-12));
}

TEST_CASE("distance: isometry invariance") {
    std::mt19937_64 rng(777);
    for (int i = 0; i < 100; ++i) {
        Isometry g = random_isometry(rng);
        DiskPoint x = random_point(rng), y = random_point(rng);
        CHECK(hyp::distance(g(x), g(y)) ==
              doctest::Approx(hyp::distance(x, y)).epsilon(1e-10));
    }
}

TEST_CASE("distance: triangle inequality on sampled triples") {
    std::mt19937_64 rng(31337);
    for (int i = 0; i < 200; ++i) {
        DiskPoint x = random_point(rng), y = random_point(rng), z = random_point(rng);
        CHECK(hyp::distance(x, z) <= hyp::distance(x, y) + hyp::distance(y, z) + 1e-12);
    }
}

TEST_CASE("orbit_distance agrees with distance") {
    std::mt19937_64 rng(99);
    for (int i = 0; i < 50; ++i) {
        Isometry g = random_isometry(rng);
        CHECK(hyp::orbit_distance(g) ==
              doctest::Approx(hyp::distance(hyp::origin(), g(hyp::origin()))).epsilon(1e-10));
    }
}

TEST_CASE("busemann: closed form against the truncated limit") {
    BoundaryPoint xi = BoundaryPoint::from_angle(0.7);
    DiskPoint x{Complex{0.2, -0.1}};
    CHECK(hyp::busemann(xi, x, x) == 0.0);

    // B_xi(0, t xi) = log((1+t)/(1-t)) at t = 0.5: log 3
    double val = hyp::busemann(xi, DiskPoint{{0, 0}}, DiskPoint{0.5 * xi.u});
    double oracle = busemann_truncated(xi, DiskPoint{{0, 0}}, DiskPoint{0.5 * xi.u}, 30.0);
    CHECK(val == doctest::Approx(std::log(3.0)).epsilon(1e-12));
    CHECK(val == doctest::Approx(oracle).epsilon(1e-7));

    std::mt19937_64 rng(2024);
    for (int i = 0; i < 1000; ++i) {
        std::uniform_real_distribution<double> ua(0.0, num::kTwoPi);
        BoundaryPoint b = BoundaryPoint::from_angle(ua(rng));
        DiskPoint p = random_point(rng), q = random_point(rng);
        double closed = hyp::busemann(b, p, q);
        double truncated = busemann_truncated(b, p, q, 30.0);
        CHECK(std::abs(closed - truncated) < 1e-6);
    }
}

TEST_CASE("busemann: isometry invariance and cocycle") {
    std::mt19937_64 rng(5150);
    std::uniform_real_distribution<double> ua(0.0, num::kTwoPi);
    for (int i = 0; i < 200; ++i) {
        BoundaryPoint xi = BoundaryPoint::from_angle(ua(rng));
        DiskPoint x = random_point(rng), y = random_point(rng), z = random_point(rng);
        Isometry g = random_isometry(rng);
        CHECK(hyp::busemann(g(xi), g(x), g(y)) ==
              doctest::Approx(hyp::busemann(xi, x, y)).epsilon(1e-9));
        // cocycle
        double lhs = hyp::busemann(xi, x, z);
        double rhs = hyp::busemann(xi, x, y) + hyp::busemann(xi, y, z);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
        // |B| <= d
        CHECK(std::abs(hyp::busemann(xi, x, y)) <= hyp::distance(x, y) + 1e-9);
    }
}

TEST_CASE("busemann_orbit matches the generic closed form") {
    std::mt19937_64 rng(4242);
    std::uniform_real_distribution<double> ua(0.0, num::kTwoPi);
    for (int i = 0; i < 100; ++i) {
        Isometry g = random_isometry(rng);
        BoundaryPoint xi = BoundaryPoint::from_angle(ua(rng));
        double direct = hyp::busemann(xi, g(hyp::origin()), hyp::origin());
        CHECK(hyp::busemann_orbit(g, xi) == doctest::Approx(direct).epsilon(1e-10));
    }
}

TEST_CASE("classify: parabolic, hyperbolic, identity") {
    auto para = hyp::classify(Isometry::from_halfplane(1, 1, 0, 1));
    CHECK(para.kind == hyp::IsoKind::parabolic);
    REQUIRE(para.fixed.size() == 1);
    // fixed point is the Cayley image of infinity, i.e. 1
    CHECK(std::abs(para.fixed[0].u - Complex{1, 0}) < 1e-9);

    auto h = hyp::classify(Isometry::from_halfplane(2, 0, 0, 0.5));
    CHECK(h.kind == hyp::IsoKind::hyperbolic);
    REQUIRE(h.fixed.size() == 2);
    CHECK(h.translation_length == doctest::Approx(std::log(4.0)).epsilon(1e-12));
    // attracting point of z -> 4z is infinity, i.e. 1 after Cayley
    CHECK(std::abs(h.fixed[0].u - Complex{1, 0}) < 1e-9);
    CHECK(std::abs(h.fixed[1].u - Complex{-1, 0}) < 1e-9);

    // translation length against the distance oracle: d(i, 4i) in the half-plane
    // equals d(disk image of i, disk image of 4i); the axis passes through both.
    auto cayley = [](Complex z) { return (z - Complex{0, 1}) / (z + Complex{0, 1}); };
    double oracle = hyp::distance(DiskPoint{cayley({0, 1})}, DiskPoint{cayley({0, 4})});
    CHECK(h.translation_length == doctest::Approx(oracle).epsilon(1e-12));

    CHECK(hyp::classify(Isometry::identity()).kind == hyp::IsoKind::identity);
    CHECK(hyp::classify(Isometry::from_halfplane(1, 0, 0, 1)).kind == hyp::IsoKind::identity);
}

TEST_CASE("half-plane classification carried through conjugation") {
    CHECK(hyp::classify(Isometry::from_halfplane(2, 0, 0, 0.5)).translation_length ==
          doctest::Approx(2 * std::log(2.0)));
    CHECK_THROWS(Isometry::from_halfplane(2, 0, 0, 1));
}

TEST_CASE("normal form closure under composition and powers") {
    std::mt19937_64 rng(8);
    for (int i = 0; i < 50; ++i) {
        Isometry g = random_isometry(rng), h = random_isometry(rng);
        CHECK((g * h).det_error() < 1e-10);
        CHECK(g.pow(7).det_error() < 1e-10);
        CHECK(std::abs(g.pow(-3)(g.pow(3)(hyp::origin())).z) < 1e-10);
    }
}

TEST_CASE("boundary points stay on the circle") {
    std::mt19937_64 rng(64);
    std::uniform_real_distribution<double> ua(0.0, num::kTwoPi);
    for (int i = 0; i < 50; ++i) {
        Isometry g = random_isometry(rng);
        BoundaryPoint xi = BoundaryPoint::from_angle(ua(rng));
        CHECK(std::abs(std::abs(g(xi).u) - 1.0) <= 1e-12);
    }
}
