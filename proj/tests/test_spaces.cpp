#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "fixpoint/errors.hpp"
#include "fixpoint/operators.hpp"
#include "fixpoint/spaces.hpp"
#include "fixpoint/tolerances.hpp"

using namespace fixpoint;

namespace {

// High-precision constants frozen ahead of time so the tests do not
// recompute the quantity under test with the code under test.
constexpr double kFourthRootOfTwo = 1.18920711500272106671749997056;  // 2^(1/4)
constexpr double kInvSqrtTwo = 0.707106781186547524400844362105;      // 2^(-1/2)
constexpr double kSqrtTwo = 1.41421356237309504880168872421;          // 2^(1/2)

bool close(double a, double b) { return tol::approx_eq(a, b); }

}  // namespace

TEST_CASE("norm tag rejects exponents outside (1, inf)") {
    CHECK_NOTHROW(NormTag(1.5));
    CHECK_NOTHROW(NormTag(2.0));
    CHECK_THROWS_AS(NormTag(1.0), InvalidInput);
    CHECK_THROWS_AS(NormTag(0.5), InvalidInput);
    CHECK_THROWS_AS(NormTag(-2.0), InvalidInput);
    CHECK_THROWS_AS(NormTag(std::numeric_limits<double>::infinity()), InvalidInput);
    CHECK_THROWS_AS(NormTag(std::nan("")), InvalidInput);
}

TEST_CASE("norm tag dual exponent satisfies 1/p + 1/q = 1") {
    for (double p : {1.5, 2.0, 3.0, 4.0}) {
        NormTag tag(p);
        CHECK(close(1.0 / p + 1.0 / tag.dual_exponent(), 1.0));
    }
    CHECK(NormTag(2.0).is_hilbert());
    CHECK_FALSE(NormTag(3.0).is_hilbert());
}

TEST_CASE("norm closed-form examples") {
    CHECK(norm({3.0, 4.0}, NormTag(2.0)) == 5.0);
    CHECK(norm({0.0, 0.0, 0.0}, NormTag(2.0)) == 0.0);
    CHECK(norm({0.0, 0.0, 0.0}, NormTag(3.5)) == 0.0);
    CHECK(close(norm({1.0, 1.0}, NormTag(4.0)), kFourthRootOfTwo));
}

TEST_CASE("norm rejects invalid points") {
    CHECK_THROWS_AS(norm(Point{}, NormTag(2.0)), InvalidInput);
    CHECK_THROWS_AS(norm({1.0, std::nan("")}, NormTag(2.0)), InvalidInput);
    CHECK_THROWS_AS(norm({std::numeric_limits<double>::infinity()}, NormTag(2.0)),
                    InvalidInput);
}

TEST_CASE("duality map is the identity for p = 2, bit-exact") {
    Point x{2.0, -1.0};
    DualVector j = duality_map(x, NormTag(2.0));
    REQUIRE(j.dim() == 2);
    CHECK(j[0] == 2.0);
    CHECK(j[1] == -1.0);

    // Awkward magnitudes must survive untouched as well.
    Point y{0.1, -3.7e-13, 5.00000000001e8};
    DualVector jy = duality_map(y, NormTag(2.0));
    for (std::size_t i = 0; i < y.dim(); ++i) CHECK(jy[i] == y[i]);
}

TEST_CASE("duality map sends zero to zero for every p") {
    for (double p : {1.5, 2.0, 3.0, 4.0}) {
        DualVector j = duality_map({0.0, 0.0}, NormTag(p));
        CHECK(j[0] == 0.0);
        CHECK(j[1] == 0.0);
    }
}

TEST_CASE("duality map p = 4 on (1,1) matches the frozen value") {
    DualVector j = duality_map({1.0, 1.0}, NormTag(4.0));
    REQUIRE(j.dim() == 2);
    CHECK(close(j[0], kInvSqrtTwo));
    CHECK(close(j[1], kInvSqrtTwo));

    // Both defining identities, against independently frozen values:
    // <x, j(x)> = ||x||^2 = sqrt(2) and ||j(x)||_{4/3} = ||x||_4 = 2^(1/4).
    CHECK(close(duality_pairing({1.0, 1.0}, {1.0, 1.0}, NormTag(4.0)), kSqrtTwo));
    const double q = NormTag(4.0).dual_exponent();
    const double jnorm = std::pow(std::pow(j[0], q) + std::pow(j[1], q), 1.0 / q);
    CHECK(close(jnorm, kFourthRootOfTwo));
}

TEST_CASE("duality pairing examples") {
    CHECK(duality_pairing({1.0, 2.0}, {3.0, 4.0}, NormTag(2.0)) == 11.0);
    CHECK(duality_pairing({0.0, 0.0}, {3.0, -4.0}, NormTag(2.0)) == 0.0);
    CHECK(duality_pairing({0.0, 0.0}, {3.0, -4.0}, NormTag(3.0)) == 0.0);
}

TEST_CASE("duality pairing rejects dimension mismatch") {
    CHECK_THROWS_AS(duality_pairing({1.0}, {1.0, 2.0}, NormTag(2.0)), InvalidInput);
}

TEST_CASE("duality identities hold over seeded samples for p in {1.5, 2, 3, 4}") {
    SampleGen gen(20240817);
    for (double p : {1.5, 2.0, 3.0, 4.0}) {
        NormTag tag(p);
        for (int rep = 0; rep < 64; ++rep) {
            Point x = gen.point(3, 10.0);
            const double n = norm(x, tag);

            // <x, j(x)> = ||x||^2.
            const double pairing = duality_pairing(x, x, tag);
            CHECK(std::abs(pairing - n * n) <= 1e-9 * (1.0 + n * n));

            // ||j(x)||_q = ||x||_p.
            DualVector j = duality_map(x, tag);
            const double q = tag.dual_exponent();
            double sum = 0.0;
            for (std::size_t i = 0; i < j.dim(); ++i)
                sum += std::pow(std::abs(j[i]), q);
            const double jnorm = std::pow(sum, 1.0 / q);
            CHECK(std::abs(jnorm - n) <= 1e-9 * (1.0 + n));

            // Homogeneity j(lambda x) = lambda j(x), including negative lambda.
            const double lambda = gen.uniform(-3.0, 3.0);
            Point lx = x;
            for (auto& c : lx.coords) c *= lambda;
            DualVector jl = duality_map(lx, tag);
            for (std::size_t i = 0; i < j.dim(); ++i) {
                const double want = lambda * j[i];
                CHECK(std::abs(jl[i] - want) <= 1e-12 * (1.0 + std::abs(want)));
            }
        }
    }
}

TEST_CASE("lerp endpoints are exact") {
    Point x{0.1, 0.2, 0.3};
    Point z{-7.0, 11.0, 1e-9};
    CHECK(lerp(x, z, 0.0) == x);
    CHECK(lerp(x, z, 1.0) == z);
    CHECK(lerp(x, x, 0.37) == x);  // z == x reproduces x for any t

    Point mid = lerp({0.0}, {1.0}, 0.5);
    CHECK(mid[0] == 0.5);
}

TEST_CASE("difference requires matching dimensions") {
    Point d = difference({3.0, 4.0}, {1.0, 1.0});
    CHECK(d == Point{2.0, 3.0});
    CHECK_THROWS_AS(difference({1.0}, {1.0, 2.0}), InvalidInput);
}

TEST_CASE("all_finite and to_string basics") {
    CHECK(all_finite({1.0, -2.0}));
    CHECK_FALSE(all_finite({1.0, std::numeric_limits<double>::infinity()}));
    CHECK(to_string({1.0, 2.0}).find(',') != std::string::npos);
}
