// Tests for resultants, common zeros, local intersection multiplicities,
// and the full product-space zero count audit.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "rifscope/bipoly.hpp"
#include "rifscope/errors.hpp"
#include "rifscope/fixtures.hpp"
#include "rifscope/intersect.hpp"
#include "rifscope/rif.hpp"

using namespace rifscope;

namespace {

BiPoly real_poly(const std::vector<std::vector<double>>& rows) {
    const int m = static_cast<int>(rows.size()) - 1;
    const int n = static_cast<int>(rows.front().size()) - 1;
    BiPoly p(m, n);
    for (int i = 0; i <= m; ++i)
        for (int j = 0; j <= n; ++j) p.at(i, j) = Complex(rows[i][j], 0.0);
    return p;
}

int mult_at(const std::string& name, Complex t1, Complex t2,
            std::uint64_t seed = 0x5EED) {
    const Rif f = get_fixture(name);
    return intersection_multiplicity(f.p, f.ptilde, t1, t2, seed);
}

const Complex kOne{1.0, 0.0};
const Complex kMinusOne{-1.0, 0.0};

} // namespace

TEST_CASE("local intersection multiplicities at torus singularities") {
    CHECK(mult_at("faveform", kOne, kOne) == 2);
    CHECK(mult_at("amy", kOne, kOne) == 4);
    CHECK(mult_at("mbm", kOne, kOne) == 14);
    CHECK(mult_at("mbm", kMinusOne, kOne) == 2);
    CHECK(mult_at("minimal-co", kOne, kOne) == 6);
    CHECK(mult_at("glued-fave", kOne, kOne) == 4);
    CHECK(mult_at("exceptional", kOne, kOne) == 10);
    CHECK(mult_at("bickel-pascoe", kOne, kMinusOne) == 2);
    CHECK(mult_at("bickel-pascoe", kMinusOne, kMinusOne) == 4);
}

TEST_CASE("multiplicity is independent of the random shear seed") {
    for (std::uint64_t seed : {1ull, 2ull, 7ull, 1234567ull, 0x5EEDull}) {
        INFO("seed ", seed);
        CHECK(mult_at("mbm", kOne, kOne, seed) == 14);
        CHECK(mult_at("exceptional", kOne, kOne, seed) == 10);
        CHECK(mult_at("minimal-co", kOne, kOne, seed) == 6);
    }
}

TEST_CASE("multiplicity at a regular point is zero") {
    const Rif f = get_fixture("faveform");
    CHECK(intersection_multiplicity(f.p, f.ptilde, Complex(0.0, 1.0), kOne) == 0);
    CHECK(intersection_multiplicity(f.p, f.ptilde, kMinusOne, kMinusOne) == 0);
}

TEST_CASE("product-space zero count audit: totals and charts") {
    struct Row {
        const char* name;
        int finite, infinite, expected;
    };
    // expected = 2 m n for bidegree (m, n); infinite counts zeros on the
    // two charts at infinity plus the doubly-infinite corner.
    const Row rows[] = {
        {"faveform", 2, 0, 2},   {"smooth3", 2, 0, 2},
        {"amy", 4, 0, 4},        {"mbm", 16, 0, 16},
        {"minimal-co", 6, 2, 8}, {"glued-fave", 8, 0, 8},
        {"exceptional", 18, 0, 18}, {"bickel-pascoe", 6, 0, 6},
    };
    for (const Row& r : rows) {
        INFO("fixture ", r.name);
        const Rif f = get_fixture(r.name);
        const MultiplicityReport rep = bezout_audit(f);
        CHECK(rep.bezout_expected == r.expected);
        CHECK(rep.total == r.expected);
        int fin = 0;
        for (const auto& z : rep.finite) fin += z.multiplicity;
        CHECK(fin == r.finite);
        CHECK(rep.at_infinity == r.infinite);
    }
}

TEST_CASE("zeros on the torus carry even multiplicity") {
    for (const Rif& f : catalog()) {
        INFO("fixture ", f.name);
        for (const auto& z : bezout_audit(f).finite) {
            if (!z.on_torus) continue;
            INFO("zero at (", z.z1, ", ", z.z2, ")");
            CHECK(z.multiplicity % 2 == 0);
            CHECK(z.multiplicity >= 2);
        }
    }
}

TEST_CASE("common zeros at infinity sit where expected") {
    // (1-z1)(1-z2)(1-z1 z2) embedded: one simple zero on each chart at
    // infinity, none at the doubly-infinite corner.
    const Rif f = get_fixture("minimal-co");
    const MultiplicityReport rep = bezout_audit(f);
    REQUIRE(rep.infinite.size() == 2);
    bool saw_z1_inf = false, saw_z2_inf = false;
    for (const auto& z : rep.infinite) {
        CHECK(z.multiplicity == 1);
        if (z.z1_infinite && !z.z2_infinite) {
            saw_z1_inf = true;
            CHECK(std::abs(z.z2) < 1e-8);
        }
        if (z.z2_infinite && !z.z1_infinite) {
            saw_z2_inf = true;
            CHECK(std::abs(z.z1) < 1e-8);
        }
    }
    CHECK(saw_z1_inf);
    CHECK(saw_z2_inf);
}

TEST_CASE("off-torus common zeros come in reflection pairs") {
    // Zeros of (p, reflect p) off the torus pair up as z <-> 1/conj(z):
    // for the degree-(1,1) smooth case the pair is real with z1 z2 = 1.
    const Rif f = get_fixture("smooth3");
    auto zs = common_zeros_finite(f.p, f.ptilde);
    REQUIRE(zs.size() == 2);
    for (const auto& z : zs) {
        CHECK(!z.on_torus);
        CHECK(z.multiplicity == 1);
        CHECK(std::abs(z.z1 * z.z2 - kOne) < 1e-9);
        CHECK(std::abs(z.z1.imag()) < 1e-9);
    }
    // (3 - z1 - z2 ... ) gives z1 + 1/z1 = 3 on the diagonal slice:
    // roots (3 +- sqrt(5)) / 2.
    const double lo = (3.0 - std::sqrt(5.0)) / 2.0;
    const double hi = (3.0 + std::sqrt(5.0)) / 2.0;
    std::vector<double> got = {zs[0].z1.real(), zs[1].z1.real()};
    std::sort(got.begin(), got.end());
    CHECK(std::abs(got[0] - lo) < 1e-9);
    CHECK(std::abs(got[1] - hi) < 1e-9);
}

TEST_CASE("resultant eliminates the requested variable") {
    const Rif f = get_fixture("faveform");
    // Eliminating z1 leaves a polynomial in z2 vanishing at the projection
    // of the common zero (1, 1).
    UniPoly r2 = resultant(f.p, f.ptilde, 1);
    REQUIRE(upoly::degree(r2, 0.0) >= 1);
    CHECK(std::abs(upoly::eval(r2, kOne)) < 1e-10 * upoly::max_abs(r2));
    // Eliminating z2 is the transpose computation; same vanishing point.
    UniPoly r1 = resultant(f.p, f.ptilde, 2);
    REQUIRE(upoly::degree(r1, 0.0) >= 1);
    CHECK(std::abs(upoly::eval(r1, kOne)) < 1e-10 * upoly::max_abs(r1));
}

TEST_CASE("resultant of polynomials with a shared factor is flagged") {
    // (1 - z1 z2) times distinct cofactors: classical resultant vanishes
    // identically, which the evaluation gauge must detect.
    BiPoly shared = real_poly({{1.0, 0.0}, {0.0, -1.0}});   // 1 - z1 z2
    BiPoly a = real_poly({{2.0, -1.0}, {-1.0, 0.0}});
    BiPoly b = real_poly({{3.0, -1.0}, {-1.0, 0.0}});
    CHECK_THROWS_AS((void)resultant(shared * a, shared * b, 1),
                    IdenticallyZero);
    CHECK_THROWS_AS((void)resultant(shared * a, shared * b, 2),
                    IdenticallyZero);
}

TEST_CASE("degenerate resultant inputs are rejected") {
    BiPoly fave = real_poly({{2.0, -1.0}, {-1.0, 0.0}});
    BiPoly zero(1, 1);
    CHECK_THROWS_AS((void)resultant(fave, zero, 1), DegenerateInput);
    CHECK_THROWS_AS((void)resultant(zero, fave, 2), DegenerateInput);
}

TEST_CASE("audit rejects inputs with a common factor") {
    BiPoly shared = real_poly({{1.0, 0.0}, {0.0, -1.0}});
    BiPoly a = real_poly({{2.0, -1.0}, {-1.0, 0.0}});
    CHECK_THROWS_AS(
        (void)common_zeros_finite(shared * a, shared * a.reflect()),
        CommonFactor);
}

TEST_CASE("audit is deterministic for a fixed seed") {
    const Rif f = get_fixture("mbm");
    const MultiplicityReport a = bezout_audit(f, 17);
    const MultiplicityReport b = bezout_audit(f, 17);
    REQUIRE(a.finite.size() == b.finite.size());
    for (std::size_t k = 0; k < a.finite.size(); ++k) {
        CHECK(a.finite[k].z1 == b.finite[k].z1);
        CHECK(a.finite[k].z2 == b.finite[k].z2);
        CHECK(a.finite[k].multiplicity == b.finite[k].multiplicity);
    }
}
