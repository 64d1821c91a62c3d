// Tests for RIF construction/validation, the fixture catalog, and
// torus singularities with their nontangential values.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "rifscope/bipoly.hpp"
#include "rifscope/errors.hpp"
#include "rifscope/fixtures.hpp"
#include "rifscope/rif.hpp"

using namespace rifscope;

namespace {

constexpr double kTau = 2.0 * std::numbers::pi;

Complex unit(double theta) { return {std::cos(theta), std::sin(theta)}; }

// Real coefficient matrix -> BiPoly; rows are powers of z1, columns of z2.
BiPoly real_poly(const std::vector<std::vector<double>>& rows) {
    const int m = static_cast<int>(rows.size()) - 1;
    const int n = static_cast<int>(rows.front().size()) - 1;
    BiPoly p(m, n);
    for (int i = 0; i <= m; ++i)
        for (int j = 0; j <= n; ++j) p.at(i, j) = Complex(rows[i][j], 0.0);
    return p;
}

bool same_poly(const BiPoly& a, const BiPoly& b, double tol) {
    if (a.bidegree() != b.bidegree()) return false;
    for (int i = 0; i <= a.deg1(); ++i)
        for (int j = 0; j <= a.deg2(); ++j)
            if (std::abs(a.coeff(i, j) - b.coeff(i, j)) > tol) return false;
    return true;
}

struct ExpectedSingularity {
    Complex tau1, tau2, lambda0;
};

// Order-independent matching of the computed singularity list against the
// expected set, with per-coordinate and per-value tolerances.
void check_singularity_set(const std::string& name,
                           const std::vector<Singularity>& got,
                           std::vector<ExpectedSingularity> want, double tol) {
    INFO("fixture ", name);
    REQUIRE(got.size() == want.size());
    for (const auto& s : got) {
        bool matched = false;
        for (std::size_t k = 0; k < want.size(); ++k) {
            if (std::abs(s.tau1 - want[k].tau1) < tol &&
                std::abs(s.tau2 - want[k].tau2) < tol) {
                INFO("matched tau = (", s.tau1, ", ", s.tau2, ")");
                CHECK(std::abs(s.lambda0 - want[k].lambda0) < tol);
                want.erase(want.begin() + static_cast<std::ptrdiff_t>(k));
                matched = true;
                break;
            }
        }
        INFO("unexpected singularity at (", s.tau1, ", ", s.tau2, ")");
        CHECK(matched);
    }
    CHECK(want.empty());
}

} // namespace

TEST_CASE("catalog carries the eight reference functions in order") {
    const std::vector<std::string> names = {
        "faveform", "smooth3",    "amy",         "mbm",
        "minimal-co", "glued-fave", "exceptional", "bickel-pascoe"};
    REQUIRE(fixture_names() == names);
    REQUIRE(catalog().size() == names.size());
    for (std::size_t k = 0; k < names.size(); ++k) {
        CHECK(catalog()[k].name == names[k]);
        CHECK(get_fixture(names[k]).name == names[k]);
    }
    CHECK_THROWS_AS(get_fixture("no-such-function"), UnknownFixture);
}

TEST_CASE("fixture bidegrees and structure") {
    const std::vector<std::pair<int, int>> degrees = {
        {1, 1}, {1, 1}, {2, 1}, {4, 2}, {2, 2}, {2, 2}, {3, 3}, {3, 1}};
    REQUIRE(catalog().size() == degrees.size());
    for (std::size_t k = 0; k < catalog().size(); ++k) {
        const Rif& f = catalog()[k];
        INFO("fixture ", f.name);
        CHECK(f.m() == degrees[k].first);
        CHECK(f.n() == degrees[k].second);
        CHECK(std::abs(std::abs(f.eta) - 1.0) < 1e-12);
        CHECK(f.M >= 0);
        CHECK(f.N >= 0);
        CHECK(same_poly(f.ptilde, f.p.reflect(), 0.0));
        CHECK(same_poly(f.p, f.p.trimmed(1e-12), 0.0));
    }
}

TEST_CASE("fixtures are inner: unit modulus at regular torus points") {
    std::mt19937_64 rng(0x5EED);
    std::uniform_real_distribution<double> ang(0.0, kTau);
    for (const Rif& f : catalog()) {
        INFO("fixture ", f.name);
        const double scale = f.p.max_abs();
        int checked = 0;
        for (int k = 0; k < 200 && checked < 50; ++k) {
            Complex z1 = unit(ang(rng)), z2 = unit(ang(rng));
            if (std::abs(f.p.eval(z1, z2)) < 1e-3 * scale) continue;
            CHECK(std::abs(std::abs(f.eval(z1, z2)) - 1.0) < 1e-9);
            ++checked;
        }
        CHECK(checked == 50);
    }
}

TEST_CASE("torus singularities and nontangential values") {
    const Complex one{1.0, 0.0}, mone{-1.0, 0.0};
    const double tol = 1e-6;

    check_singularity_set("faveform", singularities(get_fixture("faveform")),
                          {{one, one, one}}, tol);
    check_singularity_set("smooth3", singularities(get_fixture("smooth3")), {},
                          tol);
    check_singularity_set("amy", singularities(get_fixture("amy")),
                          {{one, one, one}}, tol);
    check_singularity_set("mbm", singularities(get_fixture("mbm")),
                          {{mone, one, mone}, {one, one, one}}, tol);
    check_singularity_set("minimal-co", singularities(get_fixture("minimal-co")),
                          {{one, one, mone}}, tol);
    check_singularity_set("glued-fave", singularities(get_fixture("glued-fave")),
                          {{one, one, one}}, tol);
    check_singularity_set("exceptional",
                          singularities(get_fixture("exceptional")),
                          {{one, one, one}}, tol);
    check_singularity_set("bickel-pascoe",
                          singularities(get_fixture("bickel-pascoe")),
                          {{one, mone, mone}, {mone, mone, one}}, tol);
}

TEST_CASE("singularity computation is deterministic") {
    auto a = singularities(get_fixture("mbm"));
    auto b = singularities(get_fixture("mbm"));
    REQUIRE(a.size() == b.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        CHECK(a[k].tau1 == b[k].tau1);
        CHECK(a[k].tau2 == b[k].tau2);
        CHECK(a[k].lambda0 == b[k].lambda0);
    }
}

TEST_CASE("nontangential value agrees with direct evaluation at regular points") {
    for (const char* name : {"faveform", "smooth3", "mbm", "bickel-pascoe"}) {
        const Rif f = get_fixture(name);
        INFO("fixture ", name);
        const Complex t1 = unit(1.0), t2 = unit(2.2);
        REQUIRE(std::abs(f.p.eval(t1, t2)) > 1e-3 * f.p.max_abs());
        const Complex direct = f.eval(t1, t2);
        const Complex limit = nontangential_value(f, t1, t2);
        CHECK(std::abs(limit - direct) < 1e-8);
    }
}

TEST_CASE("construction rejects denominators that vanish inside the bidisk") {
    // Reflection of 2 - z1 - z2: vanishes at the origin.
    BiPoly bad = real_poly({{0.0, -1.0}, {-1.0, 2.0}});
    CHECK_THROWS_AS(make_rif(bad, Complex(-1.0, 0.0)), NotSemiStable);
}

TEST_CASE("construction rejects denominators sharing a factor with the reflection") {
    // 2 (1 - z1)(1 - z2) equals its own reflection.
    BiPoly self = real_poly({{2.0, -2.0}, {-2.0, 2.0}});
    CHECK_THROWS_AS(make_rif(self, Complex(1.0, 0.0)), CommonFactor);
}

TEST_CASE("construction rejects padded and zero coefficient matrices") {
    BiPoly padded = real_poly({{2.0, -1.0}, {-1.0, 0.0}, {0.0, 0.0}});
    CHECK_THROWS_AS(make_rif(padded, Complex(-1.0, 0.0)), DegenerateInput);
    BiPoly zero(1, 1);
    CHECK_THROWS_AS(make_rif(zero, Complex(1.0, 0.0)), DegenerateInput);
}

TEST_CASE("construction rejects bad scalar parameters") {
    BiPoly fave = real_poly({{2.0, -1.0}, {-1.0, 0.0}});
    CHECK_THROWS_AS(make_rif(fave, Complex(0.5, 0.0)), InvalidInput);
    CHECK_THROWS_AS(make_rif(fave, Complex(-1.0, 0.0), -1, 0), InvalidInput);
    CHECK_THROWS_AS(make_rif(fave, Complex(-1.0, 0.0), 0, -2), InvalidInput);
}

TEST_CASE("JSON round trip preserves every fixture exactly") {
    for (const Rif& f : catalog()) {
        INFO("fixture ", f.name);
        const Rif back = fixture_from_json(fixture_to_json(f));
        CHECK(back.name == f.name);
        CHECK(back.M == f.M);
        CHECK(back.N == f.N);
        CHECK(std::abs(back.eta - f.eta) == 0.0);
        CHECK(same_poly(back.p, f.p, 0.0));
        CHECK(same_poly(back.ptilde, f.ptilde, 0.0));
    }
}

TEST_CASE("data files on disk match the built-in catalog") {
    for (const Rif& f : catalog()) {
        INFO("fixture ", f.name);
        const std::string path =
            std::string(RIFSCOPE_DATA_DIR) + "/fixtures/" + f.name + ".json";
        std::ifstream in(path);
        REQUIRE_MESSAGE(in.good(), "missing data file ", path);
        std::ostringstream buf;
        buf << in.rdbuf();
        const Rif disk = fixture_from_json(buf.str());
        CHECK(disk.name == f.name);
        CHECK(disk.M == f.M);
        CHECK(disk.N == f.N);
        CHECK(std::abs(disk.eta - f.eta) == 0.0);
        CHECK(same_poly(disk.p, f.p, 0.0));
    }
}
