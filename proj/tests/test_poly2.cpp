#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "rifscope/bipoly.hpp"
#include "rifscope/errors.hpp"

using namespace rifscope;

namespace {

std::mt19937_64 rng(0x5EED);

Complex rand_coeff() {
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    return {d(rng), d(rng)};
}

Complex rand_unimodular() {
    std::uniform_real_distribution<double> d(0.0, 2.0 * std::numbers::pi);
    double th = d(rng);
    return {std::cos(th), std::sin(th)};
}

BiPoly rand_poly(int m, int n) {
    std::vector<std::vector<Complex>> rows(m + 1, std::vector<Complex>(n + 1));
    for (auto& r : rows)
        for (auto& c : r) c = rand_coeff();
    return BiPoly(rows);
}

const BiPoly faveform({{Complex(0.0), Complex(-1.0)}, {Complex(-1.0), Complex(2.0)}});

} // namespace

TEST_CASE("coefficient access and declared bidegree") {
    BiPoly p = BiPoly::monomial({2.0, 0.0}, 1, 1) + BiPoly::monomial({-1.0, 0.0}, 1, 0) +
               BiPoly::monomial({-1.0, 0.0}, 0, 1);
    CHECK(p.deg1() == 1);
    CHECK(p.deg2() == 1);
    CHECK(p.coeff(1, 1) == Complex{2.0, 0.0});
    CHECK(p.coeff(0, 0) == Complex{0.0, 0.0});
    CHECK(p.coeff(5, 7) == Complex{0.0, 0.0}); // out of range reads as zero
    CHECK(p.equals(faveform, 0.0));
}

TEST_CASE("evaluation matches slices") {
    for (int trial = 0; trial < 50; ++trial) {
        BiPoly p = rand_poly(3, 4);
        Complex z1 = rand_coeff(), z2 = rand_coeff();
        Complex direct = p.eval(z1, z2);
        CHECK(std::abs(upoly::eval(p.slice(2, z2), z1) - direct) < 1e-12);
        CHECK(std::abs(upoly::eval(p.slice(1, z1), z2) - direct) < 1e-12);
    }
}

TEST_CASE("reflection is an involution") {
    for (int trial = 0; trial < 1000; ++trial) {
        BiPoly p = rand_poly(1 + trial % 4, 1 + (trial / 4) % 4);
        CHECK(p.reflect().reflect().equals(p, 0.0));
    }
}

TEST_CASE("reflection preserves modulus on the torus") {
    for (int trial = 0; trial < 100; ++trial) {
        BiPoly p = rand_poly(2, 3);
        BiPoly q = p.reflect();
        Complex z1 = rand_unimodular(), z2 = rand_unimodular();
        double a = std::abs(p.eval(z1, z2));
        double b = std::abs(q.eval(z1, z2));
        CHECK(std::abs(a - b) < 1e-10 * (1.0 + a));
    }
}

TEST_CASE("shear substitutes z2 <- z2 + s*z1") {
    for (int trial = 0; trial < 30; ++trial) {
        BiPoly p = rand_poly(3, 3);
        Complex s = rand_coeff();
        BiPoly q = p.shear2(s);
        Complex z1 = rand_coeff(), z2 = rand_coeff();
        CHECK(std::abs(q.eval(z1, z2) - p.eval(z1, z2 + s * z1)) < 1e-10);
    }
}

TEST_CASE("reverse flips a variable against its declared degree") {
    for (int trial = 0; trial < 30; ++trial) {
        BiPoly p = rand_poly(3, 2);
        Complex z1 = rand_coeff() + Complex{1.5, 0.0}; // keep away from 0
        Complex z2 = rand_coeff() + Complex{1.5, 0.0};
        Complex lhs = p.reverse(1).eval(z1, z2);
        Complex rhs = std::pow(z1, 3) * p.eval(1.0 / z1, z2);
        CHECK(std::abs(lhs - rhs) < 1e-9 * (1.0 + std::abs(rhs)));
        lhs = p.reverse(2).eval(z1, z2);
        rhs = std::pow(z2, 2) * p.eval(z1, 1.0 / z2);
        CHECK(std::abs(lhs - rhs) < 1e-9 * (1.0 + std::abs(rhs)));
    }
}

TEST_CASE("line restriction agrees with direct evaluation") {
    for (int trial = 0; trial < 30; ++trial) {
        BiPoly p = rand_poly(2, 3);
        Complex x1 = rand_coeff(), x2 = rand_coeff(), y1 = rand_coeff(), y2 = rand_coeff();
        UniPoly line = p.restrict_line(x1, x2, y1, y2);
        Complex w = rand_coeff();
        Complex expect = p.eval(x1 + y1 * w, x2 + y2 * w);
        CHECK(std::abs(upoly::eval(line, w) - expect) < 1e-10);
    }
}

TEST_CASE("rotation substitutes scaled variables") {
    BiPoly p = rand_poly(3, 3);
    Complex a1 = rand_unimodular(), a2 = rand_unimodular();
    BiPoly q = p.rotate(a1, a2);
    Complex z1 = rand_coeff(), z2 = rand_coeff();
    CHECK(std::abs(q.eval(z1, z2) - p.eval(a1 * z1, a2 * z2)) < 1e-12);
}

TEST_CASE("partial derivatives") {
    BiPoly p = rand_poly(3, 3);
    Complex z1 = rand_coeff(), z2 = rand_coeff();
    double h = 1e-6;
    Complex fd1 = (p.eval(z1 + h, z2) - p.eval(z1 - h, z2)) / (2.0 * h);
    Complex fd2 = (p.eval(z1, z2 + h) - p.eval(z1, z2 - h)) / (2.0 * h);
    CHECK(std::abs(p.partial(1).eval(z1, z2) - fd1) < 1e-7);
    CHECK(std::abs(p.partial(2).eval(z1, z2) - fd2) < 1e-7);
}

TEST_CASE("transpose swaps the variables") {
    BiPoly p = rand_poly(2, 4);
    Complex z1 = rand_coeff(), z2 = rand_coeff();
    CHECK(p.transpose().deg1() == 4);
    CHECK(std::abs(p.transpose().eval(z2, z1) - p.eval(z1, z2)) < 1e-13);
}

TEST_CASE("json round trip") {
    BiPoly p = rand_poly(2, 3);
    BiPoly q = BiPoly::from_json(p.to_json());
    CHECK(q.equals(p, 1e-15));
    CHECK_THROWS_AS(BiPoly::from_json("{\"bidegree\": [1]}"), InvalidInput);
    CHECK_THROWS_AS(BiPoly::from_json("not json at all"), InvalidInput);
}

TEST_CASE("trim and pad round trip") {
    BiPoly p = faveform.padded(4, 5);
    CHECK(p.deg1() == 4);
    CHECK(p.bidegree() == std::pair(4, 5));
    CHECK(p.trimmed(0.0).equals(faveform, 0.0));
    Complex z1 = rand_coeff(), z2 = rand_coeff();
    CHECK(std::abs(p.eval(z1, z2) - faveform.eval(z1, z2)) < 1e-14);
}

TEST_CASE("essential symmetry detects the reflection multiplier") {
    for (int trial = 0; trial < 50; ++trial) {
        BiPoly p = rand_poly(2, 2);
        BiPoly sym = p + p.reflect();          // reflect(sym) == sym
        BiPoly anti = p - p.reflect();         // reflect(anti) == -anti
        auto ls = essential_symmetry(sym);
        auto la = essential_symmetry(anti);
        REQUIRE(ls.has_value());
        REQUIRE(la.has_value());
        CHECK(std::abs(*ls - Complex{1.0, 0.0}) < 1e-9);
        CHECK(std::abs(*la - Complex{-1.0, 0.0}) < 1e-9);
    }
    // a generic polynomial has no such symmetry
    CHECK(!essential_symmetry(rand_poly(2, 2) + BiPoly::constant({5.0, 0.0})).has_value());
}

TEST_CASE("double-double slices agree with plain slices away from cancellation") {
    BiPoly p = rand_poly(3, 3);
    Complex t = rand_unimodular();
    auto sd = p.slice_dd(2, CDD(t));
    auto s = p.slice(2, t);
    REQUIRE(sd.size() == s.size());
    for (std::size_t i = 0; i < s.size(); ++i)
        CHECK(std::abs(sd[i].to_complex() - s[i]) < 1e-14);
}
