#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "rifscope/ddreal.hpp"
#include "rifscope/errors.hpp"
#include "rifscope/roots.hpp"

using namespace rifscope;

namespace {

UniPoly from_roots(const std::vector<Complex>& rs) {
    UniPoly p{Complex{1.0, 0.0}};
    for (const auto& r : rs) {
        UniPoly q(p.size() + 1, Complex{0.0, 0.0});
        for (std::size_t i = 0; i < p.size(); ++i) {
            q[i] -= r * p[i];
            q[i + 1] += p[i];
        }
        p = std::move(q);
    }
    return p;
}

double match_error(std::vector<Complex> got, std::vector<Complex> want) {
    REQUIRE(got.size() == want.size());
    double worst = 0.0;
    for (const auto& w : want) {
        auto it = std::min_element(got.begin(), got.end(), [&](Complex a, Complex b) {
            return std::abs(a - w) < std::abs(b - w);
        });
        worst = std::max(worst, std::abs(*it - w));
        got.erase(it);
    }
    return worst;
}

} // namespace

TEST_CASE("simple real roots") {
    auto rs = roots_univariate(from_roots({{1, 0}, {2, 0}, {3, 0}}));
    CHECK(match_error(rs.roots, {{1, 0}, {2, 0}, {3, 0}}) < 1e-10);
    CHECK(rs.degree_deficit == 0);
}

TEST_CASE("random coefficient polynomials certify") {
    std::mt19937_64 rng(0x5EED);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        int deg = 2 + int(rng() % 14);
        UniPoly p(deg + 1);
        for (auto& c : p) c = {d(rng), d(rng)};
        auto rs = roots_univariate(p);
        CHECK(int(rs.roots.size()) == deg);
        for (double r : rs.residuals) CHECK(r <= 1e-12);
    }
}

TEST_CASE("reconstruction from computed roots") {
    std::mt19937_64 rng(1234);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    std::vector<Complex> want(8);
    for (auto& r : want) r = {d(rng), d(rng)};
    auto rs = roots_univariate(from_roots(want));
    CHECK(match_error(rs.roots, want) < 1e-8);
}

TEST_CASE("structural zeros at the origin are stripped exactly") {
    // z^3 * (z - 1): the triple origin root must come back exactly
    UniPoly p{{0, 0}, {0, 0}, {0, 0}, {-1, 0}, {1, 0}};
    auto rs = roots_univariate(p);
    int zeros = 0;
    for (const auto& r : rs.roots)
        if (r == Complex{0.0, 0.0}) ++zeros;
    CHECK(zeros == 3);
    CHECK(match_error(rs.roots, {{0, 0}, {0, 0}, {0, 0}, {1, 0}}) < 1e-12);
}

TEST_CASE("multiple root clusters keep the right count") {
    // (z-1)^4 (z+2): cluster of four near 1
    auto p = from_roots({{1, 0}, {1, 0}, {1, 0}, {1, 0}, {-2, 0}});
    RootOptions ro;
    ro.certify = false;
    auto rs = roots_univariate(p, ro);
    int near = 0;
    for (const auto& r : rs.roots)
        if (std::abs(r - Complex{1.0, 0.0}) < 0.1) ++near;
    CHECK(near == 4);
}

TEST_CASE("leading coefficient underflow shows up as degree deficit") {
    UniPoly p{{-1, 0}, {1, 0}, {1e-18, 0}}; // effectively z - 1
    auto rs = roots_univariate(p);
    CHECK(rs.degree_deficit == 1);
    CHECK(rs.roots.size() == 1);
    CHECK(std::abs(rs.roots[0] - Complex{1.0, 0.0}) < 1e-12);
}

TEST_CASE("unimodular filter projects onto the circle") {
    std::vector<Complex> roots{{0.7071067811865476, 0.7071067811865476},
                               {1.0 + 3e-9, 0.0},
                               {0.5, 0.0},
                               {0.0, -1.000000002}};
    auto u = unimodular_filter(roots, 1e-8);
    REQUIRE(u.size() == 3);
    for (const auto& z : u) CHECK(std::abs(std::abs(z) - 1.0) < 1e-15);
}

TEST_CASE("dd polish sharpens a simple root") {
    UniPoly p = from_roots({{1.0 / 3.0, 0}, {2, 0}, {-5, 0}});
    std::vector<CDD> pd(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) pd[i] = CDD(p[i]);
    CDD z = polish_root_dd(pd, Complex{0.3334, 1e-5});
    Complex err = z.to_complex() - Complex{1.0 / 3.0, 0.0};
    CHECK(std::abs(err) < 1e-15);
}

TEST_CASE("degenerate inputs") {
    CHECK(roots_univariate(UniPoly{}).roots.empty());
    CHECK(roots_univariate(UniPoly{{3, 0}}).roots.empty());
    CHECK_THROWS_AS(roots_univariate(UniPoly{{0, 0}, {0, 0}}), InvalidInput);
}

TEST_CASE("assignment beats greedy matching") {
    // greedy row-by-row picks 1+4+7 = 12; the optimum is 11
    std::vector<std::vector<double>> cost{{1.0, 2.0, 6.0}, {2.0, 4.0, 6.0}, {3.0, 5.0, 7.0}};
    auto a = min_cost_assignment(cost);
    REQUIRE(a.size() == 3);
    double total = 0.0;
    std::vector<bool> used(3, false);
    for (int i = 0; i < 3; ++i) {
        REQUIRE(a[i] >= 0);
        REQUIRE(a[i] < 3);
        CHECK(!used[a[i]]);
        used[a[i]] = true;
        total += cost[i][a[i]];
    }
    CHECK(total == doctest::Approx(11.0));
}

TEST_CASE("assignment matches brute force on random instances") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> d(0.0, 10.0);
    for (int trial = 0; trial < 200; ++trial) {
        int n = 2 + int(rng() % 4);
        std::vector<std::vector<double>> cost(n, std::vector<double>(n));
        for (auto& row : cost)
            for (auto& c : row) c = d(rng);
        auto a = min_cost_assignment(cost);
        double got = 0.0;
        for (int i = 0; i < n; ++i) got += cost[i][a[i]];
        // brute force over permutations
        std::vector<int> perm(n);
        for (int i = 0; i < n; ++i) perm[i] = i;
        double best = 1e18;
        do {
            double t = 0.0;
            for (int i = 0; i < n; ++i) t += cost[i][perm[i]];
            best = std::min(best, t);
        } while (std::next_permutation(perm.begin(), perm.end()));
        CHECK(got == doctest::Approx(best).epsilon(1e-12));
    }
}

TEST_CASE("rectangular assignment uses each column at most once") {
    std::vector<std::vector<double>> cost{{5.0, 1.0, 3.0, 4.0}, {2.0, 6.0, 1.0, 3.0}};
    auto a = min_cost_assignment(cost);
    REQUIRE(a.size() == 2);
    CHECK(a[0] != a[1]);
    double total = cost[0][a[0]] + cost[1][a[1]];
    CHECK(total == doctest::Approx(2.0)); // col1 for row0, col2 for row1
}
