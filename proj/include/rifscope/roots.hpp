#pragma once

// Simultaneous root finding for univariate complex polynomials, with
// backward-error certificates, plus helpers shared by the curve trackers.

#include <vector>

#include "rifscope/bipoly.hpp"

namespace rifscope {

struct RootSet {
    std::vector<Complex> roots;      // sorted by (re, im) for determinism
    std::vector<double> residuals;   // |p(root)| / sum_k |c_k| |root|^k
    int degree_deficit = 0;          // leading coefficients trimmed away (roots at infinity)
};

struct RootOptions {
    double tol = 1e-12;          // residual certificate threshold
    double lead_trim = 1e-13;    // relative cutoff for leading-coefficient underflow
    int max_iters = 200;
    bool certify = true;         // throw RootCertificateFailure on failure
};

// Aberth-Ehrlich iteration with a companion-matrix fallback. Exact zero roots
// are split off structurally so clusters at the origin stay exact.
RootSet roots_univariate(const UniPoly& coeffs, const RootOptions& opts = {});

// Roots within `tol` of the unit circle, projected onto it. Order preserved.
std::vector<Complex> unimodular_filter(const std::vector<Complex>& roots, double tol = 1e-8);

// A few Newton steps in double-double arithmetic starting from `seed`.
CDD polish_root_dd(const std::vector<CDD>& coeffs, Complex seed, int iters = 3);

// Simultaneous Aberth-Ehrlich refinement of a full root set in double-double.
// The pairwise repulsion term separates clustered roots that a double solve
// smears together; seeds should be pairwise distinct and cover every root of
// the polynomial. Returns the refined roots in seed order.
std::vector<CDD> polish_roots_dd(const std::vector<CDD>& coeffs,
                                 const std::vector<Complex>& seeds, int iters = 40);

// Minimum-cost perfect assignment on an n x m cost matrix (n <= m),
// O(n^2 m); returns for each row the assigned column. Deterministic.
std::vector<int> min_cost_assignment(const std::vector<std::vector<double>>& cost);

} // namespace rifscope
