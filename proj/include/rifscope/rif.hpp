#pragma once

// Rational inner functions on the bidisk: phi = eta * z1^M z2^N * ptilde / p
// with p zero-free on the open bidisk and ptilde its reflection.

#include <optional>
#include <string>
#include <vector>

#include "rifscope/bipoly.hpp"

namespace rifscope {

struct Rif {
    BiPoly p;       // denominator, zero-free on the open bidisk
    BiPoly ptilde;  // reflection of p at the declared bidegree
    Complex eta{1.0, 0.0};
    int M = 0;      // extra monomial factor z1^M z2^N
    int N = 0;
    std::string name;

    int m() const { return p.deg1(); }
    int n() const { return p.deg2(); }

    // phi(z1, z2); safe away from zeros of p.
    Complex eval(Complex z1, Complex z2) const;
};

struct ValidateOptions {
    int circle_samples = 64;            // angular samples per radius
    double interior_margin = 1e-9;      // |z| < 1 - margin counts as interior
    double torus_tol = 1e-10;           // | |ptilde|/|p| - 1 | on the torus
    bool check_coprime = true;
};

// Builds and validates a RIF from its denominator. Throws InvalidInput
// subclasses: NotSemiStable (with an interior zero witness), CommonFactor
// (p and its reflection share a factor), DegenerateInput, NotUnimodular eta.
Rif make_rif(const BiPoly& p, Complex eta, int M = 0, int N = 0,
             const ValidateOptions& opts = {});

struct Singularity {
    Complex tau1, tau2;   // point on the torus where p vanishes
    Complex lambda0;      // nontangential value of phi there
};

// All points of the closed bidisk torus where p (equivalently ptilde)
// vanishes, each with the nontangential value of phi along the inward ray.
std::vector<Singularity> singularities(const Rif& f);

// Nontangential limit of phi along the ray r -> 1- of (r tau1, r tau2),
// by Richardson extrapolation of high-precision ray evaluations. The result
// is certified unimodular (within 1e-8) and projected onto the circle;
// throws NoLimit when the extrapolation fails to settle.
Complex nontangential_value(const Rif& f, Complex tau1, Complex tau2);

} // namespace rifscope
