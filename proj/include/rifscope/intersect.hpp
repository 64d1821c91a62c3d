#pragma once

// Resultants, intersection multiplicities, and the global Bezout bookkeeping
// for a polynomial and its reflection.

#include <cstdint>
#include <map>
#include <vector>

#include "rifscope/bipoly.hpp"

namespace rifscope {

struct Rif; // rif.hpp

// Sylvester resultant eliminating the named variable, computed by
// evaluation at unimodular nodes and interpolation. The declared degree in
// the eliminated variable is used, so slices that drop degree still evaluate
// the bivariate resultant. Throws IdenticallyZero when the resultant
// vanishes identically (common factor).
UniPoly resultant(const BiPoly& p, const BiPoly& q, int eliminate);

struct CommonZero {
    Complex z1, z2;              // finite coordinates (ignored when infinite)
    bool z1_infinite = false;
    bool z2_infinite = false;
    int multiplicity = 0;
    bool on_torus = false;
};

// Intersection multiplicity of p and q at a common zero tau. A random shear
// z2 <- z2 + s*z1 (seeded) separates projections; the order of vanishing of
// the sheared resultant is read off with argument-principle winding counts
// on circles of three radii, which must agree. Up to 5 shears are tried.
int intersection_multiplicity(const BiPoly& p, const BiPoly& q, Complex tau1, Complex tau2,
                              std::uint64_t seed = 0x5EED);

struct MultiplicityReport {
    std::vector<CommonZero> finite;            // common zeros in C^2
    std::vector<CommonZero> infinite;          // coordinates in reversed charts
    int at_infinity = 0;                       // total multiplicity at infinity
    int total = 0;
    int bezout_expected = 0;                   // 2 m n
    Complex shear_used{0.0, 0.0};
};

// All common zeros of p and ptilde with multiplicities, including the points
// at infinity reached through coordinate reversal; checks the total against
// 2mn and evenness of on-torus multiplicities.
MultiplicityReport bezout_audit(const Rif& f, std::uint64_t seed = 0x5EED);

// All common zeros of p and q in C^2 with multiplicities, located through a
// seeded generic shear so that coincident projections cannot hide a zero.
// Throws CommonFactor when p and q share a factor and ShearFailure when no
// usable shear is found.
std::vector<CommonZero> common_zeros_finite(const BiPoly& p, const BiPoly& q,
                                            std::uint64_t seed = 0x5EED);

struct SumIdentityReport {
    int multiplicity = 0;                   // N_tau(p, ptilde)
    std::vector<std::vector<int>> kappa;    // pairwise orders of contact
    int kappa_sum = 0;
    bool matches = false;
};

// Checks N_tau(p, ptilde) == sum of pairwise orders of contact between the
// branches of the mu- and nu-level sets anchored at tau.
SumIdentityReport contact_sum_identity(const Rif& f, Complex tau1, Complex tau2,
                                       Complex mu, Complex nu);

struct BoundReport {
    int multiplicity = 0;
    int bound = 0;        // sum_ij min(K_i, K_j) over zero-set branch orders
    bool holds = false;
};

// N_tau(p, ptilde) <= sum_ij min(K_i, K_j).
BoundReport co_vs_im_bound(const Rif& f, Complex tau1, Complex tau2);

// Centers of the root clusters of R (clusters linked at distance `link`),
// each refined by an argument-principle centroid where that is stable. A
// multiple root computed in floating point scatters into a ring; the
// centroid recovers the true center to near the coefficient accuracy.
std::vector<Complex> root_cluster_centers(const UniPoly& R, double link = 0.045);

// Centroid of the root cluster of u nearest `seed`; falls back to `seed`
// when no stable contour is found.
Complex refine_root_cluster(const UniPoly& u, Complex seed, double cap = 0.08);

} // namespace rifscope
