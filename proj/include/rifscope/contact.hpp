#pragma once

// Vanishing-order fits at torus singularities: contact orders of zero-set
// branches, orders of contact between level-curve branches, the two-chart
// equality check, the probe-pair cross check, and integrability thresholds.

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rifscope/rif.hpp"

namespace rifscope {

enum class FitParity { Any, Even };
enum class FitPrecision { Double, Extended };

struct OrderFit {
    int order = 0;          // fitted integer vanishing order
    double slope_raw = 0.0; // least-squares slope before rounding
    double r_squared = 0.0; // over the accepted window
    double h_min = 0.0;     // accepted window in the approach parameter
    double h_max = 0.0;
    FitPrecision precision = FitPrecision::Double;
};

// Least-squares slope of log v against log h over the largest stable window
// with v in [v_floor, 1e-2]. Needs >= 12 samples spanning >= 2 decades of h
// (InsufficientSamples otherwise); throws NoisyData when no window reaches
// r^2 >= 0.999 or the slope is farther than 0.15 from the nearest admissible
// integer (nearest even integer when parity = Even).
OrderFit fit_order(const std::vector<std::pair<double, double>>& samples,
                   FitParity parity, double v_floor = 1e-12);

// One-sided samples of a curve branch z1 = psi(z2) anchored at a singularity:
// fiber z2 = tau2 * exp(i * side * h) for h on a geometric ladder, with the
// branch's z1 value on each fiber. `gap` holds 1 - |z1| evaluated in
// double-double so orders up to 8 stay above the fitting floor.
struct LocalBranch {
    std::vector<int> rung;     // ladder indices, increasing h
    std::vector<double> h;     // angular offsets, ascending
    std::vector<Complex> z1;
    std::vector<CDD> z1_dd;    // polished values backing `gap` and contacts
    std::vector<double> gap;   // 1 - |z1|
    int side = +1;             // sign of the angular offset
    double slope = 0.0;        // d(arg z1)/d(theta2) estimated at the bottom
};

// The geometric approach ladder shared by all local traces: h_k = 0.35 * r^k
// with r = 2^(-1/3), truncated at 1e-6. Index 0 is the widest offset.
const std::vector<double>& approach_ladder();

// Branches of the zero set {ptilde = 0} anchored at (tau1, tau2), traced in
// the chart where z1 is solved per z2-fiber (chart = 1) or with the roles of
// the variables swapped (chart = 2). Chains from both approach sides are
// returned; side +1 chains first, each side sorted by slope.
std::vector<LocalBranch> zero_branches_at(const Rif& f, Complex tau1, Complex tau2,
                                          int chart = 1);

// Branches of the level curve {phi = lambda} anchored at (tau1, tau2).
std::vector<LocalBranch> level_branches_at(const Rif& f, Complex tau1, Complex tau2,
                                           Complex lambda, int chart = 1);

// Contact order of a zero-set branch: fitted vanishing order of 1 - |z1|
// against h, constrained to even integers. Falls back to the extended
// fitting window when the double window is too noisy.
OrderFit branch_contact_order_fit(const LocalBranch& b);
int branch_contact_order(const LocalBranch& b);

// Per-branch contact orders at a singularity in one chart, sorted ascending.
// Both approach sides are fitted; their order multisets must agree.
std::vector<int> branch_contact_orders(const Rif& f, Complex tau1, Complex tau2,
                                       int chart = 1);

// Order of contact between two branches anchored at the same point and
// traced on the same side of the shared ladder: fitted vanishing order of
// |psi_a - psi_b|, any integer >= 1.
int order_of_contact(const LocalBranch& a, const LocalBranch& b);
OrderFit order_of_contact_fit(const LocalBranch& a, const LocalBranch& b);

struct ContactReport {
    int K = 0;                        // contact order at the point
    int K1 = 0, K2 = 0;               // per-chart values, equal on success
    std::vector<int> branch_orders;   // chart-1 zero branches, ascending
    std::vector<int> branch_orders_chart2;
    std::vector<int> pair_orders;     // max order of contact per probe pair
    std::optional<Complex> exceptional_candidate; // probe in all failing pairs
};

// Unimodular probe values spread around the circle and rotated away from the
// excluded value and its negative.
std::vector<Complex> default_probes(Complex lambda0, int count = 8);

// Contact order at a singularity: max branch order in both charts (which
// must agree; EcoViolation otherwise), cross-checked against orders of
// contact between level branches of every probe pair. The majority of pair
// orders must equal the branch value (CrossCheckFailure otherwise); a probe
// implicated in every disagreeing pair is reported, not treated as an error.
ContactReport contact_order_at(const Rif& f, Complex tau1, Complex tau2,
                               const std::vector<Complex>& probes);
ContactReport contact_order_at(const Rif& f, Complex tau1, Complex tau2);

// Max contact order over all singularities; empty for singularity-free RIFs.
std::optional<int> global_contact_order(const Rif& f);

struct IntegrabilityThreshold {
    std::optional<int> K;
    double p_star = std::numeric_limits<double>::infinity();
    // Both first partial derivatives lie in L^p(T^2) iff p < p_star.
    bool integrable(double p) const { return p < p_star; }
};

// Threshold exponent p* = 1 + 1/K; every p in [1, infinity) when K is empty.
IntegrabilityThreshold lp_threshold(std::optional<int> K);

// Verifies that the level branches of two probe values pair off against the
// zero-set branches (nearest in the shared horn) so that each pair's order
// of contact is at least the zero branch's contact order, on both approach
// sides. Returns false with a diagnostic instead of throwing.
bool branch_bijection_check(const Rif& f, Complex tau1, Complex tau2,
                            Complex lambda, Complex mu,
                            std::string* diagnostic = nullptr);

} // namespace rifscope
