#pragma once

// Continuation of root families along a 1-parameter sweep: globally optimal
// step matching, branch birth/retirement on degree changes, and jump splits.

#include <functional>
#include <optional>
#include <vector>

#include "rifscope/roots.hpp"

namespace rifscope {

enum class BranchKind { ZeroSet, Level };

struct Branch {
    std::vector<double> thetas;   // sorted, in (-pi, pi]
    std::vector<Complex> values;  // z1 samples aligned with thetas
    BranchKind kind = BranchKind::Level;
    Complex lambda{0.0, 0.0};     // level branches only
    int component_id = -1;
    std::optional<int> anchor;    // index into the singularity list, if any
};

struct TrackOptions {
    // Maximum distance a root may move between consecutive samples before the
    // match is treated as a branch end + birth. 0 means adaptive:
    // 8 * spacing * median root speed over the previous 5 steps.
    double match_jump = 0.0;
    double ambiguity_ratio = 1.2;
    bool throw_on_ambiguity = false; // callers that can refine set this
    double lead_trim = 1e-12;
    double root_tol = 1e-11;
};

// Track the roots of family(theta) across the given sorted parameter values.
// Retired and newborn chains produce separate Branch records.
std::vector<Branch> track_family(const std::function<UniPoly(double)>& family,
                                 const std::vector<double>& thetas,
                                 const TrackOptions& opts = {});

} // namespace rifscope
