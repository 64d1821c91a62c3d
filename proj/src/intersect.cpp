#include "rifscope/intersect.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <tuple>

#include "rifscope/errors.hpp"
#include "rifscope/rif.hpp"
#include "rifscope/roots.hpp"

namespace rifscope {

namespace {

constexpr double kTau = 2.0 * std::numbers::pi;

// Determinant of the Sylvester matrix of u (formal degree mu) and w (formal
// degree mw), coefficients in ascending order padded to that length.
Complex sylvester_det(const UniPoly& u, int mu, const UniPoly& w, int mw) {
    const int n = mu + mw;
    if (n == 0) return {1.0, 0.0};
    Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(n, n);
    auto at = [](const UniPoly& c, int i) -> Complex {
        return (i >= 0 && i < static_cast<int>(c.size())) ? c[i] : Complex{0.0, 0.0};
    };
    for (int r = 0; r < mw; ++r)
        for (int k = 0; k <= mu; ++k) s(r, r + k) = at(u, mu - k);
    for (int r = 0; r < mu; ++r)
        for (int k = 0; k <= mw; ++k) s(mw + r, r + k) = at(w, mw - k);
    return Eigen::PartialPivLU<Eigen::MatrixXcd>(s).determinant();
}

BiPoly unit_scaled(const BiPoly& p) {
    double s = p.max_abs();
    if (s <= 0.0) throw DegenerateInput("polynomial is identically zero");
    return p * Complex{1.0 / s, 0.0};
}

// Total degree and the value of the top homogeneous form at (1, s): the
// z1-leading coefficient of the shear z2 <- z2 + s z1.
int total_degree(const BiPoly& p, double tol) {
    int k = 0;
    for (int i = 0; i <= p.deg1(); ++i)
        for (int j = 0; j <= p.deg2(); ++j)
            if (std::abs(p.coeff(i, j)) > tol) k = std::max(k, i + j);
    return k;
}

Complex lead_form_at(const BiPoly& p, int k, Complex s) {
    Complex acc{0.0, 0.0};
    Complex sj{1.0, 0.0};
    for (int j = 0; j <= std::min(k, p.deg2()); ++j) {
        int i = k - j;
        if (i <= p.deg1()) acc += p.coeff(i, j) * sj;
        sj *= s;
    }
    return acc;
}

struct Winding {
    int count = -1;
    Complex centroid{0.0, 0.0};
    bool ok = false;
};

// Argument-principle count and first-moment centroid of the zeros of R
// enclosed by |t - c| = r. With t = c + r e^{i theta} the count
// (1/(2 pi i) of the R'/R contour integral) reduces to the average over
// nodes of (R'/R) * r e^{i theta}; the centroid integrand carries an extra
// factor t. Every node evaluation must clear the floating-point noise floor
// of Horner evaluation, eps * (deg+1) * sum |R_k| |t|^k, by a fat margin.
Winding winding_on_circle(const UniPoly& R, const UniPoly& Rp, Complex c, double r) {
    constexpr int kNodes = 512;
    Winding out;
    const int deg = static_cast<int>(R.size()) - 1;
    std::vector<double> mag(R.size());
    for (std::size_t i = 0; i < R.size(); ++i) mag[i] = std::abs(R[i]);
    auto noise_floor = [&](double t) {
        double acc = 0.0;
        for (int i = deg; i >= 0; --i) acc = acc * t + mag[i];
        return 2.2e-16 * double(deg + 1) * acc;
    };
    Complex count_acc{0.0, 0.0}, moment_acc{0.0, 0.0};
    for (int j = 0; j < kNodes; ++j) {
        double th = kTau * j / kNodes;
        Complex e{std::cos(th), std::sin(th)};
        Complex t = c + r * e;
        Complex v = upoly::eval(R, t);
        if (std::abs(v) < 20.0 * noise_floor(std::abs(t)) + 1e-280) return out;
        Complex term = upoly::eval(Rp, t) / v * (r * e);
        count_acc += term;
        moment_acc += t * term;
    }
    Complex n_mean = count_acc / double(kNodes);
    int n = static_cast<int>(std::lround(n_mean.real()));
    if (std::abs(n_mean - double(n)) > 0.08 || n < 0) return out;
    out.count = n;
    out.ok = true;
    if (n > 0) out.centroid = moment_acc / double(kNodes * n);
    return out;
}

// A multiplicity-k zero of R is a simple zero of the (k-1)th derivative;
// Newton from z0 recovers the cluster center without the ring scatter that
// floating-point root finding spreads over radius (noise)^(1/k). Returns z0
// when the iteration leaves the trust disk.
Complex derivative_center(const UniPoly& R, int k, Complex z0, double trust) {
    UniPoly d = R;
    for (int i = 1; i < k; ++i) d = upoly::derivative(d);
    UniPoly dp = upoly::derivative(d);
    Complex z = z0;
    for (int it = 0; it < 60; ++it) {
        Complex den = upoly::eval(dp, z);
        if (!(std::abs(den) > 0.0)) return z0;
        Complex step = upoly::eval(d, z) / den;
        z -= step;
        if (std::abs(z - z0) > trust) return z0;
        if (std::abs(step) < 1e-14 * (1.0 + std::abs(z))) return z;
    }
    return z;
}

std::vector<std::vector<int>> cluster_indices(const std::vector<Complex>& pts, double link) {
    const int n = static_cast<int>(pts.size());
    std::vector<int> parent(n);
    for (int i = 0; i < n; ++i) parent[i] = i;
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (std::abs(pts[i] - pts[j]) < link) parent[find(i)] = find(j);
    std::map<int, std::vector<int>> groups;
    for (int i = 0; i < n; ++i) groups[find(i)].push_back(i);
    std::vector<std::vector<int>> out;
    for (auto& [root, idx] : groups) out.push_back(std::move(idx));
    std::sort(out.begin(), out.end(), [&](const auto& a, const auto& b) {
        Complex ca{0, 0}, cb{0, 0};
        for (int i : a) ca += pts[i];
        for (int i : b) cb += pts[i];
        ca /= double(a.size());
        cb /= double(b.size());
        return std::pair(ca.real(), ca.imag()) < std::pair(cb.real(), cb.imag());
    });
    return out;
}

Complex cluster_mean(const std::vector<Complex>& pts, const std::vector<int>& idx) {
    Complex c{0.0, 0.0};
    for (int i : idx) c += pts[i];
    return c / double(idx.size());
}

// Count and refined center of the zero cluster of R nearest c0, certified by
// agreement of the winding count on two circles.
struct ClusterMult {
    int count = 0;
    Complex center{0.0, 0.0};
    bool ok = false;
};

// Contour-certified multiplicity of the root cluster `own` (indices into
// `roots`) around its mean c0. The contour radius must clear the cluster's
// own ring and stay well away from every foreign root; two windings on
// nested circles must agree with each other and with the literal count of
// computed roots they enclose.
ClusterMult cluster_multiplicity(const UniPoly& R, const UniPoly& Rp, Complex c0,
                                 const std::vector<Complex>& roots,
                                 const std::vector<int>& own, double cap) {
    ClusterMult out;
    std::vector<char> is_own(roots.size(), 0);
    for (int i : own) is_own[static_cast<std::size_t>(i)] = 1;
    double r_in = 0.0;
    double d_other = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < roots.size(); ++i) {
        double d = std::abs(roots[i] - c0);
        if (is_own[i])
            r_in = std::max(r_in, d);
        else
            d_other = std::min(d_other, d);
    }
    double lim = std::min(cap, 0.6 * d_other);
    if (!(lim > 5e-3)) return out;
    // larger circles first: the signal |R| on the contour shrinks like
    // r^multiplicity, so small radii drown in evaluation noise
    const double pairs[][2] = {{1.0, 0.85}, {0.92, 0.78}, {0.85, 0.7}};
    for (const auto& f : pairs) {
        const double r1 = f[0] * lim, r2 = f[1] * lim;
        if (r2 < 1.15 * r_in + 1e-6) continue;  // inner contour must clear the ring
        Winding w1 = winding_on_circle(R, Rp, c0, r1);
        Winding w2 = winding_on_circle(R, Rp, c0, r2);
        if (!w1.ok || !w2.ok || w1.count != w2.count) continue;
        // the winding must see exactly the computed roots it encloses
        int in1 = 0, in2 = 0;
        for (const auto& z : roots) {
            double d = std::abs(z - c0);
            in1 += d < r1;
            in2 += d < r2;
        }
        if (in1 != w1.count || in2 != w1.count) continue;
        out.count = w1.count;
        out.center = w1.count > 0 ? derivative_center(R, w1.count, w1.centroid, r1) : c0;
        out.ok = true;
        return out;
    }
    return out;
}

// Radius-based convenience wrapper for small, well-separated clusters
// (univariate fiber refinement): ownership is everything within own_radius
// of c0, widened to the first clear gap so tight rings stay whole.
ClusterMult cluster_multiplicity(const UniPoly& R, const UniPoly& Rp, Complex c0,
                                 const std::vector<Complex>& roots, double own_radius,
                                 double cap) {
    double r_own = own_radius;
    for (int pass = 0; pass < 8; ++pass) {
        double grow = 0.0;
        for (const auto& z : roots) {
            double d = std::abs(z - c0);
            if (d > r_own && d <= 1.45 * r_own) grow = std::max(grow, 1.06 * d);
        }
        if (grow == 0.0) break;
        r_own = grow;
    }
    std::vector<int> own;
    for (std::size_t i = 0; i < roots.size(); ++i)
        if (std::abs(roots[i] - c0) <= r_own) own.push_back(static_cast<int>(i));
    return cluster_multiplicity(R, Rp, c0, roots, own, cap);
}

std::vector<Complex> root_values(const UniPoly& poly) {
    RootOptions ro;
    ro.certify = false;
    if (upoly::degree(poly, 1e-13 * upoly::max_abs(poly)) < 1) return {};
    return roots_univariate(poly, ro).roots;
}

Complex draw_shear(std::mt19937_64& rng) {
    // Small shears keep projections of torus points inside the annulus
    // 1 - |s| <= |v| <= 1 + |s|, where root rings of multiple zeros stay
    // tight in the coefficient basis of the (unit-normalized) resultant.
    std::uniform_real_distribution<double> ang(0.0, kTau), rad(0.35, 0.6);
    double th = ang(rng);
    return rad(rng) * Complex{std::cos(th), std::sin(th)};
}

struct ShearedPair {
    BiPoly ps, qs;
    Complex s;
    UniPoly R, Rp;
    std::vector<Complex> roots;
};

// Shears both polynomials, checks the leading forms, and eliminates z1.
std::optional<ShearedPair> try_shear(const BiPoly& P, const BiPoly& Q, Complex s) {
    int kp = total_degree(P, 1e-13);
    int kq = total_degree(Q, 1e-13);
    if (std::abs(lead_form_at(P, kp, s)) < 1e-6 || std::abs(lead_form_at(Q, kq, s)) < 1e-6)
        return std::nullopt;
    // Shearing inflates the declared z1-degree, so the Sylvester grid runs
    // at a degree bound larger than the true resultant degree; determinant
    // noise then leaves the spurious top coefficients slightly nonzero.
    // The shear is an affine bijection of C^2, so the honest degree is still
    // bounded by the product-space zero count of the unsheared pair.
    const int cap = P.deg1() * Q.deg2() + Q.deg1() * P.deg2();
    ShearedPair sp;
    sp.s = s;
    sp.ps = P.shear2(s).trimmed(1e-12);
    sp.qs = Q.shear2(s).trimmed(1e-12);
    sp.R = resultant(sp.ps, sp.qs, 1);
    if (static_cast<int>(sp.R.size()) - 1 > cap) {
        sp.R.resize(static_cast<std::size_t>(cap) + 1);
        int deg = upoly::degree(sp.R, 1e-12);
        sp.R.resize(static_cast<std::size_t>(std::max(deg, 0)) + 1);
        double mx = upoly::max_abs(sp.R);
        if (mx <= 0.0) return std::nullopt;
        for (auto& c : sp.R) c /= mx;
    }
    sp.Rp = upoly::derivative(sp.R);
    sp.roots = root_values(sp.R);
    return sp;
}

} // namespace

UniPoly resultant(const BiPoly& p_in, const BiPoly& q_in, int eliminate) {
    if (eliminate == 2) return resultant(p_in.transpose(), q_in.transpose(), 1);
    if (eliminate != 1) throw InvalidInput("resultant: variable index must be 1 or 2");
    BiPoly P = unit_scaled(p_in).trimmed(1e-14);
    BiPoly Q = unit_scaled(q_in).trimmed(1e-14);
    const int m1 = P.deg1(), n1 = P.deg2();
    const int m2 = Q.deg1(), n2 = Q.deg2();
    const int D = m1 * n2 + m2 * n1;
    const Complex sigma{std::cos(0.7383), std::sin(0.7383)};
    std::vector<Complex> vals(D + 1);
    // Gauge each determinant against its Hadamard bound: an identically-zero
    // resultant (common factor) keeps every ratio at LU noise level, many
    // orders below any honestly nonzero resultant.
    double max_ratio = 0.0;
    for (int k = 0; k <= D; ++k) {
        double th = kTau * k / (D + 1);
        Complex t = sigma * Complex{std::cos(th), std::sin(th)};
        UniPoly u = P.slice(2, t), w = Q.slice(2, t);
        vals[k] = sylvester_det(u, m1, w, m2);
        double nu = 0.0, nw = 0.0;
        for (const auto& c : u) nu += std::norm(c);
        for (const auto& c : w) nw += std::norm(c);
        double hadamard = std::pow(std::sqrt(nu), m2) * std::pow(std::sqrt(nw), m1);
        if (hadamard > 1e-300) max_ratio = std::max(max_ratio, std::abs(vals[k]) / hadamard);
    }
    // Identically-zero gauge: a genuinely vanishing determinant leaves only
    // floating-point noise relative to the Hadamard bound (<= ~1e-16 per
    // node, exactly zero when the cancellation is exact), while honest
    // resultants of this size stay above ~1e-8 on their best node.
    if (max_ratio < 1e-12)
        throw IdenticallyZero("resultant vanishes identically (common factor)");
    UniPoly out(D + 1);
    Complex sig_pow{1.0, 0.0};
    for (int d = 0; d <= D; ++d) {
        Complex acc{0.0, 0.0};
        for (int k = 0; k <= D; ++k) {
            double th = -kTau * double(d) * k / (D + 1);
            acc += vals[k] * Complex{std::cos(th), std::sin(th)};
        }
        out[d] = acc / (double(D + 1) * sig_pow);
        sig_pow *= sigma;
    }
    double mx = upoly::max_abs(out);
    if (mx <= 0.0)
        throw IdenticallyZero("resultant vanishes identically (common factor)");
    for (auto& c : out) c /= mx;
    // drop a numerically-zero tail so the degree is honest
    int deg = upoly::degree(out, 1e-12);
    out.resize(static_cast<std::size_t>(std::max(deg, 0)) + 1);
    return out;
}

int intersection_multiplicity(const BiPoly& p_in, const BiPoly& q_in, Complex tau1,
                              Complex tau2, std::uint64_t seed) {
    // Multiplicity is invariant under z -> (g1 z1, g2 z2); normalize so the
    // point has coordinates 0 or 1. Zeros far from the unit circle are badly
    // conditioned in the coefficient basis, and this keeps ours tame.
    const Complex g1 = std::abs(tau1) > 1e-12 ? tau1 : Complex{1.0, 0.0};
    const Complex g2 = std::abs(tau2) > 1e-12 ? tau2 : Complex{1.0, 0.0};
    BiPoly P = unit_scaled(p_in.rotate(g1, g2)).trimmed(1e-14);
    BiPoly Q = unit_scaled(q_in.rotate(g1, g2)).trimmed(1e-14);
    const Complex t1 = std::abs(tau1) > 1e-12 ? Complex{1.0, 0.0} : Complex{0.0, 0.0};
    const Complex t2 = std::abs(tau2) > 1e-12 ? Complex{1.0, 0.0} : Complex{0.0, 0.0};
    if (std::abs(P.eval(t1, t2)) > 1e-7 || std::abs(Q.eval(t1, t2)) > 1e-7) return 0;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ang(0.0, kTau), rho(0.45, 0.95);
    std::vector<int> observed;
    int gauge_trips = 0;
    for (int attempt = 0; attempt < 16; ++attempt) {
        Complex s;
        if (std::abs(t1) > 0.5) {
            // aim the sheared projection t2 - s*t1 at a moderate radius
            double th = ang(rng);
            Complex v_target = rho(rng) * Complex{std::cos(th), std::sin(th)};
            s = (t2 - v_target) / t1;
            if (std::abs(s) < 0.15 || std::abs(s) > 1.95) continue;
        } else {
            s = draw_shear(rng);  // projection is t2 itself, already moderate
        }
        std::optional<ShearedPair> sp;
        try {
            sp = try_shear(P, Q, s);
        } catch (const IdenticallyZero&) {
            // A genuine common factor kills the resultant for every shear,
            // while a badly conditioned (but honest) shear can dip under the
            // gauge once in a while. Only a repeat offender is a real factor.
            if (++gauge_trips >= 3)
                throw CommonFactor("intersection multiplicity undefined: common factor");
            continue;
        }
        if (!sp) continue;
        Complex v0 = t2 - s * t1;
        // The point's projection owns one root cluster of the resultant;
        // pick it by cluster mean. A distant mean signals a badly scattered
        // ring (ill-conditioned shear), so the attempt is retried.
        auto clusters = cluster_indices(sp->roots, 0.22);
        const std::vector<int>* own = nullptr;
        double best = 0.1;
        for (const auto& idx : clusters) {
            double d = std::abs(cluster_mean(sp->roots, idx) - v0);
            if (d < best) {
                best = d;
                own = &idx;
            }
        }
        if (!own) continue;
        Complex c0 = cluster_mean(sp->roots, *own);
        ClusterMult cm = cluster_multiplicity(sp->R, sp->Rp, c0, sp->roots, *own, 0.72);
        if (!cm.ok) continue;
        // the point is a common zero, so a zero count means the shear lied;
        // center drift means the contour swallowed a neighboring zero
        if (cm.count <= 0) continue;
        if (std::abs(cm.center - v0) > 0.1) continue;
        observed.push_back(cm.count);
        for (std::size_t i = 0; i + 1 < observed.size(); ++i)
            if (observed[i] == observed.back()) return observed.back();
    }
    throw ShearFailure("intersection multiplicity: no two shears agreed");
}

namespace {

// Newton polish of an approximate common zero against the original pair, in
// double-double precision. Resultant-based locations of multiple zeros are
// limited to roughly the square root of the resultant's coefficient noise;
// the 2x2 local solve is not. At a tangential zero the Jacobian becomes
// singular at the solution and convergence drops to linear, which extended
// precision absorbs; near deeper singularities the steps blow up and the
// guards below keep the best residual seen instead.
std::pair<Complex, Complex> polish_common_zero(const BiPoly& P, const BiPoly& Q,
                                               Complex z1, Complex z2) {
    const BiPoly P1 = P.partial(1), P2 = P.partial(2);
    const BiPoly Q1 = Q.partial(1), Q2 = Q.partial(2);
    auto resid = [&](CDD a, CDD b) {
        return std::max(double(abs(P.eval_dd(a, b))), double(abs(Q.eval_dd(a, b))));
    };
    CDD x{z1}, y{z2};
    CDD bx = x, by = y;
    double best = resid(x, y);
    for (int it = 0; it < 60; ++it) {
        CDD f = P.eval_dd(x, y), g = Q.eval_dd(x, y);
        CDD a = P1.eval_dd(x, y), b = P2.eval_dd(x, y);
        CDD c = Q1.eval_dd(x, y), d = Q2.eval_dd(x, y);
        CDD det = a * d - b * c;
        double rows = (double(abs(a)) + double(abs(b))) * (double(abs(c)) + double(abs(d)));
        if (!(double(abs(det)) > 1e-28 * rows)) break;
        CDD dx = (f * d - g * b) / det;
        CDD dy = (a * g - c * f) / det;
        double step = std::max(double(abs(dx)), double(abs(dy)));
        if (step > 0.05) break;  // out of the basin; keep the best point seen
        x = x - dx;
        y = y - dy;
        double r = resid(x, y);
        if (r < best) {
            best = r;
            bx = x;
            by = y;
        }
        if (step < 1e-24) break;
    }
    return {bx.to_complex(), by.to_complex()};
}

// Common zeros of (P, Q) in C^2 with multiplicities, via one generic shear.
std::vector<CommonZero> finite_common_zeros(const BiPoly& P, const BiPoly& Q,
                                            std::mt19937_64& rng, Complex* shear_used) {
    static const bool trace = std::getenv("RIFSCOPE_TRACE") != nullptr;
    int gauge_trips = 0;
    for (int attempt = 0; attempt < 16; ++attempt) {
        Complex s = draw_shear(rng);
        std::optional<ShearedPair> sp;
        try {
            sp = try_shear(P, Q, s);
        } catch (const IdenticallyZero&) {
            // see intersection_multiplicity: demand repeat trips before
            // concluding the inputs genuinely share a factor
            if (++gauge_trips >= 3)
                throw CommonFactor("common zero scan: inputs share a factor");
            continue;
        }
        if (trace)
            std::fprintf(stderr, "[scan] attempt %d s=%.4f%+.4fi %s degR=%d\n", attempt,
                         s.real(), s.imag(), sp ? "ok" : "lead-form-reject",
                         sp ? static_cast<int>(sp->R.size()) - 1 : -1);
        if (!sp) continue;
        if (sp->roots.empty()) {
            if (shear_used) *shear_used = s;
            return {};
        }
        auto clusters = cluster_indices(sp->roots, 0.22);
        std::vector<CommonZero> zeros;
        bool failed = false;
        for (const auto& idx : clusters) {
            Complex c0 = cluster_mean(sp->roots, idx);
            ClusterMult cm = cluster_multiplicity(sp->R, sp->Rp, c0, sp->roots, idx, 0.72);
            if (trace)
                std::fprintf(stderr, "[scan]   cluster n=%zu c0=%.4f%+.4fi ok=%d count=%d drift=%.3g\n",
                             idx.size(), c0.real(), c0.imag(), cm.ok ? 1 : 0, cm.count,
                             cm.ok ? std::abs(cm.center - c0) : -1.0);
            if (!cm.ok) { failed = true; break; }
            if (cm.count == 0) continue; // noise root, nothing enclosed
            if (std::abs(cm.center - c0) > 0.1) { failed = true; break; } // merged neighbors
            Complex v0 = cm.center;
            bool dup = false;
            for (const auto& zz : zeros)
                if (std::abs((zz.z2 - s * zz.z1) - v0) < 1e-6) { dup = true; break; }
            if (dup) continue; // fragments of one root ring refine to one center
            UniPoly u = sp->ps.slice(2, v0);
            UniPoly w = sp->qs.slice(2, v0);
            UniPoly up = upoly::derivative(u);
            auto ru = root_values(u);
            auto rw = root_values(w);
            // roots of u that match a root of w: candidates for the fiber zero
            std::vector<Complex> paired;
            for (const auto& a : ru) {
                double best = std::numeric_limits<double>::infinity();
                for (const auto& b : rw) best = std::min(best, std::abs(a - b));
                if (best < 1e-2) paired.push_back(a);
            }
            if (paired.empty()) {
                if (trace) std::fprintf(stderr, "[scan]   fiber: no paired roots at v0\n");
                failed = true;
                break;
            }
            auto pair_clusters = cluster_indices(paired, 2e-2);
            if (pair_clusters.size() != 1) {
                if (trace)
                    std::fprintf(stderr, "[scan]   fiber: %zu pair clusters (collision)\n",
                                 pair_clusters.size());
                failed = true;
                break;
            }
            Complex a0 = cluster_mean(paired, pair_clusters[0]);
            ClusterMult am = cluster_multiplicity(u, up, a0, ru, 0.1, 0.08);
            Complex a = (am.ok && am.count > 0) ? am.center : a0;
            if (trace)
                std::fprintf(stderr,
                             "[scan]   fiber: %zu paired a0=%.9f%+.9fi am(ok=%d count=%d) a=%.9f%+.9fi\n",
                             paired.size(), a0.real(), a0.imag(), am.ok ? 1 : 0, am.count,
                             a.real(), a.imag());
            CommonZero z;
            std::tie(z.z1, z.z2) = polish_common_zero(P, Q, a, v0 + s * a);
            z.multiplicity = cm.count;
            z.on_torus = std::abs(std::abs(z.z1) - 1.0) < 1e-5 &&
                         std::abs(std::abs(z.z2) - 1.0) < 1e-5;
            zeros.push_back(z);
        }
        if (failed) continue;
        // Every root of the resultant is the projection of some common zero,
        // so the multiplicities must account for the full degree; anything
        // else means a cluster was dropped or a contour double-counted.
        int accounted = 0;
        for (const auto& z : zeros) accounted += z.multiplicity;
        if (accounted != static_cast<int>(sp->roots.size())) {
            if (trace)
                std::fprintf(stderr, "[scan]   sum mismatch: %d accepted vs %zu roots\n",
                             accounted, sp->roots.size());
            continue;
        }
        if (shear_used) *shear_used = s;
        std::sort(zeros.begin(), zeros.end(), [](const CommonZero& a, const CommonZero& b) {
            return std::pair(a.z1.real(), a.z1.imag()) < std::pair(b.z1.real(), b.z1.imag());
        });
        return zeros;
    }
    throw ShearFailure("common zero scan: no usable shear found");
}

// Common zeros of (P, Q) on the slice z_fixed = 0, as values of the other
// variable; used for the charts at infinity.
std::vector<Complex> axis_common_values(const BiPoly& P, const BiPoly& Q, int fixed_var) {
    UniPoly u = P.slice(fixed_var, Complex{0.0, 0.0});
    UniPoly w = Q.slice(fixed_var, Complex{0.0, 0.0});
    double su = upoly::max_abs(u), sw = upoly::max_abs(w);
    if (su < 1e-12 || sw < 1e-12)
        throw DegenerateInput("chart slice vanishes identically");
    auto ru = root_values(u);
    auto rw = root_values(w);
    std::vector<Complex> paired;
    for (const auto& a : ru) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& b : rw) best = std::min(best, std::abs(a - b));
        if (best < 1e-2) paired.push_back(a);
    }
    if (paired.empty()) return {};
    std::vector<Complex> out;
    for (const auto& cl : cluster_indices(paired, 2e-2)) out.push_back(cluster_mean(paired, cl));
    return out;
}

} // namespace

std::vector<CommonZero> common_zeros_finite(const BiPoly& p, const BiPoly& q,
                                            std::uint64_t seed) {
    BiPoly P = unit_scaled(p).trimmed(1e-14);
    BiPoly Q = unit_scaled(q).trimmed(1e-14);
    std::mt19937_64 rng(seed);
    Complex shear;
    return finite_common_zeros(P, Q, rng, &shear);
}

std::vector<Complex> root_cluster_centers(const UniPoly& R_in, double link) {
    double mx = upoly::max_abs(R_in);
    if (mx <= 0.0) throw IdenticallyZero("root clusters of the zero polynomial");
    UniPoly R = upoly::scale(R_in, Complex{1.0 / mx, 0.0});
    UniPoly Rp = upoly::derivative(R);
    auto roots = root_values(R);
    std::vector<Complex> out;
    for (const auto& idx : cluster_indices(roots, link)) {
        Complex c0 = cluster_mean(roots, idx);
        ClusterMult cm = cluster_multiplicity(R, Rp, c0, roots, idx, 0.72);
        out.push_back(cm.ok && cm.count > 0 ? cm.center : c0);
    }
    std::sort(out.begin(), out.end(), [](Complex a, Complex b) {
        return std::pair(a.real(), a.imag()) < std::pair(b.real(), b.imag());
    });
    return out;
}

Complex refine_root_cluster(const UniPoly& u_in, Complex seed, double cap) {
    double mx = upoly::max_abs(u_in);
    if (mx <= 0.0) return seed;
    UniPoly u = upoly::scale(u_in, Complex{1.0 / mx, 0.0});
    UniPoly up = upoly::derivative(u);
    auto roots = root_values(u);
    // members of the seed's cluster drag the mean; start from nearby roots
    std::vector<Complex> near;
    for (const auto& r : roots)
        if (std::abs(r - seed) < cap) near.push_back(r);
    Complex c0 = seed;
    if (!near.empty()) {
        c0 = {0.0, 0.0};
        for (const auto& r : near) c0 += r;
        c0 /= double(near.size());
    }
    ClusterMult cm = cluster_multiplicity(u, up, c0, roots, cap * 1.5, cap);
    return (cm.ok && cm.count > 0) ? cm.center : c0;
}

MultiplicityReport bezout_audit(const Rif& f, std::uint64_t seed) {
    MultiplicityReport rep;
    rep.bezout_expected = 2 * f.m() * f.n();
    BiPoly P = unit_scaled(f.p).trimmed(1e-14);
    BiPoly Q = unit_scaled(f.ptilde).trimmed(1e-14);
    std::mt19937_64 rng(seed);
    rep.finite = finite_common_zeros(P, Q, rng, &rep.shear_used);

    // charts at infinity: reverse a coordinate and look on the axis
    BiPoly P1 = P.reverse(1);
    BiPoly Q1 = Q.reverse(1);
    for (const auto& b : axis_common_values(P1, Q1, 1)) {
        CommonZero z;
        z.z1_infinite = true;
        z.z2 = b;
        z.multiplicity = intersection_multiplicity(P1, Q1, {0.0, 0.0}, b, seed + 1);
        if (z.multiplicity > 0) rep.infinite.push_back(z);
    }
    BiPoly P2 = P.reverse(2);
    BiPoly Q2 = Q.reverse(2);
    for (const auto& a : axis_common_values(P2, Q2, 2)) {
        CommonZero z;
        z.z2_infinite = true;
        z.z1 = a;
        z.multiplicity = intersection_multiplicity(P2, Q2, a, {0.0, 0.0}, seed + 2);
        if (z.multiplicity > 0) rep.infinite.push_back(z);
    }
    BiPoly Pb = P.reverse(1).reverse(2);
    BiPoly Qb = Q.reverse(1).reverse(2);
    if (std::abs(Pb.eval({0, 0}, {0, 0})) < 1e-9 && std::abs(Qb.eval({0, 0}, {0, 0})) < 1e-9) {
        CommonZero z;
        z.z1_infinite = z.z2_infinite = true;
        z.multiplicity = intersection_multiplicity(Pb, Qb, {0.0, 0.0}, {0.0, 0.0}, seed + 3);
        if (z.multiplicity > 0) rep.infinite.push_back(z);
    }

    for (const auto& z : rep.finite) rep.total += z.multiplicity;
    for (const auto& z : rep.infinite) {
        rep.at_infinity += z.multiplicity;
        rep.total += z.multiplicity;
    }
    return rep;
}

} // namespace rifscope
