#include "rifscope/rif.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <tuple>

#include "rifscope/errors.hpp"
#include "rifscope/intersect.hpp"
#include "rifscope/roots.hpp"

namespace rifscope {

namespace {

constexpr double kTau = 2.0 * std::numbers::pi;

Complex unit(double theta) { return {std::cos(theta), std::sin(theta)}; }

Complex ipow(Complex z, int k) {
    Complex acc{1.0, 0.0};
    for (int i = 0; i < k; ++i) acc *= z;
    return acc;
}

// Interior zero scan along one orientation: fix `var` on circles of the
// given radii, look for roots of the slice strictly inside the unit disk.
void scan_semistable(const BiPoly& p, int var, const ValidateOptions& opts) {
    const double radii[] = {0.15, 0.4, 0.65, 0.85, 0.97};
    RootOptions ro;
    ro.certify = false;
    for (double rho : radii) {
        for (int k = 0; k < opts.circle_samples; ++k) {
            Complex zfix = rho * unit(kTau * (k + 0.31) / opts.circle_samples);
            UniPoly s = p.slice(var, zfix);
            if (upoly::degree(s, 1e-13 * p.max_abs()) < 1) continue;
            for (const auto& r : roots_univariate(s, ro).roots) {
                if (std::abs(r) < 1.0 - opts.interior_margin) {
                    Complex w1 = (var == 2) ? r : zfix;
                    Complex w2 = (var == 2) ? zfix : r;
                    throw NotSemiStable(w1, w2,
                                        "denominator vanishes inside the open bidisk");
                }
            }
        }
    }
}

} // namespace

Complex Rif::eval(Complex z1, Complex z2) const {
    Complex num = ptilde.eval(z1, z2);
    Complex den = p.eval(z1, z2);
    return eta * ipow(z1, M) * ipow(z2, N) * num / den;
}

Rif make_rif(const BiPoly& p_in, Complex eta, int M, int N, const ValidateOptions& opts) {
    if (std::abs(std::abs(eta) - 1.0) > 1e-10)
        throw InvalidInput("eta must be unimodular");
    if (M < 0 || N < 0) throw InvalidInput("monomial exponents must be nonnegative");
    if (p_in.is_zero(0.0)) throw DegenerateInput("denominator is identically zero");

    BiPoly p = p_in;
    BiPoly tight = p.trimmed(1e-12);
    if (tight.bidegree() != p.bidegree())
        throw DegenerateInput("declared bidegree is not attained by the coefficients");

    scan_semistable(p, 2, opts);
    scan_semistable(p, 1, opts);

    Rif f;
    f.p = p;
    f.ptilde = p.reflect();
    f.eta = eta / std::abs(eta);
    f.M = M;
    f.N = N;

    if (opts.check_coprime && p.deg1() + p.deg2() > 0) {
        try {
            if (p.deg1() > 0) (void)resultant(f.p, f.ptilde, 1);
            if (p.deg2() > 0) (void)resultant(f.p, f.ptilde, 2);
        } catch (const IdenticallyZero&) {
            throw CommonFactor("denominator and its reflection share a factor");
        }
    }

    // |ptilde| == |p| on the torus, up to roundoff
    std::mt19937_64 rng(0x5EED);
    std::uniform_real_distribution<double> ang(0.0, kTau);
    double scale = p.max_abs();
    for (int k = 0; k < 200; ++k) {
        Complex z1 = unit(ang(rng)), z2 = unit(ang(rng));
        double a = std::abs(f.p.eval(z1, z2));
        double b = std::abs(f.ptilde.eval(z1, z2));
        if (a < 1e-9 * scale) continue;
        if (std::abs(b / a - 1.0) > opts.torus_tol * (1.0 + scale / a))
            throw CrossCheckFailure("reflection does not match |p| on the torus");
    }
    return f;
}

std::vector<Singularity> singularities(const Rif& f) {
    std::vector<Singularity> out;
    if (f.m() == 0 && f.n() == 0) return out;

    // boundary singularities are exactly the common zeros of p and its
    // reflection that land on the torus
    for (const auto& z : common_zeros_finite(f.p, f.ptilde)) {
        if (!z.on_torus) continue;
        Singularity s;
        s.tau1 = z.z1 / std::abs(z.z1);
        s.tau2 = z.z2 / std::abs(z.z2);
        out.push_back(s);
    }

    // deduplicate and order by principal arguments
    std::sort(out.begin(), out.end(), [](const Singularity& x, const Singularity& y) {
        auto key = [](const Singularity& s) {
            return std::tuple(std::arg(s.tau2), std::arg(s.tau1));
        };
        return key(x) < key(y);
    });
    std::vector<Singularity> dedup;
    for (const auto& s : out) {
        bool dup = false;
        for (const auto& t : dedup)
            if (std::abs(s.tau1 - t.tau1) < 1e-7 && std::abs(s.tau2 - t.tau2) < 1e-7)
                dup = true;
        if (!dup) dedup.push_back(s);
    }
    for (auto& s : dedup) s.lambda0 = nontangential_value(f, s.tau1, s.tau2);
    return dedup;
}

Complex nontangential_value(const Rif& f, Complex tau1, Complex tau2) {
    // restrict both polynomials to the inward ray w -> (tau1 w, tau2 w)
    UniPoly pr = f.p.restrict_line({0, 0}, {0, 0}, tau1, tau2);
    UniPoly qr = f.ptilde.restrict_line({0, 0}, {0, 0}, tau1, tau2);
    std::vector<CDD> pd(pr.size()), qd(qr.size());
    for (std::size_t i = 0; i < pr.size(); ++i) pd[i] = CDD(pr[i]);
    for (std::size_t i = 0; i < qr.size(); ++i) qd[i] = CDD(qr[i]);
    double scale = std::max(upoly::max_abs(pr), 1e-300);

    constexpr int kMin = 6, kMax = 20;
    std::vector<Complex> val;
    std::vector<double> h;
    for (int k = kMin; k <= kMax; ++k) {
        double hk = std::ldexp(1.0, -k);
        CDD w(1.0 - hk);
        CDD den = upoly::eval(pd, w);
        if (double(abs(den)) < 1e-26 * scale) break; // below the extended noise floor
        CDD num = upoly::eval(qd, w);
        CDD ratio = num / den;
        double wk = 1.0 - hk;
        Complex v = f.eta * ipow(tau1, f.M) * ipow(tau2, f.N) *
                    std::pow(wk, f.M + f.N) * ratio.to_complex();
        val.push_back(v);
        h.push_back(hk);
    }
    if (val.size() < 4) throw NoLimit("too few usable ray samples for extrapolation");

    // Neville extrapolation to h = 0 of samples on a geometric ladder
    const std::size_t n = val.size();
    std::vector<std::vector<Complex>> T(n);
    for (std::size_t i = 0; i < n; ++i) {
        T[i].resize(i + 1);
        T[i][0] = val[i];
        for (std::size_t j = 1; j <= i; ++j)
            T[i][j] = T[i][j - 1] +
                      (T[i][j - 1] - T[i - 1][j - 1]) * (h[i] / (h[i - j] - h[i]));
    }
    Complex best = T[n - 1][n - 1];
    double err = std::abs(T[n - 1][n - 1] - T[n - 1][n - 2]);
    for (std::size_t i = 3; i < n; ++i) {
        double e = std::abs(T[i][i] - T[i][i - 1]) + std::abs(T[i][i] - T[i - 1][i - 1]);
        if (e < err) {
            err = e;
            best = T[i][i];
        }
    }
    if (err > 1e-6) throw NoLimit("ray extrapolation did not settle");
    if (std::abs(std::abs(best) - 1.0) > 1e-8)
        throw NoLimit("nontangential value is not unimodular");
    return best / std::abs(best);
}

} // namespace rifscope
