#include "rifscope/contact.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>

#include "rifscope/errors.hpp"
#include "rifscope/intersect.hpp"
#include "rifscope/roots.hpp"

namespace rifscope {

namespace {

constexpr double kTau = 6.283185307179586;

bool trace_enabled() {
    static const bool on = std::getenv("RIFSCOPE_TRACE") != nullptr;
    return on;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
}

} // namespace

const std::vector<double>& approach_ladder() {
    static const std::vector<double> ladder = [] {
        std::vector<double> h;
        const double ratio = std::pow(2.0, -1.0 / 3.0);
        for (double v = 0.35; v >= 1e-6; v *= ratio) h.push_back(v);
        return h;
    }();
    return ladder;
}

OrderFit fit_order(const std::vector<std::pair<double, double>>& samples,
                   FitParity parity, double v_floor) {
    std::vector<std::pair<double, double>> s;
    s.reserve(samples.size());
    for (const auto& [h, v] : samples)
        if (h > 0.0 && std::isfinite(h) && std::isfinite(v)) s.push_back({h, v});
    std::sort(s.begin(), s.end());
    if (s.size() < 12 || s.back().first < 100.0 * s.front().first)
        throw InsufficientSamples("order fit needs at least 12 samples spanning 2 decades");

    std::vector<std::pair<double, double>> w;
    for (const auto& [h, v] : s)
        if (v >= v_floor && v <= 1e-2) w.push_back({h, v});
    if (w.size() < 8) throw NoisyData("too few samples inside the fitting window");

    // Local log-log slopes between consecutive samples; the power law shows as
    // a run of near-constant slopes, while contaminated samples (evaluation
    // noise at the bottom, curvature at the top) fall off the median.
    const std::size_t nseg = w.size() - 1;
    std::vector<double> slopes(nseg);
    for (std::size_t i = 0; i < nseg; ++i) {
        double dh = std::log(w[i + 1].first) - std::log(w[i].first);
        slopes[i] = dh > 0.0 ? (std::log(w[i + 1].second) - std::log(w[i].second)) / dh
                             : std::numeric_limits<double>::infinity();
    }
    const double med = median(slopes);
    std::size_t best_lo = 0, best_len = 0;
    std::size_t run_lo = 0, run_len = 0;
    for (std::size_t i = 0; i < nseg; ++i) {
        if (std::isfinite(slopes[i]) && std::fabs(slopes[i] - med) <= 0.25) {
            if (run_len == 0) run_lo = i;
            ++run_len;
            if (run_len > best_len) { best_len = run_len; best_lo = run_lo; }
        } else {
            run_len = 0;
        }
    }
    if (best_len == 0) throw NoisyData("no stable power-law window found");
    const std::size_t lo = best_lo, hi = best_lo + best_len; // samples [lo, hi]
    const std::size_t count = hi - lo + 1;
    const double span = std::log10(w[hi].first / w[lo].first);
    if (count < 8 || span < 0.9)
        throw NoisyData("stable window too short for a reliable order fit");

    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = lo; i <= hi; ++i) {
        double x = std::log(w[i].first), y = std::log(w[i].second);
        sx += x; sy += y; sxx += x * x; sxy += x * y; syy += y * y;
    }
    const double n = double(count);
    const double vxx = sxx - sx * sx / n;
    const double vxy = sxy - sx * sy / n;
    const double vyy = syy - sy * sy / n;
    if (!(vxx > 0.0) || !(vyy > 1e-30)) throw NoisyData("degenerate fitting window");
    const double slope = vxy / vxx;
    const double r2 = (vxy * vxy) / (vxx * vyy);
    if (!(r2 >= 0.999)) throw NoisyData("order fit residuals too large");

    long ord = parity == FitParity::Even ? 2 * std::lround(slope / 2.0) : std::lround(slope);
    const long min_ord = parity == FitParity::Even ? 2 : 1;
    if (ord < min_ord || std::fabs(slope - double(ord)) > 0.15)
        throw NoisyData("fitted slope is not close enough to an admissible integer");

    OrderFit fit;
    fit.order = int(ord);
    fit.slope_raw = slope;
    fit.r_squared = r2;
    fit.h_min = w[lo].first;
    fit.h_max = w[hi].first;
    fit.precision = FitPrecision::Double;
    return fit;
}

namespace {

// One chart of a RIF: the pair with variables possibly swapped, plus the
// monomial data needed to assemble level-curve slice polynomials.
struct ChartPair {
    BiPoly p, pt;
    Complex eta;
    int M, N;
};

ChartPair charted(const Rif& f, int chart) {
    if (chart == 2) return {f.p.transpose(), f.ptilde.transpose(), f.eta, f.N, f.M};
    return {f.p, f.ptilde, f.eta, f.M, f.N};
}

CDD cdd_pow(CDD b, int e) {
    CDD r{1.0, 0.0};
    for (int i = 0; i < e; ++i) r = r * b;
    return r;
}

// cos/sin of a small angle (|th| <= 0.35) by Taylor series in double-double.
// The fiber point must sit on the unit circle to full working precision:
// a plain double fiber is ~1e-16 off radially, which shifts every branch
// root by the same amount and buries high-order vanishing under noise.
std::pair<DD, DD> dd_cos_sin(double th) {
    const DD x{th, 0.0};
    const DD x2 = x * x;
    DD c{1.0, 0.0}, s = x;
    DD tc{1.0, 0.0}, ts = x;
    for (int k = 1; k <= 14; ++k) {
        tc = -(tc * x2) / DD{double((2 * k - 1) * (2 * k)), 0.0};
        ts = -(ts * x2) / DD{double((2 * k) * (2 * k + 1)), 0.0};
        c = c + tc;
        s = s + ts;
    }
    return {c, s};
}

// The double anchor normalized onto the circle in double-double.
CDD unit_dd(Complex t) {
    const CDD z{t};
    const DD a = abs(z);
    return {z.re / a, z.im / a};
}

struct SliceFns {
    std::function<UniPoly(Complex)> slice;
    std::function<std::vector<CDD>(CDD)> slice_dd;
};

SliceFns zero_slices(const ChartPair& g) {
    return {
        [g](Complex z2) { return g.pt.slice(2, z2); },
        [g](CDD z2) { return g.pt.slice_dd(2, z2); },
    };
}

SliceFns level_slices(const ChartPair& g, Complex lambda) {
    auto assemble = [g, lambda](Complex z2) -> UniPoly {
        UniPoly a = g.pt.slice(2, z2);
        UniPoly b = g.p.slice(2, z2);
        const Complex c = g.eta * std::pow(z2, g.N);
        UniPoly out(std::max(a.size() + std::size_t(g.M), b.size()), Complex{0.0, 0.0});
        for (std::size_t i = 0; i < a.size(); ++i) out[i + g.M] += c * a[i];
        for (std::size_t i = 0; i < b.size(); ++i) out[i] -= lambda * b[i];
        return out;
    };
    auto assemble_dd = [g, lambda](CDD z2) -> std::vector<CDD> {
        std::vector<CDD> a = g.pt.slice_dd(2, z2);
        std::vector<CDD> b = g.p.slice_dd(2, z2);
        const CDD c = CDD(g.eta) * cdd_pow(z2, g.N);
        std::vector<CDD> out(std::max(a.size() + std::size_t(g.M), b.size()), CDD{0.0, 0.0});
        for (std::size_t i = 0; i < a.size(); ++i) out[i + g.M] = out[i + g.M] + c * a[i];
        const CDD l{lambda};
        for (std::size_t i = 0; i < b.size(); ++i) out[i] = out[i] - l * b[i];
        return out;
    };
    return {assemble, assemble_dd};
}

// Follow slice roots down the approach ladder on one side of the fiber
// point. Chains grow from the narrowest offset outward; only chains that
// originate at the ladder bottom next to the anchor survive, which is what
// distinguishes branches through the point from bystander curve segments.
//
// Matching a chain to the next fiber's roots uses a quadratic extrapolation
// of its recent positions: branches sharing a tangent move by the same
// first-order step and only separate at second order, so the last position
// alone cannot tell them apart. When even the prediction cannot pick a clear
// winner, the step is bisected in log h until it can (the extrapolation
// error falls cubically with the step while the separation stays put).
std::vector<LocalBranch> trace_side(const SliceFns& fns, Complex tau1, Complex tau2,
                                    int side) {
    const auto& H = approach_ladder();
    struct Chain {
        LocalBranch b;
        double rh[3] = {0, 0, 0}; // ladder-rung history, newest last
        Complex rz[3];
        int np = 0;
        double cur_h = 0.0; // latest accepted position, bisection steps included
        Complex cur_z;
        double speed = 0.0;
        int miss = 0;
        bool alive = true;
    };
    std::vector<Chain> chains;
    const CDD tau2_unit = unit_dd(tau2);

    // All roots of the slice near the anchor, refined together in
    // double-double: near the bottom several branches can fall inside the
    // double solver's cluster resolution, and the chains need them apart.
    auto solve_fiber = [&](double h, std::vector<CDD>& out) -> bool {
        const auto [cth, sth] = dd_cos_sin(side * h);
        const CDD zeta2_dd = tau2_unit * CDD{cth, sth};
        out.clear();
        try {
            RootSet rs = roots_univariate(fns.slice(zeta2_dd.to_complex()));
            if (rs.roots.empty()) return true;
            const std::vector<CDD> coeffs_dd = fns.slice_dd(zeta2_dd);
            for (CDD r : polish_roots_dd(coeffs_dd, rs.roots))
                if (std::abs(r.to_complex() - tau1) <= 0.75) out.push_back(r);
        } catch (const Error&) {
            return false;
        }
        return true;
    };

    // The rung-spaced ring supplies the branch's local shape; the latest
    // accepted position anchors it. Evaluating the ring polynomial as a
    // difference L(target) - L(cur_h) keeps the noise amplification O(1)
    // even when cur_h sits between rungs after bisection, and the residual
    // shape error shrinks with the remaining step.
    auto predict = [](const Chain& c, double ph) -> Complex {
        auto lag = [&](double x) -> Complex {
            if (c.np >= 3) {
                const double x0 = c.rh[0], x1 = c.rh[1], x2 = c.rh[2];
                const double w0 = ((x - x1) * (x - x2)) / ((x0 - x1) * (x0 - x2));
                const double w1 = ((x - x0) * (x - x2)) / ((x1 - x0) * (x1 - x2));
                const double w2 = ((x - x0) * (x - x1)) / ((x2 - x0) * (x2 - x1));
                return w0 * c.rz[0] + w1 * c.rz[1] + w2 * c.rz[2];
            }
            const double t = (x - c.rh[1]) / (c.rh[2] - c.rh[1]);
            return c.rz[2] + t * (c.rz[2] - c.rz[1]);
        };
        if (c.np < 2) return c.cur_z;
        return lag(ph) - lag(c.cur_h) + c.cur_z;
    };

    auto touch = [](Chain& c, double h, Complex z, bool is_rung) {
        if (c.cur_h > 0.0) c.speed = std::abs(z - c.cur_z) / (h - c.cur_h);
        c.cur_h = h;
        c.cur_z = z;
        if (!is_rung) return;
        if (c.np < 3) ++c.np;
        c.rh[0] = c.rh[1]; c.rh[1] = c.rh[2]; c.rh[2] = h;
        c.rz[0] = c.rz[1]; c.rz[1] = c.rz[2]; c.rz[2] = z;
    };

    // Advance every live chain from h_from to h. `rung >= 0` marks a ladder
    // rung whose data is recorded; bisection steps pass rung = -1 and only
    // update the continuity state.
    std::function<void(double, double, int, int)> advance = [&](double h_from, double h,
                                                                int rung, int depth) {
        std::vector<CDD> cand;
        if (!solve_fiber(h, cand)) {
            if (rung >= 0)
                for (auto& c : chains)
                    if (c.alive && ++c.miss >= 3) c.alive = false;
            return; // unusable fiber; chains may bridge the gap
        }
        struct Move { double d; int ci; int rj; };
        std::vector<Move> moves;
        std::vector<double> best(chains.size(), 1e30), second(chains.size(), 1e30);
        std::vector<int> best_rj(chains.size(), -1);
        for (int ci = 0; ci < int(chains.size()); ++ci) {
            Chain& c = chains[std::size_t(ci)];
            if (!c.alive) continue;
            const double cap =
                std::max(6.0 * (h - c.cur_h) * std::max(1.0, 1.8 * c.speed), 2e-7);
            const Complex pred = predict(c, h);
            for (int rj = 0; rj < int(cand.size()); ++rj) {
                const double d = std::abs(cand[std::size_t(rj)].to_complex() - pred);
                if (d > cap) continue;
                moves.push_back({d, ci, rj});
                if (d < best[std::size_t(ci)]) {
                    second[std::size_t(ci)] = best[std::size_t(ci)];
                    best[std::size_t(ci)] = d;
                    best_rj[std::size_t(ci)] = rj;
                } else if (d < second[std::size_t(ci)]) {
                    second[std::size_t(ci)] = d;
                }
            }
        }
        // A chain whose runner-up candidate is nearly as close as its best
        // one -- or two chains pulled toward the same root -- cannot be
        // resolved at this step size.
        bool ambiguous = false;
        for (std::size_t ci = 0; ci < chains.size() && !ambiguous; ++ci) {
            if (!chains[ci].alive || best_rj[ci] < 0) continue;
            if (second[ci] < 2.5 * best[ci] && best[ci] > 1e-11) ambiguous = true;
            for (std::size_t cj = ci + 1; cj < chains.size() && !ambiguous; ++cj)
                if (chains[cj].alive && best_rj[cj] == best_rj[ci] &&
                    std::max(best[ci], best[cj]) <
                        3.0 * std::min(best[ci], best[cj]) &&
                    std::min(best[ci], best[cj]) > 1e-11)
                    ambiguous = true;
        }
        if (ambiguous && depth < 10 && std::log(h / h_from) > 1e-4) {
            const double hm = std::sqrt(h_from * h);
            advance(h_from, hm, -1, depth + 1);
            advance(hm, h, rung, depth + 1);
            return;
        }
        if (trace_enabled() && rung >= 0) {
            int na = 0;
            for (const auto& c : chains) na += c.alive ? 1 : 0;
            std::fprintf(stderr, "[adv] rung %d h=%.3e cand=%zu chains=%zu alive=%d depth=%d\n",
                         rung, h, cand.size(), chains.size(), na, depth);
            for (std::size_t ci = 0; ci < chains.size(); ++ci)
                if (chains[ci].alive)
                    std::fprintf(stderr,
                                 "[adv]   c%zu np=%d miss=%d best=%.2e second=%.2e rj=%d\n", ci,
                                 chains[ci].np, chains[ci].miss, best[ci], second[ci],
                                 best_rj[ci]);
        }
        std::sort(moves.begin(), moves.end(), [](const Move& a, const Move& b) {
            if (a.d != b.d) return a.d < b.d;
            if (a.ci != b.ci) return a.ci < b.ci;
            return a.rj < b.rj;
        });
        std::vector<bool> chain_used(chains.size(), false), root_used(cand.size(), false);
        auto extend = [&](Chain& c, CDD zdd) {
            const Complex z = zdd.to_complex();
            touch(c, h, z, rung >= 0);
            c.miss = 0;
            if (rung < 0) return;
            c.b.rung.push_back(rung);
            c.b.h.push_back(h);
            c.b.z1.push_back(z);
            c.b.z1_dd.push_back(zdd);
            c.b.gap.push_back(double(one_minus_abs(zdd)));
        };
        for (const Move& m : moves) {
            if (chain_used[std::size_t(m.ci)] || root_used[std::size_t(m.rj)]) continue;
            chain_used[std::size_t(m.ci)] = true;
            root_used[std::size_t(m.rj)] = true;
            extend(chains[std::size_t(m.ci)], cand[std::size_t(m.rj)]);
        }
        if (rung < 0) return;
        for (std::size_t ci = 0; ci < chains.size(); ++ci) {
            Chain& c = chains[ci];
            if (!c.alive || chain_used[ci]) continue;
            if (++c.miss >= 3) c.alive = false;
        }
        const double start_window = std::min(0.25, 12.0 * h + 1e-7);
        for (std::size_t rj = 0; rj < cand.size(); ++rj) {
            if (root_used[rj] ||
                std::abs(cand[rj].to_complex() - tau1) > start_window)
                continue;
            chains.emplace_back();
            Chain& c = chains.back();
            c.b.side = side;
            extend(c, cand[rj]);
        }
    };

    for (int j = int(H.size()) - 1; j >= 0; --j) {
        const double h_prev = j + 1 < int(H.size()) ? H[std::size_t(j) + 1] : H[std::size_t(j)];
        advance(h_prev, H[std::size_t(j)], j, 0);
    }

    std::vector<LocalBranch> out;
    for (Chain& c : chains) {
        if (c.b.h.size() < 16) continue;
        if (c.b.h.front() > 2e-6) continue;                 // must reach the bottom
        if (std::abs(c.b.z1.front() - tau1) > 1e-4) continue;
        std::vector<double> ms;
        for (std::size_t i = 0; i < std::min<std::size_t>(5, c.b.h.size()); ++i)
            ms.push_back(std::arg(c.b.z1[i] / tau1) / (side * c.b.h[i]));
        c.b.slope = median(ms);
        out.push_back(std::move(c.b));
    }
    std::sort(out.begin(), out.end(), [](const LocalBranch& a, const LocalBranch& b) {
        return a.slope < b.slope;
    });
    if (trace_enabled()) {
        std::fprintf(stderr, "[ladder] side %+d: %zu anchored chain(s)\n", side, out.size());
        for (const auto& b : out)
            std::fprintf(stderr, "[ladder]   slope %+.4f rungs %zu h=[%.2e, %.2e]\n", b.slope,
                         b.h.size(), b.h.front(), b.h.back());
    }
    return out;
}

std::vector<LocalBranch> trace_both(const SliceFns& fns, Complex tau1, Complex tau2) {
    std::vector<LocalBranch> out = trace_side(fns, tau1, tau2, +1);
    std::vector<LocalBranch> neg = trace_side(fns, tau1, tau2, -1);
    out.insert(out.end(), std::make_move_iterator(neg.begin()),
               std::make_move_iterator(neg.end()));
    return out;
}

std::pair<Complex, Complex> chart_point(Complex t1, Complex t2, int chart) {
    if (chart == 2) return {t2, t1};
    return {t1, t2};
}

void check_chart(int chart) {
    if (chart != 1 && chart != 2) throw InvalidInput("chart must be 1 or 2");
}

} // namespace

std::vector<LocalBranch> zero_branches_at(const Rif& f, Complex tau1, Complex tau2,
                                          int chart) {
    check_chart(chart);
    const ChartPair g = charted(f, chart);
    const auto [a, b] = chart_point(tau1, tau2, chart);
    if (std::abs(a) > 1.0 + 1e-8 || std::abs(b) > 1.0 + 1e-8 ||
        std::abs(a) < 1.0 - 1e-8 || std::abs(b) < 1.0 - 1e-8)
        throw InvalidInput("anchor point must lie on the torus");
    if (std::abs(g.pt.eval(a, b)) > 1e-6)
        throw InvalidInput("anchor point is not on the zero set");
    return trace_both(zero_slices(g), a, b);
}

std::vector<LocalBranch> level_branches_at(const Rif& f, Complex tau1, Complex tau2,
                                           Complex lambda, int chart) {
    check_chart(chart);
    if (std::fabs(std::abs(lambda) - 1.0) > 1e-9)
        throw InvalidInput("level value must be unimodular");
    const ChartPair g = charted(f, chart);
    const auto [a, b] = chart_point(tau1, tau2, chart);
    return trace_both(level_slices(g, lambda), a, b);
}

OrderFit branch_contact_order_fit(const LocalBranch& b) {
    std::vector<std::pair<double, double>> s(b.h.size());
    for (std::size_t i = 0; i < b.h.size(); ++i) s[i] = {b.h[i], b.gap[i]};
    try {
        return fit_order(s, FitParity::Even, 1e-12);
    } catch (const NoisyData&) {
        OrderFit fit = fit_order(s, FitParity::Even, 1e-24);
        fit.precision = FitPrecision::Extended;
        return fit;
    }
}

int branch_contact_order(const LocalBranch& b) { return branch_contact_order_fit(b).order; }

std::vector<int> branch_contact_orders(const Rif& f, Complex tau1, Complex tau2,
                                       int chart) {
    auto branches = zero_branches_at(f, tau1, tau2, chart);
    std::vector<int> plus, minus;
    for (const auto& b : branches)
        (b.side > 0 ? plus : minus).push_back(branch_contact_order(b));
    if (plus.empty() || plus.size() != minus.size())
        throw NoisyData("the approach sides found different numbers of zero branches");
    std::sort(plus.begin(), plus.end());
    std::sort(minus.begin(), minus.end());
    // Every branch germ crosses both sides, so the per-side multisets of
    // fitted orders must coincide.
    if (plus != minus)
        throw NoisyData("the approach sides fit different multisets of branch orders");
    return plus;
}

OrderFit order_of_contact_fit(const LocalBranch& a, const LocalBranch& b) {
    if (a.side != b.side)
        throw InvalidInput("order of contact needs branches on the same approach side");
    std::vector<std::pair<double, double>> s;
    std::size_t i = 0, j = 0;
    while (i < a.rung.size() && j < b.rung.size()) {
        if (a.rung[i] == b.rung[j]) {
            s.push_back({a.h[i], double(abs(a.z1_dd[i] - b.z1_dd[j]))});
            ++i; ++j;
        } else if (a.rung[i] > b.rung[j]) {
            ++i; // deeper rung missing from b
        } else {
            ++j;
        }
    }
    try {
        return fit_order(s, FitParity::Any, 1e-12);
    } catch (const NoisyData&) {
        OrderFit fit = fit_order(s, FitParity::Any, 1e-24);
        fit.precision = FitPrecision::Extended;
        return fit;
    }
}

int order_of_contact(const LocalBranch& a, const LocalBranch& b) {
    return order_of_contact_fit(a, b).order;
}

std::vector<Complex> default_probes(Complex lambda0, int count) {
    if (count < 3) throw InvalidInput("need at least 3 probe values");
    double base = 0.37;
    for (int tries = 0; tries < 64; ++tries) {
        std::vector<Complex> out;
        bool ok = true;
        for (int k = 0; k < count; ++k) {
            const double ang = kTau * k / count + base;
            const Complex z{std::cos(ang), std::sin(ang)};
            if (std::abs(z - lambda0) < 0.12 || std::abs(z + lambda0) < 0.12) {
                ok = false;
                break;
            }
            out.push_back(z);
        }
        if (ok) return out;
        base += 0.11;
    }
    throw NumericalFailure("no probe placement avoids the excluded value");
}

ContactReport contact_order_at(const Rif& f, Complex tau1, Complex tau2,
                               const std::vector<Complex>& probes) {
    if (probes.size() < 3) throw InvalidInput("need at least 3 probe values");
    ContactReport rep;
    rep.branch_orders = branch_contact_orders(f, tau1, tau2, 1);
    rep.branch_orders_chart2 = branch_contact_orders(f, tau1, tau2, 2);
    if (rep.branch_orders.empty() || rep.branch_orders_chart2.empty())
        throw InvalidInput("no zero-set branches anchored at the point");
    rep.K1 = rep.branch_orders.back();
    rep.K2 = rep.branch_orders_chart2.back();
    if (rep.K1 != rep.K2)
        throw EcoViolation("contact orders from the two charts disagree: " +
                           std::to_string(rep.K1) + " vs " + std::to_string(rep.K2));
    rep.K = rep.K1;

    // Cross-check: the largest order of contact between level branches of two
    // probe values recovers the contact order, except for at most one
    // exceptional probe; disagreements are tolerated as long as the majority
    // of pairs lands on the branch value.
    std::vector<std::vector<LocalBranch>> lv(probes.size());
    for (std::size_t i = 0; i < probes.size(); ++i) {
        auto all = level_branches_at(f, tau1, tau2, probes[i], 1);
        for (auto& b : all)
            if (b.side > 0) lv[i].push_back(std::move(b));
    }
    struct PairRec { std::size_t i, j; int value; };
    std::vector<PairRec> recs;
    for (std::size_t i = 0; i < probes.size(); ++i) {
        for (std::size_t j = i + 1; j < probes.size(); ++j) {
            int best = 0;
            bool got = false;
            for (const auto& a : lv[i]) {
                for (const auto& b : lv[j]) {
                    try {
                        best = std::max(best, order_of_contact(a, b));
                        got = true;
                    } catch (const NumericalFailure&) {
                    }
                }
            }
            if (got) {
                recs.push_back({i, j, best});
                rep.pair_orders.push_back(best);
            }
        }
    }
    if (recs.empty()) throw CrossCheckFailure("no probe pair produced an order of contact");
    std::map<int, int> counts;
    for (const auto& r : recs) ++counts[r.value];
    int top_value = 0, top_count = 0;
    for (const auto& [value, count] : counts)
        if (count > top_count) { top_value = value; top_count = count; }
    if (2 * top_count <= int(recs.size()))
        throw CrossCheckFailure("no majority among probe-pair orders of contact");
    if (top_value != rep.K)
        throw CrossCheckFailure("probe-pair majority " + std::to_string(top_value) +
                                " disagrees with branch contact order " +
                                std::to_string(rep.K));
    // A probe whose pairs all disagree -- and which explains every
    // disagreement -- marks the exceptional level curve.
    std::vector<const PairRec*> off;
    for (const auto& r : recs)
        if (r.value != rep.K) off.push_back(&r);
    if (!off.empty()) {
        for (std::size_t q = 0; q < probes.size(); ++q) {
            int with_q = 0, with_q_off = 0;
            for (const auto& r : recs)
                if (r.i == q || r.j == q) {
                    ++with_q;
                    if (r.value != rep.K) ++with_q_off;
                }
            const bool covers = std::all_of(off.begin(), off.end(), [&](const PairRec* r) {
                return r->i == q || r->j == q;
            });
            if (with_q > 0 && with_q == with_q_off && covers) {
                rep.exceptional_candidate = probes[q];
                break;
            }
        }
    }
    return rep;
}

ContactReport contact_order_at(const Rif& f, Complex tau1, Complex tau2) {
    const Complex lambda0 = nontangential_value(f, tau1, tau2);
    return contact_order_at(f, tau1, tau2, default_probes(lambda0));
}

std::optional<int> global_contact_order(const Rif& f) {
    const auto sing = singularities(f);
    if (sing.empty()) return std::nullopt;
    int K = 0;
    for (const auto& s : sing) {
        const ContactReport rep =
            contact_order_at(f, s.tau1, s.tau2, default_probes(s.lambda0));
        K = std::max(K, rep.K);
    }
    return K;
}

IntegrabilityThreshold lp_threshold(std::optional<int> K) {
    IntegrabilityThreshold t;
    t.K = K;
    if (K) {
        if (*K < 1) throw InvalidInput("contact order must be a positive integer");
        t.p_star = 1.0 + 1.0 / double(*K);
    }
    return t;
}

namespace {

std::vector<const LocalBranch*> side_of(const std::vector<LocalBranch>& v, int side) {
    std::vector<const LocalBranch*> out;
    for (const auto& b : v)
        if (b.side == side) out.push_back(&b);
    return out;
}

// Does some injective pairing assign each required order a pair (i, j) with
// kappa[i][j] >= order, using every row and column at most once?
bool kappa_assignment_exists(const std::vector<std::vector<int>>& kappa,
                             const std::vector<int>& needs, std::size_t l,
                             std::vector<bool>& row_used, std::vector<bool>& col_used) {
    if (l == needs.size()) return true;
    for (std::size_t i = 0; i < kappa.size(); ++i) {
        if (row_used[i]) continue;
        for (std::size_t j = 0; j < kappa[i].size(); ++j) {
            if (col_used[j] || kappa[i][j] < needs[l]) continue;
            row_used[i] = col_used[j] = true;
            if (kappa_assignment_exists(kappa, needs, l + 1, row_used, col_used))
                return true;
            row_used[i] = col_used[j] = false;
        }
    }
    return false;
}

} // namespace

bool branch_bijection_check(const Rif& f, Complex tau1, Complex tau2, Complex lambda,
                            Complex mu, std::string* diagnostic) {
    auto fail = [&](const std::string& msg) {
        if (diagnostic) *diagnostic = msg;
        return false;
    };
    const auto zb = zero_branches_at(f, tau1, tau2, 1);
    const auto lb = level_branches_at(f, tau1, tau2, lambda, 1);
    const auto mb = level_branches_at(f, tau1, tau2, mu, 1);
    for (int side : {+1, -1}) {
        const auto zs = side_of(zb, side);
        const auto ls = side_of(lb, side);
        const auto ms = side_of(mb, side);
        if (zs.empty()) return fail("no zero branches found on one approach side");
        if (ls.size() < zs.size() || ms.size() < zs.size())
            return fail("fewer level branches than zero branches on side " +
                        std::to_string(side));
        // Zero branch l wants a pair of level branches kissing to at least
        // its contact order; the pairs must not reuse a level branch. Branch
        // counts are tiny, so search the assignments exhaustively.
        std::vector<int> needs(zs.size());
        for (std::size_t l = 0; l < zs.size(); ++l) {
            try {
                needs[l] = branch_contact_order(*zs[l]);
            } catch (const NumericalFailure& e) {
                return fail(std::string("zero branch order fit failed: ") + e.what());
            }
        }
        std::vector<std::vector<int>> kappa(ls.size(), std::vector<int>(ms.size(), 0));
        for (std::size_t i = 0; i < ls.size(); ++i) {
            for (std::size_t j = 0; j < ms.size(); ++j) {
                try {
                    kappa[i][j] = order_of_contact(*ls[i], *ms[j]);
                } catch (const NumericalFailure&) {
                    // leave 0: this pair certifies nothing
                }
            }
        }
        std::vector<bool> row_used(ls.size(), false), col_used(ms.size(), false);
        if (!kappa_assignment_exists(kappa, needs, 0, row_used, col_used)) {
            std::string msg = "no pairing of level branches covers the zero branch "
                              "orders on side " + std::to_string(side) + "; needs";
            for (int n : needs) msg += " " + std::to_string(n);
            return fail(msg);
        }
    }
    if (diagnostic) diagnostic->clear();
    return true;
}

// --- identities linking intersection multiplicity with orders of contact ---

SumIdentityReport contact_sum_identity(const Rif& f, Complex tau1, Complex tau2,
                                       Complex mu, Complex nu) {
    if (std::abs(mu - nu) < 1e-12) throw InvalidInput("level values must be distinct");
    SumIdentityReport rep;
    rep.multiplicity = intersection_multiplicity(f.p, f.ptilde, tau1, tau2);
    const auto mv = level_branches_at(f, tau1, tau2, mu, 1);
    const auto nv = level_branches_at(f, tau1, tau2, nu, 1);
    const auto ms = side_of(mv, +1);
    const auto ns = side_of(nv, +1);
    rep.kappa.assign(ms.size(), std::vector<int>(ns.size(), 0));
    rep.kappa_sum = 0;
    for (std::size_t i = 0; i < ms.size(); ++i) {
        for (std::size_t j = 0; j < ns.size(); ++j) {
            const int k = order_of_contact(*ms[i], *ns[j]);
            rep.kappa[i][j] = k;
            rep.kappa_sum += k;
        }
    }
    rep.matches = rep.kappa_sum == rep.multiplicity;
    return rep;
}

BoundReport co_vs_im_bound(const Rif& f, Complex tau1, Complex tau2) {
    BoundReport rep;
    rep.multiplicity = intersection_multiplicity(f.p, f.ptilde, tau1, tau2);
    const auto orders = branch_contact_orders(f, tau1, tau2, 1);
    rep.bound = 0;
    for (int a : orders)
        for (int b : orders) rep.bound += std::min(a, b);
    rep.holds = rep.multiplicity <= rep.bound;
    return rep;
}

} // namespace rifscope
