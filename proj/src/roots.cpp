#include "rifscope/roots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <Eigen/Eigenvalues>

#include "rifscope/errors.hpp"

namespace rifscope {

namespace {

// |p(z)| relative to sum_k |c_k||z|^k; the standard backward error of z as a
// root under coefficient-wise relative perturbation.
double backward_error(const UniPoly& c, Complex z) {
    Complex p(0.0);
    double s = 0.0;
    double az = std::abs(z);
    double zp = 1.0;
    for (size_t k = 0; k < c.size(); ++k) {
        s += std::abs(c[k]) * zp;
        zp *= az;
    }
    p = upoly::eval(c, z);
    if (s == 0.0) return 0.0;
    return std::abs(p) / s;
}

std::vector<Complex> companion_roots(const UniPoly& c) {
    int n = int(c.size()) - 1;
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(n, n);
    Complex lead = c[size_t(n)];
    for (int i = 0; i < n; ++i) A(i, n - 1) = -c[size_t(i)] / lead;
    for (int i = 1; i < n; ++i) A(i, i - 1) = 1.0;
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(A, false);
    std::vector<Complex> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) out[size_t(i)] = es.eigenvalues()(i);
    return out;
}

} // namespace

RootSet roots_univariate(const UniPoly& coeffs_in, const RootOptions& opts) {
    RootSet rs;
    UniPoly c = coeffs_in;
    double scale = upoly::max_abs(c);
    if (scale == 0.0 || c.size() <= 1) {
        if (scale == 0.0 && c.size() > 1)
            throw DegenerateInput("roots_univariate: zero polynomial of positive declared degree");
        return rs;
    }
    // leading underflow -> roots escaped to infinity
    while (c.size() > 1 && std::abs(c.back()) <= opts.lead_trim * scale) {
        c.pop_back();
        ++rs.degree_deficit;
    }
    // structurally-zero low coefficients split off exact zero roots; without
    // this a tiny true root can be absorbed into a large multiple-root
    // cluster by the iteration, which freezes any point of the cluster disk
    size_t zero_roots = 0;
    while (zero_roots + 1 < c.size() && std::abs(c[zero_roots]) <= opts.lead_trim * scale)
        ++zero_roots;
    if (zero_roots > 0) c.erase(c.begin(), c.begin() + long(zero_roots));

    int n = int(c.size()) - 1;
    std::vector<Complex> z;
    if (n == 1) {
        z = {-c[0] / c[1]};
    } else if (n >= 2) {
        // initial guesses on an annulus estimated from the coefficients
        double r0 = std::pow(std::abs(c[0] / c.back()), 1.0 / n);
        if (!std::isfinite(r0) || r0 == 0.0) r0 = 1.0;
        r0 = std::clamp(r0, 1e-3, 1e3);
        z.resize(size_t(n));
        for (int i = 0; i < n; ++i) {
            double ang = 2.0 * M_PI * i / n + 0.3961;
            z[size_t(i)] = std::polar(r0, ang);
        }
        UniPoly dc = upoly::derivative(c);
        std::vector<bool> frozen(size_t(n), false);
        std::mt19937_64 rng(0x5EEDULL);
        double prev_err = std::numeric_limits<double>::infinity();
        int stall = 0;
        for (int iter = 0; iter < opts.max_iters; ++iter) {
            double step_max = 0.0;
            for (int i = 0; i < n; ++i) {
                if (frozen[size_t(i)]) continue;
                Complex zi = z[size_t(i)];
                Complex p = upoly::eval(c, zi);
                Complex dp = upoly::eval(dc, zi);
                if (dp == Complex(0.0)) {
                    zi += Complex(1e-8, 1e-8);
                    dp = upoly::eval(dc, zi);
                    p = upoly::eval(c, zi);
                    if (dp == Complex(0.0)) continue;
                }
                Complex N = p / dp;
                Complex S(0.0);
                for (int j = 0; j < n; ++j) {
                    if (j == i) continue;
                    Complex d = zi - z[size_t(j)];
                    if (std::abs(d) < 1e-300) d = Complex(1e-300, 0.0);
                    S += 1.0 / d;
                }
                Complex denom = 1.0 - N * S;
                Complex w = (std::abs(denom) < 1e-300) ? N : N / denom;
                z[size_t(i)] = zi - w;
                step_max = std::max(step_max, std::abs(w));
                if (backward_error(c, z[size_t(i)]) <= 1e-15 * 4 * n) frozen[size_t(i)] = true;
            }
            bool all = true;
            for (int i = 0; i < n; ++i)
                if (!frozen[size_t(i)] && backward_error(c, z[size_t(i)]) > opts.tol) all = false;
            if (all) break;
            if (step_max >= 0.5 * prev_err) {
                if (++stall > 30) {
                    // stagnation: random perturbation restart of unconverged roots
                    std::uniform_real_distribution<double> u(-1.0, 1.0);
                    for (int i = 0; i < n; ++i)
                        if (!frozen[size_t(i)])
                            z[size_t(i)] += 1e-3 * r0 * Complex(u(rng), u(rng));
                    stall = 0;
                }
            } else {
                stall = 0;
            }
            prev_err = step_max;
        }
        // certify; fall back to companion eigenvalues plus Newton polish
        bool ok = true;
        for (int i = 0; i < n; ++i)
            if (backward_error(c, z[size_t(i)]) > opts.tol) ok = false;
        if (!ok) {
            auto ev = companion_roots(c);
            for (auto& r : ev) {
                for (int it = 0; it < 4; ++it) {
                    Complex dp = upoly::eval(dc, r);
                    if (dp == Complex(0.0)) break;
                    r -= upoly::eval(c, r) / dp;
                }
            }
            double worst_ab = 0.0, worst_ev = 0.0;
            for (int i = 0; i < n; ++i) {
                worst_ab = std::max(worst_ab, backward_error(c, z[size_t(i)]));
                worst_ev = std::max(worst_ev, backward_error(c, ev[size_t(i)]));
            }
            if (worst_ev < worst_ab) z = ev;
        }
    }

    for (size_t k = 0; k < zero_roots; ++k) z.push_back(Complex(0.0));
    std::sort(z.begin(), z.end(), [](Complex a, Complex b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    rs.roots = z;
    rs.residuals.reserve(z.size());
    UniPoly full = coeffs_in;
    full.resize(c.size() + zero_roots); // original low coeffs with trimmed lead
    for (size_t k = 0; k < zero_roots; ++k) full[k] = Complex(0.0); // stripped as structural
    for (const auto& r : z) {
        double be = backward_error(full, r);
        rs.residuals.push_back(be);
        if (opts.certify && be > opts.tol)
            throw RootCertificateFailure("roots_univariate: residual above tolerance");
    }
    return rs;
}

std::vector<Complex> unimodular_filter(const std::vector<Complex>& roots, double tol) {
    std::vector<Complex> out;
    for (const auto& r : roots) {
        double a = std::abs(r);
        if (std::abs(a - 1.0) <= tol && a > 0.0) out.push_back(r / a);
    }
    return out;
}

CDD polish_root_dd(const std::vector<CDD>& coeffs, Complex seed, int iters) {
    std::vector<CDD> deriv;
    if (coeffs.size() > 1) {
        deriv.resize(coeffs.size() - 1);
        for (size_t k = 1; k < coeffs.size(); ++k) deriv[k - 1] = CDD(double(k)) * coeffs[k];
    } else {
        deriv.assign(1, CDD(0.0));
    }
    CDD z(seed);
    for (int it = 0; it < iters; ++it) {
        CDD p = upoly::eval(coeffs, z);
        CDD dp = upoly::eval(deriv, z);
        if (double(abs2(dp)) == 0.0) break;
        z = z - p / dp;
    }
    return z;
}

std::vector<CDD> polish_roots_dd(const std::vector<CDD>& coeffs,
                                 const std::vector<Complex>& seeds, int iters) {
    std::vector<CDD> z(seeds.begin(), seeds.end());
    if (coeffs.size() < 2 || z.empty()) return z;
    std::vector<CDD> deriv(coeffs.size() - 1);
    for (size_t k = 1; k < coeffs.size(); ++k) deriv[k - 1] = CDD(double(k)) * coeffs[k];
    const CDD one{1.0, 0.0};
    for (int it = 0; it < iters; ++it) {
        double worst = 0.0;
        for (size_t i = 0; i < z.size(); ++i) {
            const CDD pv = upoly::eval(coeffs, z[i]);
            const CDD dv = upoly::eval(deriv, z[i]);
            if (double(abs2(dv)) == 0.0) continue;
            const CDD w = pv / dv;
            CDD s{0.0, 0.0};
            for (size_t j = 0; j < z.size(); ++j) {
                if (j == i) continue;
                const CDD d = z[i] - z[j];
                if (double(abs2(d)) == 0.0) continue;
                s = s + one / d;
            }
            const CDD denom = one - w * s;
            const CDD corr = double(abs2(denom)) > 1e-60 ? w / denom : w;
            z[i] = z[i] - corr;
            worst = std::max(worst, double(abs(corr)));
        }
        if (worst < 1e-30) break;
    }
    return z;
}

std::vector<int> min_cost_assignment(const std::vector<std::vector<double>>& cost) {
    // Hungarian algorithm with potentials (Jonker-Volgenant style), rows <= cols.
    int n = int(cost.size());
    if (n == 0) return {};
    int m = int(cost[0].size());
    if (m < n) throw InvalidInput("min_cost_assignment: needs rows <= cols");
    const double INF = std::numeric_limits<double>::infinity();
    std::vector<double> u(size_t(n) + 1, 0.0), v(size_t(m) + 1, 0.0);
    std::vector<int> p(size_t(m) + 1, 0), way(size_t(m) + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(size_t(m) + 1, INF);
        std::vector<char> used(size_t(m) + 1, false);
        do {
            used[size_t(j0)] = true;
            int i0 = p[size_t(j0)], j1 = -1;
            double delta = INF;
            for (int j = 1; j <= m; ++j) {
                if (used[size_t(j)]) continue;
                double cur = cost[size_t(i0) - 1][size_t(j) - 1] - u[size_t(i0)] - v[size_t(j)];
                if (cur < minv[size_t(j)]) {
                    minv[size_t(j)] = cur;
                    way[size_t(j)] = j0;
                }
                if (minv[size_t(j)] < delta) {
                    delta = minv[size_t(j)];
                    j1 = j;
                }
            }
            for (int j = 0; j <= m; ++j) {
                if (used[size_t(j)]) {
                    u[size_t(p[size_t(j)])] += delta;
                    v[size_t(j)] -= delta;
                } else {
                    minv[size_t(j)] -= delta;
                }
            }
            j0 = j1;
        } while (p[size_t(j0)] != 0);
        do {
            int j1 = way[size_t(j0)];
            p[size_t(j0)] = p[size_t(j1)];
            j0 = j1;
        } while (j0);
    }
    std::vector<int> match(size_t(n), -1);
    for (int j = 1; j <= m; ++j)
        if (p[size_t(j)] != 0) match[size_t(p[size_t(j)]) - 1] = j - 1;
    return match;
}

} // namespace rifscope
