#include "rifscope/tracking.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "rifscope/errors.hpp"

namespace rifscope {

namespace {

struct Chain {
    std::vector<double> thetas;
    std::vector<Complex> values;
    std::deque<double> speeds; // recent |dz|/|dtheta|
};

double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + long(mid), v.end());
    return v[mid];
}

} // namespace

std::vector<Branch> track_family(const std::function<UniPoly(double)>& family,
                                 const std::vector<double>& thetas,
                                 const TrackOptions& opts) {
    std::vector<Branch> done;
    std::vector<Chain> live;
    auto retire = [&](Chain&& ch) {
        Branch b;
        b.thetas = std::move(ch.thetas);
        b.values = std::move(ch.values);
        done.push_back(std::move(b));
    };

    RootOptions ropt;
    ropt.lead_trim = opts.lead_trim;
    ropt.tol = opts.root_tol;

    double prev_theta = 0.0;
    bool first = true;
    for (double theta : thetas) {
        UniPoly c = family(theta);
        RootSet rs = roots_univariate(c, ropt);
        const auto& roots = rs.roots;
        if (first) {
            for (const auto& r : roots) {
                Chain ch;
                ch.thetas.push_back(theta);
                ch.values.push_back(r);
                live.push_back(std::move(ch));
            }
            first = false;
            prev_theta = theta;
            continue;
        }
        double spacing = std::abs(theta - prev_theta);

        if (roots.empty()) {
            for (auto& ch : live) retire(std::move(ch));
            live.clear();
            prev_theta = theta;
            continue;
        }
        if (live.empty()) {
            for (const auto& r : roots) {
                Chain ch;
                ch.thetas.push_back(theta);
                ch.values.push_back(r);
                live.push_back(std::move(ch));
            }
            prev_theta = theta;
            continue;
        }

        // cost matrix: chains x roots (pad conceptually by allowing unmatched)
        size_t nc = live.size(), nr = roots.size();
        std::vector<std::vector<double>> cost;
        bool chains_are_rows = nc <= nr;
        size_t rows = chains_are_rows ? nc : nr, cols = chains_are_rows ? nr : nc;
        cost.assign(rows, std::vector<double>(cols, 0.0));
        for (size_t i = 0; i < nc; ++i)
            for (size_t j = 0; j < nr; ++j) {
                double d = std::abs(live[i].values.back() - roots[j]);
                if (chains_are_rows)
                    cost[i][j] = d;
                else
                    cost[j][i] = d;
            }
        std::vector<int> match = min_cost_assignment(cost);
        // chain index -> root index (-1: unmatched)
        std::vector<int> chain_to_root(nc, -1);
        if (chains_are_rows) {
            for (size_t i = 0; i < nc; ++i) chain_to_root[i] = match[i];
        } else {
            for (size_t j = 0; j < nr; ++j)
                if (match[j] >= 0) chain_to_root[size_t(match[j])] = int(j);
        }

        // ambiguity probe: best pairwise swap vs chosen assignment
        if (opts.throw_on_ambiguity) {
            double base = 0.0;
            for (size_t i = 0; i < nc; ++i)
                if (chain_to_root[i] >= 0)
                    base += std::abs(live[i].values.back() - roots[size_t(chain_to_root[i])]);
            double second = std::numeric_limits<double>::infinity();
            for (size_t i = 0; i < nc; ++i)
                for (size_t k = i + 1; k < nc; ++k) {
                    int ri = chain_to_root[i], rk = chain_to_root[k];
                    if (ri < 0 || rk < 0) continue;
                    double swapped = base -
                        std::abs(live[i].values.back() - roots[size_t(ri)]) -
                        std::abs(live[k].values.back() - roots[size_t(rk)]) +
                        std::abs(live[i].values.back() - roots[size_t(rk)]) +
                        std::abs(live[k].values.back() - roots[size_t(ri)]);
                    second = std::min(second, swapped);
                }
            double noise = 1e-9 * (1.0 + spacing);
            if (std::isfinite(second) && base > noise && second < opts.ambiguity_ratio * base)
                throw TrackingAmbiguity("track_family: two assignments within cost ratio 1.2; refine the grid");
        }

        double jump = opts.match_jump;
        if (jump <= 0.0) {
            std::vector<double> sp;
            for (const auto& ch : live)
                for (double s : ch.speeds) sp.push_back(s);
            double med = median(sp);
            if (med <= 0.0) med = 1.0;
            jump = 8.0 * spacing * med;
            jump = std::max(jump, 1e-9);
        }

        std::vector<bool> root_used(nr, false);
        std::vector<Chain> next_live;
        for (size_t i = 0; i < nc; ++i) {
            int j = chain_to_root[i];
            bool ok = j >= 0 && std::abs(live[i].values.back() - roots[size_t(j)]) <= jump;
            if (ok) {
                Chain ch = std::move(live[i]);
                double d = std::abs(ch.values.back() - roots[size_t(j)]);
                ch.speeds.push_back(spacing > 0 ? d / spacing : 0.0);
                while (ch.speeds.size() > 5) ch.speeds.pop_front();
                ch.thetas.push_back(theta);
                ch.values.push_back(roots[size_t(j)]);
                root_used[size_t(j)] = true;
                next_live.push_back(std::move(ch));
            } else {
                retire(std::move(live[i]));
            }
        }
        for (size_t j = 0; j < nr; ++j) {
            if (root_used[j]) continue;
            Chain ch;
            ch.thetas.push_back(theta);
            ch.values.push_back(roots[j]);
            next_live.push_back(std::move(ch));
        }
        live = std::move(next_live);
        prev_theta = theta;
    }
    for (auto& ch : live) retire(std::move(ch));

    // deterministic ordering: by first theta, then by value
    std::sort(done.begin(), done.end(), [](const Branch& a, const Branch& b) {
        if (a.thetas.empty() || b.thetas.empty()) return a.thetas.size() < b.thetas.size();
        if (a.thetas.front() != b.thetas.front()) return a.thetas.front() < b.thetas.front();
        Complex va = a.values.front(), vb = b.values.front();
        if (va.real() != vb.real()) return va.real() < vb.real();
        return va.imag() < vb.imag();
    });
    return done;
}

} // namespace rifscope
