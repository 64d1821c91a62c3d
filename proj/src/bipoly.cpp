#include "rifscope/bipoly.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"

#include "rifscope/errors.hpp"

namespace rifscope {

namespace upoly {

int degree(const UniPoly& c, double tol) {
    double scale = max_abs(c);
    double cut = tol * scale;
    for (int k = int(c.size()) - 1; k >= 0; --k)
        if (std::abs(c[size_t(k)]) > cut) return k;
    return -1;
}

UniPoly trimmed(UniPoly c, double tol) {
    int d = degree(c, tol);
    c.resize(size_t(d + 1));
    if (c.empty()) c.assign(1, Complex(0.0));
    return c;
}

Complex eval(const UniPoly& c, Complex z) {
    Complex acc(0.0);
    for (size_t k = c.size(); k-- > 0;) acc = acc * z + c[k];
    return acc;
}

CDD eval(const std::vector<CDD>& c, CDD z) {
    CDD acc(0.0);
    for (size_t k = c.size(); k-- > 0;) acc = acc * z + c[k];
    return acc;
}

UniPoly derivative(const UniPoly& c) {
    if (c.size() <= 1) return {Complex(0.0)};
    UniPoly d(c.size() - 1);
    for (size_t k = 1; k < c.size(); ++k) d[k - 1] = double(k) * c[k];
    return d;
}

UniPoly mul(const UniPoly& a, const UniPoly& b) {
    UniPoly r(a.size() + b.size() - 1, Complex(0.0));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
}

UniPoly add(const UniPoly& a, const UniPoly& b) {
    UniPoly r(std::max(a.size(), b.size()), Complex(0.0));
    for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] += b[i];
    return r;
}

UniPoly scale(const UniPoly& a, Complex s) {
    UniPoly r = a;
    for (auto& c : r) c *= s;
    return r;
}

double max_abs(const UniPoly& c) {
    double m = 0.0;
    for (const auto& v : c) m = std::max(m, std::abs(v));
    return m;
}

} // namespace upoly

BiPoly::BiPoly(int m, int n) : m_(m), n_(n), coeffs_(size_t(m + 1) * (n + 1), Complex(0.0)) {
    if (m < 0 || n < 0) throw InvalidInput("BiPoly: negative bidegree");
}

BiPoly::BiPoly(std::vector<std::vector<Complex>> rows, bool trim) {
    if (rows.empty() || rows[0].empty()) throw InvalidInput("BiPoly: empty coefficient matrix");
    size_t cols = rows[0].size();
    for (const auto& r : rows)
        if (r.size() != cols) throw InvalidInput("BiPoly: ragged coefficient matrix");
    m_ = int(rows.size()) - 1;
    n_ = int(cols) - 1;
    coeffs_.resize(rows.size() * cols);
    for (size_t i = 0; i < rows.size(); ++i)
        for (size_t j = 0; j < cols; ++j) coeffs_[i * cols + j] = rows[i][j];
    if (trim) *this = trimmed();
}

BiPoly BiPoly::constant(Complex c) {
    BiPoly p(0, 0);
    p.at(0, 0) = c;
    return p;
}

BiPoly BiPoly::monomial(Complex c, int i, int j) {
    BiPoly p(i, j);
    p.at(i, j) = c;
    return p;
}

double BiPoly::max_abs() const {
    double m = 0.0;
    for (const auto& c : coeffs_) m = std::max(m, std::abs(c));
    return m;
}

bool BiPoly::is_zero(double tol) const {
    double cut = tol;
    for (const auto& c : coeffs_)
        if (std::abs(c) > cut) return false;
    return true;
}

BiPoly BiPoly::trimmed(double tol) const {
    double cut = tol * max_abs();
    auto row_zero = [&](int i) {
        for (int j = 0; j <= n_; ++j)
            if (std::abs(coeff(i, j)) > cut) return false;
        return true;
    };
    auto col_zero = [&](int j) {
        for (int i = 0; i <= m_; ++i)
            if (std::abs(coeff(i, j)) > cut) return false;
        return true;
    };
    int m = m_, n = n_;
    while (m > 0 && row_zero(m)) --m;
    while (n > 0 && col_zero(n)) --n;
    BiPoly out(m, n);
    for (int i = 0; i <= m; ++i)
        for (int j = 0; j <= n; ++j) {
            Complex c = coeff(i, j);
            out.at(i, j) = (std::abs(c) <= cut) ? Complex(0.0) : c;
        }
    return out;
}

BiPoly BiPoly::padded(int m, int n) const {
    if (m < m_ || n < n_) throw InvalidInput("BiPoly::padded: target bidegree too small");
    BiPoly out(m, n);
    for (int i = 0; i <= m_; ++i)
        for (int j = 0; j <= n_; ++j) out.at(i, j) = coeff(i, j);
    return out;
}

Complex BiPoly::eval(Complex z1, Complex z2) const {
    // Horner in z1 over Horner-in-z2 row values.
    Complex acc(0.0);
    for (int i = m_; i >= 0; --i) {
        Complex row(0.0);
        for (int j = n_; j >= 0; --j) row = row * z2 + coeff(i, j);
        acc = acc * z1 + row;
    }
    return acc;
}

CDD BiPoly::eval_dd(CDD z1, CDD z2) const {
    CDD acc(0.0);
    for (int i = m_; i >= 0; --i) {
        CDD row(0.0);
        for (int j = n_; j >= 0; --j) row = row * z2 + CDD(coeff(i, j));
        acc = acc * z1 + row;
    }
    return acc;
}

BiPoly BiPoly::reflect() const {
    BiPoly out(m_, n_);
    for (int i = 0; i <= m_; ++i)
        for (int j = 0; j <= n_; ++j) out.at(i, j) = std::conj(coeff(m_ - i, n_ - j));
    return out;
}

BiPoly BiPoly::conj_coeffs() const {
    BiPoly out(m_, n_);
    for (int i = 0; i <= m_; ++i)
        for (int j = 0; j <= n_; ++j) out.at(i, j) = std::conj(coeff(i, j));
    return out;
}

BiPoly BiPoly::transpose() const {
    BiPoly out(n_, m_);
    for (int i = 0; i <= m_; ++i)
        for (int j = 0; j <= n_; ++j) out.at(j, i) = coeff(i, j);
    return out;
}

BiPoly BiPoly::operator+(const BiPoly& o) const {
    BiPoly out(std::max(m_, o.m_), std::max(n_, o.n_));
    for (int i = 0; i <= out.m_; ++i)
        for (int j = 0; j <= out.n_; ++j) out.at(i, j) = coeff(i, j) + o.coeff(i, j);
    return out;
}

BiPoly BiPoly::operator-(const BiPoly& o) const {
    BiPoly out(std::max(m_, o.m_), std::max(n_, o.n_));
    for (int i = 0; i <= out.m_; ++i)
        for (int j = 0; j <= out.n_; ++j) out.at(i, j) = coeff(i, j) - o.coeff(i, j);
    return out;
}

BiPoly BiPoly::operator*(const BiPoly& o) const {
    BiPoly out(m_ + o.m_, n_ + o.n_);
    for (int i = 0; i <= m_; ++i)
        for (int j = 0; j <= n_; ++j) {
            Complex c = coeff(i, j);
            if (c == Complex(0.0)) continue;
            for (int k = 0; k <= o.m_; ++k)
                for (int l = 0; l <= o.n_; ++l) out.at(i + k, j + l) += c * o.coeff(k, l);
        }
    return out;
}

BiPoly BiPoly::operator*(Complex s) const {
    BiPoly out = *this;
    for (auto& c : out.coeffs_) c *= s;
    return out;
}

BiPoly BiPoly::operator-() const { return *this * Complex(-1.0); }

BiPoly BiPoly::partial(int var) const {
    if (var == 1) {
        if (m_ == 0) return BiPoly(0, n_);
        BiPoly out(m_ - 1, n_);
        for (int i = 1; i <= m_; ++i)
            for (int j = 0; j <= n_; ++j) out.at(i - 1, j) = double(i) * coeff(i, j);
        return out;
    }
    if (var == 2) {
        if (n_ == 0) return BiPoly(m_, 0);
        BiPoly out(m_, n_ - 1);
        for (int i = 0; i <= m_; ++i)
            for (int j = 1; j <= n_; ++j) out.at(i, j - 1) = double(j) * coeff(i, j);
        return out;
    }
    throw InvalidInput("BiPoly::partial: var must be 1 or 2");
}

UniPoly BiPoly::slice(int var, Complex value) const {
    if (var == 2) {
        // fix z2, polynomial in z1
        UniPoly out(size_t(m_) + 1);
        for (int i = 0; i <= m_; ++i) {
            Complex acc(0.0);
            for (int j = n_; j >= 0; --j) acc = acc * value + coeff(i, j);
            out[size_t(i)] = acc;
        }
        return out;
    }
    if (var == 1) {
        UniPoly out(size_t(n_) + 1);
        for (int j = 0; j <= n_; ++j) {
            Complex acc(0.0);
            for (int i = m_; i >= 0; --i) acc = acc * value + coeff(i, j);
            out[size_t(j)] = acc;
        }
        return out;
    }
    throw InvalidInput("BiPoly::slice: var must be 1 or 2");
}

std::vector<CDD> BiPoly::slice_dd(int var, CDD value) const {
    if (var == 2) {
        std::vector<CDD> out(size_t(m_) + 1);
        for (int i = 0; i <= m_; ++i) {
            CDD acc(0.0);
            for (int j = n_; j >= 0; --j) acc = acc * value + CDD(coeff(i, j));
            out[size_t(i)] = acc;
        }
        return out;
    }
    if (var == 1) {
        std::vector<CDD> out(size_t(n_) + 1);
        for (int j = 0; j <= n_; ++j) {
            CDD acc(0.0);
            for (int i = m_; i >= 0; --i) acc = acc * value + CDD(coeff(i, j));
            out[size_t(j)] = acc;
        }
        return out;
    }
    throw InvalidInput("BiPoly::slice_dd: var must be 1 or 2");
}

BiPoly BiPoly::shear2(Complex s) const {
    // z2 <- z2 + s*z1: z1^i z2^j -> z1^i sum_k C(j,k) s^(j-k) z1^(j-k) z2^k
    BiPoly out(m_ + n_, n_);
    std::vector<std::vector<double>> binom(size_t(n_) + 1, std::vector<double>(size_t(n_) + 1, 0.0));
    for (int j = 0; j <= n_; ++j) {
        binom[j][0] = 1.0;
        for (int k = 1; k <= j; ++k)
            binom[j][k] = binom[j - 1][k - 1] + (k <= j - 1 ? binom[j - 1][k] : 0.0);
    }
    for (int i = 0; i <= m_; ++i)
        for (int j = 0; j <= n_; ++j) {
            Complex c = coeff(i, j);
            if (c == Complex(0.0)) continue;
            Complex spow(1.0);
            // k runs over remaining z2 power; accumulate s^(j-k) descending
            for (int d = 0; d <= j; ++d) {
                int k = j - d; // z2 power
                out.at(i + d, k) += c * binom[j][k] * spow;
                spow *= s;
            }
        }
    return out;
}

BiPoly BiPoly::reverse(int var) const {
    BiPoly out(m_, n_);
    for (int i = 0; i <= m_; ++i)
        for (int j = 0; j <= n_; ++j) {
            int ii = (var == 1) ? m_ - i : i;
            int jj = (var == 2) ? n_ - j : j;
            out.at(ii, jj) = coeff(i, j);
        }
    return out;
}

BiPoly BiPoly::rotate(Complex a1, Complex a2) const {
    BiPoly out(m_, n_);
    Complex p1(1.0);
    for (int i = 0; i <= m_; ++i) {
        Complex p2(1.0);
        for (int j = 0; j <= n_; ++j) {
            out.at(i, j) = coeff(i, j) * p1 * p2;
            p2 *= a2;
        }
        p1 *= a1;
    }
    return out;
}

UniPoly BiPoly::restrict_line(Complex x1, Complex x2, Complex y1, Complex y2) const {
    // powers of (x + y w) by repeated convolution
    std::vector<UniPoly> pow1(size_t(m_) + 1), pow2(size_t(n_) + 1);
    pow1[0] = {Complex(1.0)};
    for (int i = 1; i <= m_; ++i) pow1[size_t(i)] = upoly::mul(pow1[size_t(i) - 1], {x1, y1});
    pow2[0] = {Complex(1.0)};
    for (int j = 1; j <= n_; ++j) pow2[size_t(j)] = upoly::mul(pow2[size_t(j) - 1], {x2, y2});
    UniPoly out(size_t(m_ + n_) + 1, Complex(0.0));
    for (int i = 0; i <= m_; ++i)
        for (int j = 0; j <= n_; ++j) {
            Complex c = coeff(i, j);
            if (c == Complex(0.0)) continue;
            UniPoly term = upoly::mul(pow1[size_t(i)], pow2[size_t(j)]);
            for (size_t k = 0; k < term.size(); ++k) out[k] += c * term[k];
        }
    return out;
}

bool BiPoly::equals(const BiPoly& o, double tol) const {
    int m = std::max(m_, o.m_), n = std::max(n_, o.n_);
    double cut = tol * std::max(max_abs(), o.max_abs());
    for (int i = 0; i <= m; ++i)
        for (int j = 0; j <= n; ++j)
            if (std::abs(coeff(i, j) - o.coeff(i, j)) > cut) return false;
    return true;
}

std::string BiPoly::to_json() const {
    nlohmann::json j;
    j["bidegree"] = {m_, n_};
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i <= m_; ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (int k = 0; k <= n_; ++k) {
            Complex c = coeff(i, k);
            row.push_back({c.real(), c.imag()});
        }
        rows.push_back(row);
    }
    j["coeffs"] = rows;
    return j.dump();
}

BiPoly BiPoly::from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput(std::string("BiPoly JSON parse error: ") + e.what());
    }
    if (!j.contains("bidegree") || !j.contains("coeffs"))
        throw InvalidInput("BiPoly JSON: missing bidegree or coeffs");
    int m = j["bidegree"].at(0).get<int>();
    int n = j["bidegree"].at(1).get<int>();
    if (m < 0 || n < 0) throw InvalidInput("BiPoly JSON: negative bidegree");
    const auto& rows = j["coeffs"];
    if (int(rows.size()) != m + 1) throw InvalidInput("BiPoly JSON: row count != bidegree+1");
    BiPoly out(m, n);
    for (int i = 0; i <= m; ++i) {
        const auto& row = rows.at(size_t(i));
        if (int(row.size()) != n + 1) throw InvalidInput("BiPoly JSON: column count != bidegree+1");
        for (int k = 0; k <= n; ++k) {
            const auto& c = row.at(size_t(k));
            out.at(i, k) = Complex(c.at(0).get<double>(), c.at(1).get<double>());
        }
    }
    return out;
}

std::optional<Complex> essential_symmetry(const BiPoly& r, double tol) {
    BiPoly rt = r.reflect();
    double scale = r.max_abs();
    if (scale == 0.0) throw InvalidInput("essential_symmetry: zero polynomial");
    // ratio at the largest coefficient
    Complex num, den;
    double best = -1.0;
    for (int i = 0; i <= r.deg1(); ++i)
        for (int j = 0; j <= r.deg2(); ++j) {
            double a = std::abs(r.coeff(i, j));
            if (a > best) {
                best = a;
                den = r.coeff(i, j);
                num = rt.coeff(i, j);
            }
        }
    Complex lambda = num / den;
    // check rt == lambda * r
    for (int i = 0; i <= r.deg1(); ++i)
        for (int j = 0; j <= r.deg2(); ++j)
            if (std::abs(rt.coeff(i, j) - lambda * r.coeff(i, j)) > tol * scale) return std::nullopt;
    if (std::abs(std::abs(lambda) - 1.0) > 100 * tol)
        throw AmbiguousSymmetry("essential_symmetry: proportionality constant has non-unit modulus (declared bidegree mismatch?)");
    return lambda / std::abs(lambda);
}

} // namespace rifscope
