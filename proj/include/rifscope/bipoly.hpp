#pragma once

// Polynomials in two complex variables with dense coefficient storage, plus
// the univariate slices everything downstream consumes.

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rifscope/ddreal.hpp"

namespace rifscope {

using Complex = std::complex<double>;

// Univariate polynomial, coefficient of z^k at index k.
using UniPoly = std::vector<Complex>;

namespace upoly {

// Degree after ignoring trailing coefficients below `tol` relative to the
// largest one. Returns -1 for the (numerically) zero polynomial.
int degree(const UniPoly& c, double tol = 0.0);

UniPoly trimmed(UniPoly c, double tol = 0.0);

Complex eval(const UniPoly& c, Complex z);
CDD eval(const std::vector<CDD>& c, CDD z);

UniPoly derivative(const UniPoly& c);

UniPoly mul(const UniPoly& a, const UniPoly& b);
UniPoly add(const UniPoly& a, const UniPoly& b);
UniPoly scale(const UniPoly& a, Complex s);

double max_abs(const UniPoly& c);

} // namespace upoly

class BiPoly {
public:
    BiPoly() : m_(0), n_(0), coeffs_(1, Complex(0.0)) {}

    // Zero polynomial padded to declared bidegree (m, n).
    BiPoly(int m, int n);

    // Row-major coefficients, coeffs[i][j] multiplying z1^i z2^j. The declared
    // bidegree is (rows-1, cols-1); pass trim=true to drop zero fringe rows
    // and columns and store the tight bidegree instead.
    BiPoly(std::vector<std::vector<Complex>> rows, bool trim = false);

    static BiPoly constant(Complex c);
    // Single monomial c * z1^i z2^j.
    static BiPoly monomial(Complex c, int i, int j);

    int deg1() const { return m_; }
    int deg2() const { return n_; }
    std::pair<int, int> bidegree() const { return {m_, n_}; }

    Complex coeff(int i, int j) const {
        if (i < 0 || j < 0 || i > m_ || j > n_) return {};
        return coeffs_[size_t(i) * (n_ + 1) + j];
    }
    Complex& at(int i, int j) { return coeffs_[size_t(i) * (n_ + 1) + j]; }

    // Largest coefficient magnitude.
    double max_abs() const;
    bool is_zero(double tol = 0.0) const;

    // Drop fringe rows/columns whose entries are all <= tol * max_abs().
    BiPoly trimmed(double tol = 0.0) const;
    // Re-declare the bidegree as (m, n) >= current, padding with zeros.
    BiPoly padded(int m, int n) const;

    Complex eval(Complex z1, Complex z2) const;
    CDD eval_dd(CDD z1, CDD z2) const;

    // Reflection relative to the declared bidegree:
    //   q(z1,z2) = z1^m z2^n conj(p(1/conj(z1), 1/conj(z2)))
    // i.e. q[i][j] = conj(p[m-i][n-j]).
    BiPoly reflect() const;

    BiPoly conj_coeffs() const;
    // Swap the roles of the two variables (transpose the coefficient matrix).
    BiPoly transpose() const;

    BiPoly operator+(const BiPoly& o) const;
    BiPoly operator-(const BiPoly& o) const;
    BiPoly operator*(const BiPoly& o) const;
    BiPoly operator*(Complex s) const;
    BiPoly operator-() const;

    // Partial derivative; var is 1 or 2.
    BiPoly partial(int var) const;

    // Univariate slice: fix the named variable to `value`, returning a
    // polynomial in the other variable. var is the variable being fixed.
    UniPoly slice(int var, Complex value) const;
    // Slice with double-double coefficient accumulation; `value` should be
    // (nearly) exact, e.g. built from a tangent half-angle parametrization.
    std::vector<CDD> slice_dd(int var, CDD value) const;

    // Substitute z_kept unchanged and z_other <- z_other + s*z_kept;
    // var names the variable that receives the shear (1 means z1 stays and
    // z2 <- z2 + s*z1).
    BiPoly shear2(Complex s) const;

    // Reverse one variable: z_var <- 1/z_var, multiplied by z_var^deg.
    BiPoly reverse(int var) const;

    // Substitute z1 <- a1*z1, z2 <- a2*z2.
    BiPoly rotate(Complex a1, Complex a2) const;

    // Univariate polynomial in w obtained from z1 = x1 + y1*w, z2 = x2 + y2*w.
    UniPoly restrict_line(Complex x1, Complex x2, Complex y1, Complex y2) const;

    bool equals(const BiPoly& o, double tol = 0.0) const;

    std::string to_json() const;
    static BiPoly from_json(const std::string& text);

private:
    int m_, n_;
    std::vector<Complex> coeffs_; // (m_+1) x (n_+1), row-major in z1 power
};

inline BiPoly operator*(Complex s, const BiPoly& p) { return p * s; }

// Unimodular lambda with reflect(r) == lambda * r, if one exists within
// `tol` (relative). Throws AmbiguousSymmetry if a proportionality constant
// of non-unit modulus matches (signals a bidegree mismatch).
std::optional<Complex> essential_symmetry(const BiPoly& r, double tol = 1e-10);

} // namespace rifscope
