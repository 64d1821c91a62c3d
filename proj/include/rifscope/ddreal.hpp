#pragma once

// Double-double arithmetic (Dekker/Knuth error-free transforms, ~31 decimal
// digits). Used to resolve quantities like 1-|root| far below the double
// rounding floor when fitting high contact orders.

#include <cmath>
#include <complex>

namespace rifscope {

struct DD {
    double hi = 0.0;
    double lo = 0.0;

    DD() = default;
    DD(double h) : hi(h), lo(0.0) {}
    DD(double h, double l) : hi(h), lo(l) {}

    explicit operator double() const { return hi + lo; }
};

namespace dd_detail {

inline DD two_sum(double a, double b) {
    double s = a + b;
    double bb = s - a;
    double err = (a - (s - bb)) + (b - bb);
    return {s, err};
}

inline DD quick_two_sum(double a, double b) {
    // requires |a| >= |b|
    double s = a + b;
    return {s, b - (s - a)};
}

inline DD two_prod(double a, double b) {
    double p = a * b;
    return {p, std::fma(a, b, -p)};
}

} // namespace dd_detail

inline DD operator+(DD a, DD b) {
    using namespace dd_detail;
    DD s = two_sum(a.hi, b.hi);
    double lo = s.lo + a.lo + b.lo;
    return quick_two_sum(s.hi, lo);
}

inline DD operator-(DD a) { return {-a.hi, -a.lo}; }
inline DD operator-(DD a, DD b) { return a + (-b); }

inline DD operator*(DD a, DD b) {
    using namespace dd_detail;
    DD p = two_prod(a.hi, b.hi);
    double lo = p.lo + a.hi * b.lo + a.lo * b.hi;
    return quick_two_sum(p.hi, lo);
}

inline DD operator/(DD a, DD b) {
    double q1 = a.hi / b.hi;
    DD r = a - b * DD(q1);
    double q2 = r.hi / b.hi;
    r = r - b * DD(q2);
    double q3 = r.hi / b.hi;
    DD q = dd_detail::quick_two_sum(q1, q2);
    return q + DD(q3);
}

inline bool operator<(DD a, DD b) { return a.hi < b.hi || (a.hi == b.hi && a.lo < b.lo); }
inline bool operator>(DD a, DD b) { return b < a; }

inline DD sqrt(DD a) {
    if (a.hi <= 0.0) return {0.0, 0.0};
    double s = std::sqrt(a.hi);
    // one Newton step in double-double refines to full precision
    DD t = DD(s) + (a / DD(s));
    return t * DD(0.5);
}

inline double abs(DD a) { return std::fabs(a.hi + a.lo); }

// Complex number with double-double components.
struct CDD {
    DD re, im;

    CDD() = default;
    CDD(DD r, DD i) : re(r), im(i) {}
    CDD(double r, double i = 0.0) : re(r), im(i) {}
    CDD(std::complex<double> z) : re(z.real()), im(z.imag()) {}

    std::complex<double> to_complex() const {
        return {double(re), double(im)};
    }
};

inline CDD operator+(CDD a, CDD b) { return {a.re + b.re, a.im + b.im}; }
inline CDD operator-(CDD a, CDD b) { return {a.re - b.re, a.im - b.im}; }
inline CDD operator*(CDD a, CDD b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
inline CDD operator/(CDD a, CDD b) {
    DD d = b.re * b.re + b.im * b.im;
    return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
}

inline DD abs2(CDD z) { return z.re * z.re + z.im * z.im; }
inline DD abs(CDD z) { return sqrt(abs2(z)); }

// 1 - |z|, computed without cancellation: (1 - |z|^2) / (1 + |z|).
inline DD one_minus_abs(CDD z) {
    DD m2 = abs2(z);
    return (DD(1.0) - m2) / (DD(1.0) + sqrt(m2));
}

// Double-precision variant via fma; accurate to ~1e-16 absolute near |z|=1.
inline double one_minus_abs(std::complex<double> z) {
    double t = std::fma(-z.real(), z.real(), 1.0);
    double om2 = std::fma(-z.imag(), z.imag(), t); // 1 - |z|^2, compensated
    double m = std::sqrt(std::fmax(0.0, 1.0 - om2));
    return om2 / (1.0 + m);
}

} // namespace rifscope
