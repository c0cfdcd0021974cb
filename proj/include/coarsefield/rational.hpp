#pragma once

/**
 * @file rational.hpp
 * @brief Exact scalars: GMP rationals and complex numbers over them.
 *
 * Distances, operator entries and field values in exact mode are all
 * carried as `mpq_class`, so min-plus infima, propagation maxima and
 * matrix identities are decided without rounding.
 */

#include <gmpxx.h>

#include <complex>
#include <cstdint>
#include <ostream>
#include <string>

namespace coarsefield {

using Rational = mpq_class;

/// Builds num/den in lowest terms. Throws on a zero denominator.
Rational make_rational(std::int64_t num, std::int64_t den = 1);

std::string to_string(const Rational& q);

inline double to_double(const Rational& q) { return q.get_d(); }

/// Exact complex scalar re + i*im.
struct ComplexRational {
    Rational re;
    Rational im;

    ComplexRational() = default;
    ComplexRational(Rational r) : re(std::move(r)), im(0) {}
    ComplexRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}
    ComplexRational(long r) : re(r), im(0) {}

    bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }

    ComplexRational& operator+=(const ComplexRational& o) {
        re += o.re;
        im += o.im;
        return *this;
    }
    ComplexRational& operator-=(const ComplexRational& o) {
        re -= o.re;
        im -= o.im;
        return *this;
    }

    friend ComplexRational operator+(ComplexRational a, const ComplexRational& b) { return a += b; }
    friend ComplexRational operator-(ComplexRational a, const ComplexRational& b) { return a -= b; }
    friend ComplexRational operator-(const ComplexRational& a) { return {-a.re, -a.im}; }
    friend ComplexRational operator*(const ComplexRational& a, const ComplexRational& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend ComplexRational operator/(const ComplexRational& a, const ComplexRational& b) {
        Rational n = b.re * b.re + b.im * b.im;
        return {(a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n};
    }
    friend bool operator==(const ComplexRational& a, const ComplexRational& b) {
        return a.re == b.re && a.im == b.im;
    }
    friend std::ostream& operator<<(std::ostream& os, const ComplexRational& z);
};

// Scalar traits shared by the dense and sparse matrix templates.

inline ComplexRational conjugate(const ComplexRational& z) { return {z.re, -z.im}; }
inline std::complex<double> conjugate(const std::complex<double>& z) { return std::conj(z); }
inline Rational conjugate(const Rational& q) { return q; }
inline double conjugate(double x) { return x; }

inline bool is_exact_zero(const ComplexRational& z) { return z.is_zero(); }
inline bool is_exact_zero(const std::complex<double>& z) { return z == std::complex<double>{}; }
inline bool is_exact_zero(const Rational& q) { return sgn(q) == 0; }
inline bool is_exact_zero(double x) { return x == 0.0; }

inline double magnitude(const ComplexRational& z) {
    return std::abs(std::complex<double>(z.re.get_d(), z.im.get_d()));
}
inline double magnitude(const std::complex<double>& z) { return std::abs(z); }
inline double magnitude(const Rational& q) { return std::abs(q.get_d()); }

inline std::complex<double> to_complex(const ComplexRational& z) {
    return {z.re.get_d(), z.im.get_d()};
}

}  // namespace coarsefield
