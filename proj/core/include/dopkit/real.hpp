#ifndef DOPKIT_REAL_HPP
#define DOPKIT_REAL_HPP

#include <boost/multiprecision/mpfr.hpp>
#include <boost/math/constants/constants.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <stdexcept>
#include <string>
#include <utility>

namespace dopkit {

// Fixed-precision real types used throughout the library.  The decimal digit
// counts are chosen so that the underlying mpfr mantissa has at least the
// nominal number of bits.  Expression templates are disabled: values behave
// like plain arithmetic types, which keeps generic code simple.
namespace bmp = boost::multiprecision;

using Real128  = bmp::number<bmp::mpfr_float_backend<40>,  bmp::et_off>;
using Real256  = bmp::number<bmp::mpfr_float_backend<78>,  bmp::et_off>;
using Real512  = bmp::number<bmp::mpfr_float_backend<155>, bmp::et_off>;
using Real1024 = bmp::number<bmp::mpfr_float_backend<310>, bmp::et_off>;

// Canonical precision rungs.  Requests are rounded up to the next rung.
inline int normalize_precision_bits(int bits) {
    if (bits <= 128) return 128;
    if (bits <= 256) return 256;
    if (bits <= 512) return 512;
    if (bits <= 1024) return 1024;
    throw std::invalid_argument("precision_bits above 1024 is not supported");
}

// Calls f with a default-initialized value of the real type matching `bits`
// and returns whatever f returns.  `bits` must be a canonical rung.
template <class F>
decltype(auto) dispatch_precision(int bits, F&& f) {
    switch (normalize_precision_bits(bits)) {
        case 128:  return std::forward<F>(f)(Real128{});
        case 256:  return std::forward<F>(f)(Real256{});
        case 512:  return std::forward<F>(f)(Real512{});
        default:   return std::forward<F>(f)(Real1024{});
    }
}

template <class Real>
Real pi_v() { return boost::math::constants::pi<Real>(); }

// log Gamma for positive arguments; all factorial-like quantities go through
// here so that no raw product can overflow.
template <class Real>
Real log_gamma(const Real& x) { return boost::math::lgamma(x); }

inline double log_gamma(double x) { return std::lgamma(x); }

// Minimal complex pair over any real type; only the operations needed by the
// recurrence evaluations and the 2x2 matrix checks are provided.
template <class Real>
struct Cplx {
    Real re{}, im{};
    Cplx() = default;
    Cplx(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}
    explicit Cplx(const Real& r) : re(r), im(Real(0)) {}

    friend Cplx operator+(const Cplx& a, const Cplx& b) { return {a.re + b.re, a.im + b.im}; }
    friend Cplx operator-(const Cplx& a, const Cplx& b) { return {a.re - b.re, a.im - b.im}; }
    friend Cplx operator*(const Cplx& a, const Cplx& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend Cplx operator*(const Real& s, const Cplx& a) { return {s * a.re, s * a.im}; }
    friend Cplx operator/(const Cplx& a, const Cplx& b) {
        Real d = b.re * b.re + b.im * b.im;
        return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
    }
    Real abs2() const { return re * re + im * im; }
    Real abs() const { using std::sqrt; return sqrt(abs2()); }
};

} // namespace dopkit

#endif
