#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

#include "lagrax/error.hpp"

namespace lagrax {

using Rational = mpq_class;

inline Rational rat(long num, long den = 1) {
    Rational r(num, den);
    r.canonicalize();
    return r;
}

// Gaussian rational a + b*i.  The whole workbench runs on one coefficient
// type; the imaginary part only wakes up in the zero-curvature data.
class Coeff {
public:
    Coeff() : re_(0), im_(0) {}
    Coeff(long n) : re_(n), im_(0) {}  // NOLINT(google-explicit-constructor)
    Coeff(Rational re) : re_(std::move(re)), im_(0) {}  // NOLINT
    Coeff(Rational re, Rational im) : re_(std::move(re)), im_(std::move(im)) {}

    static Coeff i() { return Coeff(Rational(0), Rational(1)); }
    static Coeff fraction(long num, long den) { return Coeff(rat(num, den)); }

    const Rational& re() const { return re_; }
    const Rational& im() const { return im_; }

    bool is_zero() const { return re_ == 0 && im_ == 0; }
    bool is_one() const { return re_ == 1 && im_ == 0; }
    bool is_real() const { return im_ == 0; }

    Coeff operator-() const { return Coeff(-re_, -im_); }

    Coeff& operator+=(const Coeff& o) {
        re_ += o.re_;
        im_ += o.im_;
        return *this;
    }
    Coeff& operator-=(const Coeff& o) {
        re_ -= o.re_;
        im_ -= o.im_;
        return *this;
    }
    Coeff& operator*=(const Coeff& o) {
        Rational r = re_ * o.re_ - im_ * o.im_;
        Rational i = re_ * o.im_ + im_ * o.re_;
        re_ = std::move(r);
        im_ = std::move(i);
        return *this;
    }

    friend Coeff operator+(Coeff a, const Coeff& b) { return a += b; }
    friend Coeff operator-(Coeff a, const Coeff& b) { return a -= b; }
    friend Coeff operator*(Coeff a, const Coeff& b) { return a *= b; }

    friend Coeff operator/(const Coeff& a, const Coeff& b) {
        if (b.is_zero()) fail("division_by_zero", "coefficient division by zero");
        Rational n = b.re_ * b.re_ + b.im_ * b.im_;
        return Coeff((a.re_ * b.re_ + a.im_ * b.im_) / n,
                     (a.im_ * b.re_ - a.re_ * b.im_) / n);
    }

    friend bool operator==(const Coeff& a, const Coeff& b) {
        return a.re_ == b.re_ && a.im_ == b.im_;
    }
    friend bool operator!=(const Coeff& a, const Coeff& b) { return !(a == b); }

    // total order, used only for canonical term ordering
    friend bool operator<(const Coeff& a, const Coeff& b) {
        int c = cmp(a.re_, b.re_);
        if (c != 0) return c < 0;
        return cmp(a.im_, b.im_) < 0;
    }

    double to_double() const {
        if (im_ != 0) fail("complex_value", "expected a real coefficient");
        return re_.get_d();
    }

    std::string str() const {
        if (im_ == 0) return re_.get_str();
        std::string s = "(" + re_.get_str() + (im_ > 0 ? "+" : "-");
        Rational a = abs(im_);
        if (a != 1) s += a.get_str() + "*";
        s += "i)";
        return s;
    }

private:
    Rational re_, im_;
};

}  // namespace lagrax
