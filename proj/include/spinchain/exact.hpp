#pragma once
// Exact scalar arithmetic: Gaussian rationals a + b*i with arbitrary-precision
// rational components (GMP).  This is the coefficient field for all exact
// R-matrix / polynomial computations in the library.

#include <gmpxx.h>

#include <complex>
#include <cstdlib>
#include <ostream>
#include <stdexcept>
#include <string>

namespace spinchain {

using Rational = mpq_class;

// Gaussian rational: re + im * i, with exact rational components.
class GaussianRational {
 public:
  GaussianRational() : re_(0), im_(0) {}
  GaussianRational(long v) : re_(v), im_(0) {}  // NOLINT(runtime/explicit)
  GaussianRational(const Rational& re) : re_(re), im_(0) {}  // NOLINT
  GaussianRational(Rational re, Rational im)
      : re_(std::move(re)), im_(std::move(im)) {
    re_.canonicalize();
    im_.canonicalize();
  }

  static GaussianRational i() { return GaussianRational(Rational(0), Rational(1)); }

  // Parses "p/q" or "p" (used by config ingestion).
  static Rational parse_rational(const std::string& s) {
    Rational r;
    if (r.set_str(s, 10) != 0) {
      throw std::invalid_argument("invalid rational literal: " + s);
    }
    r.canonicalize();
    return r;
  }

  const Rational& real() const { return re_; }
  const Rational& imag() const { return im_; }

  bool is_zero() const { return re_ == 0 && im_ == 0; }
  bool is_real() const { return im_ == 0; }

  GaussianRational operator-() const { return GaussianRational(-re_, -im_); }
  GaussianRational conj() const { return GaussianRational(re_, -im_); }

  GaussianRational& operator+=(const GaussianRational& o) {
    re_ += o.re_;
    im_ += o.im_;
    return *this;
  }
  GaussianRational& operator-=(const GaussianRational& o) {
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
  }
  GaussianRational& operator*=(const GaussianRational& o) {
    Rational r = re_ * o.re_ - im_ * o.im_;
    Rational i = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(r);
    im_ = std::move(i);
    return *this;
  }
  GaussianRational& operator/=(const GaussianRational& o) {
    Rational n = o.re_ * o.re_ + o.im_ * o.im_;
    if (n == 0) throw std::domain_error("division by zero GaussianRational");
    Rational r = (re_ * o.re_ + im_ * o.im_) / n;
    Rational i = (im_ * o.re_ - re_ * o.im_) / n;
    re_ = std::move(r);
    im_ = std::move(i);
    return *this;
  }

  friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) {
    return a += b;
  }
  friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) {
    return a -= b;
  }
  friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) {
    return a *= b;
  }
  friend GaussianRational operator/(GaussianRational a, const GaussianRational& b) {
    return a /= b;
  }
  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }
  friend bool operator!=(const GaussianRational& a, const GaussianRational& b) {
    return !(a == b);
  }

  std::complex<double> to_complex() const {
    return {re_.get_d(), im_.get_d()};
  }

  // Serialized as "p/q" when real, otherwise "p/q+r/s*i".
  std::string str() const {
    if (im_ == 0) return re_.get_str();
    std::string s = re_.get_str();
    std::string t = im_.get_str();
    if (!t.empty() && t[0] == '-') {
      return s + "-" + t.substr(1) + "*i";
    }
    return s + "+" + t + "*i";
  }

  friend std::ostream& operator<<(std::ostream& os, const GaussianRational& x) {
    return os << x.str();
  }

 private:
  Rational re_, im_;
};

}  // namespace spinchain
