#pragma once
// Univariate polynomials over an exact coefficient ring and reduced rational
// functions over the Gaussian rationals.  Rational functions are normalized to
// a monic denominator with gcd(num, den) = 1, making equality structural.

#include <algorithm>
#include <complex>
#include <cstddef>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "spinchain/exact.hpp"

namespace spinchain {

template <class T>
class Polynomial {
 public:
  Polynomial() = default;
  Polynomial(T c) { coeffs_.push_back(std::move(c)); trim(); }  // NOLINT
  explicit Polynomial(std::vector<T> coeffs) : coeffs_(std::move(coeffs)) {
    trim();
  }

  // The variable itself.
  static Polynomial x() { return Polynomial(std::vector<T>{T(0), T(1)}); }

  bool is_zero() const { return coeffs_.empty(); }
  // Degree of the zero polynomial is reported as -1.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<T>& coeffs() const { return coeffs_; }
  T coeff(std::size_t k) const {
    return k < coeffs_.size() ? coeffs_[k] : T(0);
  }
  const T& leading() const {
    if (coeffs_.empty()) throw std::domain_error("leading of zero polynomial");
    return coeffs_.back();
  }

  Polynomial operator-() const {
    Polynomial r = *this;
    for (auto& c : r.coeffs_) c = -c;
    return r;
  }

  Polynomial& operator+=(const Polynomial& o) {
    if (coeffs_.size() < o.coeffs_.size()) coeffs_.resize(o.coeffs_.size(), T(0));
    for (std::size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] += o.coeffs_[k];
    trim();
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    if (coeffs_.size() < o.coeffs_.size()) coeffs_.resize(o.coeffs_.size(), T(0));
    for (std::size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] -= o.coeffs_[k];
    trim();
    return *this;
  }
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return Polynomial();
    std::vector<T> c(a.coeffs_.size() + b.coeffs_.size() - 1, T(0));
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
      for (std::size_t j = 0; j < b.coeffs_.size(); ++j) {
        c[i + j] += a.coeffs_[i] * b.coeffs_[j];
      }
    }
    return Polynomial(std::move(c));
  }
  Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.coeffs_ == b.coeffs_;
  }
  friend bool operator!=(const Polynomial& a, const Polynomial& b) {
    return !(a == b);
  }

  template <class U>
  U eval(const U& x) const {
    U acc{};
    for (std::size_t k = coeffs_.size(); k-- > 0;) {
      acc = acc * x + value_as<U>(coeffs_[k]);
    }
    return acc;
  }

  Polynomial derivative() const {
    if (coeffs_.size() <= 1) return Polynomial();
    std::vector<T> c(coeffs_.size() - 1);
    for (std::size_t k = 1; k < coeffs_.size(); ++k) c[k - 1] = coeffs_[k] * T(static_cast<long>(k));
    return Polynomial(std::move(c));
  }

  // Substitute x -> a*x + b.
  Polynomial compose_affine(const T& a, const T& b) const {
    Polynomial lin(std::vector<T>{b, a});
    Polynomial acc;
    for (std::size_t k = coeffs_.size(); k-- > 0;) {
      acc = acc * lin + Polynomial(coeffs_[k]);
    }
    return acc;
  }

  // Euclidean division; requires invertible leading coefficient (field T).
  static std::pair<Polynomial, Polynomial> divmod(Polynomial a, const Polynomial& b) {
    if (b.is_zero()) throw std::domain_error("polynomial division by zero");
    Polynomial q;
    q.coeffs_.assign(std::max<int>(a.degree() - b.degree() + 1, 0), T(0));
    while (!a.is_zero() && a.degree() >= b.degree()) {
      T f = a.leading() / b.leading();
      int shift = a.degree() - b.degree();
      q.coeffs_[shift] += f;
      for (std::size_t k = 0; k < b.coeffs_.size(); ++k) {
        a.coeffs_[k + shift] -= f * b.coeffs_[k];
      }
      a.trim();
    }
    q.trim();
    return {std::move(q), std::move(a)};
  }

  // Monic gcd over a field.
  static Polynomial gcd(Polynomial a, Polynomial b) {
    while (!b.is_zero()) {
      Polynomial r = divmod(a, b).second;
      a = std::move(b);
      b = std::move(r);
    }
    if (!a.is_zero()) {
      T inv = T(1) / a.leading();
      for (auto& c : a.coeffs_) c = c * inv;
    }
    return a;
  }

  std::string str(const std::string& var = "x") const {
    if (is_zero()) return "0";
    std::string out;
    for (std::size_t k = coeffs_.size(); k-- > 0;) {
      if (coeffs_[k] == T(0)) continue;
      if (!out.empty()) out += " + ";
      out += "(" + coeff_str(coeffs_[k]) + ")";
      if (k >= 1) out += "*" + var;
      if (k >= 2) out += "^" + std::to_string(k);
    }
    return out;
  }

 private:
  template <class U>
  static U value_as(const T& c) {
    if constexpr (std::is_same_v<U, T>) {
      return c;
    } else {
      return U(c);
    }
  }
  static std::string coeff_str(const GaussianRational& c) { return c.str(); }
  template <class U>
  static std::string coeff_str(const U& c) {
    return "<coeff>";
  }
  void trim() {
    while (!coeffs_.empty() && coeffs_.back() == T(0)) coeffs_.pop_back();
  }
  std::vector<T> coeffs_;
};

using ExactPoly = Polynomial<GaussianRational>;
// Bivariate polynomials: coefficients in the second variable.
using ExactPoly2 = Polynomial<Polynomial<GaussianRational>>;

inline std::complex<double> eval_complex(const ExactPoly& p,
                                         std::complex<double> x) {
  std::complex<double> acc(0.0, 0.0);
  for (std::size_t k = p.coeffs().size(); k-- > 0;) {
    acc = acc * x + p.coeffs()[k].to_complex();
  }
  return acc;
}

// Reduced rational function num/den over the Gaussian rationals.
class RationalFunction {
 public:
  RationalFunction() : num_(), den_(GaussianRational(1)) {}
  RationalFunction(long v) : num_(GaussianRational(v)), den_(GaussianRational(1)) {}  // NOLINT
  RationalFunction(GaussianRational c)  // NOLINT
      : num_(std::move(c)), den_(GaussianRational(1)) {}
  RationalFunction(ExactPoly num)  // NOLINT
      : num_(std::move(num)), den_(GaussianRational(1)) {}
  RationalFunction(ExactPoly num, ExactPoly den) {
    if (den.is_zero()) throw std::domain_error("zero denominator");
    num_ = std::move(num);
    den_ = std::move(den);
    reduce();
  }

  static RationalFunction x() { return RationalFunction(ExactPoly::x()); }

  const ExactPoly& num() const { return num_; }
  const ExactPoly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.degree() == 0; }

  RationalFunction operator-() const {
    RationalFunction r = *this;
    r.num_ = -r.num_;
    return r;
  }
  friend RationalFunction operator+(const RationalFunction& a,
                                    const RationalFunction& b) {
    return RationalFunction(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend RationalFunction operator-(const RationalFunction& a,
                                    const RationalFunction& b) {
    return RationalFunction(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
  }
  friend RationalFunction operator*(const RationalFunction& a,
                                    const RationalFunction& b) {
    return RationalFunction(a.num_ * b.num_, a.den_ * b.den_);
  }
  friend RationalFunction operator/(const RationalFunction& a,
                                    const RationalFunction& b) {
    if (b.is_zero()) throw std::domain_error("division by zero rational function");
    return RationalFunction(a.num_ * b.den_, a.den_ * b.num_);
  }
  RationalFunction& operator+=(const RationalFunction& o) { return *this = *this + o; }
  RationalFunction& operator-=(const RationalFunction& o) { return *this = *this - o; }
  RationalFunction& operator*=(const RationalFunction& o) { return *this = *this * o; }
  RationalFunction& operator/=(const RationalFunction& o) { return *this = *this / o; }

  friend bool operator==(const RationalFunction& a, const RationalFunction& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const RationalFunction& a, const RationalFunction& b) {
    return !(a == b);
  }

  GaussianRational eval(const GaussianRational& x) const {
    GaussianRational d = den_.eval(x);
    if (d.is_zero()) throw std::domain_error("pole in rational function evaluation");
    return num_.eval(x) / d;
  }
  std::complex<double> eval(std::complex<double> x) const {
    return eval_complex(num_, x) / eval_complex(den_, x);
  }

  RationalFunction derivative() const {
    return RationalFunction(num_.derivative() * den_ - num_ * den_.derivative(),
                            den_ * den_);
  }
  // Substitute x -> a*x + b.
  RationalFunction compose_affine(const GaussianRational& a,
                                  const GaussianRational& b) const {
    return RationalFunction(num_.compose_affine(a, b), den_.compose_affine(a, b));
  }

  std::string str(const std::string& var = "x") const {
    if (is_polynomial()) return num_.str(var);
    return "(" + num_.str(var) + ") / (" + den_.str(var) + ")";
  }

 private:
  void reduce() {
    if (num_.is_zero()) {
      den_ = ExactPoly(GaussianRational(1));
      return;
    }
    ExactPoly g = ExactPoly::gcd(num_, den_);
    if (g.degree() > 0) {
      num_ = ExactPoly::divmod(num_, g).first;
      den_ = ExactPoly::divmod(den_, g).first;
    }
    GaussianRational lead = den_.leading();
    if (!(lead == GaussianRational(1))) {
      GaussianRational inv = GaussianRational(1) / lead;
      std::vector<GaussianRational> nc = num_.coeffs(), dc = den_.coeffs();
      for (auto& c : nc) c = c * inv;
      for (auto& c : dc) c = c * inv;
      num_ = ExactPoly(std::move(nc));
      den_ = ExactPoly(std::move(dc));
    }
  }
  ExactPoly num_, den_;
};

}  // namespace spinchain
