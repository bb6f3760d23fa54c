#pragma once
// Dense square matrices over pluggable scalar types (Gaussian rationals,
// machine complex numbers, and polynomial rings for symbolic identities).
// Products skip zero entries of the left factor, which makes chains of
// embedded few-body operators cheap without a dedicated sparse type.

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "exact.hpp"
#include "poly.hpp"

namespace spinchain {

template <class T>
struct ScalarTraits;

template <>
struct ScalarTraits<GaussianRational> {
    static GaussianRational zero() { return GaussianRational(); }
    static GaussianRational one() { return GaussianRational(1); }
    static GaussianRational imag_unit() { return GaussianRational::i(); }
    static GaussianRational from(const GaussianRational& z) { return z; }
    static bool is_zero(const GaussianRational& z) { return z.is_zero(); }
    static std::complex<double> approx(const GaussianRational& z) {
        return z.to_complex();
    }
};

template <>
struct ScalarTraits<std::complex<double>> {
    static std::complex<double> zero() { return {0.0, 0.0}; }
    static std::complex<double> one() { return {1.0, 0.0}; }
    static std::complex<double> imag_unit() { return {0.0, 1.0}; }
    static std::complex<double> from(const GaussianRational& z) {
        return z.to_complex();
    }
    static bool is_zero(const std::complex<double>& z) {
        return z.real() == 0.0 && z.imag() == 0.0;
    }
    static std::complex<double> approx(const std::complex<double>& z) {
        return z;
    }
};

template <>
struct ScalarTraits<ExactPoly> {
    static ExactPoly zero() { return ExactPoly(); }
    static ExactPoly one() { return ExactPoly(GaussianRational(1)); }
    static ExactPoly imag_unit() { return ExactPoly(GaussianRational::i()); }
    static ExactPoly from(const GaussianRational& z) { return ExactPoly(z); }
    static bool is_zero(const ExactPoly& p) { return p.is_zero(); }
};

template <>
struct ScalarTraits<ExactPoly2> {
    static ExactPoly2 zero() { return ExactPoly2(); }
    static ExactPoly2 one() {
        return ExactPoly2(ExactPoly(GaussianRational(1)));
    }
    static ExactPoly2 imag_unit() {
        return ExactPoly2(ExactPoly(GaussianRational::i()));
    }
    static ExactPoly2 from(const GaussianRational& z) {
        return ExactPoly2(ExactPoly(z));
    }
    static bool is_zero(const ExactPoly2& p) { return p.is_zero(); }
};

// The first spectral parameter as a bivariate polynomial (outer variable).
inline ExactPoly2 var_lambda1() { return ExactPoly2::x(); }

// The second spectral parameter as a bivariate polynomial (inner variable).
inline ExactPoly2 var_lambda2() { return ExactPoly2(ExactPoly::x()); }

template <class T>
class Mat {
  public:
    Mat() : n_(0) {}
    explicit Mat(int n) : n_(n), a_(std::size_t(n) * n, ScalarTraits<T>::zero()) {
        if (n < 0) throw std::invalid_argument("Mat: negative size");
    }

    static Mat identity(int n) {
        Mat m(n);
        for (int i = 0; i < n; ++i) m(i, i) = ScalarTraits<T>::one();
        return m;
    }

    int size() const { return n_; }

    T& operator()(int i, int j) { return a_[std::size_t(i) * n_ + j]; }
    const T& operator()(int i, int j) const { return a_[std::size_t(i) * n_ + j]; }

    Mat operator+(const Mat& o) const {
        check_same(o);
        Mat r(n_);
        for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = a_[k] + o.a_[k];
        return r;
    }

    Mat operator-(const Mat& o) const {
        check_same(o);
        Mat r(n_);
        for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = a_[k] - o.a_[k];
        return r;
    }

    Mat operator*(const Mat& o) const {
        check_same(o);
        Mat r(n_);
        for (int i = 0; i < n_; ++i) {
            const T* row = &a_[std::size_t(i) * n_];
            T* out = &r.a_[std::size_t(i) * n_];
            for (int k = 0; k < n_; ++k) {
                if (ScalarTraits<T>::is_zero(row[k])) continue;
                const T& aik = row[k];
                const T* orow = &o.a_[std::size_t(k) * n_];
                for (int j = 0; j < n_; ++j) {
                    if (ScalarTraits<T>::is_zero(orow[j])) continue;
                    out[j] = out[j] + aik * orow[j];
                }
            }
        }
        return r;
    }

    Mat scaled(const T& c) const {
        Mat r(n_);
        for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = a_[k] * c;
        return r;
    }

    std::vector<T> apply(const std::vector<T>& v) const {
        if (int(v.size()) != n_) throw std::invalid_argument("Mat::apply size");
        std::vector<T> r(n_, ScalarTraits<T>::zero());
        for (int i = 0; i < n_; ++i) {
            const T* row = &a_[std::size_t(i) * n_];
            for (int k = 0; k < n_; ++k) {
                if (ScalarTraits<T>::is_zero(row[k])) continue;
                r[i] = r[i] + row[k] * v[k];
            }
        }
        return r;
    }

    bool is_zero() const {
        for (const T& x : a_)
            if (!ScalarTraits<T>::is_zero(x)) return false;
        return true;
    }

    bool operator==(const Mat& o) const { return n_ == o.n_ && a_ == o.a_; }

  private:
    void check_same(const Mat& o) const {
        if (n_ != o.n_) throw std::invalid_argument("Mat: size mismatch");
    }

    int n_;
    std::vector<T> a_;
};

template <class T>
Mat<T> kron(const Mat<T>& a, const Mat<T>& b) {
    const int na = a.size(), nb = b.size();
    Mat<T> r(na * nb);
    for (int i = 0; i < na; ++i)
        for (int j = 0; j < na; ++j) {
            if (ScalarTraits<T>::is_zero(a(i, j))) continue;
            for (int p = 0; p < nb; ++p)
                for (int q = 0; q < nb; ++q) {
                    if (ScalarTraits<T>::is_zero(b(p, q))) continue;
                    r(i * nb + p, j * nb + q) = a(i, j) * b(p, q);
                }
        }
    return r;
}

inline double max_abs(const Mat<std::complex<double>>& m) {
    double r = 0.0;
    for (int i = 0; i < m.size(); ++i)
        for (int j = 0; j < m.size(); ++j) r = std::max(r, std::abs(m(i, j)));
    return r;
}

// Largest coefficient magnitude across all entries of a polynomial matrix;
// zero means the matrix vanishes identically.
inline double max_abs(const Mat<ExactPoly>& m) {
    double r = 0.0;
    for (int i = 0; i < m.size(); ++i)
        for (int j = 0; j < m.size(); ++j)
            for (int k = 0; k <= m(i, j).degree(); ++k)
                r = std::max(r, std::abs(m(i, j).coeff(k).to_complex()));
    return r;
}

template <class T>
Mat<std::complex<double>> to_numeric(const Mat<T>& m) {
    Mat<std::complex<double>> r(m.size());
    for (int i = 0; i < m.size(); ++i)
        for (int j = 0; j < m.size(); ++j)
            r(i, j) = ScalarTraits<T>::approx(m(i, j));
    return r;
}

}  // namespace spinchain
