#pragma once
// Rational R-matrices and their defining identities: the graded Yang-Baxter
// equation, unitarity, the conjugated matrix Rbar used by open chains with
// a conjugate auxiliary space, and crossing unitarity.

#include <vector>

#include "graded_ops.hpp"
#include "grading.hpp"
#include "matrix.hpp"

namespace spinchain {

template <class T>
T scalar_i_times(const Rational& r) {
    return ScalarTraits<T>::from(GaussianRational(Rational(0), r));
}

// R(lambda) = lambda * id + i * P on C^d (x) C^d.
template <class T>
Mat<T> r_matrix(const T& lam, const Algebra& alg) {
    const int d = alg.dim();
    return Mat<T>::identity(d * d).scaled(lam) +
           super_permutation<T>(alg).scaled(ScalarTraits<T>::imag_unit());
}

// Rbar(lambda) = R(-lambda - i rho) twisted-transposed in the first factor.
// This is the matrix intertwining a conjugate auxiliary space with a direct
// quantum space.
template <class T>
Mat<T> rbar_matrix(const T& lam, const Algebra& alg) {
    const T shifted = ScalarTraits<T>::zero() - lam - scalar_i_times<T>(alg.rho());
    return twisted_transpose1(r_matrix(shifted, alg), alg);
}

// D(lambda): the conjugate-conjugate intertwiner, obtained by twisting both
// factors of R(lambda).  For non-graded algebras D = R identically; for
// superalgebras the supertransposition is not involutive and D differs from R.
template <class T>
Mat<T> d_matrix(const T& lam, const Algebra& alg) {
    return twisted_transpose2(twisted_transpose1(r_matrix(lam, alg), alg), alg);
}

// Yang-Baxter residual R12(l1-l2) R13(l1) R23(l2) - R23(l2) R13(l1) R12(l1-l2)
// on three graded tensor factors.  Vanishes identically for the rational R.
template <class T>
Mat<T> ybe_residual(const T& lam1, const T& lam2, const Algebra& alg) {
    const Mat<T> r12 = embed(r_matrix<T>(lam1 - lam2, alg), {0, 1}, 3, alg);
    const Mat<T> r13 = embed(r_matrix<T>(lam1, alg), {0, 2}, 3, alg);
    const Mat<T> r23 = embed(r_matrix<T>(lam2, alg), {1, 2}, 3, alg);
    return r12 * (r13 * r23) - r23 * (r13 * r12);
}

// Unitarity residual R12(lambda) R21(-lambda) + (lambda^2 + 1) * id.
template <class T>
Mat<T> unitarity_residual(const T& lam, const Algebra& alg) {
    const int d = alg.dim();
    const Mat<T> r = r_matrix(lam, alg);
    const Mat<T> rswap = swap_slots(r_matrix(ScalarTraits<T>::zero() - lam, alg), d);
    const T factor = lam * lam + ScalarTraits<T>::one();
    return r * rswap + Mat<T>::identity(d * d).scaled(factor);
}

// Result of probing whether Rbar(lambda) Rbar(-lambda) is proportional to the
// identity.  `factor` is the discovered proportionality constant (the (0,0)
// entry); `expected` is -(lambda^2 + rho^2); `is_scalar` reports whether the
// off-scalar part vanishes.  The product genuinely fails to be scalar for
// pure sl(N) with theta0 = -1, which callers must be prepared to receive.
template <class T>
struct CrossingUnitarityResult {
    bool is_scalar = false;
    bool matches_expected = false;
    T factor = ScalarTraits<T>::zero();
    T expected = ScalarTraits<T>::zero();
    Mat<T> off_scalar;
};

template <class T>
CrossingUnitarityResult<T> crossing_unitarity_check(const T& lam,
                                                    const Algebra& alg) {
    const int d = alg.dim();
    const Mat<T> prod =
        rbar_matrix(lam, alg) * rbar_matrix(ScalarTraits<T>::zero() - lam, alg);
    CrossingUnitarityResult<T> res;
    res.factor = prod(0, 0);
    const T rho2 = scalar_i_times<T>(alg.rho()) * scalar_i_times<T>(alg.rho());
    res.expected = ScalarTraits<T>::zero() - (lam * lam) + rho2;
    res.off_scalar = prod - Mat<T>::identity(d * d).scaled(res.factor);
    res.is_scalar = res.off_scalar.is_zero();
    res.matches_expected =
        res.is_scalar && ScalarTraits<T>::is_zero(res.factor - res.expected);
    return res;
}

}  // namespace spinchain
