#pragma once
// Boundary K-matrices for the soliton-preserving (SP) and soliton
// non-preserving (SNP) reflection equations: construction from classified
// data, exact residuals of both reflection equations as bivariate
// polynomial matrices, and the classifier recovering the class and
// E-matrix signature from samples of a K-family.

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "graded_ops.hpp"
#include "grading.hpp"
#include "matrix.hpp"
#include "poly.hpp"
#include "yang_baxter.hpp"

namespace spinchain {

// ---------------------------------------------------------------------------
// Field-matrix helpers (exact Gaussian elimination, Laplace determinant).

template <class T>
std::optional<Mat<T>> try_inverse(const Mat<T>& m) {
    const int n = m.size();
    Mat<T> a = m;
    Mat<T> inv = Mat<T>::identity(n);
    for (int col = 0; col < n; ++col) {
        int pivot = -1;
        for (int r = col; r < n; ++r)
            if (!ScalarTraits<T>::is_zero(a(r, col))) {
                pivot = r;
                break;
            }
        if (pivot < 0) return std::nullopt;
        if (pivot != col)
            for (int j = 0; j < n; ++j) {
                std::swap(a(pivot, j), a(col, j));
                std::swap(inv(pivot, j), inv(col, j));
            }
        const T p = a(col, col);
        for (int j = 0; j < n; ++j) {
            a(col, j) = a(col, j) / p;
            inv(col, j) = inv(col, j) / p;
        }
        for (int r = 0; r < n; ++r) {
            if (r == col || ScalarTraits<T>::is_zero(a(r, col))) continue;
            const T f = a(r, col);
            for (int j = 0; j < n; ++j) {
                a(r, j) = a(r, j) - f * a(col, j);
                inv(r, j) = inv(r, j) - f * inv(col, j);
            }
        }
    }
    return inv;
}

// Laplace expansion; fine for the small local dimensions used here.
template <class T>
T det_laplace(const Mat<T>& m) {
    const int n = m.size();
    if (n == 1) return m(0, 0);
    std::vector<int> cols(n);
    for (int j = 0; j < n; ++j) cols[j] = j;
    // Recursive lambda over the active column set.
    struct Rec {
        const Mat<T>& a;
        T run(int row, std::vector<int>& cols) {
            if (cols.size() == 1) return a(row, cols[0]);
            T acc = ScalarTraits<T>::zero();
            for (std::size_t k = 0; k < cols.size(); ++k) {
                const T& v = a(row, cols[k]);
                if (ScalarTraits<T>::is_zero(v)) continue;
                std::vector<int> rest;
                rest.reserve(cols.size() - 1);
                for (std::size_t j = 0; j < cols.size(); ++j)
                    if (j != k) rest.push_back(cols[j]);
                T sub = run(row + 1, rest);
                T term = v * sub;
                acc = (k % 2 == 0) ? acc + term : acc - term;
            }
            return acc;
        }
    } rec{m};
    return rec.run(0, cols);
}

// ---------------------------------------------------------------------------
// Boundary specifications.

// SP boundary: K(lambda) = U (i xi I + lambda E) U^{-1}, with E either the
// block-diagonal sign matrix determined by `blocks` = (m1, m2, n2, n1)
// (alpha-blocks carry -1, beta-blocks +1) or an explicit nilpotent E.
struct SpBoundary {
    GaussianRational xi;
    std::optional<std::array<int, 4>> blocks;       // (m1, m2, n2, n1)
    std::optional<Mat<GaussianRational>> conjugator;  // U, default identity
    std::optional<Mat<GaussianRational>> nilpotent_e;
};

// SNP boundary: constant Ktilde with twisted_transpose(K) = epsilon * K,
// given either as a palindromic diagonal or as a full matrix.
struct SnpBoundary {
    int epsilon = 1;
    std::optional<std::vector<GaussianRational>> k_diag;
    std::optional<Mat<GaussianRational>> full;
};

// K(lambda) over any scalar ring T; lambda passed as a T value (use
// ExactPoly::x() for the symbolic family).
template <class T>
Mat<T> build_sp_k(const SpBoundary& spec, const T& lam, const Algebra& alg) {
    const int d = alg.dim();
    if (spec.blocks.has_value() == spec.nilpotent_e.has_value())
        throw std::invalid_argument(
            "build_sp_k: exactly one of blocks / nilpotent_e required");
    const T ixi = ScalarTraits<T>::from(GaussianRational::i() * spec.xi);
    Mat<T> k(d);
    if (spec.blocks) {
        const auto [m1, m2, n2, n1] = *spec.blocks;
        if (m1 < 0 || m2 < 0 || n2 < 0 || n1 < 0 || m1 + m2 != alg.bosonic() ||
            n1 + n2 != alg.fermionic())
            throw std::invalid_argument("build_sp_k: block sizes");
        const T alpha = ixi - lam;
        const T beta = ixi + lam;
        for (int i = 0; i < d; ++i)
            k(i, i) = (i < m1 || i >= m1 + m2 + n2) ? alpha : beta;
    } else {
        const Mat<GaussianRational>& e = *spec.nilpotent_e;
        if (e.size() != d || !(e * e).is_zero())
            throw std::invalid_argument("build_sp_k: E must satisfy E^2 = 0");
        for (int i = 0; i < d; ++i) {
            k(i, i) = ixi;
            for (int j = 0; j < d; ++j)
                if (!e(i, j).is_zero())
                    k(i, j) = k(i, j) + lam * ScalarTraits<T>::from(e(i, j));
        }
    }
    if (spec.conjugator) {
        auto uinv = try_inverse(*spec.conjugator);
        if (!uinv) throw std::invalid_argument("build_sp_k: singular U");
        Mat<T> u(d), ui(d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                u(i, j) = ScalarTraits<T>::from((*spec.conjugator)(i, j));
                ui(i, j) = ScalarTraits<T>::from((*uinv)(i, j));
            }
        k = u * k * ui;
    }
    return k;
}

inline Mat<GaussianRational> build_snp_k(const SnpBoundary& spec,
                                         const Algebra& alg) {
    const int d = alg.dim();
    if (spec.epsilon != 1 && spec.epsilon != -1)
        throw std::invalid_argument("build_snp_k: epsilon must be +-1");
    Mat<GaussianRational> k(d);
    if (spec.k_diag) {
        if (int(spec.k_diag->size()) != d)
            throw std::invalid_argument("build_snp_k: k_diag size");
        for (int j = 0; j < d; ++j) {
            if (!((*spec.k_diag)[d - 1 - j] == (*spec.k_diag)[j]))
                throw std::invalid_argument(
                    "build_snp_k: diagonal must be palindromic");
            k(j, j) = (*spec.k_diag)[j];
        }
    } else if (spec.full) {
        k = *spec.full;
    } else {
        throw std::invalid_argument("build_snp_k: k_diag or full required");
    }
    Mat<GaussianRational> kt = twisted_transpose(k, alg);
    Mat<GaussianRational> want =
        spec.epsilon == 1 ? k : Mat<GaussianRational>(k).scaled(GaussianRational(-1));
    if (!(kt == want))
        throw std::invalid_argument(
            "build_snp_k: twisted-transpose symmetry constraint violated");
    return k;
}

// ---------------------------------------------------------------------------
// Reflection-equation residuals, exact in both spectral parameters.

namespace detail {

inline Mat<ExactPoly2> at_var(const Mat<ExactPoly>& m, const ExactPoly2& x) {
    Mat<ExactPoly2> r(m.size());
    for (int i = 0; i < m.size(); ++i)
        for (int j = 0; j < m.size(); ++j)
            r(i, j) = m(i, j).template eval<ExactPoly2>(x);
    return r;
}

inline Mat<ExactPoly2> lift_const(const Mat<GaussianRational>& m) {
    Mat<ExactPoly2> r(m.size());
    for (int i = 0; i < m.size(); ++i)
        for (int j = 0; j < m.size(); ++j)
            r(i, j) = ScalarTraits<ExactPoly2>::from(m(i, j));
    return r;
}

}  // namespace detail

// LHS - RHS of  R12(l1-l2) K1(l1) R21(l1+l2) K2(l2)
//             = K2(l2) R12(l1+l2) K1(l1) R21(l1-l2).
inline Mat<ExactPoly2> sp_re_residual(const Mat<ExactPoly>& k,
                                      const Algebra& alg) {
    const int d = alg.dim();
    const Mat<ExactPoly2> id = Mat<ExactPoly2>::identity(d);
    const ExactPoly2 l1 = var_lambda1();
    const ExactPoly2 l2 = var_lambda2();
    const Mat<ExactPoly2> k1 = kron(detail::at_var(k, l1), id);
    const Mat<ExactPoly2> k2 = kron(id, detail::at_var(k, l2));
    const Mat<ExactPoly2> rd = r_matrix(l1 - l2, alg);
    const Mat<ExactPoly2> rs = r_matrix(l1 + l2, alg);
    const Mat<ExactPoly2> rd21 = swap_slots(rd, d);
    const Mat<ExactPoly2> rs21 = swap_slots(rs, d);
    return rd * k1 * rs21 * k2 - k2 * rs * k1 * rd21;
}

// LHS - RHS of  R12(l1-l2) K1 R21^{t1}(l1+l2) K2
//             = K2 R12^{t1}(l1+l2) K1 R21(l1-l2)  for constant Ktilde.
inline Mat<ExactPoly2> snp_re_residual(const Mat<GaussianRational>& ktilde,
                                       const Algebra& alg) {
    const int d = alg.dim();
    const Mat<ExactPoly2> id = Mat<ExactPoly2>::identity(d);
    const ExactPoly2 l1 = var_lambda1();
    const ExactPoly2 l2 = var_lambda2();
    const Mat<ExactPoly2> kc = detail::lift_const(ktilde);
    const Mat<ExactPoly2> k1 = kron(kc, id);
    const Mat<ExactPoly2> k2 = kron(id, kc);
    const Mat<ExactPoly2> rd = r_matrix(l1 - l2, alg);
    const Mat<ExactPoly2> rs = r_matrix(l1 + l2, alg);
    const Mat<ExactPoly2> rd21 = swap_slots(rd, d);
    const Mat<ExactPoly2> rs21t1 = twisted_transpose1(swap_slots(rs, d), alg);
    const Mat<ExactPoly2> rs12t1 = twisted_transpose1(rs, alg);
    return rd * k1 * rs21t1 * k2 - k2 * rs12t1 * k1 * rd21;
}

// ---------------------------------------------------------------------------
// Classifier.

enum class SpClass { Diagonalizable, Nilpotent, NotASolution, Unclassified };

inline std::string to_string(SpClass c) {
    switch (c) {
        case SpClass::Diagonalizable: return "diagonalizable";
        case SpClass::Nilpotent: return "nilpotent";
        case SpClass::NotASolution: return "not_a_solution";
        default: return "unclassified";
    }
}

struct SpClassification {
    SpClass cls = SpClass::Unclassified;
    // Eigenvalue multiplicities of E for diagonalizable solutions:
    // (count of -1, count of +1).
    std::optional<std::pair<int, int>> signature;
    std::optional<GaussianRational> xi;
    std::string note;
};

// Attempt an exact square root of a Gaussian rational; handles real
// rationals (positive: rational root, negative: i * rational root).
inline std::optional<GaussianRational> gr_sqrt(const GaussianRational& z) {
    if (!z.is_real()) return std::nullopt;
    Rational r = z.real();
    const bool neg = r < 0;
    if (neg) r = -r;
    mpz_class num = r.get_num(), den = r.get_den();
    if (mpz_perfect_square_p(num.get_mpz_t()) == 0 ||
        mpz_perfect_square_p(den.get_mpz_t()) == 0)
        return std::nullopt;
    mpz_class sn, sd;
    mpz_sqrt(sn.get_mpz_t(), num.get_mpz_t());
    mpz_sqrt(sd.get_mpz_t(), den.get_mpz_t());
    Rational root(sn, sd);
    root.canonicalize();
    return neg ? GaussianRational(Rational(0), root) : GaussianRational(root);
}

// Classify a K-family from exact samples (lambda_s, K(lambda_s)), s >= 3.
// Recovers K = A + lambda B, verifies the reflection equation symbolically,
// and reads off the class of E = B (up to the scalar gauge) from whether
// B^2 is a nonzero scalar or zero.
inline SpClassification classify_sp(
    const std::vector<std::pair<GaussianRational, Mat<GaussianRational>>>& samples,
    const Algebra& alg) {
    using GR = GaussianRational;
    const int d = alg.dim();
    if (samples.size() < 3)
        throw std::invalid_argument("classify_sp: need at least 3 samples");
    for (const auto& [lam, k] : samples)
        if (k.size() != d) throw std::invalid_argument("classify_sp: K size");

    // Linear fit from the first two samples, consistency from the rest.
    const GR& l0 = samples[0].first;
    const GR& l1 = samples[1].first;
    if ((l1 - l0).is_zero())
        throw std::invalid_argument("classify_sp: coincident sample points");
    Mat<GR> b = (samples[1].second - samples[0].second)
                    .scaled(GR(1) / (l1 - l0));
    Mat<GR> a = samples[0].second - b.scaled(l0);
    for (std::size_t s = 2; s < samples.size(); ++s) {
        Mat<GR> pred = a + b.scaled(samples[s].first);
        if (!(pred == samples[s].second))
            throw std::invalid_argument("classify_sp: K is not linear in lambda");
    }

    // Generic invertibility: det(A + lambda B) must not vanish identically.
    Mat<ExactPoly> kfam(d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            kfam(i, j) = ExactPoly(a(i, j)) + ExactPoly::x() * ExactPoly(b(i, j));
    if (det_laplace(kfam).is_zero())
        throw std::invalid_argument(
            "classify_sp: K is not invertible for generic lambda");

    SpClassification out;
    if (!sp_re_residual(kfam, alg).is_zero()) {
        out.cls = SpClass::NotASolution;
        return out;
    }

    // Helper: given C with C^2 = s * I, s != 0, so C = c E with E^2 = I and
    // c^2 = s, recover the eigenvalue multiplicities of E without square
    // roots: tr E = n_plus - n_minus =: t satisfies (tr C / t)^2 = s when
    // t != 0; t = 0 forces equal multiplicities.
    auto sign_split = [&](const Mat<GR>& c, const GR& s)
        -> std::optional<std::pair<std::pair<int, int>, std::optional<GR>>> {
        GR trc;
        for (int i = 0; i < d; ++i) trc = trc + c(i, i);
        if (trc.is_zero()) {
            if (d % 2 != 0) return std::nullopt;
            std::optional<GR> scale;
            if (auto r = gr_sqrt(s); r && !r->is_zero()) scale = *r;
            return std::make_pair(std::make_pair(d / 2, d / 2), scale);
        }
        for (int t = -d; t <= d; ++t) {
            if (t == 0 || (d - t) % 2 != 0) continue;
            GR sc = trc / GR(t);
            if ((sc * sc - s).is_zero()) {
                const int n_plus = (d + t) / 2;
                return std::make_pair(std::make_pair(d - n_plus, n_plus),
                                      std::optional<GR>(sc));
            }
        }
        return std::nullopt;
    };

    // Solutions are identified up to multiplication by a scalar function of
    // lambda, so besides the normalized form i xi I + lambda E the linear
    // ansatz also captures constant members c E and shifted members
    // (lambda + mu) c E of the diagonalizable class.
    if (b.is_zero()) {
        Mat<GR> a2 = a * a;
        GR s = a2(0, 0);
        if ((a2 - Mat<GR>::identity(d).scaled(s)).is_zero() && !s.is_zero()) {
            if (auto split = sign_split(a, s)) {
                out.cls = SpClass::Diagonalizable;
                out.signature = split->first;
                out.note = "constant member (scalar-function gauge)";
                return out;
            }
        }
        out.cls = SpClass::Unclassified;
        out.note = "constant K with non-scalar square";
        return out;
    }

    // Proportionality test A = mu B.
    {
        GR mu;
        bool found = false;
        for (int i = 0; i < d && !found; ++i)
            for (int j = 0; j < d && !found; ++j)
                if (!b(i, j).is_zero()) {
                    mu = a(i, j) / b(i, j);
                    found = true;
                }
        if (found && (a - b.scaled(mu)).is_zero() &&
            !(a - Mat<GR>::identity(d).scaled(a(0, 0))).is_zero()) {
            // K = (lambda + mu) B, a scalar-function gauge of lambda E.
            Mat<GR> b2 = b * b;
            GR s = b2(0, 0);
            if ((b2 - Mat<GR>::identity(d).scaled(s)).is_zero() &&
                !s.is_zero()) {
                if (auto split = sign_split(b, s)) {
                    out.cls = SpClass::Diagonalizable;
                    out.signature = split->first;
                    out.xi = GR(0);
                    out.note = "shifted member (scalar-function gauge)";
                    return out;
                }
            }
            out.cls = SpClass::Unclassified;
            out.note = "A proportional to B but B^2 not a nonzero scalar";
            return out;
        }
    }

    // Normalized form: A = c * i xi * identity, B = c E.
    GR a00 = a(0, 0);
    if (!(a - Mat<GR>::identity(d).scaled(a00)).is_zero()) {
        out.cls = SpClass::Unclassified;
        out.note = "lambda^0 coefficient is not scalar";
        return out;
    }

    Mat<GR> b2 = b * b;
    GR s = b2(0, 0);
    if (!(b2 - Mat<GR>::identity(d).scaled(s)).is_zero()) {
        out.cls = SpClass::Unclassified;
        out.note = "B^2 is not scalar";
        return out;
    }

    if (s.is_zero()) {
        out.cls = SpClass::Nilpotent;
        if (!a00.is_zero()) out.xi = a00 / GR::i();
        return out;
    }

    if (auto split = sign_split(b, s)) {
        out.cls = SpClass::Diagonalizable;
        out.signature = split->first;
        if (split->second) out.xi = a00 / (GR::i() * *split->second);
        return out;
    }
    out.cls = SpClass::Unclassified;
    out.note = "no integer trace signature matches B^2 scalar";
    return out;
}

}  // namespace spinchain
