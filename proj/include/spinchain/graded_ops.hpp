#pragma once
// Graded (Z2) tensor calculus: the super-permutation operator, graded
// embeddings of few-body operators into a chain with Koszul signs, partial
// supertraces, supertranspositions, and the twisted transposition built
// from the V matrix.

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "grading.hpp"
#include "matrix.hpp"

namespace spinchain {

// P = sum_{ij} (-1)^{g_i g_j} E_ij (x) E_ji acting on C^d (x) C^d.
// Satisfies P^2 = identity and exchanges graded tensor factors.
template <class T>
Mat<T> super_permutation(const Algebra& alg) {
    const int d = alg.dim();
    Mat<T> p(d * d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            T val = ScalarTraits<T>::one();
            if (alg.g(i) && alg.g(j)) val = -val;
            p(i * d + j, j * d + i) = val;
        }
    return p;
}

namespace detail {

inline std::vector<int> decode(long idx, int total, int d) {
    std::vector<int> out(total);
    for (int s = total - 1; s >= 0; --s) {
        out[s] = int(idx % d);
        idx /= d;
    }
    return out;
}

inline long encode(const std::vector<int>& digits, int d) {
    long idx = 0;
    for (int x : digits) idx = idx * d + x;
    return idx;
}

}  // namespace detail

// Embed an operator acting on the given chain slots (ascending, 0-based)
// into a chain of `total` slots of local dimension d.  Untouched slots act
// as the identity, and each untouched slot m picks up the Koszul sign
// (-1)^{g[I_m] * sum_{s in slots, s > m} (g[I_s] + g[J_s])} from moving the
// operator legs past it.  Single-slot embeddings carry no signs.
template <class T>
Mat<T> embed(const Mat<T>& op, const std::vector<int>& slots, int total,
             const Algebra& alg) {
    const int d = alg.dim();
    const int k = int(slots.size());
    if (!std::is_sorted(slots.begin(), slots.end()))
        throw std::invalid_argument("embed: slots must be ascending");
    long dk = 1, dn = 1;
    for (int s = 0; s < k; ++s) dk *= d;
    for (int s = 0; s < total; ++s) dn *= d;
    if (op.size() != int(dk)) throw std::invalid_argument("embed: op size");

    std::vector<char> touched(total, 0);
    for (int s : slots) {
        if (s < 0 || s >= total) throw std::invalid_argument("embed: slot range");
        touched[s] = 1;
    }
    std::vector<int> rest;
    for (int m = 0; m < total; ++m)
        if (!touched[m]) rest.push_back(m);
    long drest = 1;
    for (std::size_t s = 0; s < rest.size(); ++s) drest *= d;

    Mat<T> out{int(dn)};
    std::vector<int> full_i(total), full_j(total);
    for (long r = 0; r < dk; ++r) {
        const std::vector<int> a = detail::decode(r, k, d);
        for (long c = 0; c < dk; ++c) {
            const T& val = op(int(r), int(c));
            if (ScalarTraits<T>::is_zero(val)) continue;
            const std::vector<int> b = detail::decode(c, k, d);
            for (long e = 0; e < drest; ++e) {
                const std::vector<int> ridx = detail::decode(e, int(rest.size()), d);
                for (int s = 0; s < k; ++s) {
                    full_i[slots[s]] = a[s];
                    full_j[slots[s]] = b[s];
                }
                int sign = 0;
                for (std::size_t t = 0; t < rest.size(); ++t) {
                    const int m = rest[t];
                    full_i[m] = ridx[t];
                    full_j[m] = ridx[t];
                    if (!alg.g(ridx[t])) continue;
                    int ds = 0;
                    for (int s = 0; s < k; ++s)
                        if (slots[s] > m) ds += alg.g(a[s]) + alg.g(b[s]);
                    sign += ds;
                }
                T v = (sign % 2) ? -val : val;
                out(int(detail::encode(full_i, d)), int(detail::encode(full_j, d))) = v;
            }
        }
    }
    return out;
}

// Partial supertrace over one chain slot: inserts (-1)^{g_j} on the traced
// index.  Returns an operator on the remaining total-1 slots.
template <class T>
Mat<T> partial_supertrace(const Mat<T>& op, int slot, int total,
                          const Algebra& alg) {
    const int d = alg.dim();
    long dn = 1;
    for (int s = 0; s < total; ++s) dn *= d;
    if (op.size() != int(dn)) throw std::invalid_argument("supertrace: op size");
    if (slot < 0 || slot >= total)
        throw std::invalid_argument("supertrace: slot range");
    const long dr = dn / d;
    Mat<T> out{int(dr)};
    std::vector<int> full_i(total), full_j(total), ri(total - 1), rj(total - 1);
    for (long r = 0; r < dr; ++r) {
        std::vector<int> a = detail::decode(r, total - 1, d);
        for (long c = 0; c < dr; ++c) {
            std::vector<int> b = detail::decode(c, total - 1, d);
            T acc = ScalarTraits<T>::zero();
            bool any = false;
            for (int j = 0; j < d; ++j) {
                int t = 0;
                for (int m = 0; m < total; ++m) {
                    if (m == slot) {
                        full_i[m] = j;
                        full_j[m] = j;
                    } else {
                        full_i[m] = a[t];
                        full_j[m] = b[t];
                        ++t;
                    }
                }
                const T& v = op(int(detail::encode(full_i, d)),
                                int(detail::encode(full_j, d)));
                if (ScalarTraits<T>::is_zero(v)) continue;
                acc = acc + (alg.g(j) ? -v : v);
                any = true;
            }
            if (any) out(int(r), int(c)) = acc;
        }
    }
    return out;
}

// Exchange the two tensor factors of a two-slot operator by plain index
// relabeling (no signs): R_{21} from R_{12}.
template <class T>
Mat<T> swap_slots(const Mat<T>& op, int d) {
    if (op.size() != d * d) throw std::invalid_argument("swap_slots: op size");
    Mat<T> out(d * d);
    for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k)
            for (int j = 0; j < d; ++j)
                for (int l = 0; l < d; ++l) {
                    const T& v = op(i * d + k, j * d + l);
                    if (ScalarTraits<T>::is_zero(v)) continue;
                    out(k * d + i, l * d + j) = v;
                }
    return out;
}

// Supertranspose of a one-space matrix: (A^st)_{ij} = (-1)^{(g_i+g_j) g_i} A_{ji}.
template <class T>
Mat<T> supertranspose(const Mat<T>& a, const Algebra& alg) {
    const int d = alg.dim();
    if (a.size() != d) throw std::invalid_argument("supertranspose: size");
    Mat<T> out(d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            const T& v = a(j, i);
            if (ScalarTraits<T>::is_zero(v)) continue;
            out(i, j) = ((alg.g(i) + alg.g(j)) * alg.g(i)) % 2 ? -v : v;
        }
    return out;
}

// Supertranspose in the first factor of a two-slot operator.
template <class T>
Mat<T> supertranspose1(const Mat<T>& op, const Algebra& alg) {
    const int d = alg.dim();
    if (op.size() != d * d) throw std::invalid_argument("supertranspose1: size");
    Mat<T> out(d * d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            const int e = ((alg.g(i) + alg.g(j)) * alg.g(i)) % 2;
            for (int k = 0; k < d; ++k)
                for (int l = 0; l < d; ++l) {
                    const T& v = op(j * d + k, i * d + l);
                    if (ScalarTraits<T>::is_zero(v)) continue;
                    out(i * d + k, j * d + l) = e ? -v : v;
                }
        }
    return out;
}

// Supertranspose in the second factor of a two-slot operator.
template <class T>
Mat<T> supertranspose2(const Mat<T>& op, const Algebra& alg) {
    const int d = alg.dim();
    if (op.size() != d * d) throw std::invalid_argument("supertranspose2: size");
    Mat<T> out(d * d);
    for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) {
            const int e = ((alg.g(k) + alg.g(l)) * alg.g(k)) % 2;
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) {
                    const T& v = op(i * d + l, j * d + k);
                    if (ScalarTraits<T>::is_zero(v)) continue;
                    out(i * d + k, j * d + l) = e ? -v : v;
                }
        }
    return out;
}

// The V matrix of the twisted transposition (antidiagonal, entries +-1).
template <class T>
Mat<T> v_matrix(const Algebra& alg) {
    const int d = alg.dim();
    const std::vector<int> v = alg.v_entries();
    Mat<T> out(d);
    for (int i = 0; i < d; ++i) {
        T val = ScalarTraits<T>::one();
        if (v[i] < 0) val = -val;
        out(i, d - 1 - i) = val;
    }
    return out;
}

// Inverse of V: since V[i][d-1-i] = v_i with v_i = +-1, the inverse is the
// antidiagonal matrix with V^{-1}[i][d-1-i] = v_{d-1-i}.
template <class T>
Mat<T> v_matrix_inverse(const Algebra& alg) {
    const int d = alg.dim();
    const std::vector<int> v = alg.v_entries();
    Mat<T> out(d);
    for (int i = 0; i < d; ++i) {
        T val = ScalarTraits<T>::one();
        if (v[d - 1 - i] < 0) val = -val;
        out(i, d - 1 - i) = val;
    }
    return out;
}

// Twisted transpose of a one-space matrix: A^t = V^{-1} A^st V.
template <class T>
Mat<T> twisted_transpose(const Mat<T>& a, const Algebra& alg) {
    return v_matrix_inverse<T>(alg) * supertranspose(a, alg) * v_matrix<T>(alg);
}

// Twisted transpose in the first factor of a two-slot operator.
template <class T>
Mat<T> twisted_transpose1(const Mat<T>& op, const Algebra& alg) {
    const int d = alg.dim();
    const Mat<T> id = Mat<T>::identity(d);
    return kron(v_matrix_inverse<T>(alg), id) * supertranspose1(op, alg) *
           kron(v_matrix<T>(alg), id);
}

// Twisted transpose in the second factor of a two-slot operator.
template <class T>
Mat<T> twisted_transpose2(const Mat<T>& op, const Algebra& alg) {
    const int d = alg.dim();
    const Mat<T> id = Mat<T>::identity(d);
    return kron(id, v_matrix_inverse<T>(alg)) * supertranspose2(op, alg) *
           kron(id, v_matrix<T>(alg));
}

}  // namespace spinchain
