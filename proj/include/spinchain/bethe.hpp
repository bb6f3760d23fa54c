#pragma once
// Analytical Bethe ansatz: kinematic e-functions, g-functions for both
// boundary classes, the pseudo-vacuum eigenvalue Lambda0, dressing
// functions, dressed eigenvalues, Bethe-equation residuals, a damped-Newton
// root solver, and spectrum matching against the exact-diagonalization
// oracle.
//
// Convention notes (all fixed by matching the transfer-matrix oracle):
//  - Term l of Lambda0 carries the sign (-1)^{g[l]} with the 0-based grading
//    array of the chain's basis order.
//  - Same-level Bethe products exclude the j = i self term in both the
//    difference and the sum factor, and the equations carry no overall minus
//    sign; with this normalization the sl(2) L=2 singlet root is exactly 1/2.
//  - The boundary factors -1/e_{2 xi + m1} and -1/e_{2 xi + m1 - m2 - n2}
//    multiply the LHS of the m1-th and (M+n2)-th equations for a
//    non-trivial diagonal soliton-preserving K^-.
//  - For soliton non-preserving chains the diagonal Ktilde^- multiplies
//    term l of Lambda0 by k_{l+1}; the constant Ktilde^+ enters as a pure
//    linear scale relative to its base pattern (the transfer matrix is
//    linear in K^+).

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>
#include <vector>

#include "chain.hpp"
#include "spectrum.hpp"

namespace spinchain {

enum class BetheCase { SP, SNP };
enum class SelfTermPolicy { ExcludeSelf, IncludeSelf };

struct BetheRootSet {
    // roots[l-1] holds the level-l roots.
    std::vector<std::vector<std::complex<double>>> roots;

    std::vector<int> counts() const {
        std::vector<int> c;
        for (const auto& lvl : roots) c.push_back(int(lvl.size()));
        return c;
    }
    int total() const {
        int t = 0;
        for (const auto& lvl : roots) t += int(lvl.size());
        return t;
    }
};

inline BetheCase bethe_case(const ChainSpec& chain) {
    return chain.mode == ChainMode::OpenSNP ? BetheCase::SNP : BetheCase::SP;
}

// Number of Bethe-root levels: M+N-1 (SP), m+n with M in {2m, 2m+1},
// N = 2n (SNP).
inline int bethe_levels(BetheCase bc, const Algebra& alg) {
    if (bc == BetheCase::SP) return alg.dim() - 1;
    return alg.bosonic() / 2 + alg.fermionic() / 2;
}

// e_x(lambda) = (lambda + ix/2) / (lambda - ix/2).
inline std::complex<double> e_fn(double x, std::complex<double> lam) {
    const std::complex<double> half(0.0, x / 2.0);
    const std::complex<double> den = lam - half;
    if (den == 0.0) throw std::domain_error("e_fn: pole at lambda = ix/2");
    return (lam + half) / den;
}

namespace bethe_detail {

using C = std::complex<double>;

inline C ii(double x) { return C(0.0, x); }

// g_l for the soliton-preserving chain (trivial boundary).
inline C sp_g(const Algebra& alg, int l, C lam) {
    const int m = alg.bosonic(), n = alg.fermionic();
    const C num = lam * (lam + ii(0.5 * (m - n)));
    C den;
    if (l < m)
        den = (lam + ii(0.5 * l)) * (lam + ii(0.5 * (l + 1)));
    else
        den = (lam + ii(0.5 * (2 * m - l - 1))) * (lam + ii(0.5 * (2 * m - l)));
    if (den == 0.0) throw std::domain_error("g_function: pole");
    return num / den;
}

// g_l for the soliton non-preserving chain: lower half directly, middle
// term 1 for odd dimension, upper half by the crossing relation
// g_l(lambda) = g_{M+N-l-1}(-lambda - i rho).
inline C snp_g(const Algebra& alg, int l, C lam) {
    const int d = alg.dim();
    const double rho = alg.theta0() * 0.5 * (alg.bosonic() - alg.fermionic());
    if (2 * l + 1 == d) return C(1.0);
    if (2 * l + 1 > d) return snp_g(alg, d - l - 1, -lam - ii(rho));
    const C den = lam + ii(0.5 * rho);
    if (den == 0.0) throw std::domain_error("g_function: pole");
    return (lam + ii(0.5 * (rho - 1))) / den;
}

// Product over one root level of (lam +- r + num) / (lam +- r + den).
inline C pair_product(const std::vector<C>& lvl, C lam, C num, C den) {
    C out(1.0);
    for (C r : lvl) {
        const C d1 = lam + r + den, d2 = lam - r + den;
        if (d1 == 0.0 || d2 == 0.0)
            throw std::domain_error("dressing: pole");
        out *= (lam + r + num) * (lam - r + num) / (d1 * d2);
    }
    return out;
}

inline const std::vector<C>& level(const BetheRootSet& rs, int l) {
    static const std::vector<C> empty;
    if (l < 1 || l > int(rs.roots.size())) return empty;
    return rs.roots[l - 1];
}

// Boundary data for a diagonal soliton-preserving K^-.
struct SpDiagBoundary {
    bool trivial = true;       // K^- proportional to the identity
    C scale = C(1.0);          // the proportionality constant when trivial
    int m1 = 0, m2 = 0, n2 = 0, n1 = 0;
    double xi = 0.0;
};

inline SpDiagBoundary sp_diag_boundary(const ChainSpec& chain) {
    SpDiagBoundary out;
    if (chain.sp_minus) {
        const SpBoundary& b = *chain.sp_minus;
        if (!b.blocks || b.conjugator || b.nilpotent_e)
            throw std::invalid_argument(
                "bethe: soliton-preserving boundary must be in diagonal form");
        if (!b.xi.is_real())
            throw std::invalid_argument("bethe: boundary parameter xi must be real");
        out.trivial = false;
        auto [m1, m2, n2, n1] = *b.blocks;
        out.m1 = m1;
        out.m2 = m2;
        out.n2 = n2;
        out.n1 = n1;
        out.xi = b.xi.real().get_d();
        return out;
    }
    if (chain.sp_minus_linear) {
        // Only a constant multiple of the identity is a "trivial" boundary.
        const auto& [a, bm] = *chain.sp_minus_linear;
        const int d = a.size();
        if (!bm.is_zero())
            throw std::invalid_argument(
                "bethe: linear boundary family is not diagonal-classified");
        const GaussianRational c = a(0, 0);
        if (!(a - Mat<GaussianRational>::identity(d).scaled(c)).is_zero())
            throw std::invalid_argument(
                "bethe: constant boundary must be proportional to the identity");
        out.scale = c.to_complex();
        return out;
    }
    throw std::invalid_argument("bethe: missing soliton-preserving boundary");
}

// Diagonal data for a soliton non-preserving Ktilde^-: entries, the scale
// of Ktilde^+ relative to the bosonic-support base pattern, and epsilon.
struct SnpDiagBoundary {
    std::vector<C> k;    // diagonal entries of Ktilde^-
    C plus_scale = C(1.0);
};

inline SnpDiagBoundary snp_diag_boundary(const ChainSpec& chain) {
    const Algebra& alg = chain.alg;
    const int d = alg.dim();
    if (!chain.snp_minus)
        throw std::invalid_argument("bethe: missing soliton non-preserving boundary");
    const SnpBoundary& b = *chain.snp_minus;
    if (b.epsilon != 1)
        throw std::invalid_argument(
            "bethe: closed-form eigenvalues require a twisted-symmetric boundary");
    if (alg.theta0() == -1 && !alg.graded())
        throw std::invalid_argument(
            "bethe: no closed-form pseudo-vacuum eigenvalue for theta0 = -1 sl(N)");
    Mat<GaussianRational> km = build_snp_k(b, alg);
    SnpDiagBoundary out;
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j)
            if (i != j && !km(i, j).is_zero())
                throw std::invalid_argument(
                    "bethe: soliton non-preserving boundary must be diagonal");
        out.k.push_back(km(i, i).to_complex());
    }
    // Ktilde^+ must be a multiple of the base pattern (identity on the
    // bosonic positions); the transfer matrix is linear in K^+, so the
    // multiple enters the eigenvalue as an overall factor.
    Mat<GaussianRational> kp = chain.k_plus ? *chain.k_plus : default_k_plus(chain);
    C scale(0.0);
    bool have_scale = false;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            const C v = kp(i, j).to_complex();
            const bool base = (i == j && alg.g(i) == 0);
            if (!base) {
                if (v != 0.0)
                    throw std::invalid_argument(
                        "bethe: K^+ is not a multiple of the base boundary");
            } else if (!have_scale) {
                scale = v;
                have_scale = true;
            } else if (std::abs(v - scale) > 1e-14 * (1.0 + std::abs(scale))) {
                throw std::invalid_argument(
                    "bethe: K^+ is not a multiple of the base boundary");
            }
        }
    out.plus_scale = scale;
    return out;
}

}  // namespace bethe_detail

// g_l (trivial boundary) for either case.
inline std::complex<double> g_function(BetheCase bc, const Algebra& alg, int l,
                                       std::complex<double> lam) {
    if (l < 0 || l >= alg.dim())
        throw std::invalid_argument("g_function: level out of range");
    return bc == BetheCase::SP ? bethe_detail::sp_g(alg, l, lam)
                               : bethe_detail::snp_g(alg, l, lam);
}

// Dressing function A_l evaluated on a root set.
inline std::complex<double> dressing(BetheCase bc, const Algebra& alg, int l,
                                     const BetheRootSet& rs,
                                     std::complex<double> lam) {
    using namespace bethe_detail;
    const int d = alg.dim();
    if (l < 0 || l >= d) throw std::invalid_argument("dressing: level out of range");
    if (bc == BetheCase::SP) {
        const int m = alg.bosonic();
        if (l == 0) return pair_product(level(rs, 1), lam, ii(-0.5), ii(0.5));
        if (l <= m - 1)
            return pair_product(level(rs, l), lam, ii(0.5 * l + 1), ii(0.5 * l)) *
                   pair_product(level(rs, l + 1), lam, ii(0.5 * l - 0.5),
                                ii(0.5 * l + 0.5));
        const C s = ii(m - 0.5 * l);
        return pair_product(level(rs, l), lam, s - ii(1), s) *
               pair_product(level(rs, l + 1), lam, s + ii(0.5), s - ii(0.5));
    }
    const int m = alg.bosonic() / 2, n = alg.fermionic() / 2;
    const int mm = alg.bosonic();
    const double rho = alg.theta0() * 0.5 * (alg.bosonic() - alg.fermionic());
    if (l == 0) return pair_product(level(rs, 1), lam, ii(-0.5), ii(0.5));
    if (l <= n - 1)
        return pair_product(level(rs, l), lam, ii(0.5 * l + 1), ii(0.5 * l)) *
               pair_product(level(rs, l + 1), lam, ii(0.5 * l - 0.5),
                            ii(0.5 * l + 0.5));
    if (mm % 2 == 1 && l == m + n) {
        const C s = ii(n - 0.5 * l);
        return pair_product(level(rs, l), lam, s - ii(1), s) *
               pair_product(level(rs, l), lam, s + ii(0.5), s - ii(0.5));
    }
    if (2 * l < 2 * n + mm - 1) {
        const C s = ii(n - 0.5 * l);
        return pair_product(level(rs, l), lam, s - ii(1), s) *
               pair_product(level(rs, l + 1), lam, s + ii(0.5), s - ii(0.5));
    }
    // Crossing completion A_l(lambda) = A_{M+2n-1-l}(-lambda - i rho).
    return dressing(bc, alg, d - 1 - l, rs, -lam - ii(rho));
}

// Dressed transfer-matrix eigenvalue Lambda(lambda) for an open chain.
inline std::complex<double> dressed_eigenvalue(const ChainSpec& chain,
                                               const BetheRootSet& rs,
                                               std::complex<double> lam) {
    using namespace bethe_detail;
    chain.validate();
    const Algebra& alg = chain.alg;
    const int d = alg.dim();
    const BetheCase bc = bethe_case(chain);
    const C a = lam + ii(1), b = lam;
    C sum(0.0);
    if (bc == BetheCase::SP) {
        if (chain.mode != ChainMode::OpenSP)
            throw std::invalid_argument("dressed_eigenvalue: open chain required");
        const SpDiagBoundary bd = sp_diag_boundary(chain);
        const int L = chain.sites;
        const C apow = std::pow(a * a, L), bpow = std::pow(b * b, L);
        for (int l = 0; l < d; ++l) {
            C term = sp_g(alg, l, lam);
            if (bd.trivial) {
                term *= bd.scale;
            } else if (l < bd.m1) {
                term *= -lam + ii(bd.xi);
            } else if (l < alg.bosonic() + bd.n2) {
                term *= lam + ii(bd.xi) + ii(bd.m1);
            } else {
                term *= -lam + ii(bd.xi) - ii(bd.m2) + ii(bd.n2);
            }
            term *= (l == 0 ? apow : bpow) * dressing(bc, alg, l, rs, lam);
            sum += (alg.g(l) == 1 ? -term : term);
        }
        return sum;
    }
    const SnpDiagBoundary bd = snp_diag_boundary(chain);
    const double rho = alg.theta0() * 0.5 * (alg.bosonic() - alg.fermionic());
    const C abar = -lam - ii(rho) + ii(1), bbar = -lam - ii(rho);
    const int L = chain.sites / 2;
    const C alpha = std::pow(a * bbar * a * bbar, L);
    const C beta = std::pow(b * bbar * b * bbar, L);
    const C gamma = std::pow(abar * b * abar * b, L);
    for (int l = 0; l < d; ++l) {
        C term = bd.k[l] * snp_g(alg, l, lam) *
                 (l == 0 ? alpha : (l == d - 1 ? gamma : beta)) *
                 dressing(bc, alg, l, rs, lam);
        sum += (alg.g(l) == 1 ? -term : term);
    }
    return bd.plus_scale * sum;
}

// Pseudo-vacuum eigenvalue: the dressed eigenvalue with no roots.
inline std::complex<double> lambda0(const ChainSpec& chain,
                                    std::complex<double> lam) {
    return dressed_eigenvalue(chain, BetheRootSet{}, lam);
}

// Analyticity identities of the dressings: A_l(-il/2) = A_{l-1}(-il/2) and
// the mirrored family; for the soliton non-preserving case the crossing
// relation itself.  Returns the maximum deviation (identically zero up to
// roundoff for any root set).
inline double analyticity_check(BetheCase bc, const Algebra& alg,
                                const BetheRootSet& rs) {
    using namespace bethe_detail;
    double worst = 0.0;
    auto probe = [&](int la, int lb, C at) {
        const C va = dressing(bc, alg, la, rs, at);
        const C vb = dressing(bc, alg, lb, rs, at);
        worst = std::max(worst, std::abs(va - vb));
    };
    if (bc == BetheCase::SP) {
        const int m = alg.bosonic(), n = alg.fermionic();
        for (int l = 1; l <= m - 1; ++l) probe(l, l - 1, ii(-0.5 * l));
        for (int l = std::max(1, m - n + 1); l <= m - 1; ++l)
            if (2 * m - l <= alg.dim() - 1) probe(2 * m - l, 2 * m - l - 1, ii(-0.5 * l));
        return worst;
    }
    const int d = alg.dim();
    const double rho = alg.theta0() * 0.5 * (alg.bosonic() - alg.fermionic());
    const C samples[] = {C(0.31, 0.17), C(-0.43, 0.29), C(0.73, -0.11)};
    for (C lam : samples)
        for (int l = 0; l < d; ++l) {
            const C va = dressing(bc, alg, l, rs, lam);
            const C vb = dressing(bc, alg, d - 1 - l, rs, -lam - ii(rho));
            worst = std::max(worst, std::abs(va - vb));
        }
    return worst;
}

// Pole positions of the dressing factors entering Lambda (for residue
// cancellation checks).
inline std::vector<std::complex<double>> dressing_poles(BetheCase bc,
                                                        const Algebra& alg,
                                                        const BetheRootSet& rs) {
    using namespace bethe_detail;
    const int d = alg.dim();
    const double rho = alg.theta0() * 0.5 * (alg.bosonic() - alg.fermionic());
    std::vector<C> out;
    auto add_pair = [&](const std::vector<C>& lvl, C shift, bool crossed) {
        for (C r : lvl)
            for (C p : {-r - shift, r - shift})
                out.push_back(crossed ? -p - ii(rho) : p);
    };
    // Mirror the direct branches of `dressing`; crossed levels contribute
    // the reflected poles.
    std::vector<std::pair<int, bool>> levels;
    for (int l = 0; l < d; ++l) levels.emplace_back(l, false);
    for (std::size_t idx = 0; idx < levels.size(); ++idx) {
        auto [l, crossed] = levels[idx];
        if (bc == BetheCase::SP) {
            const int m = alg.bosonic();
            if (l == 0) {
                add_pair(level(rs, 1), ii(0.5), crossed);
            } else if (l <= m - 1) {
                add_pair(level(rs, l), ii(0.5 * l), crossed);
                add_pair(level(rs, l + 1), ii(0.5 * l + 0.5), crossed);
            } else {
                const C s = ii(m - 0.5 * l);
                add_pair(level(rs, l), s, crossed);
                add_pair(level(rs, l + 1), s - ii(0.5), crossed);
            }
            continue;
        }
        const int m = alg.bosonic() / 2, n = alg.fermionic() / 2;
        const int mm = alg.bosonic();
        if (l == 0) {
            add_pair(level(rs, 1), ii(0.5), crossed);
        } else if (l <= n - 1) {
            add_pair(level(rs, l), ii(0.5 * l), crossed);
            add_pair(level(rs, l + 1), ii(0.5 * l + 0.5), crossed);
        } else if (mm % 2 == 1 && l == m + n) {
            const C s = ii(n - 0.5 * l);
            add_pair(level(rs, l), s, crossed);
            add_pair(level(rs, l), s - ii(0.5), crossed);
        } else if (2 * l < 2 * n + mm - 1) {
            const C s = ii(n - 0.5 * l);
            add_pair(level(rs, l), s, crossed);
            add_pair(level(rs, l + 1), s - ii(0.5), crossed);
        } else if (!crossed) {
            levels.emplace_back(d - 1 - l, true);
        }
    }
    return out;
}

// Average of (z - p) f(z) over a small circle with uniformly spaced angles;
// the uniform spacing cancels the analytic-part error to high order.
template <class F>
std::complex<double> residue_at(F&& f, std::complex<double> pole,
                                double eps = 1e-4, int npts = 8) {
    std::complex<double> acc(0.0);
    for (int k = 0; k < npts; ++k) {
        const double th = 2.0 * M_PI * k / npts;
        const std::complex<double> z =
            pole + eps * std::complex<double>(std::cos(th), std::sin(th));
        acc += (z - pole) * f(z);
    }
    return acc / double(npts);
}

// Bethe-equation residuals LHS/RHS - 1, one per root.
inline std::vector<std::complex<double>> bethe_residuals(
    const ChainSpec& chain, const BetheRootSet& rs,
    SelfTermPolicy policy = SelfTermPolicy::ExcludeSelf) {
    using namespace bethe_detail;
    chain.validate();
    const Algebra& alg = chain.alg;
    const BetheCase bc = bethe_case(chain);
    const int nlvl = bethe_levels(bc, alg);
    if (int(rs.roots.size()) > nlvl)
        throw std::invalid_argument("bethe_residuals: too many root levels");
    std::vector<C> res;

    auto same_level = [&](const std::vector<C>& lvl, std::size_t i, double x) {
        C out(1.0);
        for (std::size_t j = 0; j < lvl.size(); ++j) {
            if (policy == SelfTermPolicy::ExcludeSelf && j == i) continue;
            out *= e_fn(x, lvl[i] - lvl[j]) * e_fn(x, lvl[i] + lvl[j]);
        }
        return out;
    };
    auto other_level = [&](C li, int l, double x, int power = 1) {
        C out(1.0);
        for (C lj : level(rs, l)) {
            C f = e_fn(x, li - lj) * e_fn(x, li + lj);
            for (int p = 0; p < power; ++p) out *= f;
        }
        return out;
    };

    if (bc == BetheCase::SP) {
        const SpDiagBoundary bd = sp_diag_boundary(chain);
        const int m = alg.bosonic(), n = alg.fermionic();
        const int twoL = 2 * chain.sites;
        for (int l = 1; l <= nlvl; ++l) {
            const std::vector<C>& lvl = level(rs, l);
            for (std::size_t i = 0; i < lvl.size(); ++i) {
                const C li = lvl[i];
                C lhs(1.0), rhs(1.0);
                if (l == 1) {
                    lhs = std::pow(e_fn(1, li), twoL);
                    rhs = same_level(lvl, i, 2) * other_level(li, 2, -1);
                } else if (l == m && n >= 1) {
                    rhs = other_level(li, l - 1, -1) * other_level(li, l + 1, 1);
                } else if (l == nlvl) {
                    rhs = same_level(lvl, i, 2) * other_level(li, l - 1, -1);
                } else {
                    rhs = same_level(lvl, i, 2) * other_level(li, l - 1, -1) *
                          other_level(li, l + 1, -1);
                }
                if (!bd.trivial) {
                    if (l == bd.m1)
                        lhs *= -1.0 / e_fn(2 * bd.xi + bd.m1, li);
                    if (l == m + bd.n2)
                        lhs *= -1.0 / e_fn(2 * bd.xi + bd.m1 - bd.m2 - bd.n2, li);
                }
                res.push_back(lhs / rhs - 1.0);
            }
        }
        return res;
    }

    const SnpDiagBoundary bd = snp_diag_boundary(chain);
    const int mm = alg.bosonic();
    const int n = alg.fermionic() / 2;
    const int twoL = chain.sites;
    for (int l = 1; l <= nlvl; ++l) {
        const std::vector<C>& lvl = level(rs, l);
        for (std::size_t i = 0; i < lvl.size(); ++i) {
            const C li = lvl[i];
            C lhs(1.0), rhs(1.0);
            if (l == 1 && nlvl >= 2) {
                lhs = std::pow(e_fn(1, li), twoL);
                rhs = same_level(lvl, i, 2) * other_level(li, 2, -1);
            } else if (l == nlvl) {
                if (mm % 2 == 1) {
                    lhs = e_fn(-0.5, li);
                    rhs = same_level(lvl, i, 2) * same_level(lvl, i, -1) *
                          other_level(li, l - 1, -1);
                } else {
                    lhs = e_fn(1, li);
                    rhs = same_level(lvl, i, 2) * other_level(li, l - 1, -1, 2);
                }
            } else if (l == n && l >= 2) {
                rhs = other_level(li, l + 1, 1) * other_level(li, l - 1, -1);
            } else {
                rhs = same_level(lvl, i, 2) * other_level(li, l - 1, -1) *
                      other_level(li, l + 1, -1);
            }
            // Diagonal-boundary multiplier k_l / k_{l+1} on the LHS.
            const C kl = bd.k[l - 1], klp = bd.k[l];
            if (klp == 0.0)
                throw std::domain_error(
                    "bethe_residuals: boundary multiplier undefined (singular diagonal)");
            lhs *= kl / klp;
            res.push_back(lhs / rhs - 1.0);
        }
    }
    return res;
}

struct BetheSolveOptions {
    int trials = 300;
    unsigned seed = 20260825;
    double residual_tol = 1e-10;
    double newton_tol = 1e-12;
    double step_tol = 1e-14;
    int max_iterations = 200;
    double seed_scale = 1.5;
    double dedup_tol = 1e-7;
    double max_magnitude = 50.0;
    double min_magnitude = 1e-7;
};

namespace bethe_detail {

inline double max_abs_vec(const std::vector<C>& v) {
    double m = 0.0;
    for (C z : v) {
        const double a = std::abs(z);
        if (!std::isfinite(a)) return std::numeric_limits<double>::infinity();
        m = std::max(m, a);
    }
    return m;
}

inline BetheRootSet unpack(const std::vector<int>& counts,
                           const Eigen::VectorXd& x) {
    BetheRootSet rs;
    int k = 0;
    for (int c : counts) {
        std::vector<C> lvl;
        for (int j = 0; j < c; ++j, ++k) lvl.emplace_back(x(2 * k), x(2 * k + 1));
        rs.roots.push_back(std::move(lvl));
    }
    return rs;
}

}  // namespace bethe_detail

// Damped-Newton Bethe solver over random seeds, with canonicalization
// (level-sorted roots, sign fixed to Im >= 0 then Re >= 0), pole/zero/
// duplicate filtering, and root-set deduplication.
inline std::vector<BetheRootSet> solve_bethe(
    const ChainSpec& chain, const std::vector<int>& counts,
    SelfTermPolicy policy = SelfTermPolicy::ExcludeSelf,
    const BetheSolveOptions& opt = {}) {
    using namespace bethe_detail;
    const int ntot = [&] {
        int t = 0;
        for (int c : counts) {
            if (c < 0) throw std::invalid_argument("solve_bethe: negative count");
            t += c;
        }
        return t;
    }();
    if (ntot == 0) {
        BetheRootSet empty;
        empty.roots.assign(counts.size(), {});
        return {empty};
    }

    auto eval = [&](const Eigen::VectorXd& x) {
        Eigen::VectorXd f(2 * ntot);
        BetheRootSet rs = unpack(counts, x);
        std::vector<C> r;
        try {
            r = bethe_residuals(chain, rs, policy);
        } catch (const std::domain_error&) {
            f.setConstant(std::numeric_limits<double>::infinity());
            return f;
        }
        for (int k = 0; k < ntot; ++k) {
            f(2 * k) = r[k].real();
            f(2 * k + 1) = r[k].imag();
        }
        return f;
    };

    std::vector<BetheRootSet> found;
    std::mt19937_64 rng(opt.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int trial = 0; trial < opt.trials; ++trial) {
        Eigen::VectorXd x(2 * ntot);
        for (int k = 0; k < 2 * ntot; ++k) x(k) = opt.seed_scale * gauss(rng);
        Eigen::VectorXd f = eval(x);
        double fn = f.lpNorm<Eigen::Infinity>();
        if (!std::isfinite(fn)) continue;
        bool converged = false;
        for (int iter = 0; iter < opt.max_iterations; ++iter) {
            if (fn < opt.newton_tol) {
                converged = true;
                break;
            }
            // Forward-difference Jacobian.
            Eigen::MatrixXd jac(2 * ntot, 2 * ntot);
            const double h = 1e-7;
            bool bad = false;
            for (int c = 0; c < 2 * ntot; ++c) {
                Eigen::VectorXd xp = x;
                xp(c) += h;
                Eigen::VectorXd fp = eval(xp);
                if (!fp.allFinite()) {
                    bad = true;
                    break;
                }
                jac.col(c) = (fp - f) / h;
            }
            if (bad) break;
            Eigen::VectorXd step = jac.fullPivLu().solve(-f);
            if (!step.allFinite()) break;
            double damp = 1.0;
            Eigen::VectorXd xn;
            Eigen::VectorXd fnv;
            double fnn = std::numeric_limits<double>::infinity();
            for (int halve = 0; halve <= 20; ++halve) {
                xn = x + damp * step;
                fnv = eval(xn);
                fnn = fnv.allFinite() ? fnv.lpNorm<Eigen::Infinity>()
                                      : std::numeric_limits<double>::infinity();
                if (fnn < fn) break;
                damp *= 0.5;
            }
            if (!(fnn < fn)) break;
            const double moved = (damp * step).lpNorm<Eigen::Infinity>();
            x = xn;
            f = fnv;
            fn = fnn;
            if (moved < opt.step_tol) break;
        }
        if (fn < opt.newton_tol) converged = true;
        if (!converged || fn > opt.residual_tol) continue;

        // Canonicalize and filter.
        BetheRootSet rs = unpack(counts, x);
        bool ok = true;
        for (auto& lvl : rs.roots) {
            for (auto& r : lvl) {
                if (r.imag() < -1e-9 ||
                    (std::abs(r.imag()) <= 1e-9 && r.real() < 0))
                    r = -r;
                const double mag = std::abs(r);
                if (mag < opt.min_magnitude || mag > opt.max_magnitude) ok = false;
            }
            std::sort(lvl.begin(), lvl.end(), [](C a, C b) {
                return std::make_pair(std::round(a.real() * 1e5),
                                      std::round(a.imag() * 1e5)) <
                       std::make_pair(std::round(b.real() * 1e5),
                                      std::round(b.imag() * 1e5));
            });
            for (std::size_t j = 1; j < lvl.size(); ++j)
                if (std::abs(lvl[j] - lvl[j - 1]) < opt.dedup_tol) ok = false;
        }
        if (!ok) continue;
        auto same = [&](const BetheRootSet& a, const BetheRootSet& b) {
            for (std::size_t l = 0; l < a.roots.size(); ++l)
                for (std::size_t j = 0; j < a.roots[l].size(); ++j)
                    if (std::abs(a.roots[l][j] - b.roots[l][j]) > opt.dedup_tol)
                        return false;
            return true;
        };
        bool dup = false;
        for (const auto& prev : found)
            if (same(prev, rs)) {
                dup = true;
                break;
            }
        if (!dup) found.push_back(std::move(rs));
    }
    return found;
}

// Matching of analytical eigenvalue curves against the oracle spectrum.
struct MatchReport {
    int curves = 0;
    int matched = 0;
    double tol = 1e-8;
    std::vector<double> best_deviation;  // per oracle curve
    std::vector<int> best_rootset;       // index into rootsets, -1 if none
    double off_diagonal_residual = 0.0;
    bool all_matched() const { return matched == curves; }
};

inline MatchReport match_spectrum(
    const ChainSpec& chain, const std::vector<BetheRootSet>& rootsets,
    const std::vector<std::complex<double>>& lambda_samples,
    double tol = 1e-8) {
    using C = std::complex<double>;
    MatchReport rep;
    rep.tol = tol;
    auto samples = exact_spectrum(chain, lambda_samples);
    auto curves = spectral_curves(samples);
    rep.off_diagonal_residual = curves.off_diagonal_residual;
    rep.curves = int(curves.curves.size());
    for (const auto& curve : curves.curves) {
        double best = std::numeric_limits<double>::infinity();
        int best_idx = -1;
        for (std::size_t r = 0; r < rootsets.size(); ++r) {
            double dev = 0.0;
            try {
                for (std::size_t s = 0; s < lambda_samples.size(); ++s) {
                    const C pred =
                        dressed_eigenvalue(chain, rootsets[r], lambda_samples[s]);
                    dev = std::max(dev, std::abs(pred - curve[s]) /
                                            std::max(std::abs(curve[s]), 1e-12));
                }
            } catch (const std::domain_error&) {
                continue;
            }
            if (dev < best) {
                best = dev;
                best_idx = int(r);
            }
        }
        rep.best_deviation.push_back(best);
        rep.best_rootset.push_back(best_idx);
        if (best < tol) ++rep.matched;
    }
    return rep;
}

}  // namespace spinchain
