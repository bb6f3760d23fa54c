#pragma once
// Brute-force solver for the soliton-preserving reflection equation at
// small local dimension: parametrize K(lambda) = A + lambda B with unknown
// (grading-preserving) entries, expand the reflection equation into a
// homogeneous quadratic polynomial system, and solve it by exhaustive
// case-splitting with exact linear eliminations.  Serves as the oracle for
// the classification theorem.

#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "mpoly.hpp"
#include "reflection.hpp"

namespace spinchain {

struct SpFamily {
    // Chronological eliminations var -> num/den over the not-yet-eliminated
    // variables; instantiate by drawing the free variables and substituting
    // in reverse order.
    std::vector<std::tuple<int, MPoly, MPoly>> assignments;
    std::vector<int> free_vars;
    std::vector<MPoly> inequations;
    bool resolved = true;

    // Filled by post-processing with a generic instantiated member.
    Mat<GaussianRational> sample_a, sample_b;
    bool verified = false;    // exact RE residual of the sample vanishes
    bool invertible = false;  // det(A + lambda B) not identically zero
    SpClassification classification;
};

namespace bf_detail {

using MMat = std::vector<std::vector<MPoly>>;

inline MMat mmat(int n, int nv) {
    return MMat(n, std::vector<MPoly>(n, MPoly(nv)));
}

inline MMat mmul(const MMat& a, const MMat& b) {
    const int n = int(a.size());
    MMat r = mmat(n, a[0][0].nvars());
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            if (a[i][k].is_zero()) continue;
            for (int j = 0; j < n; ++j) {
                if (b[k][j].is_zero()) continue;
                r[i][j] = r[i][j] + a[i][k] * b[k][j];
            }
        }
    return r;
}

inline MMat msub(const MMat& a, const MMat& b) {
    const int n = int(a.size());
    MMat r = mmat(n, a[0][0].nvars());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) r[i][j] = a[i][j] - b[i][j];
    return r;
}

inline MMat mswap(const MMat& a, int d) {
    MMat r = mmat(d * d, a[0][0].nvars());
    for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k)
            for (int j = 0; j < d; ++j)
                for (int l = 0; l < d; ++l)
                    r[k * d + i][l * d + j] = a[i * d + k][j * d + l];
    return r;
}

inline std::string eq_key(const MPoly& p) {
    std::string s;
    for (const auto& [m, c] : p.terms()) {
        for (int e : m) s += std::to_string(e) + ",";
        s += ":" + c.str() + ";";
    }
    return s;
}

// Best-effort exact square root of a multivariate polynomial (enough for
// the discriminants arising from these quadratic systems).
inline std::optional<MPoly> mpoly_sqrt(const MPoly& p) {
    if (p.is_zero()) return MPoly(p.nvars());
    if (p.is_constant()) {
        auto r = gr_sqrt(p.constant_value());
        if (!r) return std::nullopt;
        return MPoly::constant(p.nvars(), *r);
    }
    if (p.is_monomial()) {
        const auto& [m, c] = *p.terms().begin();
        for (int e : m)
            if (e % 2 != 0) return std::nullopt;
        auto r = gr_sqrt(c);
        if (!r) return std::nullopt;
        MPoly q(p.nvars());
        MPoly::Monomial half = m;
        for (int& e : half) e /= 2;
        q = MPoly::constant(p.nvars(), *r);
        MPoly shift(p.nvars());
        for (int v = 0; v < p.nvars(); ++v)
            for (int e = 0; e < half[v]; ++e)
                q = q * MPoly::variable(p.nvars(), v);
        return q;
    }
    // Univariate-in-v coefficient recursion on the lowest present variable.
    const std::vector<int> vars = p.vars_present();
    const int v = vars.front();
    const int deg = p.degree_in(v);
    if (deg % 2 != 0) return std::nullopt;
    const int h = deg / 2;
    auto lead = mpoly_sqrt(p.coeff_in(v, deg));
    if (!lead) return std::nullopt;
    // q = sum_k q_k x_v^k with q_h = lead; solve downward.
    std::vector<MPoly> q(h + 1, MPoly(p.nvars()));
    q[h] = *lead;
    MPoly xv = MPoly::variable(p.nvars(), v);
    for (int k = h - 1; k >= 0; --k) {
        // Coefficient of x_v^{k+h} in p minus known contributions equals
        // 2 q_h q_k + (cross terms of known q_j).
        MPoly target = p.coeff_in(v, k + h);
        for (int a = k + 1; a <= h - 1; ++a) {
            int bidx = k + h - a;
            if (bidx <= h && bidx >= k + 1) target = target - q[a] * q[bidx];
        }
        // Divide target by 2 q_h: only valid when q_h is a constant or
        // monomial dividing target; fall back to failure otherwise.
        MPoly twoqh = q[h].scaled(GaussianRational(2));
        if (twoqh.is_constant()) {
            q[k] = target.scaled(GaussianRational(1) / twoqh.constant_value());
        } else if (twoqh.is_monomial()) {
            const auto& [m, c] = *twoqh.terms().begin();
            MPoly acc(p.nvars());
            for (const auto& [tm, tc] : target.terms()) {
                MPoly::Monomial rm = tm;
                for (int vv = 0; vv < p.nvars(); ++vv) {
                    if (rm[vv] < m[vv]) return std::nullopt;
                    rm[vv] -= m[vv];
                }
                MPoly term = MPoly::constant(p.nvars(), tc / c);
                for (int vv = 0; vv < p.nvars(); ++vv)
                    for (int e = 0; e < rm[vv]; ++e)
                        term = term * MPoly::variable(p.nvars(), vv);
                acc = acc + term;
            }
            q[k] = acc;
        } else {
            return std::nullopt;
        }
    }
    MPoly cand(p.nvars());
    MPoly power = MPoly::constant(p.nvars(), GaussianRational(1));
    for (int k = 0; k <= h; ++k) {
        cand = cand + q[k] * power;
        power = power * xv;
    }
    if (cand * cand == p) return cand;
    cand = -cand;
    if (cand * cand == p) return cand;
    return std::nullopt;
}

struct SolverState {
    std::vector<MPoly> eqs;
    std::vector<std::tuple<int, MPoly, MPoly>> assigns;
    std::vector<MPoly> ineqs;
    std::vector<char> eliminated;
};

struct Solver {
    int nv = 0;
    int nunknown = 0;  // the unknown-variable prefix (lambda vars excluded)
    std::vector<SpFamily> out;
    long nodes = 0;
    long node_cap = 2000000;
    int depth_cap = 200;
    bool overflow = false;

    // Returns false on contradiction.
    bool simplify(SolverState& st) {
        std::vector<MPoly> kept;
        std::set<std::string> seen;
        for (MPoly& e : st.eqs) {
            if (e.is_zero()) continue;
            if (e.is_constant()) return false;
            MPoly m = e.monic();
            std::string key = eq_key(m);
            if (seen.insert(key).second) kept.push_back(m);
        }
        st.eqs = std::move(kept);
        // Drop inequations that became nonzero constants.
        std::vector<MPoly> ik;
        for (MPoly& q : st.ineqs) {
            if (q.is_constant()) {
                if (q.is_zero()) return false;  // 0 != 0 contradiction
                continue;
            }
            ik.push_back(q.monic());
        }
        st.ineqs = std::move(ik);
        return true;
    }

    void apply_assign(SolverState& st, int v, const MPoly& num,
                      const MPoly& den) {
        for (MPoly& e : st.eqs) e = e.substitute_cleared(v, num, den);
        for (MPoly& q : st.ineqs) q = q.substitute_cleared(v, num, den);
        st.assigns.emplace_back(v, num, den);
        st.eliminated[v] = 1;
    }

    void emit(const SolverState& st, bool resolved) {
        SpFamily f;
        f.assignments = st.assigns;
        f.inequations = st.ineqs;
        f.resolved = resolved;
        for (int v = 0; v < nunknown; ++v)
            if (!st.eliminated[v]) f.free_vars.push_back(v);
        out.push_back(std::move(f));
    }

    void solve(SolverState st, int depth) {
        if (++nodes > node_cap || depth > depth_cap) {
            overflow = true;
            emit(st, false);
            return;
        }
        // Deterministic eliminations first, in a loop.
        for (;;) {
            if (!simplify(st)) return;
            if (st.eqs.empty()) {
                emit(st, true);
                return;
            }
            bool did = false;
            for (std::size_t idx = 0; idx < st.eqs.size() && !did; ++idx) {
                const MPoly& e = st.eqs[idx];
                for (int v = 0; v < nv && !did; ++v) {
                    if (st.eliminated[v] || e.degree_in(v) != 1) continue;
                    MPoly c1 = e.coeff_in(v, 1);
                    if (!c1.is_constant()) continue;
                    MPoly c0 = e.coeff_in(v, 0);
                    MPoly er = st.eqs[idx];
                    st.eqs.erase(st.eqs.begin() + idx);
                    apply_assign(st, v, -c0, c1);
                    did = true;
                }
            }
            if (!did) break;
        }

        // Order remaining equations by simplicity for branching.
        std::vector<std::size_t> order(st.eqs.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            const MPoly &pa = st.eqs[a], &pb = st.eqs[b];
            return std::make_tuple(pa.term_count(), pa.total_degree()) <
                   std::make_tuple(pb.term_count(), pb.total_degree());
        });

        for (std::size_t oi : order) {
            const MPoly e = st.eqs[oi];
            // (b) common monomial factor: branch var = 0 vs divide it out.
            MPoly::Monomial g = e.common_monomial();
            int gv = -1;
            for (int v = 0; v < nv; ++v)
                if (g[v] > 0) {
                    gv = v;
                    break;
                }
            if (gv >= 0) {
                {
                    SolverState s0 = st;
                    s0.eqs.erase(s0.eqs.begin() + oi);
                    apply_assign(s0, gv, MPoly(nv), MPoly::constant(nv, GaussianRational(1)));
                    solve(std::move(s0), depth + 1);
                }
                {
                    SolverState s1 = st;
                    MPoly reduced = e;
                    MPoly::Monomial gg(nv, 0);
                    gg[gv] = g[gv];
                    reduced = reduced.divide_monomial(gg);
                    s1.eqs[oi] = reduced;
                    s1.ineqs.push_back(MPoly::variable(nv, gv));
                    solve(std::move(s1), depth + 1);
                }
                return;
            }
            // (d) linear in some variable with polynomial coefficient.
            for (int v = 0; v < nv; ++v) {
                if (st.eliminated[v] || e.degree_in(v) != 1) continue;
                MPoly c1 = e.coeff_in(v, 1);
                MPoly c0 = e.coeff_in(v, 0);
                {
                    SolverState s0 = st;
                    s0.eqs.erase(s0.eqs.begin() + oi);
                    s0.ineqs.push_back(c1);
                    apply_assign(s0, v, -c0, c1);
                    solve(std::move(s0), depth + 1);
                }
                {
                    SolverState s1 = st;
                    s1.eqs[oi] = c0;
                    s1.eqs.push_back(c1);
                    solve(std::move(s1), depth + 1);
                }
                return;
            }
            // (e) quadratic in some variable with constant leading
            // coefficient and a recognizable square-root discriminant.
            for (int v = 0; v < nv; ++v) {
                if (st.eliminated[v] || e.degree_in(v) != 2) continue;
                MPoly c2 = e.coeff_in(v, 2);
                if (!c2.is_constant()) continue;
                MPoly c1 = e.coeff_in(v, 1);
                MPoly c0 = e.coeff_in(v, 0);
                MPoly disc = c1 * c1 - c2.scaled(GaussianRational(4)) * c0;
                auto sq = mpoly_sqrt(disc);
                if (!sq) continue;
                MPoly den = c2.scaled(GaussianRational(2));
                for (int branch = 0; branch < (sq->is_zero() ? 1 : 2); ++branch) {
                    SolverState s = st;
                    s.eqs.erase(s.eqs.begin() + oi);
                    MPoly num = branch == 0 ? (-c1 + *sq) : (-c1 - *sq);
                    apply_assign(s, v, num, den);
                    solve(std::move(s), depth + 1);
                }
                return;
            }
        }
        // No applicable move: record for review.
        emit(st, false);
    }
};

}  // namespace bf_detail

// Exhaustively solve the SP reflection equation for K = A + lambda B over
// the grading-preserving (block-diagonal) unknowns.  Returns all solution
// families found, each with a generic instantiated member, its exact
// residual verification, invertibility, and classification.
inline std::vector<SpFamily> brute_force_sp_solutions(const Algebra& alg,
                                                      unsigned seed = 20260825) {
    using GR = GaussianRational;
    const int d = alg.dim();
    if (d > 3)
        throw std::invalid_argument("brute_force_sp_solutions: M+N <= 3 only");

    // Variable layout: bosonic (grading-preserving) entries of A, then of B,
    // then the two spectral parameters.
    std::vector<std::pair<int, int>> pos;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            if (alg.g(i) == alg.g(j)) pos.emplace_back(i, j);
    const int np = int(pos.size());
    const int nv = 2 * np + 2;
    const int vl1 = 2 * np, vl2 = 2 * np + 1;

    using bf_detail::MMat;
    const MPoly l1 = MPoly::variable(nv, vl1);
    const MPoly l2 = MPoly::variable(nv, vl2);

    auto rmat = [&](const MPoly& mu) {
        Mat<GR> p = super_permutation<GR>(alg);
        MMat r = bf_detail::mmat(d * d, nv);
        for (int a = 0; a < d * d; ++a) {
            r[a][a] = r[a][a] + mu;
            for (int b = 0; b < d * d; ++b)
                if (!p(a, b).is_zero())
                    r[a][b] = r[a][b] +
                              MPoly::constant(nv, GR::i() * p(a, b));
        }
        return r;
    };

    auto kmat = [&](const MPoly& lam) {
        MMat k = bf_detail::mmat(d, nv);
        for (int t = 0; t < np; ++t) {
            auto [i, j] = pos[t];
            k[i][j] = MPoly::variable(nv, t) +
                      lam * MPoly::variable(nv, np + t);
        }
        return k;
    };

    auto mkron_left = [&](const MMat& k) {  // K (x) I
        MMat r = bf_detail::mmat(d * d, nv);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                if (k[i][j].is_zero()) continue;
                for (int p2 = 0; p2 < d; ++p2)
                    r[i * d + p2][j * d + p2] = k[i][j];
            }
        return r;
    };
    auto mkron_right = [&](const MMat& k) {  // I (x) K
        MMat r = bf_detail::mmat(d * d, nv);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                if (k[i][j].is_zero()) continue;
                for (int p2 = 0; p2 < d; ++p2)
                    r[p2 * d + i][p2 * d + j] = k[i][j];
            }
        return r;
    };

    const MMat rd = rmat(l1 - l2);
    const MMat rs = rmat(l1 + l2);
    const MMat rd21 = bf_detail::mswap(rd, d);
    const MMat rs21 = bf_detail::mswap(rs, d);
    const MMat k1 = mkron_left(kmat(l1));
    const MMat k2 = mkron_right(kmat(l2));

    using bf_detail::mmul;
    const MMat lhs = mmul(mmul(mmul(rd, k1), rs21), k2);
    const MMat rhs = mmul(mmul(mmul(k2, rs), k1), rd21);
    const MMat resid = bf_detail::msub(lhs, rhs);

    // Split each entry into equations by the lambda exponents.
    std::vector<MPoly> eqs;
    std::set<std::string> seen;
    for (int a = 0; a < d * d; ++a)
        for (int b = 0; b < d * d; ++b) {
            const MPoly& p = resid[a][b];
            if (p.is_zero()) continue;
            std::map<std::pair<int, int>, MPoly> buckets;
            for (const auto& [m, c] : p.terms()) {
                MPoly::Monomial m2 = m;
                const std::pair<int, int> key(m2[vl1], m2[vl2]);
                m2[vl1] = 0;
                m2[vl2] = 0;
                auto it = buckets.find(key);
                if (it == buckets.end()) it = buckets.emplace(key, MPoly(nv)).first;
                MPoly term = MPoly::constant(nv, c);
                for (int v = 0; v < nv; ++v)
                    for (int e = 0; e < m2[v]; ++e)
                        term = term * MPoly::variable(nv, v);
                it->second = it->second + term;
            }
            for (auto& [key, q] : buckets) {
                if (q.is_zero()) continue;
                MPoly mq = q.monic();
                if (seen.insert(bf_detail::eq_key(mq)).second) eqs.push_back(mq);
            }
        }

    // Gauge: the system is homogeneous, so branch over the first nonzero
    // unknown and normalize it to 1.
    bf_detail::Solver solver;
    solver.nv = nv;
    solver.nunknown = 2 * np;
    for (int v = 0; v < 2 * np; ++v) {
        bf_detail::SolverState st;
        st.eqs = eqs;
        st.eliminated.assign(nv, 0);
        st.eliminated[vl1] = st.eliminated[vl2] = 1;  // never branch on lambda
        for (int w = 0; w < v; ++w)
            solver.apply_assign(st, w, MPoly(nv),
                                MPoly::constant(nv, GR(1)));
        solver.apply_assign(st, v, MPoly::constant(nv, GR(1)),
                            MPoly::constant(nv, GR(1)));
        solver.solve(std::move(st), 0);
    }

    // Post-process: instantiate a generic member, verify, classify.
    std::mt19937_64 rng(seed);
    auto rand_gr = [&]() {
        std::uniform_int_distribution<int> num(-6, 6), den(1, 4);
        Rational r(num(rng), den(rng));
        r.canonicalize();
        return GR(r);
    };
    for (SpFamily& f : solver.out) {
        bool ok = false;
        std::vector<GR> vals(nv);
        for (int attempt = 0; attempt < 200 && !ok; ++attempt) {
            for (int v : f.free_vars) {
                vals[v] = rand_gr();
                if (vals[v].is_zero()) vals[v] = GR(1);
            }
            ok = true;
            for (auto it = f.assignments.rbegin(); it != f.assignments.rend();
                 ++it) {
                const auto& [v, num, den] = *it;
                GR dv = den.eval(vals);
                if (dv.is_zero()) {
                    ok = false;
                    break;
                }
                vals[v] = num.eval(vals) / dv;
            }
            if (!ok) continue;
            for (const MPoly& q : f.inequations)
                if (q.eval(vals).is_zero()) {
                    ok = false;
                    break;
                }
        }
        if (!ok) continue;
        Mat<GR> a(d), b(d);
        for (int t = 0; t < np; ++t) {
            auto [i, j] = pos[t];
            a(i, j) = vals[t];
            b(i, j) = vals[np + t];
        }
        f.sample_a = a;
        f.sample_b = b;
        Mat<ExactPoly> kfam(d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                kfam(i, j) =
                    ExactPoly(a(i, j)) + ExactPoly::x() * ExactPoly(b(i, j));
        f.verified = sp_re_residual(kfam, alg).is_zero();
        f.invertible = !det_laplace(kfam).is_zero();
        if (f.verified && f.invertible) {
            std::vector<std::pair<GR, Mat<GR>>> samples;
            for (long s = 1; s <= 3; ++s)
                samples.emplace_back(GR(s), a + b.scaled(GR(s)));
            f.classification = classify_sp(samples, alg);
        }
    }
    return solver.out;
}

}  // namespace spinchain
