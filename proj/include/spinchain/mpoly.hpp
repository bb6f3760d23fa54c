#pragma once
// Sparse multivariate polynomials over Gaussian rationals.  Used by the
// brute-force reflection-equation solver, which manipulates quadratic
// systems in the entries of the boundary matrices.

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "exact.hpp"

namespace spinchain {

class MPoly {
  public:
    using Monomial = std::vector<int>;

    MPoly() : nvars_(0) {}
    explicit MPoly(int nvars) : nvars_(nvars) {}

    static MPoly constant(int nvars, const GaussianRational& c) {
        MPoly p(nvars);
        if (!c.is_zero()) p.terms_[Monomial(nvars, 0)] = c;
        return p;
    }

    static MPoly variable(int nvars, int v) {
        MPoly p(nvars);
        Monomial m(nvars, 0);
        m[v] = 1;
        p.terms_[m] = GaussianRational(1);
        return p;
    }

    int nvars() const { return nvars_; }
    bool is_zero() const { return terms_.empty(); }
    const std::map<Monomial, GaussianRational>& terms() const { return terms_; }

    bool is_constant() const {
        if (terms_.empty()) return true;
        return terms_.size() == 1 &&
               terms_.begin()->first == Monomial(nvars_, 0);
    }

    GaussianRational constant_value() const {
        if (terms_.empty()) return GaussianRational();
        return terms_.begin()->second;
    }

    bool is_monomial() const { return terms_.size() == 1; }

    int degree_in(int v) const {
        int d = 0;
        for (const auto& [m, c] : terms_) d = std::max(d, m[v]);
        return d;
    }

    int total_degree() const {
        int d = 0;
        for (const auto& [m, c] : terms_) {
            int s = 0;
            for (int e : m) s += e;
            d = std::max(d, s);
        }
        return d;
    }

    std::size_t term_count() const { return terms_.size(); }

    std::vector<int> vars_present() const {
        std::vector<char> seen(nvars_, 0);
        for (const auto& [m, c] : terms_)
            for (int v = 0; v < nvars_; ++v)
                if (m[v] > 0) seen[v] = 1;
        std::vector<int> out;
        for (int v = 0; v < nvars_; ++v)
            if (seen[v]) out.push_back(v);
        return out;
    }

    MPoly operator-() const {
        MPoly r(nvars_);
        for (const auto& [m, c] : terms_) r.terms_[m] = -c;
        return r;
    }

    MPoly operator+(const MPoly& o) const {
        check(o);
        MPoly r = *this;
        for (const auto& [m, c] : o.terms_) {
            auto it = r.terms_.find(m);
            if (it == r.terms_.end()) {
                r.terms_[m] = c;
            } else {
                it->second = it->second + c;
                if (it->second.is_zero()) r.terms_.erase(it);
            }
        }
        return r;
    }

    MPoly operator-(const MPoly& o) const { return *this + (-o); }

    MPoly operator*(const MPoly& o) const {
        check(o);
        MPoly r(nvars_);
        for (const auto& [m1, c1] : terms_)
            for (const auto& [m2, c2] : o.terms_) {
                Monomial m(nvars_);
                for (int v = 0; v < nvars_; ++v) m[v] = m1[v] + m2[v];
                GaussianRational c = c1 * c2;
                auto it = r.terms_.find(m);
                if (it == r.terms_.end()) {
                    if (!c.is_zero()) r.terms_[m] = c;
                } else {
                    it->second = it->second + c;
                    if (it->second.is_zero()) r.terms_.erase(it);
                }
            }
        return r;
    }

    MPoly scaled(const GaussianRational& c) const {
        MPoly r(nvars_);
        if (c.is_zero()) return r;
        for (const auto& [m, v] : terms_) r.terms_[m] = v * c;
        return r;
    }

    bool operator==(const MPoly& o) const {
        return nvars_ == o.nvars_ && terms_ == o.terms_;
    }

    // Coefficient of x_v^k, as a polynomial in the remaining variables
    // (the variable slot is kept with exponent zero).
    MPoly coeff_in(int v, int k) const {
        MPoly r(nvars_);
        for (const auto& [m, c] : terms_) {
            if (m[v] != k) continue;
            Monomial m2 = m;
            m2[v] = 0;
            r.terms_[m2] = c;
        }
        return r;
    }

    MPoly pow(int e) const {
        MPoly r = constant(nvars_, GaussianRational(1));
        for (int k = 0; k < e; ++k) r = r * *this;
        return r;
    }

    // Substitute x_v = num/den with denominators cleared: returns the
    // numerator of den^D * P(x_v -> num/den) where D = deg_v(P).  Valid as an
    // equation replacement whenever den != 0.
    MPoly substitute_cleared(int v, const MPoly& num, const MPoly& den) const {
        const int dmax = degree_in(v);
        MPoly out(nvars_);
        for (int k = 0; k <= dmax; ++k) {
            MPoly c = coeff_in(v, k);
            if (c.is_zero()) continue;
            out = out + c * num.pow(k) * den.pow(dmax - k);
        }
        return out;
    }

    GaussianRational eval(const std::vector<GaussianRational>& x) const {
        if (int(x.size()) != nvars_) throw std::invalid_argument("MPoly::eval");
        GaussianRational acc;
        for (const auto& [m, c] : terms_) {
            GaussianRational t = c;
            for (int v = 0; v < nvars_; ++v)
                for (int e = 0; e < m[v]; ++e) t = t * x[v];
            acc = acc + t;
        }
        return acc;
    }

    // Divide by the leading (lexicographically largest monomial) coefficient,
    // giving a canonical representative of the equation up to scale.
    MPoly monic() const {
        if (terms_.empty()) return *this;
        const GaussianRational lead = terms_.rbegin()->second;
        MPoly r(nvars_);
        for (const auto& [m, c] : terms_) r.terms_[m] = c / lead;
        return r;
    }

    // Exponent-wise minimum over all monomials: the largest monomial dividing
    // every term.
    Monomial common_monomial() const {
        Monomial g(nvars_, 0);
        bool first = true;
        for (const auto& [m, c] : terms_) {
            if (first) {
                g = m;
                first = false;
            } else {
                for (int v = 0; v < nvars_; ++v) g[v] = std::min(g[v], m[v]);
            }
        }
        return g;
    }

    MPoly divide_monomial(const Monomial& g) const {
        MPoly r(nvars_);
        for (const auto& [m, c] : terms_) {
            Monomial m2(nvars_);
            for (int v = 0; v < nvars_; ++v) {
                if (m[v] < g[v]) throw std::domain_error("divide_monomial");
                m2[v] = m[v] - g[v];
            }
            r.terms_[m2] = c;
        }
        return r;
    }

    std::string str(const std::vector<std::string>& names) const {
        if (terms_.empty()) return "0";
        std::string s;
        bool first = true;
        for (const auto& [m, c] : terms_) {
            if (!first) s += " + ";
            first = false;
            s += "(" + c.str() + ")";
            for (int v = 0; v < nvars_; ++v)
                for (int e = 0; e < m[v]; ++e) s += "*" + names[v];
        }
        return s;
    }

  private:
    void check(const MPoly& o) const {
        if (nvars_ != o.nvars_)
            throw std::invalid_argument("MPoly: variable count mismatch");
    }

    int nvars_;
    std::map<Monomial, GaussianRational> terms_;
};

}  // namespace spinchain
