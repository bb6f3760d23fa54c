#pragma once
// Grading signatures for sl(N) and sl(M|N) spin chains: basis orderings,
// Z2 grading arrays, the crossing parameter rho, and the V matrix entries.

#include <stdexcept>
#include <string>
#include <vector>

#include "exact.hpp"

namespace spinchain {

// Ordering of bosonic/fermionic basis states.
//  - Distinguished: bosonic indices first (g = 0^M 1^N).
//  - Symmetric: fermionic indices split around the bosonic block
//    (g = 1^{N/2} 0^M 1^{N/2}); requires N even.
enum class BasisOrder { Distinguished, Symmetric };

inline std::string to_string(BasisOrder order) {
    return order == BasisOrder::Distinguished ? "distinguished" : "symmetric";
}

// A grading signature: sl(M|N) with a choice of basis order and theta0 = +-1
// selecting the V matrix used by the twisted transposition.  Pure sl(N) is
// the special case N = 0 (or M = 0 after relabeling).
class Algebra {
  public:
    Algebra(int m, int n, int theta0 = 1,
            BasisOrder order = BasisOrder::Distinguished)
        : m_(m), n_(n), theta0_(theta0), order_(order) {
        if (m < 0 || n < 0 || m + n < 2)
            throw std::invalid_argument("Algebra: need M >= 0, N >= 0, M+N >= 2");
        if (theta0 != 1 && theta0 != -1)
            throw std::invalid_argument("Algebra: theta0 must be +1 or -1");
        if (theta0 == -1 && (m + n) % 2 != 0)
            throw std::invalid_argument(
                "Algebra: theta0 = -1 requires even dimension");
        if (order == BasisOrder::Symmetric && n % 2 != 0)
            throw std::invalid_argument(
                "Algebra: symmetric basis order requires N even");
        grading_.resize(m + n, 0);
        if (order == BasisOrder::Distinguished) {
            for (int i = m; i < m + n; ++i) grading_[i] = 1;
        } else {
            const int half = n / 2;
            for (int i = 0; i < half; ++i) grading_[i] = 1;
            for (int i = m + half; i < m + n; ++i) grading_[i] = 1;
        }
    }

    int bosonic() const { return m_; }
    int fermionic() const { return n_; }
    int theta0() const { return theta0_; }
    BasisOrder order() const { return order_; }
    int dim() const { return m_ + n_; }
    bool graded() const { return n_ > 0; }

    // Z2 grade of basis index i (0-based).
    int g(int i) const { return grading_[i]; }
    const std::vector<int>& grading() const { return grading_; }

    // Crossing parameter rho = theta0 (M - N) / 2.
    Rational rho() const {
        Rational r(theta0_ * (m_ - n_), 2);
        r.canonicalize();
        return r;
    }

    // Entries v_i of the antidiagonal matrix V: V[i][d-1-i] = v_i.
    // theta0 = +1: all +1.  theta0 = -1: +1 on the first half, -1 on the
    // second half (dimension must be even).  V^2 = theta0 * identity.
    std::vector<int> v_entries() const {
        const int d = dim();
        std::vector<int> v(d, 1);
        if (theta0_ == -1)
            for (int i = d / 2; i < d; ++i) v[i] = -1;
        return v;
    }

    std::string name() const {
        std::string s = "sl(" + std::to_string(m_);
        if (n_ > 0) s += "|" + std::to_string(n_);
        s += ")";
        return s;
    }

    bool operator==(const Algebra& o) const {
        return m_ == o.m_ && n_ == o.n_ && theta0_ == o.theta0_ &&
               order_ == o.order_;
    }

  private:
    int m_;
    int n_;
    int theta0_;
    BasisOrder order_;
    std::vector<int> grading_;
};

}  // namespace spinchain
