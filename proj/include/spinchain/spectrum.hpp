#pragma once
// Exact-diagonalization oracle: dense spectra of transfer matrices at
// sampled spectral parameters and joint eigenvalue curves across samples
// (the transfer matrices commute, so one eigenbasis serves all samples).

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "chain.hpp"

namespace spinchain {

struct SpectralSample {
    std::complex<double> lambda;
    Mat<std::complex<double>> matrix;
    std::vector<std::complex<double>> eigenvalues;  // canonically sorted
};

inline Eigen::MatrixXcd to_eigen(const Mat<std::complex<double>>& m) {
    Eigen::MatrixXcd r(m.size(), m.size());
    for (int i = 0; i < m.size(); ++i)
        for (int j = 0; j < m.size(); ++j) r(i, j) = m(i, j);
    return r;
}

// Stable canonical order: lexicographic on rounded real part, then rounded
// imaginary part.
inline void canonical_sort(std::vector<std::complex<double>>& v) {
    auto key = [](std::complex<double> z) {
        const double s = 1e9;
        return std::make_pair(std::round(z.real() * s), std::round(z.imag() * s));
    };
    std::sort(v.begin(), v.end(), [&](auto a, auto b) { return key(a) < key(b); });
}

inline std::vector<std::complex<double>> eigenvalues_of(
    const Eigen::MatrixXcd& m) {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m, false);
    std::vector<std::complex<double>> out;
    if (es.info() == Eigen::Success) {
        for (int i = 0; i < m.rows(); ++i) out.push_back(es.eigenvalues()(i));
    } else {
        // Schur fallback for defective/troublesome matrices.
        Eigen::ComplexSchur<Eigen::MatrixXcd> schur(m, false);
        for (int i = 0; i < m.rows(); ++i) out.push_back(schur.matrixT()(i, i));
    }
    return out;
}

inline std::vector<SpectralSample> exact_spectrum(
    const ChainSpec& chain, const std::vector<std::complex<double>>& lambdas) {
    std::vector<SpectralSample> out;
    for (std::complex<double> lam : lambdas) {
        SpectralSample s;
        s.lambda = lam;
        s.matrix = transfer(chain, lam);
        s.eigenvalues = eigenvalues_of(to_eigen(s.matrix));
        canonical_sort(s.eigenvalues);
        out.push_back(std::move(s));
    }
    return out;
}

// Joint eigenvalue curves: curves[j][s] is the eigenvalue of sample s on
// the j-th joint eigenvector.  The commuting family is diagonalized through
// a generic linear combination of the samples; the returned residual is the
// largest off-diagonal magnitude left over, which measures how well the
// samples actually commute.
struct SpectralCurves {
    std::vector<std::vector<std::complex<double>>> curves;
    double off_diagonal_residual = 0.0;
};

inline SpectralCurves spectral_curves(const std::vector<SpectralSample>& samples) {
    SpectralCurves out;
    if (samples.empty()) return out;
    const int n = samples[0].matrix.size();
    Eigen::MatrixXcd comb = Eigen::MatrixXcd::Zero(n, n);
    const double weights[] = {1.0, 0.6180339887, 0.2718281828, 0.1411421356};
    for (std::size_t s = 0; s < samples.size() && s < 4; ++s)
        comb += weights[s] * to_eigen(samples[s].matrix);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comb, true);
    Eigen::MatrixXcd w;
    if (es.info() == Eigen::Success) {
        w = es.eigenvectors();
    } else {
        Eigen::ComplexSchur<Eigen::MatrixXcd> schur(comb, true);
        w = schur.matrixU();
    }
    Eigen::MatrixXcd winv = w.inverse();
    out.curves.assign(n, std::vector<std::complex<double>>(samples.size()));
    for (std::size_t s = 0; s < samples.size(); ++s) {
        Eigen::MatrixXcd diag = winv * to_eigen(samples[s].matrix) * w;
        for (int j = 0; j < n; ++j) {
            out.curves[j][s] = diag(j, j);
            for (int k = 0; k < n; ++k)
                if (k != j)
                    out.off_diagonal_residual =
                        std::max(out.off_diagonal_residual, std::abs(diag(j, k)));
        }
    }
    return out;
}

}  // namespace spinchain
