#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>

#include <spinchain/bethe.hpp>
#include <spinchain/brute_force.hpp>

// Desk-scale acceptance suite: every guarantee the toolkit advertises,
// checked end to end against the exact backend, the diagonalization oracle,
// and the brute-force boundary enumeration.

using namespace spinchain;
using GR = GaussianRational;
using C = std::complex<double>;

namespace {

GR grat(long a, long b) {
    Rational r(a, b);
    r.canonicalize();
    return GR(r);
}

Mat<GR> random_int_matrix(int d, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> pick(-3, 3);
    Mat<GR> m(d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) m(i, j) = GR(pick(rng));
    return m;
}

Mat<GR> random_even_invertible(const Algebra& alg, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> pick(-3, 3);
    const int d = alg.dim();
    for (;;) {
        Mat<GR> m(d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                if (alg.g(i) == alg.g(j)) m(i, j) = GR(pick(rng));
        if (try_inverse(m)) return m;
    }
}

ChainSpec sp_trivial(const Algebra& alg, int sites) {
    ChainSpec cs{alg, sites, ChainMode::OpenSP};
    cs.sp_minus_linear =
        std::make_pair(Mat<GR>::identity(alg.dim()), Mat<GR>(alg.dim()));
    return cs;
}

ChainSpec sp_blocks(const Algebra& alg, int sites, std::array<int, 4> blocks,
                    GR xi) {
    ChainSpec cs{alg, sites, ChainMode::OpenSP};
    cs.sp_minus = SpBoundary{xi, blocks, {}, {}};
    return cs;
}

ChainSpec snp_diag(const Algebra& alg, int sites, std::vector<GR> k,
                   int epsilon = 1) {
    ChainSpec cs{alg, sites, ChainMode::OpenSNP};
    cs.snp_minus = SnpBoundary{epsilon, std::move(k), {}};
    return cs;
}

// Worst commutator norm over `pairs` random spectral-parameter pairs.
double worst_commutator(const ChainSpec& cs, int pairs, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double worst = 0;
    for (int k = 0; k < pairs; ++k) {
        C l1(u(rng), u(rng)), l2(u(rng), u(rng));
        worst = std::max(worst, commutator_norm(cs, l1, l2));
    }
    return worst;
}

// Relative pseudo-vacuum deviation ||t(lam)|w> - Lambda0(lam)|w>|| / ||t|w>||
// maximized over random rational spectral parameters.
double vacuum_deviation(const ChainSpec& cs, int samples, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> num(1, 9), den(1, 9), sign(0, 1);
    double worst = 0;
    for (int k = 0; k < samples; ++k) {
        const double p = num(rng) * (sign(rng) ? 1 : -1);
        const C lam(p / den(rng), 0.0);
        Mat<C> t = transfer(cs, lam);
        std::vector<C> w = pseudo_vacuum<C>(cs);
        std::vector<C> tw = t.apply(w);
        const C pred = lambda0(cs, lam);
        double norm2 = 0, dev2 = 0;
        for (std::size_t i = 0; i < tw.size(); ++i) {
            norm2 += std::norm(tw[i]);
            const C want = (i == 0) ? pred : C(0, 0);
            dev2 += std::norm(tw[i] - want);
        }
        worst = std::max(worst, std::sqrt(dev2 / norm2));
    }
    return worst;
}

ExactPoly crossing_shift(const Algebra& alg) {
    // -lambda - i rho
    return ExactPoly(GR(0) - GR::i() * GR(alg.rho())) -
           ExactPoly::x();
}

}  // namespace

TEST_CASE("acceptance 1: YBE residual identically zero across signatures") {
    for (const Algebra& alg :
         {Algebra(2, 0), Algebra(3, 0), Algebra(4, 0), Algebra(1, 1),
          Algebra(2, 1), Algebra(2, 2)}) {
        CAPTURE(alg.name());
        CHECK(ybe_residual(var_lambda1(), var_lambda2(), alg).is_zero());
    }
}

TEST_CASE("acceptance 2: unitarity R12(l) R21(-l) = -(l^2+1) I exactly") {
    for (const Algebra& alg :
         {Algebra(2, 0), Algebra(3, 0), Algebra(4, 0), Algebra(1, 1),
          Algebra(2, 1), Algebra(2, 2)}) {
        CAPTURE(alg.name());
        CHECK(unitarity_residual(ExactPoly::x(), alg).is_zero());
    }
}

TEST_CASE("acceptance 3: the two partial twisted transposes of R agree") {
    // The conjugate R-matrix is insensitive to which tensor factor carries
    // the twisted transpose whenever the grading pattern is palindromic —
    // in particular for all pure sl(N) and for sl(2|2) in the symmetric
    // grading.  theta0 = -1 needs even dimension.
    std::vector<Algebra> legal = {
        Algebra(2, 0), Algebra(3, 0), Algebra(4, 0),
        Algebra(2, 0, -1), Algebra(4, 0, -1),
        Algebra(2, 2, -1, BasisOrder::Symmetric),
        Algebra(2, 2, 1, BasisOrder::Symmetric)};
    for (const Algebra& alg : legal) {
        CAPTURE(alg.name());
        CAPTURE(alg.theta0());
        Mat<ExactPoly> r = r_matrix(crossing_shift(alg), alg);
        CHECK(twisted_transpose1(r, alg) == twisted_transpose2(r, alg));
    }
    // Negative control: the distinguished sl(2|1) grading (0,0,1) is not
    // palindromic and the two transposes genuinely differ.
    Algebra a21(2, 1);
    Mat<ExactPoly> r = r_matrix(crossing_shift(a21), a21);
    CHECK_FALSE(twisted_transpose1(r, a21) == twisted_transpose2(r, a21));
}

TEST_CASE("acceptance 4: 100 random classified K solve the SP reflection "
          "equation exactly") {
    std::mt19937_64 rng(41);
    std::uniform_int_distribution<int> xi_num(-5, 5), xi_den(1, 4),
        scale(1, 5);
    int checked = 0;
    for (const Algebra& alg : {Algebra(2, 0), Algebra(3, 0), Algebra(2, 1)}) {
        CAPTURE(alg.name());
        const int m = alg.bosonic(), n = alg.fermionic();
        for (int trial = 0; trial < 30; ++trial) {
            std::uniform_int_distribution<int> mm(0, m), nn(0, n);
            const int m1 = mm(rng), n1 = nn(rng);
            SpBoundary spec{grat(xi_num(rng), xi_den(rng)),
                            std::array<int, 4>{m1, m - m1, n - n1, n1},
                            {},
                            {}};
            if (trial % 2 == 1) spec.conjugator = random_even_invertible(alg, rng);
            CHECK(sp_re_residual(build_sp_k(spec, ExactPoly::x(), alg), alg)
                      .is_zero());
            ++checked;
        }
    }
    // Nilpotent families (rank-one E with E^2 = 0), bare and conjugated.
    for (const Algebra& alg : {Algebra(2, 0), Algebra(3, 0)}) {
        CAPTURE(alg.name());
        for (int trial = 0; trial < 5; ++trial) {
            Mat<GR> e(alg.dim());
            e(0, alg.dim() - 1) = grat(scale(rng), 1);
            SpBoundary spec{grat(xi_num(rng), xi_den(rng)), {}, {}, e};
            if (trial % 2 == 1) spec.conjugator = random_even_invertible(alg, rng);
            CHECK(sp_re_residual(build_sp_k(spec, ExactPoly::x(), alg), alg)
                      .is_zero());
            ++checked;
        }
    }
    CHECK(checked == 100);
}

TEST_CASE("acceptance 5: brute-force boundary enumeration matches the "
          "classification on sl(2) and sl(3)") {
    for (const Algebra& alg : {Algebra(2, 0), Algebra(3, 0)}) {
        CAPTURE(alg.name());
        auto families = brute_force_sp_solutions(alg);
        CHECK_FALSE(families.empty());
        int invertible = 0;
        for (const SpFamily& f : families) {
            CHECK(f.resolved);
            if (f.sample_a.size() == 0) continue;
            CHECK(f.verified);
            if (!f.invertible) continue;
            ++invertible;
            CAPTURE(f.classification.note);
            const bool ok = f.classification.cls == SpClass::Diagonalizable ||
                            f.classification.cls == SpClass::Nilpotent;
            CHECK(ok);
            CHECK(f.classification.cls != SpClass::Unclassified);
        }
        CHECK(invertible > 0);
    }
}

TEST_CASE("acceptance 6: 100 twisted-(anti)symmetric K solve the SNP "
          "reflection equation") {
    std::mt19937_64 rng(43);
    std::uniform_int_distribution<int> pick(1, 5);
    int checked = 0;
    // Pure sl(N): any twisted-(anti)symmetric constant matrix works.
    for (const Algebra& alg :
         {Algebra(2, 0), Algebra(2, 0, -1), Algebra(4, 0), Algebra(4, 0, -1)}) {
        CAPTURE(alg.name());
        for (int sgn : {1, -1})
            for (int trial = 0; trial < 9; ++trial) {
                Mat<GR> x = random_int_matrix(alg.dim(), rng);
                Mat<GR> k = x + twisted_transpose(x, alg).scaled(GR(sgn));
                CHECK(snp_re_residual(k, alg).is_zero());
                ++checked;
            }
    }
    // sl(2|2): the solution set degenerates to the singular symmetric /
    // antisymmetric families; random members of each.
    Algebra s22(2, 2, -1, BasisOrder::Symmetric);
    for (int trial = 0; trial < 10; ++trial) {  // diag(0, k, k, 0)
        GR k = grat(pick(rng), pick(rng)) + GR::i() * grat(pick(rng), 3);
        Mat<GR> kd(4);
        kd(1, 1) = kd(2, 2) = k;
        CHECK(snp_re_residual(kd, s22).is_zero());
        ++checked;
    }
    for (int trial = 0; trial < 9; ++trial) {  // traceless middle block
        Mat<GR> kt(4);
        kt(1, 1) = grat(pick(rng), 1);
        kt(2, 2) = GR(0) - kt(1, 1);
        kt(1, 2) = grat(pick(rng), 2);
        kt(2, 1) = grat(-pick(rng), 2);
        CHECK(twisted_transpose(kt, s22) == kt.scaled(GR(-1)));
        CHECK(snp_re_residual(kt, s22).is_zero());
        ++checked;
    }
    for (int trial = 0; trial < 9; ++trial) {  // corner antidiagonal
        Mat<GR> kc(4);
        kc(0, 3) = grat(pick(rng), 1);
        kc(3, 0) = grat(-pick(rng), 1);
        CHECK(snp_re_residual(kc, s22).is_zero());
        ++checked;
    }
    CHECK(checked == 100);
    // Negative controls: no twisted symmetry, no solution.
    Mat<GR> bad2(2);
    bad2(0, 0) = GR(1);
    bad2(1, 1) = GR(2);
    CHECK_FALSE(snp_re_residual(bad2, Algebra(2, 0)).is_zero());
    Mat<GR> x = random_int_matrix(4, rng);
    Mat<GR> ksym = x + twisted_transpose(x, s22);
    CHECK_FALSE(snp_re_residual(ksym, s22).is_zero());
}

TEST_CASE("acceptance 7: transfer matrices commute across the configuration "
          "matrix") {
    const double tol = 1e-10;
    unsigned seed = 1000;
    // Closed chains.
    for (const Algebra& alg : {Algebra(2, 0), Algebra(3, 0)})
        for (int L = 1; L <= 3; ++L) {
            ChainSpec cs{alg, L, ChainMode::Closed};
            CAPTURE(alg.name());
            CAPTURE(L);
            CHECK(worst_commutator(cs, 10, seed++) < tol);
        }
    // Open soliton-preserving chains: trivial and two-parameter diagonal K.
    for (const Algebra& alg : {Algebra(2, 0), Algebra(2, 1)})
        for (int L = 1; L <= 3; ++L) {
            CAPTURE(alg.name());
            CAPTURE(L);
            CHECK(worst_commutator(sp_trivial(alg, L), 10, seed++) < tol);
            std::array<int, 4> blocks =
                alg.fermionic() ? std::array<int, 4>{1, 1, 1, 0}
                                : std::array<int, 4>{1, 1, 0, 0};
            CHECK(worst_commutator(sp_blocks(alg, L, blocks, grat(3, 2)), 10,
                                   seed++) < tol);
        }
    // Open soliton non-preserving chains.
    std::mt19937_64 rng(77);
    for (int sites : {2, 4}) {
        Algebra a2(2, 0);
        CAPTURE(sites);
        ChainSpec id{a2, sites, ChainMode::OpenSNP};
        id.snp_minus = SnpBoundary{1, {}, Mat<GR>::identity(2)};
        CHECK(worst_commutator(id, 10, seed++) < tol);
        Mat<GR> x = random_int_matrix(2, rng);
        ChainSpec sym{a2, sites, ChainMode::OpenSNP};
        sym.snp_minus = SnpBoundary{1, {}, x + twisted_transpose(x, a2)};
        CHECK(worst_commutator(sym, 10, seed++) < tol);

        Algebra s22(2, 2, -1, BasisOrder::Symmetric);
        CHECK(worst_commutator(
                  snp_diag(s22, sites, {GR(0), GR(1), GR(1), GR(0)}), 10,
                  seed++) < tol);
        // A generic member of the antisymmetric middle-block family.
        Mat<GR> kt(4);
        kt(1, 1) = grat(2, 1);
        kt(1, 2) = grat(1, 3);
        kt(2, 1) = grat(-3, 1);
        kt(2, 2) = grat(-2, 1);
        ChainSpec mid{s22, sites, ChainMode::OpenSNP};
        mid.snp_minus = SnpBoundary{-1, {}, kt};
        CHECK(worst_commutator(mid, 10, seed++) < tol);
    }
    // Negative control: a two-parameter diagonal K outside the class.
    ChainSpec broken{Algebra(3, 0), 2, ChainMode::OpenSP};
    Mat<GR> a(3), b(3);
    a(0, 0) = GR::i() * grat(1, 2);
    a(1, 1) = GR::i() * grat(1, 2);
    a(2, 2) = GR::i() * grat(3, 2);
    b(0, 0) = GR(-1);
    b(1, 1) = GR(1);
    b(2, 2) = GR(1);
    broken.sp_minus_linear = std::make_pair(a, b);
    CHECK(worst_commutator(broken, 10, 999) > 1e-3);
}

TEST_CASE("acceptance 8: pseudo-vacuum eigenvalue formula at 20 random "
          "rational points per open configuration") {
    const double tol = 1e-12;
    unsigned seed = 2000;
    for (const Algebra& alg : {Algebra(2, 0), Algebra(2, 1)})
        for (int L = 1; L <= 3; ++L) {
            CAPTURE(alg.name());
            CAPTURE(L);
            CHECK(vacuum_deviation(sp_trivial(alg, L), 20, seed++) < tol);
            std::array<int, 4> blocks =
                alg.fermionic() ? std::array<int, 4>{1, 1, 1, 0}
                                : std::array<int, 4>{1, 1, 0, 0};
            CHECK(vacuum_deviation(sp_blocks(alg, L, blocks, grat(3, 2)), 20,
                                   seed++) < tol);
        }
    // SNP configurations use the diagonal representatives of their boundary
    // families (the closed-form eigenvalue needs a diagonal Ktilde).
    Algebra a2(2, 0);
    Algebra s22(2, 2, -1, BasisOrder::Symmetric);
    const GR k = grat(7, 10) - GR::i() * grat(3, 10);
    for (int sites : {2, 4}) {
        CAPTURE(sites);
        CHECK(vacuum_deviation(snp_diag(a2, sites, {GR(1), GR(1)}), 20,
                               seed++) < tol);
        CHECK(vacuum_deviation(snp_diag(a2, sites, {k, k}), 20, seed++) < tol);
        CHECK(vacuum_deviation(
                  snp_diag(s22, sites, {GR(0), GR(1), GR(1), GR(0)}), 20,
                  seed++) < tol);
        CHECK(vacuum_deviation(snp_diag(s22, sites, {GR(0), k, k, GR(0)}), 20,
                               seed++) < tol);
    }
}

namespace {

// Shared by acceptance 9 and 12: solve all magnon sectors of the L = 2
// sl(2) chain and return the accepted rootsets.
std::vector<BetheRootSet> solve_sl2_sectors(const ChainSpec& cs) {
    std::vector<BetheRootSet> all;
    for (int count : {0, 1, 2})
        for (const auto& rs : solve_bethe(cs, {count})) all.push_back(rs);
    return all;
}

const std::vector<C>& lam_samples() {
    static const std::vector<C> s = {
        C(0.31, 0.17),  C(-0.43, 0.29), C(0.73, -0.11), C(0.12, 0.55),
        C(-0.61, -0.37), C(0.91, 0.05), C(0.27, -0.63), C(-0.19, 0.41)};
    return s;
}

}  // namespace

TEST_CASE("acceptance 9: Bethe completeness for the L = 2 sl(2) open chain") {
    // Trivial boundary, then the two-parameter diagonal boundary: every
    // oracle eigenvalue curve is reproduced by a solved rootset.
    ChainSpec trivial = sp_trivial(Algebra(2, 0), 2);
    auto rep = match_spectrum(trivial, solve_sl2_sectors(trivial),
                              lam_samples());
    CHECK(rep.curves == 4);
    CHECK(rep.matched == 4);
    CHECK(rep.all_matched());

    ChainSpec diag = sp_blocks(Algebra(2, 0), 2, {1, 1, 0, 0}, grat(3, 2));
    auto repd = match_spectrum(diag, solve_sl2_sectors(diag), lam_samples());
    CHECK(repd.curves == 4);
    CHECK(repd.matched == 4);
    CHECK(repd.all_matched());
}

TEST_CASE("acceptance 10: sl(2|1) pseudo-vacuum and one-root sector match "
          "the oracle") {
    ChainSpec cs = sp_trivial(Algebra(2, 1), 2);
    std::vector<BetheRootSet> all;
    BetheRootSet vac;
    vac.roots.assign(2, {});
    all.push_back(vac);
    auto one = solve_bethe(cs, {1, 0});
    REQUIRE_FALSE(one.empty());
    for (const auto& rs : one) all.push_back(rs);
    auto rep = match_spectrum(cs, all, lam_samples());
    // The empty rootset reproduces one oracle curve (the pseudo-vacuum) and
    // the one-root sector at least one more.
    bool vac_matched = false, one_matched = false;
    for (int j = 0; j < rep.curves; ++j) {
        if (rep.best_deviation[j] >= rep.tol) continue;
        if (rep.best_rootset[j] == 0) vac_matched = true;
        if (rep.best_rootset[j] > 0) one_matched = true;
    }
    CHECK(vac_matched);
    CHECK(one_matched);
    CHECK(rep.matched >= 2);
}

TEST_CASE("acceptance 11: SNP vacuum eigenvalue with identity and scaled "
          "palindromic boundaries") {
    const double tol = 1e-12;
    Algebra a2(2, 0);
    Algebra s22(2, 2, -1, BasisOrder::Symmetric);
    const GR k = grat(3, 5) + GR::i() * grat(1, 5);
    CHECK(vacuum_deviation(snp_diag(a2, 2, {GR(1), GR(1)}), 20, 3001) < tol);
    CHECK(vacuum_deviation(snp_diag(a2, 2, {k, k}), 20, 3002) < tol);
    CHECK(vacuum_deviation(snp_diag(s22, 2, {GR(0), GR(1), GR(1), GR(0)}), 20,
                           3003) < tol);
    CHECK(vacuum_deviation(snp_diag(s22, 2, {GR(0), k, k, GR(0)}), 20, 3004) <
          tol);
}

TEST_CASE("acceptance 12: analyticity identities and residue cancellation") {
    std::mt19937_64 rng(55);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double worst_sp = 0, worst_snp = 0;
    Algebra a3(3, 0);
    Algebra s22(2, 2, -1, BasisOrder::Symmetric);
    for (int t = 0; t < 50; ++t) {
        BetheRootSet rs;
        rs.roots = {{C(u(rng), u(rng)), C(u(rng), u(rng))},
                    {C(u(rng), u(rng))}};
        worst_sp = std::max(worst_sp, analyticity_check(BetheCase::SP, a3, rs));
        worst_snp =
            std::max(worst_snp, analyticity_check(BetheCase::SNP, s22, rs));
    }
    CHECK(worst_sp < 1e-12);
    CHECK(worst_snp < 1e-12);

    // Every solver-accepted rootset of the completeness run yields a dressed
    // eigenvalue whose residues at the dressing poles cancel.
    for (int bnd = 0; bnd < 2; ++bnd) {
        ChainSpec cs = bnd == 0
                           ? sp_trivial(Algebra(2, 0), 2)
                           : sp_blocks(Algebra(2, 0), 2, {1, 1, 0, 0},
                                       grat(3, 2));
        for (const auto& rs : solve_sl2_sectors(cs)) {
            if (rs.total() == 0) continue;
            for (C p : dressing_poles(BetheCase::SP, cs.alg, rs)) {
                const C res = residue_at(
                    [&](C z) { return dressed_eigenvalue(cs, rs, z); }, p);
                CHECK(std::abs(res) < 1e-8);
            }
        }
    }
}

TEST_CASE("acceptance 13: identical seeds give byte-identical reports "
          "modulo timestamp") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() /
                   ("spinchain_acc_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    fs::path cfg = dir / "run.json";
    std::ofstream(cfg) << R"({
      "chain": {"m": 2, "n": 0, "sites": 2, "mode": "open_sp"},
      "boundary": {"family": "sp_blocks", "xi": "3/2", "blocks": [1, 1, 0, 0]},
      "lambda_samples": {"count": 4, "seed": 17},
      "solver": {"counts": [[0], [1]], "trials": 60, "seed": 20260825}
    })";
    auto run_once = [&](const fs::path& out) {
        const std::string cmd = std::string(SPINCHAIN_BIN) +
                                " full-report --config " + cfg.string() +
                                " --out " + out.string() + " > /dev/null";
        const int status = std::system(cmd.c_str());
        REQUIRE(status != -1);
        REQUIRE(WIFEXITED(status));
        CHECK(WEXITSTATUS(status) == 0);
    };
    auto strip_volatile = [](const fs::path& p) {
        std::ifstream in(p);
        std::ostringstream out;
        std::string line;
        while (std::getline(in, line))
            if (line.find("\"generated_at\"") == std::string::npos &&
                line.find("\"timing_ms\"") == std::string::npos)
                out << line << '\n';
        return out.str();
    };
    fs::path o1 = dir / "r1.json", o2 = dir / "r2.json";
    run_once(o1);
    run_once(o2);
    const std::string a = strip_volatile(o1), b = strip_volatile(o2);
    CHECK_FALSE(a.empty());
    CHECK(a == b);
}
