#include <gtest/gtest.h>

#include <algorithm>

#include <lscar/observables.hpp>
#include <lscar/spectral.hpp>

using namespace lscar;

namespace {

// Plain complex zgeev on the full dense matrix, sorted by (Re, Im).
std::vector<cplx> reference_spectrum(const Liouvillian& L) {
    const Eigen::VectorXcd w = eigenvalues_dense(L.dense());
    std::vector<cplx> out(w.data(), w.data() + w.size());
    std::sort(out.begin(), out.end(), [](cplx a, cplx b) { return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag(); });
    return out;
}

// Multiset distance: each reference eigenvalue greedily matched to the nearest unused one.
double multiset_distance(std::vector<cplx> a, const Eigen::VectorXcd& b) {
    double worst = 0;
    std::vector<char> used(b.size(), 0);
    for (cplx x : a) {
        double best = 1e300;
        int arg = -1;
        for (int j = 0; j < b.size(); ++j)
            if (!used[j] && std::abs(b(j) - x) < best) {
                best = std::abs(b(j) - x);
                arg = j;
            }
        used[arg] = 1;
        worst = std::max(worst, best);
    }
    return worst;
}

void check_system(const Liouvillian& L, const EigenSystem& es) {
    ASSERT_EQ(es.size(), L.dim());
    EXPECT_LT(multiset_distance(reference_spectrum(L), es.values), 1e-9);
    for (int k = 0; k < es.size(); ++k) {
        EXPECT_NEAR(es.vectors.col(k).norm(), 1.0, 1e-12);
        if (k > 0) {
            const bool ordered = es.values(k - 1).real() < es.values(k).real() ||
                                 (es.values(k - 1).real() == es.values(k).real() &&
                                  es.values(k - 1).imag() <= es.values(k).imag());
            EXPECT_TRUE(ordered);
        }
    }
    EXPECT_LT(es.residual, 1e-9);
}

} // namespace

TEST(Eig, MajoranaSykPseudoFermionAllPaths) {
    const auto g = Geometry::majorana(6);
    const auto L = vectorize_majorana(build_majorana_syk(sample_couplings({6, 4, 3, 0}), g), g,
                                      JumpSet::majoranas(g, 0.1), VectorizationScheme::PseudoFermion);
    for (bool sectors : {false, true})
        for (bool conj : {false, true}) {
            EigOptions opt;
            opt.use_sectors = sectors;
            opt.use_conjugation = conj;
            check_system(L, eig(L, opt));
        }
}

TEST(Eig, ComplexSykUsesPartnerSectors) {
    const auto g = Geometry::majorana(8);
    const Operator H = build_majorana_syk(sample_couplings({8, 4, 12, 0}), g);
    const auto L = vectorize_majorana(build_complex_syk(H, g), g, JumpSet::majoranas(g, 0.1),
                                      VectorizationScheme::PseudoFermion);
    const auto es = eig(L);
    check_system(L, es);
    std::vector<int> s = es.sector;
    std::sort(s.begin(), s.end());
    EXPECT_EQ(std::unique(s.begin(), s.end()) - s.begin(), 9); // n_L - n_R in [-4, 4]
}

TEST(Eig, MergedConjugatePairsMixDegenerateSectors) {
    const auto g = Geometry::majorana(8);
    const Operator H = build_majorana_syk(sample_couplings({8, 4, 12, 0}), g);
    const auto L = vectorize_majorana(build_complex_syk(H, g), g, JumpSet::majoranas(g, 0.1),
                                      VectorizationScheme::PseudoFermion);
    EigOptions opt;
    opt.merge_conjugate_pairs = true;
    const auto merged = eig(L, opt);
    check_system(L, merged);

    const auto ops = build_size(L);
    auto nonvanishing = [&](const EigenSystem& es) {
        int n = 0;
        for (const auto& r : evaluate(es, ops)) n += std::abs(r.split_mean) > 1e-8;
        return n;
    };
    // sector-pure vectors carry no even-odd imbalance
    EXPECT_EQ(nonvanishing(eig(L)), 0);
    EXPECT_GT(nonvanishing(merged), 0);
}

TEST(Eig, StandardSchemeMatchesPseudoFermionSpectrum) {
    const auto g = Geometry::majorana(6);
    const Operator H = build_majorana_syk(sample_couplings({6, 4, 21, 0}), g);
    const auto jumps = JumpSet::majoranas(g, 0.1);
    const auto a = eig(vectorize_majorana(H, g, jumps, VectorizationScheme::StandardMajorana));
    const auto b = eig(vectorize_majorana(H, g, jumps, VectorizationScheme::PseudoFermion));
    std::vector<cplx> va(a.values.data(), a.values.data() + a.size());
    EXPECT_LT(multiset_distance(va, b.values), 1e-9);
}

TEST(Eig, XxzChiralPathAgreesWithPlainSolver) {
    const auto g = Geometry::spin(4);
    const auto L = vectorize_spin(build_xxz({4, 1.0, 1.1, 0.5, 7, 0}, g), g, JumpSet::pauli_x(g, 0.1));
    const auto fast = eig(L);
    check_system(L, fast);
    EigOptions plain;
    plain.use_chiral = false;
    plain.use_conjugation = false;
    const auto slow = eig(L, plain);
    std::vector<cplx> vs(slow.values.data(), slow.values.data() + slow.size());
    EXPECT_LT(multiset_distance(vs, fast.values), 1e-9);
}

TEST(Eig, ExpectationGivesRealAndImaginaryParts) {
    const auto g = Geometry::spin(3);
    const auto L = vectorize_spin(build_xxz({3, 1.0, 1.1, 0.5, 2, 0}, g), g, JumpSet::pauli_x(g, 0.1));
    const auto es = eig(L);
    for (int k = 0; k < es.size(); ++k) {
        const StateVector v = es.vectors.col(k);
        EXPECT_NEAR(expectation(L.HI, v).real(), es.values(k).real(), 1e-10);
        EXPECT_NEAR(expectation(L.H0, v).real(), -es.values(k).imag(), 1e-10);
    }
}

TEST(Eig, NonFiniteInputThrows) {
    const auto g = Geometry::spin(2);
    auto L = vectorize_spin(build_xxz(1.0, 1.1, {0.1, 0.2}, g), g, JumpSet::pauli_x(g, 0.1));
    L.L.coeffRef(0, 0) = cplx(std::nan(""), 0.0);
    EXPECT_THROW(eig(L), SpectralError);
}

namespace {

Liouvillian wrap(const Eigen::MatrixXcd& m) {
    Liouvillian L;
    L.L = m.sparseView();
    return L;
}

} // namespace

TEST(Eig, DiagonalMatrixExact) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(5, 5);
    m.diagonal() << cplx(-1, 2), 0.0, cplx(-3, -1), -0.5, cplx(-1, -2);
    const auto es = eig(wrap(m));
    const cplx expected[] = {cplx(-3, -1), cplx(-1, -2), cplx(-1, 2), -0.5, 0.0};
    for (int k = 0; k < 5; ++k) EXPECT_EQ(es.values(k), expected[k]);
}

TEST(Eig, NonNormalTriangularBlock) {
    Eigen::MatrixXcd m(2, 2);
    m << 0.0, 1.0, 0.0, -1.0;
    const auto es = eig(wrap(m));
    EXPECT_NEAR(std::abs(es.values(0) - cplx(-1.0)), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(es.values(1)), 0.0, 1e-14);
    EXPECT_GT(std::abs(es.vectors.col(0).dot(es.vectors.col(1))), 0.5); // not orthogonal
}

TEST(Eig, DimensionLimit) {
    EigOptions opt;
    opt.max_dim = 4;
    EXPECT_THROW(eig(wrap(Eigen::MatrixXcd::Identity(9, 9)), opt), SpectralError);
}
