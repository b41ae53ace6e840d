#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include <lscar/models.hpp>

using namespace lscar;

TEST(Couplings, CountAndOrdering) {
    const auto K = sample_couplings({12, 4, 7, 0});
    EXPECT_EQ(K.size(), 495u);
    EXPECT_EQ(K.terms.front().first, MajoranaString::from_indices({1, 2, 3, 4}));
    EXPECT_EQ(K.terms.back().first, MajoranaString::from_indices({9, 10, 11, 12}));
}

TEST(Couplings, VarianceMatchesFormula) {
    SykParams p{12, 4, 2024, 0};
    EXPECT_NEAR(p.coupling_variance(), 8.0 * 6.0 / std::pow(12.0, 3) / 4.0, 1e-15);
    double sum = 0, sum2 = 0;
    int count = 0;
    for (std::uint64_t r = 0; r < 200; ++r) {
        p.stream = r;
        for (const auto& [s, k] : sample_couplings(p).terms) {
            sum += k;
            sum2 += k * k;
            ++count;
        }
    }
    const double mean = sum / count;
    const double var = sum2 / count - mean * mean;
    EXPECT_NEAR(var / p.coupling_variance(), 1.0, 0.05);
    EXPECT_NEAR(mean, 0.0, 0.01);
}

TEST(Couplings, DeterministicPerStream) {
    const auto a = sample_couplings({8, 4, 5, 3});
    const auto b = sample_couplings({8, 4, 5, 3});
    const auto c = sample_couplings({8, 4, 5, 4});
    EXPECT_EQ(a.terms, b.terms);
    EXPECT_NE(a.terms, c.terms);
}

TEST(Couplings, InvalidParamsThrow) {
    EXPECT_THROW(sample_couplings({11, 4, 0, 0}), std::invalid_argument);
    EXPECT_THROW(sample_couplings({12, 3, 0, 0}), std::invalid_argument);
}

TEST(MajoranaSyk, HermitianParityEvenAndMatchesExplicitProducts) {
    const auto g = Geometry::majorana(8);
    const auto K = sample_couplings({8, 4, 11, 0});
    const Operator H = build_majorana_syk(K, g);
    EXPECT_LT(max_abs(H - H.adjoint()), 1e-13);
    EXPECT_LT(max_abs(commutator(H, build_parity(g))), 1e-13);

    // Oracle: -i^{q/2} sum K psi psi psi psi with q = 4 gives +sum K psi psi psi psi.
    const auto psi = build_majoranas(g);
    Operator ref = Operator::Zero(g.dim(), g.dim());
    for (const auto& [s, k] : K.terms) {
        const auto idx = s.indices();
        ref += k * psi[idx[0] - 1] * psi[idx[1] - 1] * psi[idx[2] - 1] * psi[idx[3] - 1];
    }
    EXPECT_LT(max_abs(H - ref), 1e-13);
}

TEST(MajoranaSyk, SingleCouplingSpectrum) {
    const auto g = Geometry::majorana(4);
    CouplingTensor K{4, 4, {{MajoranaString::from_indices({1, 2, 3, 4}), 1.0}}};
    Eigen::SelfAdjointEigenSolver<Operator> es(build_majorana_syk(K, g));
    for (int i = 0; i < es.eigenvalues().size(); ++i) EXPECT_NEAR(std::abs(es.eigenvalues()(i)), 0.25, 1e-14);
}

TEST(ComplexSyk, ProjectorRankAndOutOfRange) {
    const auto g = Geometry::majorana(12);
    EXPECT_NEAR(charge_projector(3, g).trace().real(), 20.0, 1e-14);
    EXPECT_THROW(charge_projector(7, g), std::out_of_range);
    EXPECT_THROW(charge_projector(-1, g), std::out_of_range);
}

TEST(ComplexSyk, ProjectorMatchesFourierOracle) {
    // P_n = (1/(M+1)) sum_k exp(2 pi i k (N_op - n)/(M+1)), with N_op diagonal.
    const auto g = Geometry::majorana(8);
    const int M = g.qubits();
    const Operator Nop = number_operator(g);
    for (int n = 0; n <= M; ++n) {
        Operator ref = Operator::Zero(g.dim(), g.dim());
        for (int k = 0; k <= M; ++k) {
            const double theta = 2.0 * std::numbers::pi * k / (M + 1);
            for (int b = 0; b < g.dim(); ++b)
                ref(b, b) += std::exp(I * theta * (Nop(b, b).real() - n)) / static_cast<double>(M + 1);
        }
        EXPECT_LT(max_abs(charge_projector(n, g) - ref), 1e-13);
    }
}

TEST(ComplexSyk, ConservesChargeAndIsHermitian) {
    const auto g = Geometry::majorana(12);
    const Operator H = build_majorana_syk(sample_couplings({12, 4, 1, 0}), g);
    const Operator Hc = build_complex_syk(H, g);
    EXPECT_LT(max_abs(Hc - Hc.adjoint()), 1e-13);
    EXPECT_LT(max_abs(commutator(Hc, number_operator(g))), 1e-12);
    EXPECT_GT(max_abs(commutator(H, number_operator(g))), 1e-3);
}

TEST(Xxz, HermitianRealAndMagnetizationConserving) {
    const auto g = Geometry::spin(6);
    const Operator H = build_xxz({6, 1.0, 1.1, 0.5, 3, 0}, g);
    EXPECT_LT(max_abs(H - H.adjoint()), 1e-13);
    EXPECT_LT(H.imag().cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_LT(max_abs(commutator(H, total_magnetization(g))), 1e-12);
}

TEST(Xxz, TwoSiteOracle) {
    // Periodic N=2 counts the bond twice: H = -2J(XX + YY + Delta ZZ) - h1 Z1 - h2 Z2.
    const auto g = Geometry::spin(2);
    const Operator H = build_xxz(1.0, 1.1, {0.3, -0.2}, g);
    const Operator ref = -2.0 * (build_pauli(1, Axis::X, g) * build_pauli(2, Axis::X, g) +
                                 build_pauli(1, Axis::Y, g) * build_pauli(2, Axis::Y, g) +
                                 1.1 * build_pauli(1, Axis::Z, g) * build_pauli(2, Axis::Z, g)) -
                         0.3 * build_pauli(1, Axis::Z, g) + 0.2 * build_pauli(2, Axis::Z, g);
    EXPECT_LT(max_abs(H - ref), 1e-14);
}

TEST(Xxz, FieldsWithinRange) {
    XxzParams p{6, 1.0, 1.1, 0.5, 9, 0};
    for (std::uint64_t r = 0; r < 50; ++r) {
        p.stream = r;
        for (double h : sample_fields(p)) {
            EXPECT_LE(std::abs(h), 0.5);
        }
    }
}
