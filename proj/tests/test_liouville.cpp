#include <gtest/gtest.h>

#include <random>

#include <lscar/liouville.hpp>

using namespace lscar;

namespace {

Operator random_matrix(int d, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    Operator m(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) m(i, j) = cplx(g(rng), g(rng));
    return m;
}

double max_abs(const SuperOperator& m) {
    double best = 0;
    for (int r = 0; r < m.outerSize(); ++r)
        for (SuperOperator::InnerIterator it(m, r); it; ++it) best = std::max(best, std::abs(it.value()));
    return best;
}

struct FermionCase {
    int N;
    VectorizationScheme scheme;
};

class FermionOracle : public ::testing::TestWithParam<FermionCase> {};

} // namespace

TEST(Vectorization, RowStackingIdentity) {
    // vec(A rho B) = (A (x) B^T) vec(rho), with a naive Kronecker product as oracle.
    std::mt19937_64 rng(3);
    const int d = 4;
    const Operator A = random_matrix(d, rng), B = random_matrix(d, rng), rho = random_matrix(d, rng);
    Operator kron(d * d, d * d);
    for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k) kron.block(i * d, k * d, d, d) = A(i, k) * B.transpose();
    EXPECT_LT((flatten_rows(A * rho * B) - kron * flatten_rows(rho)).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT(lscar::max_abs(unflatten_rows(flatten_rows(rho), d) - rho), 0.0 + 1e-300);
}

TEST_P(FermionOracle, MatrixActionMatchesDirectLindblad) {
    const auto [N, scheme] = GetParam();
    const auto g = Geometry::majorana(N);
    const auto K = sample_couplings({N, 4, 99, static_cast<std::uint64_t>(N)});
    const Operator H = build_majorana_syk(K, g);
    const auto jumps = JumpSet::majoranas(g, 0.1);
    for (const Operator& ham : {H, build_complex_syk(H, g)}) {
        const auto L = vectorize_majorana(ham, g, jumps, scheme);
        std::mt19937_64 rng(17);
        for (int trial = 0; trial < 10; ++trial) {
            const Operator rho = random_matrix(g.dim(), rng);
            const StateVector lhs = L.L * vectorize_operator(rho, scheme, g);
            const StateVector rhs = vectorize_operator(apply_lindblad_direct(ham, jumps, rho), scheme, g);
            EXPECT_LT((lhs - rhs).cwiseAbs().maxCoeff(), 1e-12);
        }
    }
}

TEST_P(FermionOracle, HermitianPartsAndSteadyState) {
    const auto [N, scheme] = GetParam();
    const auto g = Geometry::majorana(N);
    const Operator H = build_majorana_syk(sample_couplings({N, 4, 5, 0}), g);
    const auto L = vectorize_majorana(H, g, JumpSet::majoranas(g, 0.1), scheme);
    EXPECT_LT(max_abs(SuperOperator(L.H0 - SuperOperator(L.H0.adjoint()))), 1e-13);
    EXPECT_LT(max_abs(SuperOperator(L.HI - SuperOperator(L.HI.adjoint()))), 1e-13);
    const StateVector tfd = tfd_state(L);
    EXPECT_NEAR(tfd.norm(), 1.0, 1e-14);
    EXPECT_LT((L.L * tfd).cwiseAbs().maxCoeff(), 1e-13);
}

INSTANTIATE_TEST_SUITE_P(Schemes, FermionOracle,
                         ::testing::Values(FermionCase{6, VectorizationScheme::StandardMajorana},
                                           FermionCase{6, VectorizationScheme::PseudoFermion},
                                           FermionCase{8, VectorizationScheme::StandardMajorana},
                                           FermionCase{8, VectorizationScheme::PseudoFermion}));

TEST(StandardScheme, CouplingRouteMatchesConjugationRoute) {
    for (int q : {2, 4, 6}) {
        const auto g = Geometry::majorana(8);
        const auto K = sample_couplings({8, q, 41, 0});
        const Operator H = build_majorana_syk(K, g);
        const auto jumps = JumpSet::majoranas(g, 0.2);
        const auto a = vectorize_majorana(H, g, jumps, VectorizationScheme::StandardMajorana, &K);
        const auto b = vectorize_majorana(H, g, jumps, VectorizationScheme::StandardMajorana);
        EXPECT_LT(max_abs(SuperOperator(a.L - b.L)), 1e-13) << "q=" << q;
    }
}

TEST(StandardScheme, DissipatorIsParityOfLinkedPairs) {
    // H_I = i mu sum chi^L chi^R - N mu / 2 with {chi^L_k, chi^R_l} = 0 in this scheme.
    const auto g = Geometry::majorana(6);
    const auto L = vectorize_majorana(Operator::Zero(8, 8), g, JumpSet::majoranas(g, 0.3),
                                      VectorizationScheme::StandardMajorana);
    Eigen::SelfAdjointEigenSolver<Operator> es{Operator(Operator(L.HI))};
    EXPECT_NEAR(es.eigenvalues().maxCoeff(), 0.0, 1e-13);
    EXPECT_NEAR(es.eigenvalues().minCoeff(), -6 * 0.3, 1e-13);
}

TEST(StandardScheme, RequiresOneJumpPerMajorana) {
    const auto g = Geometry::majorana(6);
    JumpSet js = JumpSet::majoranas(g, 0.1);
    js.operators.pop_back();
    EXPECT_THROW(vectorize_majorana(Operator::Zero(8, 8), g, js, VectorizationScheme::StandardMajorana),
                 std::invalid_argument);
}

TEST(SchemeUnitary, RelatesTheTwoVectorizations) {
    const auto g = Geometry::majorana(6);
    const Operator H = build_majorana_syk(sample_couplings({6, 4, 8, 0}), g);
    const auto jumps = JumpSet::majoranas(g, 0.1);
    const auto std_ = vectorize_majorana(H, g, jumps, VectorizationScheme::StandardMajorana);
    const auto pf = vectorize_majorana(H, g, jumps, VectorizationScheme::PseudoFermion);
    const SuperOperator U = scheme_unitary(g);
    EXPECT_LT(max_abs(SuperOperator(SuperOperator(U * SuperOperator(U.adjoint())) - SuperOperator(Operator::Identity(64, 64).sparseView()))), 1e-14);
    EXPECT_LT(max_abs(SuperOperator(U * std_.L * SuperOperator(U.adjoint()) - pf.L)), 1e-13);
}

TEST(SpinScheme, MatrixActionMatchesDirectLindblad) {
    const auto g = Geometry::spin(4);
    const Operator H = build_xxz({4, 1.0, 1.1, 0.5, 1, 0}, g);
    const auto jumps = JumpSet::pauli_x(g, 0.1);
    const auto L = vectorize_spin(H, g, jumps);
    std::mt19937_64 rng(5);
    for (int t = 0; t < 10; ++t) {
        const Operator rho = random_matrix(g.dim(), rng);
        const StateVector diff = L.L * flatten_rows(rho) - flatten_rows(apply_lindblad_direct(H, jumps, rho));
        EXPECT_LT(diff.cwiseAbs().maxCoeff(), 1e-12);
    }
    // H_I = mu sum X (x) X - N mu
    SuperOperator ref = -4 * 0.1 * SuperOperator(Operator::Identity(256, 256).sparseView());
    for (int i = 1; i <= 4; ++i) {
        const Operator x = build_pauli(i, Axis::X, g);
        ref += 0.1 * SuperOperator(lift_left(x) * lift_right_conj(x));
    }
    EXPECT_LT(max_abs(SuperOperator(ref - L.HI)), 1e-14);
}

TEST(Vectorize, RejectsMismatchedInputs) {
    const auto g = Geometry::majorana(6);
    EXPECT_THROW(vectorize_majorana(Operator::Zero(4, 4), g, JumpSet::majoranas(g, 0.1),
                                    VectorizationScheme::PseudoFermion),
                 std::invalid_argument);
    EXPECT_THROW(JumpSet::majoranas(g, -0.1), std::invalid_argument);
    EXPECT_THROW(vectorize_spin(Operator::Zero(8, 8), g, JumpSet::majoranas(g, 0.1)), std::invalid_argument);
}
