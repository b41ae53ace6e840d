#include <gtest/gtest.h>

#include <numeric>

#include <lscar/scars.hpp>

using namespace lscar;

namespace {

// Sum over ordered p-tuples of distinct modes of prod (n_k - 1/2), by explicit enumeration.
Operator tuple_sum_brute_force(int p, const Geometry& g) {
    const int M = g.qubits();
    const int d = g.dim();
    std::vector<Operator> shifted;
    for (int k = 1; k <= M; ++k) shifted.push_back(mode_number(g, k) - 0.5 * Operator::Identity(d, d));
    Operator out = Operator::Zero(d, d);
    std::vector<int> tuple;
    auto recurse = [&](auto&& self) -> void {
        if (static_cast<int>(tuple.size()) == p) {
            Operator prod = Operator::Identity(d, d);
            for (int k : tuple) prod = prod * shifted[k];
            out += prod;
            return;
        }
        for (int k = 0; k < M; ++k) {
            if (std::find(tuple.begin(), tuple.end(), k) != tuple.end()) continue;
            tuple.push_back(k);
            self(self);
            tuple.pop_back();
        }
    };
    recurse(recurse);
    return out;
}

Liouvillian majorana_liouvillian(int n, std::uint64_t seed, bool complex_projected,
                                 VectorizationScheme scheme = VectorizationScheme::PseudoFermion) {
    const auto g = Geometry::majorana(n);
    Operator H = build_majorana_syk(sample_couplings({n, 4, seed, 0}), g);
    if (complex_projected) H = build_complex_syk(H, g);
    return vectorize_majorana(H, g, JumpSet::majoranas(g, 0.1), scheme);
}

} // namespace

TEST(TupleOperator, RecursionMatchesOrderedTupleSum) {
    const auto g = Geometry::majorana(8);
    for (int p = 0; p <= 4; ++p) EXPECT_LT(max_abs(tuple_operator(p, g) - tuple_sum_brute_force(p, g)), 1e-12) << p;
}

TEST(TupleOperator, LowOrderClosedForms) {
    const auto g = Geometry::majorana(6);
    const int M = 3;
    const Operator one = Operator::Identity(g.dim(), g.dim());
    const Operator x = number_operator(g) - 0.5 * M * one;
    EXPECT_LT(max_abs(tuple_operator(1, g) - x), 1e-14);
    EXPECT_LT(max_abs(tuple_operator(2, g) - (x * x - 0.25 * M * one)), 1e-13);
    EXPECT_LT(max_abs(tuple_operator(3, g) - (x * x * x - (0.75 * M - 0.5) * x)), 1e-13);
    EXPECT_THROW(tuple_operator(4, g), std::out_of_range);
    EXPECT_THROW(tuple_operator(-1, g), std::out_of_range);
}

TEST(ScarConditions, MajoranaOperatorEigenRelations) {
    const int n = 8, q = 4;
    const auto g = Geometry::majorana(n);
    const Operator H = build_majorana_syk(sample_couplings({n, q, 5, 0}), g);
    const Operator P = build_parity(g);
    const auto jumps = JumpSet::majoranas(g, 0.1);

    const auto cp = verify_scar_conditions(P, H, jumps);
    EXPECT_LT(cp.commutator, 1e-12);
    EXPECT_NEAR(cp.eta_prime, -n / 2.0, 1e-12);
    EXPECT_LT(cp.residual, 1e-12);

    const auto ch = verify_scar_conditions(H, H, jumps);
    EXPECT_NEAR(ch.eta_prime, n / 2.0 - q, 1e-12);
    EXPECT_LT(ch.residual, 1e-12);

    const auto chp = verify_scar_conditions(Operator(H * P), H, jumps);
    EXPECT_NEAR(chp.eta_prime, -(n / 2.0 - q), 1e-12);
    EXPECT_LT(chp.residual, 1e-12);

    const Operator Hc = build_complex_syk(H, g);
    for (int p = 0; p <= n / 2; ++p) {
        const auto c = verify_scar_conditions(tuple_operator(p, g), Hc, jumps);
        EXPECT_LT(c.commutator, 1e-12);
        EXPECT_NEAR(c.eta_prime, n / 2.0 - 2 * p, 1e-12);
        EXPECT_LT(c.residual, 1e-12);
    }
}

TEST(ScarConditions, SpinStringsUnderPauliXSandwich) {
    const auto g = Geometry::spin(5);
    const auto jumps = JumpSet::pauli_x(g, 0.1);
    const Operator H = build_xxz({5, 1.0, 1.1, 0.5, 3, 0}, g);
    for (int p = 0; p <= 5; ++p) {
        const auto c = verify_scar_conditions(spin_zstring_operator(p, g), H, jumps);
        EXPECT_NEAR(c.eta_prime, 5.0 - 2 * p, 1e-12);
        EXPECT_LT(c.residual, 1e-12);
        EXPECT_LT(c.commutator, 1e-12);
    }
    // e_2 of the z-values, by hand on two sites
    const auto g2 = Geometry::spin(2);
    EXPECT_LT(max_abs(spin_zstring_operator(2, g2) - build_pauli(1, Axis::Z, g2) * build_pauli(2, Axis::Z, g2)), 1e-15);
}

TEST(AnalyticScars, MajoranaStatesAreEigenvectors) {
    for (auto scheme : {VectorizationScheme::PseudoFermion, VectorizationScheme::StandardMajorana}) {
        const auto g = Geometry::majorana(8);
        const Operator H = build_majorana_syk(sample_couplings({8, 4, 9, 0}), g);
        const auto L = vectorize_majorana(H, g, JumpSet::majoranas(g, 0.1), scheme);
        const auto scars = analytic_majorana_scars(L, H, 4);
        ASSERT_EQ(scars.size(), 4u);
        const double expected[] = {0.0, -0.8, -0.4, -0.4};
        for (int k = 0; k < 4; ++k) {
            EXPECT_NEAR(scars[k].eigenvalue.real(), expected[k], 1e-15);
            EXPECT_LT(scars[k].residual_l, 1e-12);
            EXPECT_LT(scars[k].residual_h0, 1e-12);
        }
    }
}

TEST(AnalyticScars, U1AndSpinTowers) {
    const auto L = majorana_liouvillian(8, 4, true);
    for (const auto& s : analytic_u1_scars(L)) EXPECT_LT(s.residual_l, 1e-12) << s.p;

    const auto g = Geometry::spin(4);
    const auto Ls = vectorize_spin(build_xxz({4, 1.0, 1.1, 0.5, 2, 0}, g), g, JumpSet::pauli_x(g, 0.1));
    const auto spin = analytic_spin_scars(Ls);
    ASSERT_EQ(spin.size(), 5u);
    for (const auto& s : spin) {
        EXPECT_LT(s.residual_l, 1e-12) << s.p;
        EXPECT_NEAR(s.eta, -2.0 * s.p, 1e-12);
    }
}

TEST(Detection, MajoranaScarsFoundAndMatched) {
    // N = 10 avoids the accidental degeneracy of the N = 8 centre cluster.
    const auto g = Geometry::majorana(10);
    const Operator H = build_majorana_syk(sample_couplings({10, 4, 17, 0}), g);
    const auto L = vectorize_majorana(H, g, JumpSet::majoranas(g, 0.1), VectorizationScheme::PseudoFermion);
    auto es = eig(L);
    const auto report = detect_numerical_scars(es, L);
    const double targets[] = {0.0, -0.2, -0.4, -0.6, -0.8, -1.0};
    const int expected[] = {1, 0, 1, 1, 0, 1};
    for (int k = 0; k < 6; ++k) EXPECT_EQ(report.at(targets[k])->multiplicity, expected[k]) << targets[k];
    EXPECT_EQ(report.total(), 4);
    const auto match = match_subspaces(analytic_majorana_scars(L, H, 4), report);
    EXPECT_EQ(match.missing, 0);
    EXPECT_LT(match.worst, 1e-8);

    const auto flags = apply_scar_basis(es, report);
    EXPECT_EQ(std::accumulate(flags.begin(), flags.end(), 0), 4);
    for (int k = 0; k < es.size(); ++k) {
        EXPECT_NEAR(es.vectors.col(k).norm(), 1.0, 1e-10);
        EXPECT_LT((L.L * es.vectors.col(k) - es.values(k) * es.vectors.col(k)).norm(), 1e-7);
    }
}

TEST(Detection, ComplexSykTowerMatched) {
    const auto L = majorana_liouvillian(8, 23, true);
    const auto es = eig(L);
    const auto report = detect_numerical_scars(es, L);
    for (const auto& c : report.clusters) EXPECT_GE(c.multiplicity, 1) << c.target;
    const auto match = match_subspaces(analytic_u1_scars(L), report);
    EXPECT_EQ(match.missing, 0);
    EXPECT_LT(match.worst, 1e-8);
}

TEST(Detection, XxzStringTowerMatched) {
    const auto g = Geometry::spin(4);
    const auto L = vectorize_spin(build_xxz({4, 1.0, 1.1, 0.5, 13, 0}, g), g, JumpSet::pauli_x(g, 0.1));
    const auto es = eig(L);
    const auto report = detect_numerical_scars(es, L);
    ASSERT_EQ(report.clusters.size(), 5u);
    const auto match = match_subspaces(analytic_spin_scars(L), report);
    EXPECT_EQ(match.missing, 0);
    EXPECT_LT(match.worst, 1e-8);
}

TEST(Detection, NoCandidatesGivesEmptyClusters) {
    const auto L = majorana_liouvillian(6, 1, false);
    const auto es = eig(L);
    const auto report = detect_numerical_scars(es, L, {}, {0.123});
    ASSERT_EQ(report.clusters.size(), 1u);
    EXPECT_TRUE(report.clusters[0].members.empty());
    EXPECT_EQ(report.total(), 0);
}
