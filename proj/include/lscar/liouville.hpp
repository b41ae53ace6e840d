// liouville.hpp: vectorized Lindbladians L = -i H0 + HI and the direct Lindblad action
//
// Vectorization convention (shared by every helper in this project): an
// operator rho on a D-dimensional space maps to the D^2 vector with
// vec(rho)[i * D + j] = rho(i, j), i.e. the rows of rho are stacked one after
// another. Then vec(A rho B) = (A (x) B^T) vec(rho); the first tensor factor is
// the left (L) copy and the second one the right (R) copy.

#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "lscar/algebra.hpp"
#include "lscar/models.hpp"

namespace lscar {

enum class VectorizationScheme {
    StandardMajorana, // chi^L_k = psi_k (x) 1, chi^R_k = P (x) psi_k
    PseudoFermion,    // chi^L_k = psi_k (x) 1, chi^R_k = 1 (x) psi_k^*
    SpinTensor,       // A^L = A (x) 1,       A^R = 1 (x) A^*
};

inline const char* to_string(VectorizationScheme s) {
    switch (s) {
    case VectorizationScheme::StandardMajorana: return "standard";
    case VectorizationScheme::PseudoFermion: return "pseudo-fermion";
    case VectorizationScheme::SpinTensor: return "spin";
    }
    return "?";
}

struct JumpSet {
    std::vector<Operator> operators;
    double mu = 0.0;
    bool hermitian = true;
    double square_constant = 0.0; // L_a^2 = a * 1

    static JumpSet majoranas(const Geometry& geom, double mu) {
        if (mu < 0) throw std::invalid_argument("dissipation strength must be >= 0");
        return {build_majoranas(geom), mu, true, 0.5};
    }

    static JumpSet pauli_x(const Geometry& geom, double mu) {
        require_spin(geom, "JumpSet::pauli_x");
        if (mu < 0) throw std::invalid_argument("dissipation strength must be >= 0");
        JumpSet js{{}, mu, true, 1.0};
        for (int i = 1; i <= geom.count(); ++i) js.operators.push_back(build_pauli(i, Axis::X, geom));
        return js;
    }
};

namespace detail {

using Triplets = std::vector<Eigen::Triplet<cplx>>;

inline void add_kron(Triplets& out, const Operator& a, const Operator& b, cplx scale = 1.0) {
    const int d = static_cast<int>(b.rows());
    for (int i = 0; i < a.rows(); ++i)
        for (int k = 0; k < a.cols(); ++k) {
            const cplx aik = a(i, k);
            if (aik == 0.0) continue;
            for (int j = 0; j < b.rows(); ++j)
                for (int l = 0; l < b.cols(); ++l)
                    if (b(j, l) != 0.0) out.emplace_back(i * d + j, k * d + l, scale * aik * b(j, l));
        }
}

inline void add_kron(Triplets& out, const Monomial& a, const Monomial& b, cplx scale = 1.0) {
    const int d = b.dim();
    for (int k = 0; k < a.dim(); ++k)
        for (int l = 0; l < d; ++l) {
            const cplx v = scale * a.coeff[k] * b.coeff[l];
            if (v != 0.0)
                out.emplace_back(static_cast<int>(k ^ a.flip) * d + static_cast<int>(l ^ b.flip), k * d + l, v);
        }
}

inline void add_identity(Triplets& out, int n, cplx scale) {
    for (int i = 0; i < n; ++i) out.emplace_back(i, i, scale);
}

inline SuperOperator assemble(int n, const Triplets& t) {
    SuperOperator m(n, n);
    m.setFromTriplets(t.begin(), t.end());
    m.prune(cplx(0.0), 0.0);
    m.makeCompressed();
    return m;
}

} // namespace detail

/// A (x) 1 as a sparse operator on the doubled space.
inline SuperOperator lift_left(const Operator& a) {
    detail::Triplets t;
    detail::add_kron(t, a, Operator::Identity(a.rows(), a.cols()));
    return detail::assemble(static_cast<int>(a.rows() * a.rows()), t);
}

/// 1 (x) A^* (the right copy in the pseudo-fermion and spin schemes).
inline SuperOperator lift_right_conj(const Operator& a) {
    detail::Triplets t;
    detail::add_kron(t, Operator::Identity(a.rows(), a.cols()), Operator(a.conjugate()));
    return detail::assemble(static_cast<int>(a.rows() * a.rows()), t);
}

struct Liouvillian {
    SuperOperator H0; // H^L - H^R
    SuperOperator HI; // dissipative part
    SuperOperator L;  // -i H0 + HI
    VectorizationScheme scheme = VectorizationScheme::PseudoFermion;
    Geometry geom = Geometry::majorana(2);
    double mu = 0.0;

    int dim() const { return static_cast<int>(L.rows()); }

    Eigen::MatrixXcd dense() const { return Eigen::MatrixXcd(L); }
};

inline Liouvillian assemble_liouvillian(SuperOperator H0, SuperOperator HI, VectorizationScheme scheme,
                                        const Geometry& geom, double mu) {
    Liouvillian out{std::move(H0), std::move(HI), {}, scheme, geom, mu};
    out.L = SuperOperator(cplx(0.0, -1.0) * out.H0 + out.HI);
    out.L.prune(cplx(0.0), 0.0);
    out.L.makeCompressed();
    return out;
}

/// mu sum_a L_a (x) L_a^* - mu/2 sum_a (L_a^dag L_a (x) 1 + 1 (x) (L_a^dag L_a)^T)
inline SuperOperator dissipator_naive(const JumpSet& jumps, int d) {
    detail::Triplets t;
    const Operator id = Operator::Identity(d, d);
    for (const auto& op : jumps.operators) {
        detail::add_kron(t, op, Operator(op.conjugate()), jumps.mu);
        const Operator ldl = op.adjoint() * op;
        detail::add_kron(t, ldl, id, -0.5 * jumps.mu);
        detail::add_kron(t, id, Operator(ldl.transpose()), -0.5 * jumps.mu);
    }
    return detail::assemble(d * d, t);
}

/// Unitary U = e^{i pi P/4} (x) C relating the two fermionic vectorizations:
/// L_pseudo = U L_standard U^dag.
inline SuperOperator scheme_unitary(const Geometry& geom) {
    const int d = geom.dim();
    const Operator P = build_parity(geom);
    Monomial rot = Monomial::identity(d);
    for (int b = 0; b < d; ++b) rot.coeff[b] = (1.0 + I * P(b, b)) / std::sqrt(2.0);
    const Operator C = charge_conjugation(geom);
    Monomial c = Monomial::identity(d);
    for (int col = 0; col < d; ++col)
        for (int row = 0; row < d; ++row)
            if (C(row, col) != 0.0) {
                c.flip = static_cast<std::uint64_t>(row ^ col);
                c.coeff[col] = C(row, col);
            }
    detail::Triplets t;
    detail::add_kron(t, rot, c);
    return detail::assemble(d * d, t);
}

/// Vectorized Lindbladian of a fermionic Hamiltonian with jumps psi_i.
///
/// The standard scheme builds H^R literally from the couplings when they are
/// supplied (sum K chi^R...chi^R with the (-1)^{q/2} factor); otherwise, as for
/// the charge-projected Hamiltonian, it uses 1 (x) C^{-1} H^* C, which is the
/// same operator for any even Hamiltonian.
inline Liouvillian vectorize_majorana(const Operator& H, const Geometry& geom, const JumpSet& jumps,
                                      VectorizationScheme scheme, const CouplingTensor* couplings = nullptr) {
    require_majorana(geom, "vectorize_majorana");
    const int d = geom.dim();
    if (H.rows() != d || H.cols() != d) throw std::invalid_argument("Hamiltonian does not match geometry");
    if (scheme == VectorizationScheme::SpinTensor)
        throw std::invalid_argument("spin vectorization requested for a Majorana geometry");

    detail::Triplets h0;
    detail::add_kron(h0, H, Operator::Identity(d, d));

    if (scheme == VectorizationScheme::PseudoFermion) {
        detail::add_kron(h0, Operator::Identity(d, d), Operator(H.conjugate()), -1.0);
        return assemble_liouvillian(detail::assemble(d * d, h0), dissipator_naive(jumps, d), scheme, geom, jumps.mu);
    }

    if (static_cast<int>(jumps.operators.size()) != geom.count())
        throw std::invalid_argument("standard scheme expects one Majorana jump per site");
    const int n = geom.count();
    const Monomial parity = [&] {
        Monomial m = Monomial::identity(d);
        const Operator P = build_parity(geom);
        for (int b = 0; b < d; ++b) m.coeff[b] = P(b, b);
        return m;
    }();
    auto chi_right = [&](int k) {
        // P (x) psi_k as a doubled-space monomial
        const Monomial psi = majorana_monomial(geom, k);
        Monomial out{psi.flip, std::vector<cplx>(d * d)};
        for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b) out.coeff[a * d + b] = parity.coeff[a] * psi.coeff[b];
        return out;
    };

    if (couplings != nullptr) {
        static constexpr cplx powers[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
        const int q = couplings->q;
        const cplx prefactor = -powers[(q / 2) % 4] * ((q / 2) % 2 == 0 ? 1.0 : -1.0);
        for (const auto& [s, k] : couplings->terms) {
            if (k == 0.0) continue;
            Monomial prod = Monomial::identity(d * d);
            for (int idx : s.indices()) prod = prod * chi_right(idx);
            // flip of a product of chi^R only touches the right copy
            for (int col = 0; col < d * d; ++col) {
                const cplx v = -prefactor * k * prod.coeff[col];
                if (v != 0.0) h0.emplace_back(static_cast<int>(col ^ prod.flip), col, v);
            }
        }
    } else {
        const Operator C = charge_conjugation(geom);
        const Operator HR = C.adjoint() * H.conjugate() * C;
        detail::add_kron(h0, Operator::Identity(d, d), HR, -1.0);
    }

    detail::Triplets hi;
    detail::add_identity(hi, d * d, -0.5 * n * jumps.mu);
    for (int k = 1; k <= n; ++k) {
        const Monomial psi = majorana_monomial(geom, k);
        const Monomial right = chi_right(k);
        // chi^L_k chi^R_k = (psi_k P) (x) psi_k
        Monomial left_part = psi * parity;
        Monomial full{(left_part.flip * static_cast<std::uint64_t>(d)) ^ right.flip, std::vector<cplx>(d * d)};
        for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b)
                full.coeff[a * d + b] = left_part.coeff[a] * psi.coeff[b];
        for (int col = 0; col < d * d; ++col) {
            const cplx v = I * jumps.mu * full.coeff[col];
            if (v != 0.0) hi.emplace_back(static_cast<int>(col ^ full.flip), col, v);
        }
    }
    return assemble_liouvillian(detail::assemble(d * d, h0), detail::assemble(d * d, hi), scheme, geom, jumps.mu);
}

/// L = -i (H_S (x) 1 - 1 (x) H_S^*) + mu sum_i X^L_i X^R_i - N mu (for X jumps)
inline Liouvillian vectorize_spin(const Operator& H, const Geometry& geom, const JumpSet& jumps) {
    require_spin(geom, "vectorize_spin");
    const int d = geom.dim();
    if (H.rows() != d) throw std::invalid_argument("Hamiltonian does not match geometry");
    detail::Triplets h0;
    detail::add_kron(h0, H, Operator::Identity(d, d));
    detail::add_kron(h0, Operator::Identity(d, d), Operator(H.conjugate()), -1.0);
    return assemble_liouvillian(detail::assemble(d * d, h0), dissipator_naive(jumps, d),
                                VectorizationScheme::SpinTensor, geom, jumps.mu);
}

/// -i[H, rho] + mu sum_a (L_a rho L_a^dag - 1/2 {L_a^dag L_a, rho})
inline Operator apply_lindblad_direct(const Operator& H, const JumpSet& jumps, const Operator& rho) {
    if (rho.rows() != H.rows() || rho.cols() != H.cols())
        throw std::invalid_argument("density matrix and Hamiltonian dimensions differ");
    Operator out = -I * (H * rho - rho * H);
    for (const auto& op : jumps.operators) {
        if (op.rows() != rho.rows()) throw std::invalid_argument("jump operator dimension mismatch");
        const Operator ldl = op.adjoint() * op;
        out += jumps.mu * (op * rho * op.adjoint() - 0.5 * (ldl * rho + rho * ldl));
    }
    return out;
}

inline StateVector flatten_rows(const Operator& rho) {
    const int d = static_cast<int>(rho.rows());
    StateVector v(d * d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) v(i * d + j) = rho(i, j);
    return v;
}

inline Operator unflatten_rows(const StateVector& v, int d) {
    if (v.size() != static_cast<Eigen::Index>(d) * d) throw std::invalid_argument("vector length is not D^2");
    Operator rho(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) rho(i, j) = v(i * d + j);
    return rho;
}

/// Operator -> doubled-space state in the given scheme (rows stacked; rotated by U^dag
/// for the standard Majorana scheme).
inline StateVector vectorize_operator(const Operator& rho, VectorizationScheme scheme, const Geometry& geom) {
    StateVector v = flatten_rows(rho);
    if (scheme == VectorizationScheme::StandardMajorana) return scheme_unitary(geom).adjoint() * v;
    return v;
}

inline Operator unvectorize_operator(const StateVector& v, VectorizationScheme scheme, const Geometry& geom) {
    if (scheme == VectorizationScheme::StandardMajorana)
        return unflatten_rows(scheme_unitary(geom) * v, geom.dim());
    return unflatten_rows(v, geom.dim());
}

/// Infinite-temperature thermofield double |0>: the normalized vectorized identity.
inline StateVector tfd_state(const Geometry& geom, VectorizationScheme scheme) {
    const int d = geom.dim();
    return vectorize_operator(Operator::Identity(d, d), scheme, geom) / std::sqrt(static_cast<double>(d));
}

inline StateVector tfd_state(const Liouvillian& L) { return tfd_state(L.geom, L.scheme); }

} // namespace lscar
