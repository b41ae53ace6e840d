// observables.hpp: operator size superoperators and per-eigenstate size moments

#pragma once

#include <vector>

#include "lscar/spectral.hpp"

namespace lscar {

struct SizeSuperoperators {
    bool fermionic = true;
    SuperOperator total;
    // fermionic: even / odd Majorana sizes
    SuperOperator even, odd;
    // spin: per-axis sizes
    SuperOperator X, Y, Z;

    /// Operator whose moments are reported as the split size: S_e - S_o or S_X + S_Z.
    SuperOperator split() const { return fermionic ? SuperOperator(even - odd) : SuperOperator(X + Z); }
};

namespace detail {

/// i chi^L_k chi^R_k in the given fermionic scheme (psi_k (x) psi_k^* for pseudo-fermions).
inline SuperOperator linked_pair(const Geometry& geom, int k, VectorizationScheme scheme) {
    const int d = geom.dim();
    const Monomial psi = majorana_monomial(geom, k);
    Triplets t;
    if (scheme == VectorizationScheme::PseudoFermion) {
        add_kron(t, psi, psi.conjugate());
    } else {
        Monomial parity = Monomial::identity(d);
        const Operator P = build_parity(geom);
        for (int b = 0; b < d; ++b) parity.coeff[b] = P(b, b);
        add_kron(t, psi * parity, psi, I);
    }
    return assemble(d * d, t);
}

inline SuperOperator scaled_identity(int n, double s) {
    Triplets t;
    add_identity(t, n, s);
    return assemble(n, t);
}

/// sum_i Sigma^L_i Sigma^R_i with Sigma^R = 1 (x) Sigma^*.
inline SuperOperator pauli_pairs(const Geometry& geom, Axis axis) {
    Triplets t;
    for (int i = 1; i <= geom.count(); ++i) {
        const Monomial s = pauli_monomial(geom.qubits(), i, axis);
        add_kron(t, s, s.conjugate());
    }
    return assemble(geom.dim() * geom.dim(), t);
}

} // namespace detail

/// S = N/2 - sum_i i chi^L_i chi^R_i, with the even/odd split over Majorana indices.
inline SizeSuperoperators build_size_majorana(const Liouvillian& L) {
    require_majorana(L.geom, "build_size_majorana");
    const int n = L.geom.count();
    const int dd = L.dim();
    SizeSuperoperators s;
    s.fermionic = true;
    s.odd = detail::scaled_identity(dd, n / 4.0);
    s.even = detail::scaled_identity(dd, n / 4.0);
    for (int k = 1; k <= n; ++k) {
        SuperOperator& part = (k % 2 == 1) ? s.odd : s.even;
        part -= detail::linked_pair(L.geom, k, L.scheme);
    }
    s.total = s.even + s.odd;
    return s;
}

/// S = 3N/4 - 1/4 sum Sigma^L Sigma^R and the per-axis sizes
/// S_A = N/4 - 1/4 sum (+-) with the A-axis term entering with a minus sign.
inline SizeSuperoperators build_size_spin(const Liouvillian& L) {
    require_spin(L.geom, "build_size_spin");
    const int n = L.geom.count();
    const int dd = L.dim();
    const SuperOperator xx = detail::pauli_pairs(L.geom, Axis::X);
    const SuperOperator yy = detail::pauli_pairs(L.geom, Axis::Y);
    const SuperOperator zz = detail::pauli_pairs(L.geom, Axis::Z);
    const SuperOperator base = detail::scaled_identity(dd, n / 4.0);
    SizeSuperoperators s;
    s.fermionic = false;
    s.total = detail::scaled_identity(dd, 3.0 * n / 4.0) - 0.25 * (xx + yy + zz);
    s.X = base - 0.25 * (-xx + yy + zz);
    s.Y = base - 0.25 * (xx - yy + zz);
    s.Z = base - 0.25 * (xx + yy - zz);
    return s;
}

inline SizeSuperoperators build_size(const Liouvillian& L) {
    return L.geom.is_majorana() ? build_size_majorana(L) : build_size_spin(L);
}

struct ObservableRecord {
    cplx eigenvalue;
    double size_mean = 0.0;
    double size_var = 0.0;
    double split_mean = 0.0;
    double split_second = 0.0;
    bool is_scar = false;
};

/// Moments on the unit-norm right eigenvectors; second moments use ||A v||^2 (A Hermitian).
inline std::vector<ObservableRecord> evaluate(const EigenSystem& es, const SizeSuperoperators& ops,
                                              const std::vector<char>& scar_flags = {}) {
    const SuperOperator split = ops.split();
    std::vector<ObservableRecord> out(es.size());
    const Eigen::Index chunk = 256;
    for (Eigen::Index c0 = 0; c0 < es.size(); c0 += chunk) {
        const Eigen::Index nc = std::min<Eigen::Index>(chunk, es.size() - c0);
        const auto V = es.vectors.middleCols(c0, nc);
        const Eigen::MatrixXcd SV = ops.total * V;
        const Eigen::MatrixXcd DV = split * V;
        for (Eigen::Index j = 0; j < nc; ++j) {
            auto& r = out[c0 + j];
            const double norm2 = V.col(j).squaredNorm();
            r.eigenvalue = es.values(c0 + j);
            r.size_mean = V.col(j).dot(SV.col(j)).real() / norm2;
            r.size_var = SV.col(j).squaredNorm() / norm2 - r.size_mean * r.size_mean;
            r.split_mean = V.col(j).dot(DV.col(j)).real() / norm2;
            r.split_second = DV.col(j).squaredNorm() / norm2;
            r.is_scar = !scar_flags.empty() && scar_flags[c0 + j];
        }
    }
    return out;
}

/// Moments of a single (not necessarily normalized) state, e.g. an analytic scar vector.
inline ObservableRecord measure(const StateVector& v, cplx eigenvalue, const SizeSuperoperators& ops) {
    EigenSystem one;
    one.values = Eigen::VectorXcd::Constant(1, eigenvalue);
    one.vectors = v;
    return evaluate(one, ops).front();
}

} // namespace lscar
