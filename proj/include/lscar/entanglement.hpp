// entanglement.hpp: Schmidt entropies of doubled-space eigenvectors

#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "lscar/spectral.hpp"

namespace lscar {

enum class Partition {
    Intersite, // L copy vs R copy
    Intrasite  // first half of L and of R vs the remaining halves
};

inline const char* to_string(Partition p) { return p == Partition::Intersite ? "intersite" : "intrasite"; }

struct EntropyRecord {
    cplx eigenvalue;
    double intersite = 0.0;
    double intrasite = 0.0;
    bool is_scar = false;
};

/// Singular values of a column-major complex matrix (values only).
inline Eigen::VectorXd singular_values(Eigen::MatrixXcd m) {
    const lapack_int rows = static_cast<lapack_int>(m.rows());
    const lapack_int cols = static_cast<lapack_int>(m.cols());
    Eigen::VectorXd s(std::min(rows, cols));
    const lapack_int info = LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'N', rows, cols, m.data(), rows, s.data(), nullptr, 1,
                                           nullptr, 1);
    if (info != 0) throw SpectralError("zgesdd failed with info " + std::to_string(info));
    return s;
}

/// Reshape a doubled-space vector (qubit layout |i>_L |j>_R, i,j in [0, D)) into the
/// coefficient matrix of the requested bipartition.
inline Eigen::MatrixXcd schmidt_matrix(const StateVector& v, int n_qubits, Partition part) {
    const long d = 1L << n_qubits;
    if (v.size() != d * d) throw std::invalid_argument("schmidt_matrix: vector length does not match 4^n");
    if (part == Partition::Intersite) {
        Eigen::MatrixXcd k(d, d);
        for (long i = 0; i < d; ++i)
            for (long j = 0; j < d; ++j) k(i, j) = v(i * d + j);
        return k;
    }
    const int h = n_qubits / 2;
    const long da = 1L << h, db = 1L << (n_qubits - h);
    Eigen::MatrixXcd k(da * da, db * db);
    for (long i = 0; i < d; ++i)
        for (long j = 0; j < d; ++j) {
            const long ia = i / db, ib = i % db, ja = j / db, jb = j % db;
            k(ia * da + ja, ib * db + jb) = v(i * d + j);
        }
    return k;
}

/// Von Neumann entropy (natural log) across the bipartition. Rejects non-normalized input.
inline double schmidt_entropy(const StateVector& v, int n_qubits, Partition part, double norm_tol = 1e-8) {
    const double norm = v.norm();
    if (std::abs(norm - 1.0) > norm_tol)
        throw std::invalid_argument("schmidt_entropy: state must have unit norm (got " + std::to_string(norm) + ")");
    const Eigen::VectorXd s = singular_values(schmidt_matrix(v, n_qubits, part));
    double entropy = 0.0;
    for (int k = 0; k < s.size(); ++k) {
        const double p = s(k) * s(k);
        if (p > 0.0) entropy -= p * std::log(p);
    }
    return entropy;
}

/// Mean entropy of a Haar-random pure state on C^D (x) C^D.
inline double page_value(long D) {
    double h = 0.0;
    for (long j = D * D; j > D; --j) h += 1.0 / static_cast<double>(j);
    return h - (D - 1.0) / (2.0 * D);
}

/// Entropies of every eigenvector. Fermionic vectors are taken in the pseudo-fermion
/// layout, so standard-scheme systems are rotated first.
inline std::vector<EntropyRecord> entanglement(const EigenSystem& es, const Liouvillian& L,
                                               const std::vector<char>& scar_flags = {}) {
    const int nq = L.geom.qubits();
    const bool rotate = L.scheme == VectorizationScheme::StandardMajorana;
    const SuperOperator U = rotate ? scheme_unitary(L.geom) : SuperOperator();
    std::vector<EntropyRecord> out(es.size());
    for (Eigen::Index k = 0; k < es.size(); ++k) {
        StateVector v = es.vectors.col(k);
        if (rotate) v = U * v;
        v.normalize();
        auto& r = out[k];
        r.eigenvalue = es.values(k);
        r.intersite = schmidt_entropy(v, nq, Partition::Intersite);
        r.intrasite = schmidt_entropy(v, nq, Partition::Intrasite);
        r.is_scar = !scar_flags.empty() && scar_flags[k];
    }
    return out;
}

} // namespace lscar
