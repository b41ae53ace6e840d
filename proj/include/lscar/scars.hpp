// scars.hpp: analytic Lindblad scars, operator-form checks and numerical scar detection

#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lscar/spectral.hpp"

namespace lscar {

enum class ScarKind { Tfd, Parity, HamL, HamLParity, U1Tuple, SpinZString, Other };

inline std::string to_string(ScarKind k, int p = -1) {
    switch (k) {
    case ScarKind::Tfd: return "tfd";
    case ScarKind::Parity: return "parity";
    case ScarKind::HamL: return "ham_left";
    case ScarKind::HamLParity: return "ham_left_parity";
    case ScarKind::U1Tuple: return "u1_tuple_" + std::to_string(p);
    case ScarKind::SpinZString: return "spin_zstring_" + std::to_string(p);
    case ScarKind::Other: return "other";
    }
    return "?";
}

struct ScarState {
    StateVector vector;
    cplx eigenvalue;
    ScarKind kind = ScarKind::Other;
    int p = -1; // tuple / string length for the U(1) towers
    double residual_h0 = 0.0; // ||H0 v||
    double residual_hi = 0.0; // ||(HI - Re lambda) v||
    double residual_l = 0.0;  // ||L v - lambda v||
    double eta = 0.0;         // L[O] = mu eta O
};

namespace detail {

inline double vector_inf_norm(const StateVector& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

inline ScarState make_scar(const Liouvillian& L, StateVector v, double lambda, ScarKind kind, int p = -1) {
    const double norm = v.norm();
    if (!(norm > 1e-300)) throw std::runtime_error("analytic scar vector vanishes; cannot normalize " + to_string(kind, p));
    v /= norm;
    ScarState s;
    s.eigenvalue = lambda;
    s.kind = kind;
    s.p = p;
    s.residual_h0 = (L.H0 * v).norm();
    s.residual_hi = (L.HI * v - lambda * v).norm();
    s.residual_l = (L.L * v - lambda * v).norm();
    s.eta = L.mu > 0 ? lambda / L.mu : 0.0;
    s.vector = std::move(v);
    return s;
}

} // namespace detail

/// |0>, P^L|0>, H^L|0>, H^L P^L|0> with eigenvalues 0, -N mu, -q mu, -(N-q) mu.
inline std::vector<ScarState> analytic_majorana_scars(const Liouvillian& L, const Operator& H, int q) {
    require_majorana(L.geom, "analytic_majorana_scars");
    const int n = L.geom.count();
    const double mu = L.mu;
    const StateVector tfd = tfd_state(L);
    const SuperOperator HL = lift_left(H);
    const SuperOperator PL = lift_left(build_parity(L.geom));
    const StateVector p0 = PL * tfd;
    return {detail::make_scar(L, tfd, 0.0, ScarKind::Tfd),
            detail::make_scar(L, p0, -n * mu, ScarKind::Parity),
            detail::make_scar(L, HL * tfd, -q * mu, ScarKind::HamL),
            detail::make_scar(L, HL * p0, -(n - q) * mu, ScarKind::HamLParity)};
}

/// Symmetrized p-tuple operator: the sum over ordered tuples of distinct modes of
/// prod (n_k - 1/2), built by the three-term recursion in the mode count M = N/2:
///   T_{p+1} = (N_op - M/2) T_p - (p/4)(M - p + 1) T_{p-1},  T_0 = 1, T_1 = N_op - M/2.
inline Operator tuple_operator(int p, const Geometry& geom) {
    require_majorana(geom, "tuple_operator");
    const int M = geom.qubits();
    if (p < 0 || p > M) throw std::out_of_range("tuple order " + std::to_string(p) + " outside [0, N/2]");
    const int d = geom.dim();
    const Operator shifted = number_operator(geom) - 0.5 * M * Operator::Identity(d, d);
    Operator prev = Operator::Identity(d, d);
    if (p == 0) return prev;
    Operator cur = shifted;
    for (int k = 1; k < p; ++k) {
        Operator next = shifted * cur - (k / 4.0) * (M - k + 1) * prev;
        prev = std::move(cur);
        cur = std::move(next);
    }
    return cur;
}

/// N_p^L |0> for p = 0..N/2, eigenvalue -2 p mu.
inline std::vector<ScarState> analytic_u1_scars(const Liouvillian& L) {
    require_majorana(L.geom, "analytic_u1_scars");
    const StateVector tfd = tfd_state(L);
    std::vector<ScarState> out;
    for (int p = 0; p <= L.geom.qubits(); ++p)
        out.push_back(detail::make_scar(L, lift_left(tuple_operator(p, L.geom)) * tfd, -2.0 * p * L.mu,
                                        ScarKind::U1Tuple, p));
    return out;
}

/// M_p = sum over all length-p Z strings (diagonal).
inline Operator spin_zstring_operator(int p, const Geometry& geom) {
    require_spin(geom, "spin_zstring_operator");
    const int n = geom.count();
    if (p < 0 || p > n) throw std::out_of_range("Z-string length outside [0, N]");
    const int d = geom.dim();
    Operator m = Operator::Zero(d, d);
    for (int b = 0; b < d; ++b) {
        // elementary symmetric polynomial e_p of the z-values of basis state b
        std::vector<double> e(p + 1, 0.0);
        e[0] = 1.0;
        for (int k = 1; k <= n; ++k) {
            const double z = (b & qubit_bit(geom.qubits(), k)) ? -1.0 : 1.0;
            for (int j = std::min(p, k); j >= 1; --j) e[j] += z * e[j - 1];
        }
        m(b, b) = e[p];
    }
    return m;
}

/// M_p^L |0> for p = 0..N, eigenvalue -2 p mu.
inline std::vector<ScarState> analytic_spin_scars(const Liouvillian& L) {
    require_spin(L.geom, "analytic_spin_scars");
    const StateVector tfd = tfd_state(L);
    std::vector<ScarState> out;
    for (int p = 0; p <= L.geom.count(); ++p)
        out.push_back(detail::make_scar(L, lift_left(spin_zstring_operator(p, L.geom)) * tfd, -2.0 * p * L.mu,
                                        ScarKind::SpinZString, p));
    return out;
}

struct ConditionCheck {
    double commutator = 0.0; // max |[H, O]|
    double eta_prime = 0.0;  // best fit of sum_a L_a O L_a = eta' O
    double residual = 0.0;   // max |sum_a L_a O L_a - eta' O|
};

inline ConditionCheck verify_scar_conditions(const Operator& O, const Operator& H, const JumpSet& jumps) {
    const double norm2 = O.squaredNorm();
    if (!(norm2 > 0)) throw std::invalid_argument("verify_scar_conditions: operator must be nonzero");
    Operator sandwich = Operator::Zero(O.rows(), O.cols());
    for (const auto& op : jumps.operators) sandwich += op * O * op;
    ConditionCheck c;
    c.commutator = max_abs(commutator(H, O));
    const cplx fit = (O.adjoint() * sandwich).trace() / norm2;
    c.eta_prime = fit.real();
    c.residual = max_abs(sandwich - fit * O);
    return c;
}

struct DetectionOptions {
    double tol_cluster = 1e-7; // relative to ||L||_inf
    double tol_sv = 1e-8;      // relative to max(sigma_max, ||HI - t||_inf)
    double max_gram_condition = 1e12;
};

struct ScarCluster {
    double target = 0.0;
    std::vector<int> members;              // eigenpair indices in the EigenSystem
    std::vector<double> singular_values;   // of (HI - t) V, descending
    int multiplicity = 0;
    Eigen::MatrixXcd basis;                // orthonormal scar basis, one column per scar
    double gram_condition = 1.0;
    bool ill_conditioned = false;
};

struct ScarDetectionReport {
    std::vector<ScarCluster> clusters;

    int total() const {
        int t = 0;
        for (const auto& c : clusters) t += c.multiplicity;
        return t;
    }

    const ScarCluster* at(double target, double tol = 1e-9) const {
        for (const auto& c : clusters)
            if (std::abs(c.target - target) < tol) return &c;
        return nullptr;
    }
};

/// Default targets -2 k mu, k = 0..N/2 (fermions) or 0..N (spins).
inline std::vector<double> default_scar_targets(const Liouvillian& L) {
    const int kmax = L.geom.is_majorana() ? L.geom.qubits() : L.geom.count();
    std::vector<double> t;
    for (int k = 0; k <= kmax; ++k) t.push_back(-2.0 * k * L.mu);
    return t;
}

inline ScarDetectionReport detect_numerical_scars(const EigenSystem& es, const Liouvillian& L,
                                                  const DetectionOptions& opt = {},
                                                  std::vector<double> targets = {}) {
    if (targets.empty()) targets = default_scar_targets(L);
    const double scale = std::max(1.0, detail::inf_norm(L.L));
    const double cluster_tol = opt.tol_cluster * scale;
    const double hi_norm = detail::inf_norm(L.HI);
    ScarDetectionReport report;
    for (double t : targets) {
        ScarCluster c;
        c.target = t;
        for (int k = 0; k < es.size(); ++k)
            if (std::abs(es.values(k) - t) < cluster_tol) c.members.push_back(k);
        const int m = static_cast<int>(c.members.size());
        if (m == 0) {
            report.clusters.push_back(std::move(c));
            continue;
        }
        Eigen::MatrixXcd V(es.vectors.rows(), m);
        for (int j = 0; j < m; ++j) V.col(j) = es.vectors.col(c.members[j]);
        const Eigen::MatrixXcd R = L.HI * V - t * V;

        Eigen::JacobiSVD<Eigen::MatrixXcd> gram_svd(V, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const auto& gs = gram_svd.singularValues();
        c.gram_condition = gs(gs.size() - 1) > 0 ? (gs(0) * gs(0)) / (gs(gs.size() - 1) * gs(gs.size() - 1))
                                                 : std::numeric_limits<double>::infinity();
        c.ill_conditioned = !(c.gram_condition <= opt.max_gram_condition);

        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(R, Eigen::ComputeThinV);
        const auto& s = svd.singularValues();
        c.singular_values.assign(s.data(), s.data() + s.size());
        const double threshold = opt.tol_sv * std::max(s(0), hi_norm + std::abs(t));
        std::vector<int> kernel;
        for (int j = 0; j < s.size(); ++j)
            if (s(j) < threshold) kernel.push_back(j);
        c.multiplicity = static_cast<int>(kernel.size());
        if (!kernel.empty()) {
            Eigen::MatrixXcd combos(m, kernel.size());
            for (std::size_t j = 0; j < kernel.size(); ++j) combos.col(j) = svd.matrixV().col(kernel[j]);
            const Eigen::MatrixXcd raw = V * combos;
            Eigen::HouseholderQR<Eigen::MatrixXcd> qr(raw);
            c.basis = qr.householderQ() * Eigen::MatrixXcd::Identity(raw.rows(), raw.cols());
        } else {
            c.basis.resize(es.vectors.rows(), 0);
        }
        report.clusters.push_back(std::move(c));
    }
    return report;
}

/// Rewrites each scar cluster of `es` as [scar basis, orthonormal complement within the
/// cluster span] and returns per-column scar flags.
inline std::vector<char> apply_scar_basis(EigenSystem& es, const ScarDetectionReport& report) {
    std::vector<char> flags(es.size(), 0);
    for (const auto& c : report.clusters) {
        const int m = static_cast<int>(c.members.size());
        if (c.multiplicity == 0 || m == 0) continue;
        Eigen::MatrixXcd V(es.vectors.rows(), m);
        for (int j = 0; j < m; ++j) V.col(j) = es.vectors.col(c.members[j]);
        Eigen::MatrixXcd cols(es.vectors.rows(), m);
        cols.leftCols(c.multiplicity) = c.basis;
        if (m > c.multiplicity) {
            // complement: orthonormalize V against the scar basis and keep the strongest directions
            Eigen::MatrixXcd rest = V - c.basis * (c.basis.adjoint() * V);
            Eigen::JacobiSVD<Eigen::MatrixXcd> svd(rest, Eigen::ComputeThinU);
            cols.rightCols(m - c.multiplicity) = svd.matrixU().leftCols(m - c.multiplicity);
        }
        for (int j = 0; j < m; ++j) {
            es.vectors.col(c.members[j]) = cols.col(j);
            es.values(c.members[j]) = j < c.multiplicity ? cplx(c.target, 0.0) : es.values(c.members[j]);
            flags[c.members[j]] = j < c.multiplicity ? 1 : 0;
        }
    }
    return flags;
}

struct SubspaceMatch {
    double worst = 0.0;
    std::vector<double> residuals; // per analytic state: ||v - Pi v||
    int missing = 0;               // analytic eigenvalues with no detected scar
};

inline SubspaceMatch match_subspaces(const std::vector<ScarState>& analytic, const ScarDetectionReport& detected,
                                     double tol = 1e-9) {
    SubspaceMatch out;
    for (const auto& s : analytic) {
        const ScarCluster* c = detected.at(s.eigenvalue.real(), tol);
        double r = 1.0;
        if (c == nullptr || c->multiplicity == 0) {
            ++out.missing;
        } else {
            const StateVector proj = c->basis * (c->basis.adjoint() * s.vector);
            r = (s.vector - proj).norm();
        }
        out.residuals.push_back(r);
        out.worst = std::max(out.worst, r);
    }
    return out;
}

} // namespace lscar
