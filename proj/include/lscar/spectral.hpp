// spectral.hpp: full eigendecomposition of vectorized Lindbladians
//
// The Liouvillian is split into the connected components of its sparsity
// graph (exact invariant blocks, no tolerance involved). Blocks are then
// diagonalized with LAPACK's dense nonsymmetric drivers, using two optional
// reductions when they verifiably apply:
//
//  * Hermitian conjugation J: vec(rho) -> vec(rho^dag) commutes with every
//    Lindbladian in the naive vectorization. A block mapped to itself by J is
//    real in the basis {(e_ij + e_ji)/sqrt2, i(e_ij - e_ji)/sqrt2, e_ii} and goes
//    through dgeev; a block mapped to a partner block is solved once, and the
//    partner gets (conj(lambda), J v).
//  * Chiral structure: if S = z(i) * swap (z = parity of the basis index) or
//    i S anticommutes with the shifted real block, the block is off-diagonal in
//    the S eigenbasis, [[0, B], [C, 0]], and its eigenpairs follow from those of
//    the half-size product B C.
//
// Every eigenpair is checked against the sparse operator; a block whose fast
// path misses the residual tolerance is redone with complex zgeev.

#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "lscar/liouville.hpp"

namespace lscar {

class SpectralError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct EigOptions {
    bool use_sectors = true;
    bool use_conjugation = true;
    bool use_chiral = true;
    // Solve each block together with its J partner. The merged block is
    // self-conjugate, so eigenvalues shared between the pair come back as
    // whatever mixture the dense solver produces instead of sector-pure vectors.
    bool merge_conjugate_pairs = false;
    double residual_tol = 1e-8; // relative to max(1, ||L||_inf)
    int max_dim = 4096;
};

struct EigenSystem {
    Eigen::VectorXcd values;
    Eigen::MatrixXcd vectors; // unit-norm right eigenvectors, one per column
    std::vector<int> sector;  // invariant block of each eigenpair
    double residual = 0.0;   // max ||L v - lambda v||

    int size() const { return static_cast<int>(values.size()); }
};

// ---------------------------------------------------------------- LAPACK ----

inline void lapack_zgeev(Eigen::MatrixXcd a, Eigen::VectorXcd& w, Eigen::MatrixXcd& v) {
    const lapack_int n = static_cast<lapack_int>(a.rows());
    w.resize(n);
    v.resize(n, n);
    if (n == 0) return;
    const lapack_int info =
        LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'V', n, a.data(), n, w.data(), nullptr, 1, v.data(), n);
    if (info != 0) throw SpectralError("zgeev failed to converge (info = " + std::to_string(info) + ")");
}

inline void lapack_dgeev(Eigen::MatrixXd a, Eigen::VectorXcd& w, Eigen::MatrixXcd& v) {
    const lapack_int n = static_cast<lapack_int>(a.rows());
    w.resize(n);
    v.resize(n, n);
    if (n == 0) return;
    Eigen::VectorXd wr(n), wi(n);
    Eigen::MatrixXd vr(n, n);
    const lapack_int info =
        LAPACKE_dgeev(LAPACK_COL_MAJOR, 'N', 'V', n, a.data(), n, wr.data(), wi.data(), nullptr, 1, vr.data(), n);
    if (info != 0) throw SpectralError("dgeev failed to converge (info = " + std::to_string(info) + ")");
    for (lapack_int j = 0; j < n; ++j) {
        if (wi(j) != 0.0 && j + 1 < n) {
            w(j) = cplx(wr(j), wi(j));
            w(j + 1) = cplx(wr(j + 1), wi(j + 1));
            v.col(j) = vr.col(j).cast<cplx>() + I * vr.col(j + 1).cast<cplx>();
            v.col(j + 1) = v.col(j).conjugate();
            ++j;
        } else {
            w(j) = wr(j);
            v.col(j) = vr.col(j).cast<cplx>();
        }
    }
}

// -------------------------------------------------------------- helpers ----

namespace detail {

struct Component {
    std::vector<int> index; // global indices, ascending
    int partner = -1;       // component containing J(index)
};

inline std::vector<Component> connected_components(const SuperOperator& L, bool split) {
    const int n = static_cast<int>(L.rows());
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    if (split) {
        for (int r = 0; r < n; ++r)
            for (SuperOperator::InnerIterator it(L, r); it; ++it) {
                const int a = find(r), b = find(static_cast<int>(it.col()));
                if (a != b) parent[std::max(a, b)] = std::min(a, b);
            }
    } else {
        std::fill(parent.begin(), parent.end(), 0);
    }
    std::vector<int> label(n, -1);
    std::vector<Component> out;
    for (int i = 0; i < n; ++i) {
        const int root = find(i);
        if (label[root] < 0) {
            label[root] = static_cast<int>(out.size());
            out.emplace_back();
        }
        out[label[root]].index.push_back(i);
    }
    return out;
}

inline cplx sparse_coeff(const SuperOperator& L, int r, int c) {
    const auto* outer = L.outerIndexPtr();
    const auto* inner = L.innerIndexPtr();
    const auto* begin = inner + outer[r];
    const auto* end = inner + outer[r + 1];
    const auto* it = std::lower_bound(begin, end, c);
    if (it == end || *it != c) return 0.0;
    return L.valuePtr()[it - inner];
}

/// True if L commutes with vec(rho) -> vec(rho^dag), i.e. L[(ji),(lk)] = conj(L[(ij),(kl)]).
inline bool commutes_with_conjugation(const SuperOperator& L, int d, double tol) {
    auto sw = [d](int x) { return (x % d) * d + x / d; };
    for (int r = 0; r < L.rows(); ++r)
        for (SuperOperator::InnerIterator it(L, r); it; ++it) {
            const cplx mirrored = sparse_coeff(L, sw(r), sw(static_cast<int>(it.col())));
            if (std::abs(mirrored - std::conj(it.value())) > tol) return false;
        }
    return true;
}

/// Column of a unitary basis change, given by its nonzero entries (local indices).
struct BasisVector {
    int a = 0, b = -1;
    cplx ca = 1.0, cb = 0.0;
};

inline SuperOperator restrict_to(const SuperOperator& L, const std::vector<int>& index) {
    std::vector<int> local(L.rows(), -1);
    for (std::size_t k = 0; k < index.size(); ++k) local[index[k]] = static_cast<int>(k);
    std::vector<Eigen::Triplet<cplx>> t;
    for (std::size_t k = 0; k < index.size(); ++k)
        for (SuperOperator::InnerIterator it(L, index[k]); it; ++it) {
            const int c = local[it.col()];
            if (c < 0) throw SpectralError("invariant block leaks; sparsity decomposition inconsistent");
            t.emplace_back(static_cast<int>(k), c, it.value());
        }
    SuperOperator out(static_cast<int>(index.size()), static_cast<int>(index.size()));
    out.setFromTriplets(t.begin(), t.end());
    return out;
}

/// The unitary Q (at most two entries per column) as a sparse matrix.
inline Eigen::SparseMatrix<cplx> basis_matrix(const std::vector<BasisVector>& q, int n) {
    std::vector<Eigen::Triplet<cplx>> t;
    t.reserve(2 * q.size());
    for (std::size_t j = 0; j < q.size(); ++j) {
        t.emplace_back(q[j].a, static_cast<int>(j), q[j].ca);
        if (q[j].b >= 0) t.emplace_back(q[j].b, static_cast<int>(j), q[j].cb);
    }
    Eigen::SparseMatrix<cplx> Q(n, static_cast<int>(q.size()));
    Q.setFromTriplets(t.begin(), t.end());
    return Q;
}

/// J-invariant real basis of a self-conjugate block.
inline std::vector<BasisVector> hermitian_basis(const std::vector<int>& index, int d) {
    auto local = [&](int g) {
        return static_cast<int>(std::lower_bound(index.begin(), index.end(), g) - index.begin());
    };
    const double s = 1.0 / std::sqrt(2.0);
    std::vector<BasisVector> out;
    for (std::size_t k = 0; k < index.size(); ++k) {
        const int i = index[k] / d, j = index[k] % d;
        if (i == j) out.push_back({static_cast<int>(k), -1, 1.0, 0.0});
        else if (i < j) {
            const int m = local(j * d + i);
            out.push_back({static_cast<int>(k), m, s, s});
            out.push_back({static_cast<int>(k), m, I * s, -I * s});
        }
    }
    return out;
}

/// Eigenbasis of the chiral candidate inside the J-real basis; +1 vectors first.
/// Returns false if the block mixes index-parity classes.
inline bool chiral_basis(const std::vector<int>& index, int d, std::vector<BasisVector>& out, int& n_plus) {
    auto local = [&](int g) {
        return static_cast<int>(std::lower_bound(index.begin(), index.end(), g) - index.begin());
    };
    auto z = [](int i) { return std::popcount(static_cast<unsigned>(i)) % 2 == 0 ? 1 : -1; };
    const double s = 1.0 / std::sqrt(2.0);
    std::vector<BasisVector> plus, minus;
    int klass = 0;
    for (std::size_t k = 0; k < index.size(); ++k) {
        const int i = index[k] / d, j = index[k] % d;
        const int c = z(i) * z(j);
        if (klass == 0) klass = c;
        if (c != klass) return false;
        const int a = static_cast<int>(k);
        if (i == j) {
            (z(i) > 0 ? plus : minus).push_back({a, -1, 1.0, 0.0});
        } else if (i < j) {
            const int b = local(j * d + i);
            if (c > 0) {
                // S r1 = z r1, S r2 = -z r2
                (z(i) > 0 ? plus : minus).push_back({a, b, s, s});
                (z(i) > 0 ? minus : plus).push_back({a, b, I * s, -I * s});
            } else {
                // iS mixes r1 and r2; (r1 - z r2)/sqrt2 has eigenvalue +1
                const double zi = z(i);
                const cplx r2a = I * s, r2b = -I * s;
                plus.push_back({a, b, s * (s - zi * r2a), s * (s - zi * r2b)});
                minus.push_back({a, b, s * (s + zi * r2a), s * (s + zi * r2b)});
            }
        }
    }
    n_plus = static_cast<int>(plus.size());
    out = std::move(plus);
    out.insert(out.end(), minus.begin(), minus.end());
    return true;
}

inline Eigen::MatrixXd orthonormal_columns(const Eigen::MatrixXd& m) {
    if (m.cols() == 0) return m;
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
    return qr.householderQ() * Eigen::MatrixXd::Identity(m.rows(), m.cols());
}

/// Orthonormal basis of the numerical kernel of a square real matrix, from a
/// column-pivoted QR (dgeqp3): M P = Q [R11 R12; 0 ~0].
inline Eigen::MatrixXd real_kernel(Eigen::MatrixXd m, double rtol) {
    const lapack_int n = static_cast<lapack_int>(m.rows());
    if (n == 0) return Eigen::MatrixXd(0, 0);
    std::vector<lapack_int> perm(n, 0);
    Eigen::VectorXd tau(n);
    if (LAPACKE_dgeqp3(LAPACK_COL_MAJOR, n, n, m.data(), n, perm.data(), tau.data()) != 0)
        throw SpectralError("dgeqp3 failed");
    const double top = std::abs(m(0, 0));
    int r = 0;
    while (r < n && std::abs(m(r, r)) > rtol * top) ++r;
    if (r == n) return Eigen::MatrixXd(n, 0);
    const Eigen::MatrixXd r12 = m.topRightCorner(r, n - r);
    Eigen::MatrixXd z(n, n - r);
    z.topRows(r) = -m.topLeftCorner(r, r).triangularView<Eigen::Upper>().solve(r12);
    z.bottomRows(n - r).setIdentity();
    Eigen::MatrixXd ker(n, n - r);
    for (int i = 0; i < n; ++i) ker.row(perm[i] - 1) = z.row(i);
    return orthonormal_columns(ker);
}

/// Eigenpairs of a real matrix of the form shift*1 + [[0, B], [C, 0]]. Returns false
/// if the structure is not exact or the zero modes are defective.
inline bool solve_chiral(const Eigen::MatrixXd& a, int n_plus, double scale, Eigen::VectorXcd& w,
                         Eigen::MatrixXcd& v) {
    const int n = static_cast<int>(a.rows());
    const int n_minus = n - n_plus;
    if (n_plus != n_minus || n == 0) return false;
    const double shift = a.trace() / n;
    const double tol = 1e-12 * scale;
    Eigen::MatrixXd top = a.topLeftCorner(n_plus, n_plus);
    top.diagonal().array() -= shift;
    Eigen::MatrixXd bottom = a.bottomRightCorner(n_minus, n_minus);
    bottom.diagonal().array() -= shift;
    if (top.cwiseAbs().maxCoeff() > tol || bottom.cwiseAbs().maxCoeff() > tol) return false;

    const Eigen::MatrixXd B = a.topRightCorner(n_plus, n_minus);
    const Eigen::MatrixXd C = a.bottomLeftCorner(n_minus, n_plus);
    Eigen::VectorXcd nu;
    Eigen::MatrixXcd x;
    lapack_dgeev(B * C, nu, x);

    const double nu_tol = 1e-9 * scale * scale;
    bool any_zero = false;
    for (int k = 0; k < n_plus; ++k) any_zero = any_zero || std::abs(nu(k)) < nu_tol;
    const Eigen::MatrixXd kerC = any_zero ? real_kernel(C, 1e-10) : Eigen::MatrixXd(n_plus, 0);
    const Eigen::MatrixXd kerB = any_zero ? real_kernel(B, 1e-10) : Eigen::MatrixXd(n_minus, 0);
    const int zeros = static_cast<int>(kerC.cols() + kerB.cols());
    if (zeros % 2 != 0) return false;
    const int m = zeros / 2;

    std::vector<int> order(n_plus);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int i, int j) { return std::abs(nu(i)) < std::abs(nu(j)); });

    w.resize(n);
    v.setZero(n, n);
    int col = 0;
    for (int k = 0; k < kerC.cols(); ++k, ++col) {
        w(col) = shift;
        v.col(col).head(n_plus) = kerC.col(k).cast<cplx>();
    }
    for (int k = 0; k < kerB.cols(); ++k, ++col) {
        w(col) = shift;
        v.col(col).tail(n_minus) = kerB.col(k).cast<cplx>();
    }
    const Eigen::MatrixXcd cx = (C * x.real()).cast<cplx>() + I * (C * x.imag()).cast<cplx>();
    for (int r = m; r < n_plus; ++r) {
        const int k = order[r];
        const cplx lambda = std::sqrt(nu(k));
        if (std::abs(lambda) == 0.0) return false;
        const Eigen::VectorXcd y = cx.col(k) / lambda;
        w(col) = shift + lambda;
        v.col(col) << x.col(k), y;
        ++col;
        w(col) = shift - lambda;
        v.col(col) << x.col(k), -y;
        ++col;
    }
    return col == n;
}

inline double inf_norm(const SuperOperator& L) {
    double best = 0.0;
    for (int r = 0; r < L.rows(); ++r) {
        double row = 0.0;
        for (SuperOperator::InnerIterator it(L, r); it; ++it) row += std::abs(it.value());
        best = std::max(best, row);
    }
    return best;
}

/// Largest ||L v - lambda v|| / ||v|| over the columns.
inline double max_residual(const SuperOperator& L, const Eigen::VectorXcd& w, const Eigen::MatrixXcd& v) {
    double worst = 0.0;
    const Eigen::Index chunk = 256;
    for (Eigen::Index c0 = 0; c0 < v.cols(); c0 += chunk) {
        const Eigen::Index nc = std::min(chunk, v.cols() - c0);
        const Eigen::MatrixXcd lv = L * v.middleCols(c0, nc);
        for (Eigen::Index j = 0; j < nc; ++j) {
            const double norm = v.col(c0 + j).norm();
            if (norm == 0.0) return std::numeric_limits<double>::infinity();
            worst = std::max(worst, (lv.col(j) - w(c0 + j) * v.col(c0 + j)).norm() / norm);
        }
    }
    return worst;
}

inline void normalize_columns(Eigen::MatrixXcd& v) {
    for (Eigen::Index j = 0; j < v.cols(); ++j) {
        Eigen::Index arg = 0;
        v.col(j).cwiseAbs().maxCoeff(&arg);
        const cplx pivot = v(arg, j);
        const double norm = v.col(j).norm();
        if (norm == 0.0) continue;
        v.col(j) *= std::conj(pivot) / (std::abs(pivot) * norm);
    }
}

} // namespace detail

/// Solve one invariant block given as a local sparse matrix; returns the largest
/// eigenpair residual. Fast paths whose residual exceeds `tol` are discarded.
inline double solve_block(const SuperOperator& Lc, const std::vector<int>& index, int d, bool real_ok,
                          bool chiral_ok, double tol, Eigen::VectorXcd& w, Eigen::MatrixXcd& v) {
    const int n = static_cast<int>(index.size());
    const double scale = std::max(1.0, detail::inf_norm(Lc));

    if (real_ok) {
        std::vector<detail::BasisVector> basis;
        int n_plus = 0;
        const bool chiral = chiral_ok && detail::chiral_basis(index, d, basis, n_plus);
        if (!chiral) basis = detail::hermitian_basis(index, d);
        if (static_cast<int>(basis.size()) == n) {
            const Eigen::SparseMatrix<cplx> Q = detail::basis_matrix(basis, n);
            const Eigen::SparseMatrix<cplx> aq = Eigen::SparseMatrix<cplx>(Q.adjoint()) * Lc * Q;
            double imag = 0.0;
            for (int k = 0; k < aq.outerSize(); ++k)
                for (Eigen::SparseMatrix<cplx>::InnerIterator it(aq, k); it; ++it)
                    imag = std::max(imag, std::abs(it.value().imag()));
            if (imag <= 1e-12 * scale) {
                const Eigen::MatrixXd ar = Eigen::MatrixXcd(aq).real();
                Eigen::VectorXcd wl;
                Eigen::MatrixXcd vl;
                if (chiral && detail::solve_chiral(ar, n_plus, scale, wl, vl)) {
                    v = Q * vl;
                    w = wl;
                    const double res = detail::max_residual(Lc, w, v);
                    if (res <= tol) return res;
                }
                lapack_dgeev(ar, wl, vl);
                v = Q * vl;
                w = wl;
                const double res = detail::max_residual(Lc, w, v);
                if (res <= tol) return res;
            }
        }
    }
    lapack_zgeev(Eigen::MatrixXcd(Lc), w, v);
    const double res = detail::max_residual(Lc, w, v);
    if (!(res <= tol))
        throw SpectralError("eigenpair residual " + std::to_string(res) + " exceeds tolerance " + std::to_string(tol));
    return res;
}

/// Full spectrum and right eigenvectors of L, sorted by (Re, Im).
inline EigenSystem eig(const Liouvillian& liou, const EigOptions& opt = {}) {
    const SuperOperator& L = liou.L;
    const int n = static_cast<int>(L.rows());
    if (n == 0) throw SpectralError("empty Liouvillian");
    if (n > opt.max_dim)
        throw SpectralError("Liouvillian dimension " + std::to_string(n) + " exceeds the dense limit " +
                            std::to_string(opt.max_dim));
    for (int r = 0; r < n; ++r)
        for (SuperOperator::InnerIterator it(L, r); it; ++it)
            if (!std::isfinite(it.value().real()) || !std::isfinite(it.value().imag()))
                throw SpectralError("Liouvillian has non-finite entries");
    const int d = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
    const double scale = std::max(1.0, detail::inf_norm(L));

    auto comps = detail::connected_components(L, opt.use_sectors);
    const bool conj_sym =
        opt.use_conjugation && d * d == n && detail::commutes_with_conjugation(L, d, 1e-13 * scale);
    std::vector<int> block_of(n);
    for (std::size_t c = 0; c < comps.size(); ++c)
        for (int i : comps[c].index) block_of[i] = static_cast<int>(c);
    if (conj_sym)
        for (auto& c : comps) {
            const int i = c.index.front();
            c.partner = block_of[(i % d) * d + i / d];
        }
    if (conj_sym && opt.merge_conjugate_pairs) {
        std::vector<detail::Component> merged;
        std::vector<char> used(comps.size(), 0);
        for (std::size_t c = 0; c < comps.size(); ++c) {
            if (used[c]) continue;
            detail::Component m = comps[c];
            const int p = comps[c].partner;
            used[c] = 1;
            if (p != static_cast<int>(c)) {
                m.index.insert(m.index.end(), comps[p].index.begin(), comps[p].index.end());
                std::sort(m.index.begin(), m.index.end());
                used[p] = 1;
            }
            m.partner = static_cast<int>(merged.size());
            merged.push_back(std::move(m));
        }
        comps = std::move(merged);
    }

    struct Block {
        int comp;
        int source; // index into solved, whose vectors are reused (conjugated for partners)
        bool conjugated;
    };
    struct Solved {
        Eigen::VectorXcd w;
        Eigen::MatrixXcd v;
    };
    std::vector<Solved> solved;
    std::vector<Block> blocks;
    std::vector<char> done(comps.size(), 0);
    double worst_residual = 0.0;
    for (std::size_t c = 0; c < comps.size(); ++c) {
        if (done[c]) continue;
        const auto& idx = comps[c].index;
        const SuperOperator Lc = detail::restrict_to(L, idx);
        Solved s;
        const bool self = comps[c].partner == static_cast<int>(c);
        worst_residual = std::max(worst_residual, solve_block(Lc, idx, d, conj_sym && self,
                                                              conj_sym && self && opt.use_chiral,
                                                              opt.residual_tol * scale, s.w, s.v));
        detail::normalize_columns(s.v);
        solved.push_back(std::move(s));
        const int source = static_cast<int>(solved.size()) - 1;
        blocks.push_back({static_cast<int>(c), source, false});
        done[c] = 1;
        const int p = comps[c].partner;
        if (conj_sym && p >= 0 && p != static_cast<int>(c)) {
            if (comps[p].index.size() != idx.size()) throw SpectralError("conjugate blocks differ in size");
            blocks.push_back({p, source, true});
            done[p] = 1;
        }
    }

    struct Entry {
        cplx value;
        int block;
        int k;
    };
    std::vector<Entry> entries;
    entries.reserve(n);
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        const auto& w = solved[blocks[b].source].w;
        for (int k = 0; k < w.size(); ++k)
            entries.push_back({blocks[b].conjugated ? std::conj(w(k)) : w(k), static_cast<int>(b), k});
    }
    if (static_cast<int>(entries.size()) != n) throw SpectralError("block decomposition did not cover the space");
    std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        if (a.value.real() != b.value.real()) return a.value.real() < b.value.real();
        return a.value.imag() < b.value.imag();
    });

    EigenSystem es;
    es.values.resize(n);
    es.vectors.setZero(n, n);
    es.sector.resize(n);
    for (int col = 0; col < n; ++col) {
        const Entry& e = entries[col];
        const Block& blk = blocks[e.block];
        const auto& v = solved[blk.source].v;
        const auto& src_idx = comps[blocks[e.block].conjugated ? comps[blk.comp].partner : blk.comp].index;
        es.values(col) = e.value;
        es.sector[col] = blk.comp;
        for (std::size_t r = 0; r < src_idx.size(); ++r) {
            const int g = src_idx[r];
            if (blk.conjugated) es.vectors((g % d) * d + g / d, col) = std::conj(v(r, e.k));
            else es.vectors(g, col) = v(r, e.k);
        }
    }
    es.residual = worst_residual;
    return es;
}

/// <v|O|v> / <v|v>
inline cplx expectation(const SuperOperator& op, const StateVector& v) {
    return v.dot(op * v) / v.squaredNorm();
}

/// Eigenvalues of a dense complex matrix.
inline Eigen::VectorXcd eigenvalues_dense(const Eigen::MatrixXcd& m) {
    Eigen::VectorXcd w;
    Eigen::MatrixXcd v;
    lapack_zgeev(m, w, v);
    return w;
}

} // namespace lscar
