// algebra.hpp: Majorana, Pauli and string operators on qubit registers

#pragma once

#include <bit>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace lscar {

using cplx = std::complex<double>;
using Operator = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;
// Operators on the doubled (vectorized) space are sparse in every model here.
using SuperOperator = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;

inline constexpr cplx I{0.0, 1.0};

class Geometry {
public:
    enum class Kind { Majorana, Spin };

    static Geometry majorana(int n_majoranas) {
        if (n_majoranas < 2 || n_majoranas % 2 != 0)
            throw std::invalid_argument("Majorana count must be even and >= 2, got " +
                                        std::to_string(n_majoranas));
        if (n_majoranas > 40)
            throw std::invalid_argument("Majorana count too large for dense matrices");
        return Geometry(Kind::Majorana, n_majoranas);
    }

    static Geometry spin(int n_sites) {
        if (n_sites < 1 || n_sites > 20)
            throw std::invalid_argument("spin chain length out of range: " + std::to_string(n_sites));
        return Geometry(Kind::Spin, n_sites);
    }

    Kind kind() const { return kind_; }
    bool is_majorana() const { return kind_ == Kind::Majorana; }
    bool is_spin() const { return kind_ == Kind::Spin; }

    // Number of Majoranas (Majorana kind) or sites (spin kind).
    int count() const { return count_; }
    int qubits() const { return is_majorana() ? count_ / 2 : count_; }
    int dim() const { return 1 << qubits(); }

    bool operator==(const Geometry&) const = default;

private:
    Geometry(Kind k, int c) : kind_(k), count_(c) {}
    Kind kind_;
    int count_;
};

inline void require_majorana(const Geometry& g, const char* what) {
    if (!g.is_majorana()) throw std::invalid_argument(std::string(what) + ": Majorana geometry required");
}

inline void require_spin(const Geometry& g, const char* what) {
    if (!g.is_spin()) throw std::invalid_argument(std::string(what) + ": spin geometry required");
}

// Basis state b of an n-qubit register: qubit k (1-based) is bit (n - k), so
// qubit 1 is the leftmost tensor factor.
inline std::uint64_t qubit_bit(int n_qubits, int k) { return std::uint64_t{1} << (n_qubits - k); }

/// Operator with exactly one nonzero per column: |b> -> coeff[b] |b ^ flip>.
///
/// Pauli strings and Jordan-Wigner Majorana products are all of this form, so
/// products stay O(D) and the sparse Kronecker lifts to the doubled space stay
/// O(D^2) instead of O(D^4).
struct Monomial {
    std::uint64_t flip = 0;
    std::vector<cplx> coeff;

    static Monomial identity(int dim) { return {0, std::vector<cplx>(dim, 1.0)}; }

    int dim() const { return static_cast<int>(coeff.size()); }

    Monomial operator*(const Monomial& rhs) const {
        Monomial out{flip ^ rhs.flip, std::vector<cplx>(coeff.size())};
        for (std::size_t b = 0; b < coeff.size(); ++b)
            out.coeff[b] = rhs.coeff[b] * coeff[b ^ rhs.flip];
        return out;
    }

    Monomial& operator*=(cplx s) {
        for (auto& c : coeff) c *= s;
        return *this;
    }

    Monomial conjugate() const {
        Monomial out = *this;
        for (auto& c : out.coeff) c = std::conj(c);
        return out;
    }

    Operator dense() const {
        Operator m = Operator::Zero(dim(), dim());
        for (int b = 0; b < dim(); ++b) m(static_cast<int>(b ^ flip), b) = coeff[b];
        return m;
    }
};

enum class Axis { X, Y, Z };

/// Pauli matrix on `site` (1-based) of an n-qubit register, as a monomial.
inline Monomial pauli_monomial(int n_qubits, int site, Axis axis) {
    const int dim = 1 << n_qubits;
    const std::uint64_t bit = qubit_bit(n_qubits, site);
    Monomial m{axis == Axis::Z ? 0 : bit, std::vector<cplx>(dim)};
    for (int b = 0; b < dim; ++b) {
        const bool up = (b & bit) == 0;
        switch (axis) {
        case Axis::X: m.coeff[b] = 1.0; break;
        case Axis::Y: m.coeff[b] = up ? I : -I; break;
        case Axis::Z: m.coeff[b] = up ? 1.0 : -1.0; break;
        }
    }
    return m;
}

inline Operator build_pauli(int site, Axis axis, const Geometry& geom) {
    require_spin(geom, "build_pauli");
    if (site < 1 || site > geom.count())
        throw std::out_of_range("Pauli site " + std::to_string(site) + " outside [1, " +
                                std::to_string(geom.count()) + "]");
    return pauli_monomial(geom.qubits(), site, axis).dense();
}

/// Jordan-Wigner Majorana psi_i (1-based). Majoranas 2k-1 and 2k live on qubit k:
///   psi_{2k-1} = Z_1...Z_{k-1} X_k / sqrt2,   psi_{2k} = -Z_1...Z_{k-1} Y_k / sqrt2.
/// Odd Majoranas are real, even ones imaginary, and n_k = |1><1| on qubit k.
inline Monomial majorana_monomial(const Geometry& geom, int i) {
    require_majorana(geom, "majorana_monomial");
    if (i < 1 || i > geom.count()) throw std::out_of_range("Majorana index out of range");
    const int nq = geom.qubits();
    const int k = (i + 1) / 2;
    Monomial m = pauli_monomial(nq, k, (i % 2 == 1) ? Axis::X : Axis::Y);
    const std::uint64_t below = (qubit_bit(nq, 1) << 1) - (qubit_bit(nq, k) << 1);
    const double scale = (i % 2 == 1 ? 1.0 : -1.0) / std::sqrt(2.0);
    for (int b = 0; b < m.dim(); ++b) {
        const bool odd = std::popcount(static_cast<std::uint64_t>(b) & below) % 2 != 0;
        m.coeff[b] *= odd ? -scale : scale;
    }
    return m;
}

inline std::vector<Operator> build_majoranas(const Geometry& geom) {
    require_majorana(geom, "build_majoranas");
    std::vector<Operator> out;
    out.reserve(geom.count());
    for (int i = 1; i <= geom.count(); ++i) out.push_back(majorana_monomial(geom, i).dense());
    return out;
}

/// Sorted set of Majorana indices n_1 < ... < n_p, stored as a bitmask (bit i-1 <-> psi_i).
class MajoranaString {
public:
    MajoranaString() = default;
    explicit MajoranaString(std::uint64_t mask) : mask_(mask) {}

    static MajoranaString from_indices(const std::vector<int>& idx) {
        std::uint64_t mask = 0;
        int prev = 0;
        for (int i : idx) {
            if (i <= prev) throw std::invalid_argument("Majorana string indices must be strictly increasing");
            if (i > 64) throw std::invalid_argument("Majorana index exceeds 64");
            mask |= std::uint64_t{1} << (i - 1);
            prev = i;
        }
        return MajoranaString(mask);
    }

    std::uint64_t mask() const { return mask_; }
    int size() const { return std::popcount(mask_); }

    std::vector<int> indices() const {
        std::vector<int> out;
        for (int i = 0; i < 64; ++i)
            if (mask_ >> i & 1) out.push_back(i + 1);
        return out;
    }

    bool operator==(const MajoranaString&) const = default;

private:
    std::uint64_t mask_ = 0;
};

/// Gamma_s = 2^{p/2} psi_{n_1} ... psi_{n_p} as a monomial.
inline Monomial string_monomial(const MajoranaString& s, const Geometry& geom) {
    require_majorana(geom, "string_matrix");
    const auto idx = s.indices();
    if (!idx.empty() && idx.back() > geom.count()) throw std::out_of_range("string index exceeds N");
    Monomial m = Monomial::identity(geom.dim());
    for (int i : idx) {
        Monomial psi = majorana_monomial(geom, i);
        psi *= std::sqrt(2.0);
        m = m * psi;
    }
    return m;
}

inline Operator string_matrix(const MajoranaString& s, const Geometry& geom) {
    return string_monomial(s, geom).dense();
}

/// P = 2^{N/2} i^{N(N-1)/2} psi_1 ... psi_N; diagonal in this representation.
inline Operator build_parity(const Geometry& geom) {
    require_majorana(geom, "build_parity");
    const int n = geom.count();
    Monomial m = string_monomial(MajoranaString((n == 64) ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1), geom);
    // string_monomial already carries 2^{N/2}; attach i^{N(N-1)/2}.
    const int phase = (n * (n - 1) / 2) % 4;
    static constexpr cplx powers[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    m *= powers[phase];
    return m.dense();
}

/// Annihilators a_k = (psi_{2k-1} - i psi_{2k}) / sqrt2, k = 1..N/2.
inline std::vector<Operator> complex_fermions(const Geometry& geom) {
    require_majorana(geom, "complex_fermions");
    std::vector<Operator> out;
    for (int k = 1; k <= geom.qubits(); ++k) {
        const Operator a = (majorana_monomial(geom, 2 * k - 1).dense() - I * majorana_monomial(geom, 2 * k).dense()) /
                           std::sqrt(2.0);
        out.push_back(a);
    }
    return out;
}

/// Number operator of mode k: 1/2 - i psi_{2k-1} psi_{2k}.
inline Operator mode_number(const Geometry& geom, int k) {
    require_majorana(geom, "mode_number");
    const Monomial prod = majorana_monomial(geom, 2 * k - 1) * majorana_monomial(geom, 2 * k);
    return 0.5 * Operator::Identity(geom.dim(), geom.dim()) - I * prod.dense();
}

/// Total charge N = sum_k n_k.
inline Operator number_operator(const Geometry& geom) {
    Operator n = Operator::Zero(geom.dim(), geom.dim());
    for (int k = 1; k <= geom.qubits(); ++k) n += mode_number(geom, k);
    return n;
}

/// Occupation of basis state b: number of occupied modes (bit set <-> n_k = 1).
inline int occupation(std::uint64_t b) { return std::popcount(b); }

/// Unitary C with C psi_k C^{-1} = psi_k^*.
///
/// Odd Majoranas are real and even ones imaginary, so C must commute with the
/// former and anticommute with the latter: the product of the odd Majoranas
/// works when N/2 is odd, the product of the even ones when N/2 is even.
inline Operator charge_conjugation(const Geometry& geom) {
    require_majorana(geom, "charge_conjugation");
    const int half = geom.count() / 2;
    std::uint64_t mask = 0;
    for (int i = (half % 2 == 1 ? 1 : 2); i <= geom.count(); i += 2) mask |= std::uint64_t{1} << (i - 1);
    return string_monomial(MajoranaString(mask), geom).dense();
}

inline double max_abs(const Operator& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

inline Operator anticommutator(const Operator& a, const Operator& b) { return a * b + b * a; }
inline Operator commutator(const Operator& a, const Operator& b) { return a * b - b * a; }

} // namespace lscar
