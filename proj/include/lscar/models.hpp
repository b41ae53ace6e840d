// models.hpp: Majorana SYK, charge-projected complex SYK and random-field XXZ Hamiltonians

#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lscar/algebra.hpp"
#include "lscar/rng.hpp"

namespace lscar {

struct SykParams {
    int N = 12;
    int q = 4;
    std::uint64_t seed = 0;
    std::uint64_t stream = 0; // realization index

    /// 2^{q-1} (q-1)! N^{1-q} / q
    double coupling_variance() const {
        double fact = 1.0;
        for (int k = 2; k < q; ++k) fact *= k;
        return std::pow(2.0, q - 1) * fact * std::pow(static_cast<double>(N), 1 - q) / q;
    }

    void validate() const {
        if (N < 2 || N % 2 != 0) throw std::invalid_argument("SYK: N must be even and >= 2");
        if (q < 2 || q % 2 != 0 || q > N) throw std::invalid_argument("SYK: q must be even with 2 <= q <= N");
    }
};

struct XxzParams {
    int n_sites = 6;
    double J = 1.0;
    double Delta = 1.1;
    double h = 0.5; // fields drawn uniformly from [-h, h]
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;

    void validate() const {
        if (n_sites < 2) throw std::invalid_argument("XXZ: need at least two sites");
        if (!(h >= 0.0)) throw std::invalid_argument("XXZ: field half-width must be >= 0");
    }
};

/// Couplings K_{i_1...i_q}, one per strictly increasing q-tuple, in lexicographic order.
struct CouplingTensor {
    int N = 0;
    int q = 0;
    std::vector<std::pair<MajoranaString, double>> terms;

    std::size_t size() const { return terms.size(); }

    double at(const std::vector<int>& indices) const {
        const auto key = MajoranaString::from_indices(indices);
        for (const auto& [s, v] : terms)
            if (s == key) return v;
        throw std::out_of_range("no coupling for the requested tuple");
    }
};

// Calls f(mask) for every q-subset of {1..n} in lexicographic order.
template <class F>
void for_each_subset(int n, int q, F&& f) {
    std::vector<int> idx(q);
    for (int i = 0; i < q; ++i) idx[i] = i + 1;
    if (q == 0) {
        f(MajoranaString());
        return;
    }
    while (true) {
        f(MajoranaString::from_indices(idx));
        int pos = q - 1;
        while (pos >= 0 && idx[pos] == n - q + pos + 1) --pos;
        if (pos < 0) break;
        ++idx[pos];
        for (int j = pos + 1; j < q; ++j) idx[j] = idx[j - 1] + 1;
    }
}

inline CouplingTensor sample_couplings(const SykParams& p) {
    p.validate();
    RandomStream rng(p.seed, p.stream);
    const double sd = std::sqrt(p.coupling_variance());
    CouplingTensor K{p.N, p.q, {}};
    for_each_subset(p.N, p.q, [&](MajoranaString s) { K.terms.emplace_back(s, sd * rng.gaussian()); });
    return K;
}

/// H = -i^{q/2} sum K_{i_1..i_q} psi_{i_1} ... psi_{i_q}
inline Operator build_majorana_syk(const CouplingTensor& K, const Geometry& geom) {
    require_majorana(geom, "build_majorana_syk");
    if (K.N != geom.count()) throw std::invalid_argument("coupling tensor N does not match geometry");
    static constexpr cplx powers[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    const cplx prefactor = -powers[(K.q / 2) % 4] / std::pow(2.0, K.q / 2.0);
    const int d = geom.dim();
    Operator H = Operator::Zero(d, d);
    for (const auto& [s, k] : K.terms) {
        if (k == 0.0) continue;
        const Monomial m = string_monomial(s, geom); // carries 2^{q/2}
        for (int b = 0; b < d; ++b) H(static_cast<int>(b ^ m.flip), b) += prefactor * k * m.coeff[b];
    }
    return H;
}

/// Projector onto charge sector n, as the occupation-basis indicator.
inline Operator charge_projector(int n, const Geometry& geom) {
    require_majorana(geom, "charge_projector");
    if (n < 0 || n > geom.qubits())
        throw std::out_of_range("charge sector " + std::to_string(n) + " outside [0, N/2]");
    const int d = geom.dim();
    Operator P = Operator::Zero(d, d);
    for (int b = 0; b < d; ++b)
        if (occupation(b) == n) P(b, b) = 1.0;
    return P;
}

/// H_c = sum_n P_n H P_n
inline Operator build_complex_syk(const Operator& H, const Geometry& geom) {
    require_majorana(geom, "build_complex_syk");
    Operator Hc = Operator::Zero(H.rows(), H.cols());
    for (int n = 0; n <= geom.qubits(); ++n) {
        const Operator P = charge_projector(n, geom);
        Hc += P * H * P;
    }
    return Hc;
}

inline std::vector<double> sample_fields(const XxzParams& p) {
    p.validate();
    RandomStream rng(p.seed, p.stream);
    std::vector<double> h(p.n_sites);
    for (auto& x : h) x = rng.uniform(-p.h, p.h);
    return h;
}

/// H_S = -J sum_i (X_i X_{i+1} + Y_i Y_{i+1} + Delta Z_i Z_{i+1}) - sum_i h_i Z_i, periodic.
inline Operator build_xxz(double J, double Delta, const std::vector<double>& fields, const Geometry& geom) {
    require_spin(geom, "build_xxz");
    const int n = geom.count();
    if (static_cast<int>(fields.size()) != n) throw std::invalid_argument("one field per site required");
    const int nq = geom.qubits();
    const int d = geom.dim();
    Operator H = Operator::Zero(d, d);
    auto add = [&](const Monomial& m, cplx c) {
        for (int b = 0; b < d; ++b) H(static_cast<int>(b ^ m.flip), b) += c * m.coeff[b];
    };
    for (int i = 1; i <= n; ++i) {
        const int j = i % n + 1;
        add(pauli_monomial(nq, i, Axis::X) * pauli_monomial(nq, j, Axis::X), -J);
        add(pauli_monomial(nq, i, Axis::Y) * pauli_monomial(nq, j, Axis::Y), -J);
        add(pauli_monomial(nq, i, Axis::Z) * pauli_monomial(nq, j, Axis::Z), -J * Delta);
        add(pauli_monomial(nq, i, Axis::Z), -fields[i - 1]);
    }
    return H;
}

inline Operator build_xxz(const XxzParams& p, const Geometry& geom) {
    if (geom.count() != p.n_sites) throw std::invalid_argument("XXZ params do not match geometry");
    return build_xxz(p.J, p.Delta, sample_fields(p), geom);
}

inline Operator total_magnetization(const Geometry& geom) {
    require_spin(geom, "total_magnetization");
    Operator m = Operator::Zero(geom.dim(), geom.dim());
    for (int i = 1; i <= geom.count(); ++i) m += pauli_monomial(geom.qubits(), i, Axis::Z).dense();
    return m;
}

} // namespace lscar
