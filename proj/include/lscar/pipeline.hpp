// pipeline.hpp: one disorder realization from model parameters to scar-resolved eigensystem

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "lscar/entanglement.hpp"
#include "lscar/observables.hpp"
#include "lscar/scars.hpp"
#include "lscar/stats.hpp"

namespace lscar {

enum class ModelKind { MajoranaSyk, ComplexSyk, Xxz };

inline std::string to_string(ModelKind m) {
    switch (m) {
    case ModelKind::MajoranaSyk: return "majorana-syk";
    case ModelKind::ComplexSyk: return "complex-syk";
    case ModelKind::Xxz: return "xxz";
    }
    return "?";
}

inline ModelKind parse_model(const std::string& s) {
    if (s == "majorana-syk" || s == "majorana") return ModelKind::MajoranaSyk;
    if (s == "complex-syk" || s == "complex") return ModelKind::ComplexSyk;
    if (s == "xxz" || s == "spin") return ModelKind::Xxz;
    throw std::invalid_argument("unknown model '" + s + "' (expected majorana-syk, complex-syk or xxz)");
}

inline VectorizationScheme parse_scheme(const std::string& s) {
    if (s == "standard") return VectorizationScheme::StandardMajorana;
    if (s == "pseudo-fermion" || s == "pseudofermion") return VectorizationScheme::PseudoFermion;
    if (s == "spin") return VectorizationScheme::SpinTensor;
    throw std::invalid_argument("unknown scheme '" + s + "' (expected standard, pseudo-fermion or spin)");
}

/// Physical parameters of one model family. N counts Majoranas for SYK and sites for XXZ.
struct ModelConfig {
    ModelKind model = ModelKind::MajoranaSyk;
    int N = 12;
    int q = 4;
    double mu = 0.1;
    double J = 1.0;
    double Delta = 1.1;
    double h = 0.5;
    VectorizationScheme scheme = VectorizationScheme::PseudoFermion;
    std::uint64_t seed = 1;

    bool fermionic() const { return model != ModelKind::Xxz; }

    void validate() const {
        if (!(mu >= 0.0)) throw std::invalid_argument("mu must be non-negative");
        if (fermionic()) {
            if (N < 2 || N % 2 != 0 || N > 12) throw std::invalid_argument("N must be even and at most 12 for SYK");
            if (q < 2 || q % 2 != 0 || q > N) throw std::invalid_argument("q must be even with 2 <= q <= N");
            if (scheme == VectorizationScheme::SpinTensor)
                throw std::invalid_argument("SYK models need the standard or pseudo-fermion scheme");
        } else {
            if (N < 2 || N > 6) throw std::invalid_argument("XXZ chains are limited to 2..6 sites");
            if (!(h >= 0.0)) throw std::invalid_argument("field strength h must be non-negative");
        }
    }

    /// Centre of the spectrum used for the split-size statistics.
    double center() const { return fermionic() ? -N * mu / 2.0 : -mu * N; }
    /// Constant removed from the split observable so that it is odd about the centre.
    double split_offset() const { return fermionic() ? 0.0 : N / 2.0; }
};

/// Hamiltonian and vectorized Lindbladian of realization `index` (the RNG stream).
struct ModelInstance {
    Operator H;
    Liouvillian L;
};

inline ModelInstance build_instance(const ModelConfig& cfg, std::uint64_t index) {
    cfg.validate();
    ModelInstance m;
    if (cfg.fermionic()) {
        const auto g = Geometry::majorana(cfg.N);
        const auto K = sample_couplings({cfg.N, cfg.q, cfg.seed, index});
        m.H = build_majorana_syk(K, g);
        const auto jumps = JumpSet::majoranas(g, cfg.mu);
        if (cfg.model == ModelKind::ComplexSyk) {
            m.H = build_complex_syk(m.H, g);
            m.L = vectorize_majorana(m.H, g, jumps, cfg.scheme);
        } else {
            m.L = vectorize_majorana(m.H, g, jumps, cfg.scheme, &K);
        }
    } else {
        const auto g = Geometry::spin(cfg.N);
        m.H = build_xxz({cfg.N, cfg.J, cfg.Delta, cfg.h, cfg.seed, index}, g);
        m.L = vectorize_spin(m.H, g, JumpSet::pauli_x(g, cfg.mu));
    }
    return m;
}

/// Scar states predicted by the symmetry arguments for each model.
inline std::vector<ScarState> analytic_scars(const ModelConfig& cfg, const ModelInstance& m) {
    switch (cfg.model) {
    case ModelKind::MajoranaSyk: return analytic_majorana_scars(m.L, m.H, cfg.q);
    case ModelKind::ComplexSyk: {
        auto out = analytic_u1_scars(m.L);
        const auto extra = analytic_majorana_scars(m.L, m.H, cfg.q);
        for (const auto& s : extra)
            if (s.kind == ScarKind::HamL || s.kind == ScarKind::HamLParity) out.push_back(s);
        return out;
    }
    case ModelKind::Xxz: return analytic_spin_scars(m.L);
    }
    return {};
}

struct RealizationOptions {
    EigOptions eig;
    DetectionOptions detection;
};

struct Realization {
    std::uint64_t index = 0;
    ModelInstance model;
    EigenSystem es;
    Eigen::VectorXcd raw_values; // eigenvalues before scar columns are set to their targets
    ScarDetectionReport scars;
    std::vector<char> scar_flags;
};

/// Diagonalize, detect scars and rotate each scar cluster onto its scar basis.
inline Realization solve_realization(const ModelConfig& cfg, std::uint64_t index, const RealizationOptions& opt = {}) {
    Realization r;
    r.index = index;
    r.model = build_instance(cfg, index);
    // Complex SYK sectors n_L - n_R = d and -d are exactly degenerate; solving
    // them jointly leaves the split size unresolved by the U(1) label.
    EigOptions eo = opt.eig;
    if (cfg.model == ModelKind::ComplexSyk) eo.merge_conjugate_pairs = true;
    r.es = eig(r.model.L, eo);
    r.raw_values = r.es.values;
    r.scars = detect_numerical_scars(r.es, r.model.L, opt.detection);
    r.scar_flags = apply_scar_basis(r.es, r.scars);
    return r;
}

} // namespace lscar
