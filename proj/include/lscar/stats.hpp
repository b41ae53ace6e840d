// stats.hpp: ensemble statistics of split-size expectation values

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "lscar/observables.hpp"

namespace lscar {

/// One eigenstate in a statistics pool: x = Re(lambda) - centre, y = split observable.
struct Sample {
    double x = 0.0;
    double y = 0.0;
};

/// Pools non-scar records. The spin split is reported as <S_X + S_Z> - N/2, which is odd about the centre.
inline std::vector<Sample> split_samples(const std::vector<ObservableRecord>& records, double center,
                                         double offset = 0.0, bool include_scars = false) {
    std::vector<Sample> out;
    out.reserve(records.size());
    for (const auto& r : records)
        if (include_scars || !r.is_scar) out.push_back({r.eigenvalue.real() - center, r.split_mean - offset});
    return out;
}

inline double fraction_vanishing(const std::vector<Sample>& s, double tol = 1e-8) {
    if (s.empty()) return 0.0;
    const auto n = std::count_if(s.begin(), s.end(), [&](const Sample& p) { return std::abs(p.y) < tol; });
    return static_cast<double>(n) / static_cast<double>(s.size());
}

inline std::vector<Sample> drop_vanishing(const std::vector<Sample>& s, double tol = 1e-8) {
    std::vector<Sample> out;
    std::copy_if(s.begin(), s.end(), std::back_inserter(out), [&](const Sample& p) { return std::abs(p.y) >= tol; });
    return out;
}

/// Fraction of eigenvalues with |Re(lambda) + shift| < tol ("purely imaginary" after the shift).
inline double imaginary_fraction(const Eigen::VectorXcd& values, double shift, double tol = 1e-8) {
    if (values.size() == 0) return 0.0;
    long n = 0;
    for (Eigen::Index k = 0; k < values.size(); ++k) n += std::abs(values(k).real() + shift) < tol;
    return static_cast<double>(n) / static_cast<double>(values.size());
}

struct BinSpec {
    int bins = 100;
    double lo = -0.2; // x range covered by the equal-width bins
    double hi = 0.2;
    long min_count = 1000;
};

struct Bin {
    double lo = 0.0, hi = 0.0;
    long count = 0;
    double mean = 0.0;
    double width = 0.0; // standard deviation of y in the bin
    double center() const { return 0.5 * (lo + hi); }
};

inline std::vector<Bin> bin_samples(const std::vector<Sample>& s, const BinSpec& spec) {
    if (spec.bins <= 0 || !(spec.hi > spec.lo)) throw std::invalid_argument("bin_samples: bad bin specification");
    const double w = (spec.hi - spec.lo) / spec.bins;
    std::vector<Bin> bins(spec.bins);
    std::vector<double> sum(spec.bins, 0.0), sum2(spec.bins, 0.0);
    for (int b = 0; b < spec.bins; ++b) {
        bins[b].lo = spec.lo + b * w;
        bins[b].hi = spec.lo + (b + 1) * w;
    }
    for (const auto& p : s) {
        if (p.x < spec.lo || p.x >= spec.hi) continue;
        const int b = std::min(spec.bins - 1, static_cast<int>((p.x - spec.lo) / w));
        ++bins[b].count;
        sum[b] += p.y;
        sum2[b] += p.y * p.y;
    }
    for (int b = 0; b < spec.bins; ++b) {
        if (bins[b].count == 0) continue;
        const double n = static_cast<double>(bins[b].count);
        bins[b].mean = sum[b] / n;
        bins[b].width = n > 1 ? std::sqrt(std::max(0.0, (sum2[b] - n * bins[b].mean * bins[b].mean) / (n - 1))) : 0.0;
    }
    return bins;
}

/// Polynomial mean M(x) = sum c_k x^k and width sigma(x) = a + b|x| on one |x| interval.
struct FitPiece {
    double lo = 0.0, hi = 0.0; // range of |x|
    std::vector<double> mean_coeffs;
    double width_a = 0.0, width_b = 0.0;
    int bins_used = 0;
    long min_count_used = 0;

    double mean(double x) const {
        double m = 0.0, p = 1.0;
        for (double c : mean_coeffs) {
            m += c * p;
            p *= x;
        }
        return m;
    }
    double width(double x) const { return width_a + width_b * std::abs(x); }
};

struct SmoothFit {
    std::vector<FitPiece> pieces; // ordered by |x|

    const FitPiece& piece(double x) const {
        const double ax = std::abs(x);
        for (const auto& p : pieces)
            if (ax < p.hi) return p;
        if (pieces.empty()) throw std::logic_error("SmoothFit: no pieces");
        return pieces.back();
    }
    double mean(double x) const { return piece(x).mean(x); }
    double width(double x) const { return piece(x).width(x); }
    double reach() const { return pieces.empty() ? 0.0 : pieces.back().hi; }
};

namespace detail {

inline Eigen::VectorXd least_squares(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
    return A.colPivHouseholderQr().solve(b);
}

inline FitPiece fit_piece(const std::vector<Bin>& bins, double lo, double hi, long min_count, int degree) {
    FitPiece piece;
    piece.lo = lo;
    piece.hi = hi;
    std::vector<const Bin*> use;
    // Fewer than degree + 1 populated bins: fall back to lower thresholds, then lower degree.
    for (long threshold = std::max(2L, min_count);; threshold = std::max(2L, threshold / 10)) {
        use.clear();
        for (const auto& b : bins) {
            const double c = std::abs(b.center());
            if (c >= lo && c < hi && b.count >= threshold) use.push_back(&b);
        }
        piece.min_count_used = threshold;
        if (static_cast<int>(use.size()) >= degree + 1 || threshold == 2) break;
    }
    if (use.size() < 2) throw std::runtime_error("fit_smooth: fewer than two populated bins in a fit region");
    const int deg = std::min<int>(degree, static_cast<int>(use.size()) - 1);
    Eigen::MatrixXd A(use.size(), deg + 1), W(use.size(), 2);
    Eigen::VectorXd m(use.size()), w(use.size());
    for (std::size_t r = 0; r < use.size(); ++r) {
        const double x = use[r]->center();
        double p = 1.0;
        for (int k = 0; k <= deg; ++k, p *= x) A(r, k) = p;
        W(r, 0) = 1.0;
        W(r, 1) = std::abs(x);
        m(r) = use[r]->mean;
        w(r) = use[r]->width;
    }
    const Eigen::VectorXd c = least_squares(A, m);
    piece.mean_coeffs.assign(c.data(), c.data() + c.size());
    const Eigen::VectorXd ab = least_squares(W, w);
    piece.width_a = ab(0);
    piece.width_b = ab(1);
    piece.bins_used = static_cast<int>(use.size());
    return piece;
}

} // namespace detail

/// Piecewise fit of the bin means (cubic in x) and widths (linear in |x|), with the
/// pieces split at `inner` and the outer piece reaching to `outer`.
inline SmoothFit fit_smooth(const std::vector<Sample>& samples, const BinSpec& spec = {}, double inner = 0.02,
                            double outer = 0.2, int degree = 3) {
    const auto bins = bin_samples(samples, spec);
    SmoothFit fit;
    fit.pieces.push_back(detail::fit_piece(bins, 0.0, inner, spec.min_count, degree));
    if (outer > inner) fit.pieces.push_back(detail::fit_piece(bins, inner, outer, spec.min_count, degree));
    return fit;
}

/// Window on |x|: lo <= |x| < hi.
struct Window {
    double lo = 0.0;
    double hi = 0.0075;
    bool contains(double x) const { return std::abs(x) >= lo && std::abs(x) < hi; }
};

inline Window main_window() { return {0.0, 0.0075}; }
inline Window inset_window() { return {0.057, 0.075}; }

/// (y - M(x)) / sigma(x) for non-vanishing samples inside the window.
inline std::vector<double> normalize_split_size(const std::vector<Sample>& samples, const SmoothFit& fit,
                                                const Window& window, double zero_tol = 1e-8) {
    std::vector<double> out;
    for (const auto& p : samples) {
        if (!window.contains(p.x) || std::abs(p.y) < zero_tol) continue;
        const double s = fit.width(p.x);
        if (!(s > 0.0)) throw std::runtime_error("normalize_split_size: non-positive fitted width");
        out.push_back((p.y - fit.mean(p.x)) / s);
    }
    return out;
}

struct Moments {
    double mean = 0.0;
    double variance = 0.0;
    double excess_kurtosis = 0.0;
};

inline Moments moments(const std::vector<double>& v) {
    Moments m;
    if (v.size() < 2) return m;
    const double n = static_cast<double>(v.size());
    m.mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
    double m2 = 0.0, m4 = 0.0;
    for (double x : v) {
        const double d = (x - m.mean) * (x - m.mean);
        m2 += d;
        m4 += d * d;
    }
    m2 /= n;
    m4 /= n;
    m.variance = m2 * n / (n - 1);
    m.excess_kurtosis = m2 > 0 ? m4 / (m2 * m2) - 3.0 : 0.0;
    return m;
}

struct HistogramBin {
    double center = 0.0; // geometric centre
    long count = 0;
    double density = 0.0; // count / (total * width)
};

/// Histogram of |v| on logarithmically spaced bins spanning the nonzero values.
inline std::vector<HistogramBin> log_histogram(const std::vector<double>& values, int bins = 40) {
    std::vector<double> a;
    for (double v : values)
        if (v != 0.0 && std::isfinite(v)) a.push_back(std::abs(v));
    std::vector<HistogramBin> out;
    if (a.size() < 2 || bins < 1) return out;
    const auto [mn, mx] = std::minmax_element(a.begin(), a.end());
    const double l0 = std::log(*mn), l1 = std::log(*mx) * (1 + 1e-12) + 1e-12;
    const double dl = (l1 - l0) / bins;
    out.resize(bins);
    for (double x : a) ++out[std::min(bins - 1, static_cast<int>((std::log(x) - l0) / dl))].count;
    for (int b = 0; b < bins; ++b) {
        const double lo = std::exp(l0 + b * dl), hi = std::exp(l0 + (b + 1) * dl);
        out[b].center = std::sqrt(lo * hi);
        out[b].density = out[b].count / (static_cast<double>(a.size()) * (hi - lo));
    }
    return out;
}

struct PowerLawFit {
    double a = 0.0;
    double b = 0.0;        // density ~ a / |x|^b on the tail
    double goodness = 0.0; // rms residual of the log-log fit
    double threshold = 0.0;
    int points = 0;
    double excess_kurtosis = 0.0;

    bool valid() const { return std::isfinite(b) && b > 0.0 && points >= 3; }
};

/// Log-log least squares of the |x| density above the given quantile, using
/// logarithmically spaced bins. Also reports the excess kurtosis of the raw values.
inline PowerLawFit histogram_powerlaw(const std::vector<double>& values, double tail_quantile = 0.9, int bins = 20) {
    PowerLawFit fit;
    fit.excess_kurtosis = moments(values).excess_kurtosis;
    std::vector<double> abs_v;
    abs_v.reserve(values.size());
    for (double v : values) abs_v.push_back(std::abs(v));
    if (abs_v.size() < 10) {
        fit.b = std::numeric_limits<double>::quiet_NaN();
        return fit;
    }
    std::sort(abs_v.begin(), abs_v.end());
    const std::size_t start = static_cast<std::size_t>(tail_quantile * (abs_v.size() - 1));
    fit.threshold = abs_v[start];
    const double top = abs_v.back();
    if (!(fit.threshold > 0.0) || !(top > fit.threshold)) {
        fit.b = std::numeric_limits<double>::quiet_NaN();
        return fit;
    }
    const double l0 = std::log(fit.threshold), l1 = std::log(top) + 1e-12;
    const double dl = (l1 - l0) / bins;
    std::vector<long> count(bins, 0);
    for (std::size_t k = start; k < abs_v.size(); ++k)
        ++count[std::min(bins - 1, static_cast<int>((std::log(abs_v[k]) - l0) / dl))];
    std::vector<double> lx, ly;
    const double total = static_cast<double>(abs_v.size());
    for (int b = 0; b < bins; ++b) {
        if (count[b] == 0) continue;
        const double lo = std::exp(l0 + b * dl), hi = std::exp(l0 + (b + 1) * dl);
        lx.push_back(0.5 * (std::log(lo) + std::log(hi)));
        ly.push_back(std::log(count[b] / (total * (hi - lo))));
    }
    fit.points = static_cast<int>(lx.size());
    if (fit.points < 3) {
        fit.b = std::numeric_limits<double>::quiet_NaN();
        return fit;
    }
    Eigen::MatrixXd A(fit.points, 2);
    Eigen::VectorXd y(fit.points);
    for (int r = 0; r < fit.points; ++r) {
        A(r, 0) = 1.0;
        A(r, 1) = lx[r];
        y(r) = ly[r];
    }
    const Eigen::VectorXd c = detail::least_squares(A, y);
    fit.a = std::exp(c(0));
    fit.b = -c(1);
    fit.goodness = std::sqrt((A * c - y).squaredNorm() / fit.points);
    return fit;
}

} // namespace lscar
