#pragma once
// Model parameters and truncated frequency lattices for the symplectic
// Hilbert scale H_h.  The per-mode weight is fixed to theta_n = (1+|n|^2)^{1/2}
// and every report downstream states it, since all fitted constants depend on
// this normalization.

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace floerlab {

inline constexpr double kPi = 3.14159265358979323846;

enum class ModelKind { wave, schrodinger };

inline std::string to_string(ModelKind k) {
    return k == ModelKind::wave ? "wave" : "schrodinger";
}

struct ValidationError : std::runtime_error {
    std::string field;
    ValidationError(std::string f, const std::string& msg)
        : std::runtime_error(f + ": " + msg), field(std::move(f)) {}
};

// Dispersion model on T^N plus the scale exponents used by the norms.
struct ModelSpec {
    ModelKind kind = ModelKind::wave;
    int a = 1;             // wave mass term (lambda_n = sqrt(|n|^2 + a)); ignored for schrodinger
    int N = 1;             // spatial dimension
    double T = 2.0 * kPi;  // period of the twisted loops
    double h = 6.0;        // regularizing exponent of the nonlinearity
    double h_prime = 4.0;  // intermediate exponent, h0 < h' < h
    int k = 2;             // Sobolev index, 1 < k <= floor(h/d)

    int d() const { return kind == ModelKind::wave ? 1 : 2; }

    // Zero mode is dropped whenever lambda_0 would vanish (wave a=0) or the
    // model is posed on zero-mean data (schrodinger).
    bool zero_mean() const {
        return kind == ModelKind::schrodinger || (kind == ModelKind::wave && a == 0);
    }

    void validate() const {
        if (N < 1 || N > 4) throw ValidationError("N", "dimension must be in 1..4");
        if (T <= 0.0) throw ValidationError("T", "period must be positive");
        if (kind == ModelKind::wave && a < 0) throw ValidationError("a", "wave mass must be >= 0");
        if (h <= 0.0) throw ValidationError("h", "h must be positive");
        if (!(h_prime < h)) throw ValidationError("h_prime", "requires h' < h");
        int kmax = static_cast<int>(std::floor(h / d()));
        if (!(k > 1 && k <= kmax))
            throw ValidationError("k", "requires 1 < k <= floor(h/d) = " + std::to_string(kmax));
    }
};

// Integer lattice vector; capacity covers N <= 4.
using Mode = std::array<int, 4>;

struct ModeSet {
    int N = 1;
    int n_max = 1;
    std::vector<Mode> lattice;   // lexicographic enumeration
    std::vector<double> theta;   // (1 + |n|^2)^{1/2}
    std::vector<double> abs2;    // |n|^2

    std::size_t size() const { return lattice.size(); }
};

inline double mode_abs2(const Mode& n, int N) {
    double s = 0.0;
    for (int i = 0; i < N; ++i) s += double(n[i]) * double(n[i]);
    return s;
}

// Deterministic lexicographic enumeration of {|n|_inf <= n_max}, zero mode
// excluded when the model requires zero mean.
inline ModeSet build_lattice(const ModelSpec& spec, int n_max) {
    if (n_max < 1) throw ValidationError("n_max", "must be >= 1");
    ModeSet ms;
    ms.N = spec.N;
    ms.n_max = n_max;
    std::vector<int> cur(spec.N, -n_max);
    const auto push = [&](const std::vector<int>& v) {
        bool zero = true;
        for (int c : v)
            if (c != 0) zero = false;
        if (zero && spec.zero_mean()) return;
        Mode m{0, 0, 0, 0};
        for (int i = 0; i < spec.N; ++i) m[i] = v[i];
        ms.lattice.push_back(m);
        double a2 = mode_abs2(m, spec.N);
        ms.abs2.push_back(a2);
        ms.theta.push_back(std::sqrt(1.0 + a2));
    };
    // odometer over the box, lexicographic
    while (true) {
        push(cur);
        int i = spec.N - 1;
        while (i >= 0 && cur[i] == n_max) {
            cur[i] = -n_max;
            --i;
        }
        if (i < 0) break;
        ++cur[i];
    }
    return ms;
}

// Sign classification for the real cos/sin basis: a nonzero lattice vector is
// "positive" when its first nonzero component is positive.
inline int mode_sign(const Mode& n, int N) {
    for (int i = 0; i < N; ++i) {
        if (n[i] > 0) return +1;
        if (n[i] < 0) return -1;
    }
    return 0;
}

}  // namespace floerlab
