#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace cvt {

// Measurement outcomes and coherent amplitudes live on the complex plane,
// beta = x_- + i p_+ in dimensionless quadrature units.
using Amplitude = std::complex<double>;

inline bool is_finite(Amplitude z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

enum class ResourceKind { Standard, PhotonSubtracted, PhotonAdded };

enum class Parity { Even, Odd };

inline const char* to_string(ResourceKind k) {
    switch (k) {
        case ResourceKind::Standard: return "standard";
        case ResourceKind::PhotonSubtracted: return "subtracted";
        case ResourceKind::PhotonAdded: return "added";
    }
    return "?";
}

// Bounds every infinite Fock sum: keep levels until the neglected
// probability mass drops below epsilon, never exceeding hard_cap.
struct TruncationPolicy {
    double epsilon = 1e-12;
    int hard_cap = 256;

    void validate() const {
        if (!(epsilon > 0.0 && epsilon < 1.0))
            throw std::invalid_argument("TruncationPolicy: epsilon must be in (0,1)");
        if (hard_cap < 16)
            throw std::invalid_argument("TruncationPolicy: hard_cap must be >= 16");
    }
};

struct TruncationLevel {
    int level = 0;
    bool capped = false;  // hard_cap reached before the tail dropped below epsilon
};

// Node layout for 2D complex-plane quadrature: one Gauss-Hermite tensor grid
// per integrand peak, scaled by width.
struct QuadratureSpec {
    int order = 48;
    std::vector<Amplitude> centers;
    double width = 1.0;
    bool refine = true;

    void validate() const {
        if (order < 8) throw std::invalid_argument("QuadratureSpec: order must be >= 8");
        if (!(width > 0.0)) throw std::invalid_argument("QuadratureSpec: width must be > 0");
        if (centers.empty()) throw std::invalid_argument("QuadratureSpec: centers must be non-empty");
        for (Amplitude c : centers)
            if (!is_finite(c)) throw std::invalid_argument("QuadratureSpec: non-finite center");
    }
};

struct QuadratureResult {
    double value = 0.0;
    double err_estimate = 0.0;
};

class ConvergenceError : public std::runtime_error {
public:
    explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

class TruncationError : public std::runtime_error {
public:
    TruncationError(const std::string& what, int required_dim)
        : std::runtime_error(what), required_dim(required_dim) {}
    int required_dim = 0;
};

class NonFiniteError : public std::runtime_error {
public:
    NonFiniteError(const std::string& what, Amplitude where)
        : std::runtime_error(what), where(where) {}
    Amplitude where{0.0, 0.0};
};

}  // namespace cvt
