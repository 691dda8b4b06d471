#pragma once

#include <stdexcept>
#include <string>

namespace dnlat {

// How out-of-range neighbors are resolved on the finite truncation |n| <= N.
enum class BoundaryPolicy { ZeroPadding, Periodic };

// Which right-hand side is evolved. DfAL uses the nonlocal cubic term only,
// DfDNLS the local one, Combined uses both.
enum class RhsKind { DfAL, DfDNLS, Combined };

inline const char* to_string(BoundaryPolicy bc) {
    return bc == BoundaryPolicy::ZeroPadding ? "zero" : "periodic";
}

inline const char* to_string(RhsKind kind) {
    switch (kind) {
        case RhsKind::DfAL: return "dfal";
        case RhsKind::DfDNLS: return "dfdnls";
        default: return "combined";
    }
}

struct ModelParams {
    double kappa = 1.0;  // linear coupling; every closed-form check assumes 1
    double mu = 0.0;     // nonlocal (AL) cubic strength, >= 0
    double gamma = 0.0;  // local (DNLS) cubic strength, >= 0
    double delta = 1.0;  // damping, > 0 except in the conservative limit
    BoundaryPolicy boundary = BoundaryPolicy::ZeroPadding;

    void validate(bool allow_zero_delta = false) const {
        if (mu < 0.0) throw std::invalid_argument("mu must be >= 0");
        if (gamma < 0.0) throw std::invalid_argument("gamma must be >= 0");
        if (delta < 0.0 || (!allow_zero_delta && delta == 0.0))
            throw std::invalid_argument("delta must be positive");
    }
};

// A ball B_R centered at zero in the truncated l^2 space.
struct BallSpec {
    double radius = 0.0;

    explicit BallSpec(double r = 0.0) : radius(r) {
        if (radius < 0.0) throw std::invalid_argument("ball radius must be >= 0");
    }
};

} // namespace dnlat
