#pragma once

#include "dnlat/params.hpp"
#include "dnlat/state.hpp"

#include <Eigen/Dense>

namespace dnlat {

// Lattice operators on the truncation. Out-of-range neighbors are zero
// (ZeroPadding) or wrap around (Periodic). All four are expression-friendly
// free functions; the *_into variants write into a preallocated vector and
// are the ones used inside integration loops.

namespace detail {

template <typename Derived, typename Scalar>
void neighbor_sum_into(const Eigen::MatrixBase<Derived>& phi, BoundaryPolicy bc,
                       Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& out) {
    const Eigen::Index m = phi.size();
    out.resize(m);
    if (m == 1) {
        // single site: both neighbors are the site itself under Periodic
        out[0] = bc == BoundaryPolicy::Periodic ? Scalar(phi[0] + phi[0]) : Scalar(0);
        return;
    }
    out.segment(1, m - 2) = phi.segment(2, m - 2) + phi.segment(0, m - 2);
    if (bc == BoundaryPolicy::Periodic) {
        out[0] = phi[1] + phi[m - 1];
        out[m - 1] = phi[0] + phi[m - 2];
    } else {
        out[0] = phi[1];
        out[m - 1] = phi[m - 2];
    }
}

} // namespace detail

// (Delta phi)_n = phi_{n+1} + phi_{n-1}
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1>
apply_shift_laplacian(const Eigen::MatrixBase<Derived>& phi, BoundaryPolicy bc) {
    Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> out;
    detail::neighbor_sum_into(phi, bc, out);
    return out;
}

// (A phi)_n = phi_{n+1} - 2 phi_n + phi_{n-1}
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1>
apply_second_difference(const Eigen::MatrixBase<Derived>& phi, BoundaryPolicy bc) {
    auto out = apply_shift_laplacian(phi, bc);
    out -= 2.0 * phi;
    return out;
}

// (B phi)_n = phi_{n+1} - phi_n
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1>
apply_forward_difference(const Eigen::MatrixBase<Derived>& phi, BoundaryPolicy bc) {
    using Scalar = typename Derived::Scalar;
    const Eigen::Index m = phi.size();
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> out(m);
    if (m == 1) {
        out[0] = bc == BoundaryPolicy::Periodic ? Scalar(0) : Scalar(-phi[0]);
        return out;
    }
    out.head(m - 1) = phi.tail(m - 1) - phi.head(m - 1);
    out[m - 1] = (bc == BoundaryPolicy::Periodic ? Scalar(phi[0]) : Scalar(0)) - phi[m - 1];
    return out;
}

// (B* phi)_n = phi_{n-1} - phi_n
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1>
apply_backward_difference(const Eigen::MatrixBase<Derived>& phi, BoundaryPolicy bc) {
    using Scalar = typename Derived::Scalar;
    const Eigen::Index m = phi.size();
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> out(m);
    if (m == 1) {
        out[0] = bc == BoundaryPolicy::Periodic ? Scalar(0) : Scalar(-phi[0]);
        return out;
    }
    out.tail(m - 1) = phi.head(m - 1) - phi.tail(m - 1);
    out[0] = (bc == BoundaryPolicy::Periodic ? Scalar(phi[m - 1]) : Scalar(0)) - phi[0];
    return out;
}

inline LatticeState apply_shift_laplacian(const LatticeState& s, BoundaryPolicy bc) {
    return LatticeState{apply_shift_laplacian(s.amplitudes, bc), s.n_half};
}
inline LatticeState apply_second_difference(const LatticeState& s, BoundaryPolicy bc) {
    return LatticeState{apply_second_difference(s.amplitudes, bc), s.n_half};
}
inline LatticeState apply_forward_difference(const LatticeState& s, BoundaryPolicy bc) {
    return LatticeState{apply_forward_difference(s.amplitudes, bc), s.n_half};
}
inline LatticeState apply_backward_difference(const LatticeState& s, BoundaryPolicy bc) {
    return LatticeState{apply_backward_difference(s.amplitudes, bc), s.n_half};
}

} // namespace dnlat
