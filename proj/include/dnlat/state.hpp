#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace dnlat {

using Complex = std::complex<double>;
using StateVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Finite truncation of a complex sequence indexed n = -N..N.
// Site n lives in slot n + n_half; amplitudes.size() == 2*n_half + 1.
struct LatticeState {
    StateVector amplitudes;
    int n_half = 0;

    int size() const { return static_cast<int>(amplitudes.size()); }
    int slot(int n) const { return n + n_half; }
    Complex at(int n) const { return amplitudes[slot(n)]; }
    Complex& at(int n) { return amplitudes[slot(n)]; }
};

inline LatticeState make_state(StateVector values, int n_half) {
    if (n_half < 0) throw std::invalid_argument("n_half must be >= 0");
    if (values.size() != 2 * static_cast<Eigen::Index>(n_half) + 1)
        throw std::invalid_argument("state length " + std::to_string(values.size()) +
                                    " does not match 2*n_half+1 = " + std::to_string(2 * n_half + 1));
    if (!values.allFinite()) throw std::invalid_argument("state contains a non-finite entry");
    return LatticeState{std::move(values), n_half};
}

inline LatticeState make_state(const std::vector<Complex>& values, int n_half) {
    StateVector v = Eigen::Map<const StateVector>(values.data(), static_cast<Eigen::Index>(values.size()));
    return make_state(std::move(v), n_half);
}

inline LatticeState zero_state(int n_half) {
    return make_state(StateVector::Zero(2 * n_half + 1), n_half);
}

// Sequence norms over the truncation. Free functions accepting any Eigen
// expression so callers can pass differences and segments directly.

template <typename Derived>
double l2_norm(const Eigen::MatrixBase<Derived>& v) {
    return v.derived().norm();
}

template <typename Derived>
double l1_norm(const Eigen::MatrixBase<Derived>& v) {
    return v.derived().array().abs().sum();
}

template <typename Derived>
double l4_norm(const Eigen::MatrixBase<Derived>& v) {
    return std::sqrt(std::sqrt(v.derived().array().abs2().square().sum()));
}

template <typename Derived>
double linf_norm(const Eigen::MatrixBase<Derived>& v) {
    if (v.derived().size() == 0) return 0.0;
    return v.derived().array().abs().maxCoeff();
}

inline double l2_norm(const LatticeState& s) { return l2_norm(s.amplitudes); }
inline double l1_norm(const LatticeState& s) { return l1_norm(s.amplitudes); }
inline double l4_norm(const LatticeState& s) { return l4_norm(s.amplitudes); }
inline double linf_norm(const LatticeState& s) { return linf_norm(s.amplitudes); }

// l^2 inner product (u, v) = sum_n u_n conj(v_n).
template <typename DerivedU, typename DerivedV>
std::complex<double> l2_inner(const Eigen::MatrixBase<DerivedU>& u, const Eigen::MatrixBase<DerivedV>& v) {
    return v.derived().dot(u.derived());
}

} // namespace dnlat
