#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>

#include "bellsim/geom.hpp"

namespace bellsim {

using cplx = std::complex<double>;

inline constexpr double kNormTol = 1e-12;

// Pure two-qubit state; amplitudes indexed |00>, |01>, |10>, |11>
// (Alice's qubit first). |0> is the +1 eigenvector of sigma_z.
struct TwoQubitPureState {
    std::array<cplx, 4> amp{cplx{1, 0}, cplx{0, 0}, cplx{0, 0}, cplx{0, 0}};

    double norm_sq() const {
        double s = 0.0;
        for (const auto& a : amp) s += std::norm(a);
        return s;
    }

    bool is_normalized(double tol = kNormTol) const {
        return std::abs(norm_sq() - 1.0) <= tol;
    }

    static TwoQubitPureState singlet() {
        const double r = 1.0 / std::sqrt(2.0);
        return {{cplx{0, 0}, cplx{r, 0}, cplx{-r, 0}, cplx{0, 0}}};
    }

    static TwoQubitPureState product00() { return {}; }

    // cos(t)|00> + sin(t)|11>
    static TwoQubitPureState schmidt(double t) {
        return {{cplx{std::cos(t), 0}, cplx{0, 0}, cplx{0, 0}, cplx{std::sin(t), 0}}};
    }
};

struct BlochVector {
    double x{0.0}, y{0.0}, z{0.0};
    double norm() const { return std::sqrt(x * x + y * y + z * z); }
};

namespace detail {

// 2x2 spin projector (I + s n.sigma)/2, row-major.
inline std::array<cplx, 4> spin_projector(const UnitVector3& n, int s) {
    const double sd = static_cast<double>(s);
    return {cplx{0.5 * (1.0 + sd * n.z), 0.0},
            cplx{0.5 * sd * n.x, -0.5 * sd * n.y},
            cplx{0.5 * sd * n.x, 0.5 * sd * n.y},
            cplx{0.5 * (1.0 - sd * n.z), 0.0}};
}

inline void require_normalized(const TwoQubitPureState& state) {
    if (!state.is_normalized())
        throw std::invalid_argument("TwoQubitPureState: not normalized");
}

inline void require_sign(int s) {
    if (s != +1 && s != -1)
        throw std::invalid_argument("measurement outcome must be +1 or -1");
}

// phi = (P_A (x) I) |psi>, with P_A acting on the first qubit.
inline std::array<cplx, 4> project_alice(const TwoQubitPureState& state,
                                         const std::array<cplx, 4>& p) {
    std::array<cplx, 4> phi{};
    for (int j = 0; j < 2; ++j) {
        phi[0 * 2 + j] = p[0] * state.amp[0 * 2 + j] + p[1] * state.amp[1 * 2 + j];
        phi[1 * 2 + j] = p[2] * state.amp[0 * 2 + j] + p[3] * state.amp[1 * 2 + j];
    }
    return phi;
}

}  // namespace detail

// <alpha beta> for the singlet: -a.b.
inline double singlet_correlator(const UnitVector3& a, const UnitVector3& b) {
    return -dot(a, b);
}

// P(alpha, beta) = <psi| P_alpha^a (x) P_beta^b |psi>.
inline double joint_prob(const TwoQubitPureState& state, const UnitVector3& a,
                         const UnitVector3& b, int alpha, int beta) {
    detail::require_normalized(state);
    detail::require_sign(alpha);
    detail::require_sign(beta);
    const auto pa = detail::spin_projector(a, alpha);
    const auto pb = detail::spin_projector(b, beta);
    auto phi = detail::project_alice(state, pa);
    // apply (I (x) P_b), then inner product with psi; projectors are
    // idempotent so <psi|M|psi> = <psi|phi'>.
    std::array<cplx, 4> out{};
    for (int i = 0; i < 2; ++i) {
        out[i * 2 + 0] = pb[0] * phi[i * 2 + 0] + pb[1] * phi[i * 2 + 1];
        out[i * 2 + 1] = pb[2] * phi[i * 2 + 0] + pb[3] * phi[i * 2 + 1];
    }
    cplx ip{0, 0};
    for (int k = 0; k < 4; ++k) ip += std::conj(state.amp[k]) * out[k];
    return std::max(0.0, ip.real());
}

// P(alpha) = <psi| P_alpha^a (x) I |psi>.
inline double alice_marginal(const TwoQubitPureState& state, const UnitVector3& a,
                             int alpha) {
    detail::require_normalized(state);
    detail::require_sign(alpha);
    const auto pa = detail::spin_projector(a, alpha);
    const auto phi = detail::project_alice(state, pa);
    double p = 0.0;
    for (const auto& c : phi) p += std::norm(c);
    return p;
}

// Bloch direction of Bob's conditional state after Alice measures along a
// and obtains alpha. The conditional state of a pure bipartite state after
// a rank-1 projection on Alice's side is a product, so the direction is a
// genuine unit vector.
inline UnitVector3 bob_post_measurement_direction(const TwoQubitPureState& state,
                                                  const UnitVector3& a, int alpha) {
    detail::require_normalized(state);
    detail::require_sign(alpha);
    const auto pa = detail::spin_projector(a, alpha);
    const auto phi = detail::project_alice(state, pa);
    double p = 0.0;
    for (const auto& c : phi) p += std::norm(c);
    if (p <= 1e-12)
        throw std::domain_error("bob_post_measurement_direction: conditioning on a zero-probability outcome");

    // rho_B = Tr_A |phi><phi| / p
    std::array<cplx, 4> rho{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                rho[2 * j + k] += phi[i * 2 + j] * std::conj(phi[i * 2 + k]) / p;

    const BlochVector v{2.0 * rho[1].real(), -2.0 * rho[1].imag(),
                        (rho[0] - rho[3]).real()};
    if (std::abs(v.norm() - 1.0) > 1e-9)
        throw std::domain_error("bob_post_measurement_direction: conditional state is not pure");
    return UnitVector3::normalized(v.x, v.y, v.z);
}

using CorrelatorFn = std::function<double(const UnitVector3&, const UnitVector3&)>;

// CHSH combination |E(a,b) - E(a,b2) + E(a2,b) + E(a2,b2)|.
inline double chsh_value(const CorrelatorFn& correlator, const UnitVector3& a,
                         const UnitVector3& a2, const UnitVector3& b,
                         const UnitVector3& b2) {
    return std::abs(correlator(a, b) - correlator(a, b2) + correlator(a2, b)
                    + correlator(a2, b2));
}

// Coplanar settings (polar angles in the x-z plane, radians) maximizing the
// CHSH value for the singlet correlator -cos(theta).
struct ChshSettings {
    UnitVector3 a, a2, b, b2;

    static ChshSettings optimal() {
        return {UnitVector3::polar(0.0), UnitVector3::polar(kPi / 2.0),
                UnitVector3::polar(5.0 * kPi / 4.0), UnitVector3::polar(7.0 * kPi / 4.0)};
    }
};

}  // namespace bellsim
