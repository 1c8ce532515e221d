#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "bellsim/geom.hpp"
#include "bellsim/quantum.hpp"
#include "bellsim/rng.hpp"

namespace bellsim {

// One round's hidden variables: two independent uniform unit vectors, plus
// an optional randomizing rotation applied to the inputs.
struct SharedRandomness {
    UnitVector3 lambda1;
    UnitVector3 lambda2;
    std::optional<Rotation3> rotation;

    static SharedRandomness draw(RngStream& rng, bool with_rotation = false) {
        SharedRandomness sr;
        sr.lambda1 = sample_unit_vector(rng);
        sr.lambda2 = sample_unit_vector(rng);
        if (with_rotation) sr.rotation = sample_rotation(rng);
        return sr;
    }
};

// One protocol execution: both outputs plus the communication transcript.
// Transcript length is 1 for the one-bit protocol, 2 for teleportation and
// partial entanglement, 0 for the local baseline.
struct RoundRecord {
    int alpha{+1};
    int beta{+1};
    int transcript[2]{0, 0};
    int transcript_size{0};
};

// The one-bit protocol:
//   alpha = -sgn(a.l1)
//   c     = sgn(a.l1) sgn(a.l2)       (sent to Bob)
//   beta  = sgn(b.(l1 + c l2))
inline RoundRecord toner_bacon_round(const UnitVector3& a, const UnitVector3& b,
                                     const SharedRandomness& sr) {
    RoundRecord rec;
    const int s1 = sgn(dot(a, sr.lambda1));
    const int c = s1 * sgn(dot(a, sr.lambda2));
    rec.alpha = -s1;
    rec.transcript[0] = c;
    rec.transcript_size = 1;
    const double cd = static_cast<double>(c);
    rec.beta = sgn(b.x * (sr.lambda1.x + cd * sr.lambda2.x)
                 + b.y * (sr.lambda1.y + cd * sr.lambda2.y)
                 + b.z * (sr.lambda1.z + cd * sr.lambda2.z));
    return rec;
}

// Zero-communication baseline with a single shared unit vector:
//   alpha = -sgn(a.l), beta = sgn(b.l).
// Reproduces anticorrelation at a = b and the symmetry properties, but its
// correlator is linear in the angle rather than -cos.
inline RoundRecord bell_local_round(const UnitVector3& a, const UnitVector3& b,
                                    const UnitVector3& lambda) {
    RoundRecord rec;
    rec.alpha = -sgn(dot(a, lambda));
    rec.beta = sgn(dot(b, lambda));
    rec.transcript_size = 0;
    return rec;
}

// Input randomization wrapper: run any protocol on (Ra, Rb) instead of
// (a, b). Preserves the dot product, hence the joint statistics.
inline std::pair<UnitVector3, UnitVector3> randomize_inputs(const UnitVector3& a,
                                                            const UnitVector3& b,
                                                            const Rotation3& r) {
    return {r.apply(a), r.apply(b)};
}

// Two-bit classical teleportation: Alice holds a qubit with spin along a,
// Bob measures along b.
//   c1 = sgn(a.l1), c2 = sgn(a.l2)    (both sent)
//   beta = sgn(b.(c1 l1 + c2 l2))
// Alice produces no output; alpha is fixed at +1 by convention.
inline RoundRecord classical_teleportation_round(const UnitVector3& a,
                                                 const UnitVector3& b,
                                                 const SharedRandomness& sr) {
    RoundRecord rec;
    const int c1 = sgn(dot(a, sr.lambda1));
    const int c2 = sgn(dot(a, sr.lambda2));
    rec.alpha = +1;
    rec.transcript[0] = c1;
    rec.transcript[1] = c2;
    rec.transcript_size = 2;
    const double d1 = static_cast<double>(c1), d2 = static_cast<double>(c2);
    rec.beta = sgn(b.x * (d1 * sr.lambda1.x + d2 * sr.lambda2.x)
                 + b.y * (d1 * sr.lambda1.y + d2 * sr.lambda2.y)
                 + b.z * (d1 * sr.lambda1.z + d2 * sr.lambda2.z));
    return rec;
}

// Two-bit simulation of joint projective measurements on an arbitrary pure
// two-qubit state: Alice samples her own outcome from the exact marginal,
// computes the direction of Bob's conditional state, and teleports it
// classically. rng supplies only Alice's local outcome draw.
inline RoundRecord partial_entanglement_round(const TwoQubitPureState& state,
                                              const UnitVector3& a,
                                              const UnitVector3& b,
                                              const SharedRandomness& sr,
                                              RngStream& rng) {
    const double p_plus = alice_marginal(state, a, +1);
    const int alpha = rng.next_double() < p_plus ? +1 : -1;
    const UnitVector3 v = bob_post_measurement_direction(state, a, alpha);
    RoundRecord rec = classical_teleportation_round(v, b, sr);
    rec.alpha = alpha;
    return rec;
}

}  // namespace bellsim
