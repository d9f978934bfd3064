#pragma once

// Attacks on the broadcast key transfer. Each one produces an ordinary
// BroadcastMessage that honest receivers process like any other.
//
//  - forge_replay: a leaked K plus an old broadcast re-authenticates K
//    under any new timestamp, because only h(t || K) binds the message.
//  - insider_recover_shares / insider_forge_broadcast: any recipient can
//    evaluate f at the other recipients' ids, learning every one-time key,
//    and then build a fresh polynomial through (0, K*) and those keys while
//    reusing the original r.
//  - brute_force_dlog / outsider_recover_key: with discrete logs, public
//    data alone yields K.

#include <optional>
#include <vector>

#include "gkt/protocol.hpp"

namespace gkt {

struct ObservedSession {
    BroadcastMessage msg;
    std::optional<SessionKey> leaked_key;
};

struct RecoveredShare {
    Scalar member_id;
    Scalar k;

    friend bool operator==(const RecoveredShare& a, const RecoveredShare& b) {
        return a.member_id == b.member_id && a.k == b.k;
    }
};

struct RecoveredShareSet {
    std::vector<RecoveredShare> pairs;  // same order as msg.recipient_ids
};

inline BroadcastMessage forge_replay(const GroupParams& params, const ObservedSession& observed, Timestamp t_new) {
    if (!observed.leaked_key) {
        throw Error(ErrorCode::MissingLeakedKey, "replay forgery needs the compromised session key");
    }
    BroadcastMessage forged = observed.msg;
    forged.t = t_new;
    forged.key_commitment = hash_commitment(params, t_new, observed.leaked_key->key);
    return forged;
}

inline RecoveredShareSet insider_recover_shares(const GroupParams& params, const Member& me,
                                                const Certificate& initiator_cert, const BroadcastMessage& msg) {
    if (!msg.addressed() || !msg.is_recipient(me.id)) {
        throw Error(ErrorCode::NotAMember, "member " + to_hex(me.id.value) + " is not a listed recipient");
    }
    const Scalar mine = pairwise_key_recipient(params, me.private_key, msg.r, initiator_cert.public_key);
    std::vector<Point> pts;
    pts.reserve(msg.public_points.size() + 1);
    pts.push_back(Point{me.id, mine});
    pts.insert(pts.end(), msg.public_points.begin(), msg.public_points.end());

    RecoveredShareSet out;
    out.pairs.reserve(msg.recipient_ids.size());
    for (const Scalar& id : msg.recipient_ids) {
        out.pairs.push_back(RecoveredShare{id, lagrange_eval(pts, id, params.q())});
    }
    return out;
}

inline BroadcastMessage insider_forge_broadcast(const GroupParams& params, const RecoveredShareSet& shares,
                                                const GroupElement& r_original, const Scalar& forged_initiator_id,
                                                const SessionKey& new_key, Timestamp t_star, Rng& rng) {
    if (shares.pairs.empty()) {
        throw Error(ErrorCode::EmptyGroup, "no shares to forge against");
    }
    params.scalar(new_key.key.value);
    std::vector<Scalar> ids;
    std::vector<Point> share_points;
    ids.reserve(shares.pairs.size());
    share_points.reserve(shares.pairs.size());
    for (const RecoveredShare& s : shares.pairs) {
        ids.push_back(s.member_id);
        share_points.push_back(Point{s.member_id, s.k});
    }
    const std::vector<Scalar> abscissas = choose_public_abscissas(params, ids, ids.size(), rng);

    BroadcastMessage forged;
    forged.format = MessageFormat::Addressed;
    forged.initiator_id = forged_initiator_id;
    forged.recipient_ids = std::move(ids);
    forged.r = r_original;
    forged.t = t_star;
    forged.public_points = public_points_for(params, new_key.key, share_points, abscissas);
    forged.key_commitment = hash_commitment(params, t_star, new_key.key);
    return forged;
}

inline constexpr unsigned kMaxDlogOrderBits = 24;

/// Smallest e in [0, max_exponent] with g^e = y, by linear scan.
inline Scalar brute_force_dlog(const GroupParams& params, const GroupElement& y,
                               std::optional<Integer> max_exponent = std::nullopt) {
    Integer limit = 1;
    limit <<= kMaxDlogOrderBits;
    if (params.q() > limit) {
        throw Error(ErrorCode::ParamsTooLarge, "linear-scan discrete log is limited to q <= 2^24");
    }
    // Exponents repeat with period q, so nothing beyond q - 1 needs scanning.
    Integer bound = max_exponent.value_or(params.q() - 1);
    if (bound > params.q() - 1) {
        bound = params.q() - 1;
    }
    if (sgn(bound) < 0) {
        throw Error(ErrorCode::NotFound, "empty exponent range");
    }
    const unsigned long p = params.p().get_ui();
    const unsigned long g = params.g().get_ui();
    const unsigned long target = y.value.get_ui();
    const bool fits_machine_word = params.p() < (Integer(1) << 32) && y.value < params.p() && sgn(y.value) > 0;

    if (fits_machine_word) {
        const unsigned long last = bound.get_ui();
        unsigned long acc = 1;
        for (unsigned long e = 0; e <= last; ++e) {
            if (acc == target) {
                return Scalar{Integer(e)};
            }
            acc = acc * g % p;
        }
    } else {
        Integer acc = 1;
        for (Integer e = 0; e <= bound; ++e) {
            if (acc == y.value) {
                return Scalar{e};
            }
            acc = acc * params.g() % params.p();
        }
    }
    throw Error(ErrorCode::NotFound, "no exponent up to " + to_hex(bound) + " maps to " + to_hex(y.value));
}

/// Session key from public data only: the broadcast and two certificates.
inline SessionKey outsider_recover_key(const GroupParams& params, const BroadcastMessage& msg,
                                       const Certificate& victim_cert, const Certificate& initiator_cert) {
    if (msg.addressed() && !msg.is_recipient(victim_cert.member_id)) {
        throw Error(ErrorCode::NotAMember, "victim is not a recipient of this broadcast");
    }
    const Scalar x_victim = brute_force_dlog(params, victim_cert.public_key);
    const Scalar k = pairwise_key_recipient(params, x_victim, msg.r, initiator_cert.public_key);
    Scalar key;
    try {
        key = recover_key(params, victim_cert.member_id, k, msg.public_points);
    } catch (const Error& e) {
        throw Error(ErrorCode::CommitmentMismatch, std::string("broadcast points are inconsistent: ") + e.what());
    }
    if (hash_commitment(params, msg.t, key) != msg.key_commitment) {
        throw Error(ErrorCode::CommitmentMismatch, "recovered key does not match the broadcast commitment");
    }
    return SessionKey{key};
}

}  // namespace gkt
