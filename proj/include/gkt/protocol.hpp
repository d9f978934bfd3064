#pragma once

// Broadcast group key transfer.
//
// The initiator W picks a session key K and an ephemeral s, publishes
// r = g^s, and derives with each recipient Z a one-time key
//     k_Z = (y_Z^(x_W + s) mod p) mod q = ((r * y_W)^(x_Z) mod p) mod q.
// It interpolates f through (0, K) and every (ID_Z, k_Z), then broadcasts
// l further points of f at fresh abscissas together with h(t || K).
// A recipient adds its own (ID_Z, k_Z), interpolates, and reads K = f(0).

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <string_view>
#include <variant>
#include <vector>

#include "gkt/group_math.hpp"
#include "gkt/hash.hpp"
#include "gkt/pki.hpp"

namespace gkt {

using Timestamp = std::uint64_t;

inline constexpr Timestamp kDefaultFreshnessWindow = 120;

enum class MessageFormat {
    Addressed,     // carries initiator and recipient identifiers
    PaperLiteral,  // identifiers omitted; every receiver must try to recover
};

struct BroadcastMessage {
    MessageFormat format = MessageFormat::Addressed;
    Scalar initiator_id;               // unset (0) in PaperLiteral format
    std::vector<Scalar> recipient_ids;  // empty in PaperLiteral format
    GroupElement r;
    Timestamp t = 0;
    std::vector<Point> public_points;
    Digest key_commitment{};

    bool addressed() const noexcept { return format == MessageFormat::Addressed; }

    bool is_recipient(const Scalar& id) const {
        return std::find(recipient_ids.begin(), recipient_ids.end(), id) != recipient_ids.end();
    }

    friend bool operator==(const BroadcastMessage& a, const BroadcastMessage& b) {
        return a.format == b.format && a.initiator_id == b.initiator_id && a.recipient_ids == b.recipient_ids &&
               a.r == b.r && a.t == b.t && a.public_points == b.public_points &&
               a.key_commitment == b.key_commitment;
    }
};

struct SessionKey {
    Scalar key;

    friend bool operator==(const SessionKey& a, const SessionKey& b) { return a.key == b.key; }
};

enum class RejectReason { StaleTimestamp, CommitmentMismatch, NotAddressed, MalformedMessage };

constexpr std::string_view to_string(RejectReason r) noexcept {
    switch (r) {
        case RejectReason::StaleTimestamp: return "StaleTimestamp";
        case RejectReason::CommitmentMismatch: return "CommitmentMismatch";
        case RejectReason::NotAddressed: return "NotAddressed";
        case RejectReason::MalformedMessage: return "MalformedMessage";
    }
    return "Unknown";
}

class AcceptanceResult {
public:
    static AcceptanceResult accept(SessionKey key) { return AcceptanceResult(std::move(key)); }
    static AcceptanceResult reject(RejectReason reason) { return AcceptanceResult(reason); }

    bool accepted() const noexcept { return std::holds_alternative<SessionKey>(outcome_); }
    const SessionKey& key() const { return std::get<SessionKey>(outcome_); }
    RejectReason reason() const { return std::get<RejectReason>(outcome_); }

    bool rejected_for(RejectReason r) const { return !accepted() && reason() == r; }

    friend bool operator==(const AcceptanceResult& a, const AcceptanceResult& b) {
        return a.outcome_ == b.outcome_;
    }

private:
    explicit AcceptanceResult(SessionKey key) : outcome_(std::move(key)) {}
    explicit AcceptanceResult(RejectReason reason) : outcome_(reason) {}

    std::variant<SessionKey, RejectReason> outcome_;
};

inline Scalar pairwise_key_initiator(const GroupParams& params, const Scalar& x_w, const Scalar& s,
                                     const GroupElement& y_z) {
    const Integer exponent = (x_w.value + s.value) % params.q();
    return params.reduce(mod_exp(y_z.value, exponent, params.p()));
}

inline Scalar pairwise_key_recipient(const GroupParams& params, const Scalar& x_z, const GroupElement& r,
                                     const GroupElement& y_w) {
    const Integer base = r.value * y_w.value % params.p();
    return params.reduce(mod_exp(base, x_z.value, params.p()));
}

/// H(t as 8 bytes || K as |q| bytes), big-endian.
inline Digest hash_commitment(const GroupParams& params, Timestamp t, const Scalar& key) {
    Bytes buf;
    buf.reserve(8 + params.q_bytes());
    append_be64(buf, t);
    const Bytes k = to_fixed_bytes(key.value, params.q_bytes());
    buf.insert(buf.end(), k.begin(), k.end());
    return digest(params.hash(), buf);
}

/// Draws `count` distinct abscissas uniformly from Z_q minus {0} and `excluded`.
inline std::vector<Scalar> choose_public_abscissas(const GroupParams& params, std::span<const Scalar> excluded,
                                                   std::size_t count, Rng& rng) {
    std::set<Integer> taken;
    taken.insert(0);
    for (const Scalar& id : excluded) {
        taken.insert(params.reduce(id.value).value);
    }
    const Integer free_slots = params.q() - static_cast<unsigned long>(taken.size());
    if (free_slots < static_cast<unsigned long>(count)) {
        throw Error(ErrorCode::AbscissaExhausted, "not enough free abscissas in Z_q");
    }
    std::vector<Scalar> out;
    out.reserve(count);
    while (out.size() < count) {
        Scalar a = random_scalar(rng, params.q(), false);
        if (taken.insert(a.value).second) {
            out.push_back(std::move(a));
        }
    }
    return out;
}

/// The l public points of the polynomial through (0, key) and `shares`.
inline std::vector<Point> public_points_for(const GroupParams& params, const Scalar& key,
                                            std::span<const Point> shares, std::span<const Scalar> abscissas) {
    std::vector<Point> defining;
    defining.reserve(shares.size() + 1);
    defining.push_back(Point{Scalar{0}, key});
    defining.insert(defining.end(), shares.begin(), shares.end());
    std::vector<Point> out;
    out.reserve(abscissas.size());
    for (const Scalar& a : abscissas) {
        out.push_back(Point{a, lagrange_eval(defining, a, params.q())});
    }
    return out;
}

struct BuiltBroadcast {
    BroadcastMessage message;
    Scalar ephemeral;  // s, retained by the initiator
};

/// Deterministic core of broadcast construction with caller-chosen s and
/// abscissas. Recipient certificates are checked against the CA.
inline BuiltBroadcast build_broadcast_with(const GroupParams& params, const GroupElement& ca_verify_element,
                                           const Member& initiator, std::span<const Certificate> recipient_certs,
                                           const SessionKey& key, Timestamp t, const Scalar& ephemeral,
                                           std::span<const Scalar> abscissas,
                                           MessageFormat format = MessageFormat::Addressed) {
    if (recipient_certs.empty()) {
        throw Error(ErrorCode::EmptyGroup, "a broadcast needs at least one recipient");
    }
    params.scalar(key.key.value);
    params.scalar(ephemeral.value);

    std::set<Integer> ids;
    std::vector<Point> shares;
    shares.reserve(recipient_certs.size());
    for (const Certificate& cert : recipient_certs) {
        if (!verify_certificate(params, ca_verify_element, cert)) {
            throw Error(ErrorCode::CertificateInvalid, "certificate for " + to_hex(cert.member_id.value) +
                                                           " does not verify");
        }
        if (!ids.insert(cert.member_id.value).second) {
            throw Error(ErrorCode::DuplicateRecipient, "recipient " + to_hex(cert.member_id.value) +
                                                           " listed twice");
        }
        shares.push_back(Point{cert.member_id,
                               pairwise_key_initiator(params, initiator.private_key, ephemeral, cert.public_key)});
    }

    if (abscissas.size() != recipient_certs.size()) {
        throw Error(ErrorCode::InvalidAbscissa, "need exactly one public abscissa per recipient");
    }
    std::set<Integer> seen;
    for (const Scalar& a : abscissas) {
        if (!params.is_scalar(a.value) || sgn(a.value) == 0 || ids.count(a.value) != 0 ||
            !seen.insert(a.value).second) {
            throw Error(ErrorCode::InvalidAbscissa,
                        "abscissa " + to_hex(abs(a.value)) + " is zero, repeated, out of range or a recipient id");
        }
    }

    BroadcastMessage msg;
    msg.format = format;
    if (format == MessageFormat::Addressed) {
        msg.initiator_id = initiator.id;
        for (const Certificate& cert : recipient_certs) {
            msg.recipient_ids.push_back(cert.member_id);
        }
    } else {
        msg.initiator_id = Scalar{0};
    }
    msg.r = params.exp_g(ephemeral);
    msg.t = t;
    msg.public_points = public_points_for(params, key.key, shares, abscissas);
    msg.key_commitment = hash_commitment(params, t, key.key);
    return BuiltBroadcast{std::move(msg), ephemeral};
}

inline BuiltBroadcast build_broadcast(const GroupParams& params, const GroupElement& ca_verify_element,
                                      const Member& initiator, std::span<const Certificate> recipient_certs,
                                      const SessionKey& key, Timestamp t, Rng& rng,
                                      MessageFormat format = MessageFormat::Addressed) {
    if (recipient_certs.empty()) {
        throw Error(ErrorCode::EmptyGroup, "a broadcast needs at least one recipient");
    }
    const Scalar s = random_scalar(rng, params.q(), false);
    std::vector<Scalar> ids;
    ids.reserve(recipient_certs.size());
    for (const Certificate& cert : recipient_certs) {
        ids.push_back(cert.member_id);
    }
    const std::vector<Scalar> abscissas = choose_public_abscissas(params, ids, recipient_certs.size(), rng);
    return build_broadcast_with(params, ca_verify_element, initiator, recipient_certs, key, t, s, abscissas,
                                format);
}

struct ReceiverPolicy {
    Timestamp freshness_window = kDefaultFreshnessWindow;
};

inline bool is_fresh(Timestamp t, Timestamp now, Timestamp window) {
    const Timestamp skew = now >= t ? now - t : t - now;
    return skew <= window;
}

/// Structural checks a receiver can make before touching its secret.
inline bool well_formed(const GroupParams& params, const BroadcastMessage& msg) {
    const std::size_t l = msg.public_points.size();
    if (l == 0 || !params.is_element(msg.r.value)) {
        return false;
    }
    std::set<Integer> abscissas;
    for (const Point& pt : msg.public_points) {
        if (!params.is_scalar(pt.x.value) || !params.is_scalar(pt.y.value) || sgn(pt.x.value) == 0 ||
            !abscissas.insert(pt.x.value).second) {
            return false;
        }
    }
    if (!msg.addressed()) {
        return true;
    }
    if (msg.recipient_ids.size() != l || !params.is_scalar(msg.initiator_id.value)) {
        return false;
    }
    std::set<Integer> ids;
    for (const Scalar& id : msg.recipient_ids) {
        if (!params.is_scalar(id.value) || sgn(id.value) == 0 || abscissas.count(id.value) != 0 ||
            !ids.insert(id.value).second) {
            return false;
        }
    }
    return true;
}

/// Key recovery from the receiver's own share plus the public points.
inline Scalar recover_key(const GroupParams& params, const Scalar& my_id, const Scalar& my_share,
                          std::span<const Point> public_points) {
    std::vector<Point> pts;
    pts.reserve(public_points.size() + 1);
    pts.push_back(Point{my_id, my_share});
    pts.insert(pts.end(), public_points.begin(), public_points.end());
    return lagrange_eval(pts, Scalar{0}, params.q());
}

inline AcceptanceResult process_broadcast(const GroupParams& params, const Member& me,
                                          const Certificate& initiator_cert, const BroadcastMessage& msg,
                                          Timestamp now, const ReceiverPolicy& policy = {}) {
    if (msg.addressed() && !msg.is_recipient(me.id)) {
        return AcceptanceResult::reject(RejectReason::NotAddressed);
    }
    if (!well_formed(params, msg)) {
        return AcceptanceResult::reject(RejectReason::MalformedMessage);
    }
    if (msg.addressed() && !(initiator_cert.member_id == msg.initiator_id)) {
        return AcceptanceResult::reject(RejectReason::MalformedMessage);
    }
    // Under the literal format a bystander's id may coincide with a public abscissa.
    for (const Point& pt : msg.public_points) {
        if (pt.x == me.id) {
            return AcceptanceResult::reject(RejectReason::MalformedMessage);
        }
    }

    const Scalar k = pairwise_key_recipient(params, me.private_key, msg.r, initiator_cert.public_key);
    const Scalar recovered = recover_key(params, me.id, k, msg.public_points);

    if (!is_fresh(msg.t, now, policy.freshness_window)) {
        return AcceptanceResult::reject(RejectReason::StaleTimestamp);
    }
    if (hash_commitment(params, msg.t, recovered) != msg.key_commitment) {
        return AcceptanceResult::reject(RejectReason::CommitmentMismatch);
    }
    return AcceptanceResult::accept(SessionKey{recovered});
}

}  // namespace gkt
