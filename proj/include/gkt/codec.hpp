#pragma once

// JSON records for parameters, certificates, members and broadcasts.
// Every integer is a lowercase hex string without leading zeros.

#include <nlohmann/json.hpp>

#include <string>

#include "gkt/pki.hpp"
#include "gkt/protocol.hpp"

namespace gkt::codec {

using json = nlohmann::json;

namespace detail {

inline const json& field(const json& j, const char* name) {
    if (!j.is_object() || !j.contains(name)) {
        throw Error(ErrorCode::Parse, std::string("missing field '") + name + "'");
    }
    return j.at(name);
}

inline Integer hex_field(const json& j, const char* name) {
    const json& v = field(j, name);
    if (!v.is_string()) {
        throw Error(ErrorCode::Parse, std::string("field '") + name + "' must be a hex string");
    }
    return from_hex(v.get<std::string>());
}

inline std::string string_field(const json& j, const char* name) {
    const json& v = field(j, name);
    if (!v.is_string()) {
        throw Error(ErrorCode::Parse, std::string("field '") + name + "' must be a string");
    }
    return v.get<std::string>();
}

inline std::uint64_t u64_from_hex(const std::string& text) {
    const Integer v = from_hex(text);
    if (bit_length(v) > 64) {
        throw Error(ErrorCode::Parse, "value does not fit in 64 bits: " + text);
    }
    return v.get_ui();
}

inline std::string hex_u64(std::uint64_t v) {
    return to_hex(from_u64(v));
}

}  // namespace detail

inline std::string hex(const Scalar& s) { return to_hex(s.value); }
inline std::string hex(const GroupElement& e) { return to_hex(e.value); }

inline std::string timestamp_hex(Timestamp t) { return detail::hex_u64(t); }
inline Timestamp timestamp_from_hex(const std::string& text) { return detail::u64_from_hex(text); }

inline json to_json(const GroupParams& params) {
    return json{{"p", to_hex(params.p())},
                {"q", to_hex(params.q())},
                {"g", to_hex(params.g())},
                {"hash", std::string(hash_name(params.hash()))}};
}

inline GroupParams params_from_json(const json& j) {
    if (detail::string_field(j, "hash") != hash_name(kProtocolHash)) {
        throw Error(ErrorCode::Parse, "unsupported hash '" + detail::string_field(j, "hash") + "'");
    }
    return validate_params(detail::hex_field(j, "p"), detail::hex_field(j, "q"), detail::hex_field(j, "g"));
}

inline json to_json(const Certificate& cert) {
    return json{{"id", hex(cert.member_id)},
                {"y", hex(cert.public_key)},
                {"sig_commitment", hex(cert.signature.commitment)},
                {"sig_response", hex(cert.signature.response)}};
}

/// Structural decode only; use verify_certificate for the binding.
inline Certificate certificate_from_json(const json& j) {
    return Certificate{Scalar{detail::hex_field(j, "id")},
                       GroupElement{detail::hex_field(j, "y")},
                       Signature{Scalar{detail::hex_field(j, "sig_commitment")},
                                 Scalar{detail::hex_field(j, "sig_response")}}};
}

inline json to_json(const CaKeypair& ca) {
    return json{{"signing_scalar", hex(ca.signing_scalar)}, {"verify_element", hex(ca.verify_element)}};
}

inline CaKeypair ca_from_json(const json& j, const GroupParams& params) {
    const CaKeypair ca = ca_from_signing_scalar(params, params.scalar(detail::hex_field(j, "signing_scalar")));
    if (ca.verify_element.value != detail::hex_field(j, "verify_element")) {
        throw Error(ErrorCode::Parse, "CA verify element does not match its signing scalar");
    }
    return ca;
}

inline json to_json(const Member& m) {
    return json{{"id", hex(m.id)}, {"x", hex(m.private_key)}, {"y", hex(m.public_key)},
                {"certificate", to_json(m.certificate)}};
}

inline Member member_from_json(const json& j, const GroupParams& params, const GroupElement& ca_verify_element) {
    Member m{params.scalar(detail::hex_field(j, "id")), params.scalar(detail::hex_field(j, "x")),
             GroupElement{detail::hex_field(j, "y")}, certificate_from_json(detail::field(j, "certificate"))};
    if (sgn(m.id.value) == 0) {
        throw Error(ErrorCode::ZeroIdentifier, "member record with identifier 0");
    }
    if (!(params.exp_g(m.private_key) == m.public_key)) {
        throw Error(ErrorCode::Parse, "member " + hex(m.id) + " public key does not match private key");
    }
    if (!(m.certificate.member_id == m.id) || !(m.certificate.public_key == m.public_key) ||
        !verify_certificate(params, ca_verify_element, m.certificate)) {
        throw Error(ErrorCode::CertificateInvalid, "member " + hex(m.id) + " certificate does not verify");
    }
    return m;
}

inline std::string_view format_name(MessageFormat f) {
    return f == MessageFormat::Addressed ? "addressed" : "paper-literal";
}

/// Wire record of a broadcast. The literal format carries no identifiers.
inline json to_json(const BroadcastMessage& msg) {
    json points = json::array();
    for (const Point& pt : msg.public_points) {
        points.push_back(json::array({hex(pt.x), hex(pt.y)}));
    }
    json j{{"format", std::string(format_name(msg.format))},
           {"r", hex(msg.r)},
           {"t", timestamp_hex(msg.t)},
           {"points", std::move(points)},
           {"commitment_hex", digest_to_hex(msg.key_commitment)}};
    if (msg.addressed()) {
        json ids = json::array();
        for (const Scalar& id : msg.recipient_ids) {
            ids.push_back(hex(id));
        }
        j["initiator_id"] = hex(msg.initiator_id);
        j["recipient_ids"] = std::move(ids);
    }
    return j;
}

/// Decodes without range checks; receivers reject out-of-range content as
/// a malformed message rather than failing to parse it.
inline BroadcastMessage message_from_json(const json& j) {
    BroadcastMessage msg;
    const std::string format = detail::string_field(j, "format");
    if (format == "addressed") {
        msg.format = MessageFormat::Addressed;
    } else if (format == "paper-literal") {
        msg.format = MessageFormat::PaperLiteral;
    } else {
        throw Error(ErrorCode::Parse, "unknown message format '" + format + "'");
    }
    msg.r = GroupElement{detail::hex_field(j, "r")};
    msg.t = timestamp_from_hex(detail::string_field(j, "t"));
    const json& points = detail::field(j, "points");
    if (!points.is_array()) {
        throw Error(ErrorCode::Parse, "points must be an array");
    }
    for (const json& pt : points) {
        if (!pt.is_array() || pt.size() != 2 || !pt[0].is_string() || !pt[1].is_string()) {
            throw Error(ErrorCode::Parse, "each point must be a pair of hex strings");
        }
        msg.public_points.push_back(
            Point{Scalar{from_hex(pt[0].get<std::string>())}, Scalar{from_hex(pt[1].get<std::string>())}});
    }
    msg.key_commitment = digest_from_hex(detail::string_field(j, "commitment_hex"));
    if (msg.addressed()) {
        msg.initiator_id = Scalar{detail::hex_field(j, "initiator_id")};
        const json& ids = detail::field(j, "recipient_ids");
        if (!ids.is_array()) {
            throw Error(ErrorCode::Parse, "recipient_ids must be an array");
        }
        for (const json& id : ids) {
            if (!id.is_string()) {
                throw Error(ErrorCode::Parse, "recipient ids must be hex strings");
            }
            msg.recipient_ids.push_back(Scalar{from_hex(id.get<std::string>())});
        }
    } else {
        msg.initiator_id = Scalar{0};
    }
    return msg;
}

inline json to_json(const AcceptanceResult& result) {
    if (result.accepted()) {
        return json{{"outcome", "accepted"}, {"key", hex(result.key().key)}};
    }
    return json{{"outcome", "rejected"}, {"reason", std::string(to_string(result.reason()))}};
}

inline AcceptanceResult acceptance_from_json(const json& j) {
    const std::string outcome = detail::string_field(j, "outcome");
    if (outcome == "accepted") {
        return AcceptanceResult::accept(SessionKey{Scalar{detail::hex_field(j, "key")}});
    }
    if (outcome != "rejected") {
        throw Error(ErrorCode::Parse, "unknown outcome '" + outcome + "'");
    }
    const std::string reason = detail::string_field(j, "reason");
    for (RejectReason r : {RejectReason::StaleTimestamp, RejectReason::CommitmentMismatch, RejectReason::NotAddressed,
                           RejectReason::MalformedMessage}) {
        if (reason == to_string(r)) {
            return AcceptanceResult::reject(r);
        }
    }
    throw Error(ErrorCode::Parse, "unknown rejection reason '" + reason + "'");
}

}  // namespace gkt::codec
