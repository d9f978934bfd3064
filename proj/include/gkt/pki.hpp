#pragma once

// In-process certificate authority. Certificates are Schnorr signatures in
// the protocol's own group over the fixed-width encoding id || public key.

#include <map>
#include <optional>
#include <span>
#include <vector>

#include "gkt/group_math.hpp"

namespace gkt {

struct Signature {
    Scalar commitment;  // e = H(R || m) mod q
    Scalar response;    // s = k - x*e mod q

    friend bool operator==(const Signature& a, const Signature& b) {
        return a.commitment == b.commitment && a.response == b.response;
    }
};

struct CaKeypair {
    Scalar signing_scalar;
    GroupElement verify_element;
};

struct Certificate {
    Scalar member_id;
    GroupElement public_key;
    Signature signature;

    friend bool operator==(const Certificate& a, const Certificate& b) {
        return a.member_id == b.member_id && a.public_key == b.public_key && a.signature == b.signature;
    }
};

struct Member {
    Scalar id;
    Scalar private_key;
    GroupElement public_key;
    Certificate certificate;
};

inline CaKeypair ca_from_signing_scalar(const GroupParams& params, const Scalar& signing_scalar) {
    if (!params.is_scalar(signing_scalar.value) || sgn(signing_scalar.value) == 0) {
        throw Error(ErrorCode::OutOfRange, "CA signing scalar must lie in [1, q-1]");
    }
    return CaKeypair{signing_scalar, params.exp_g(signing_scalar)};
}

inline CaKeypair ca_keygen(const GroupParams& params, Rng& rng) {
    return ca_from_signing_scalar(params, random_scalar(rng, params.q(), false));
}

namespace detail {

inline Scalar challenge(const GroupParams& params, const GroupElement& commitment_point,
                        std::span<const std::uint8_t> message) {
    Bytes buf = to_fixed_bytes(commitment_point.value, params.p_bytes());
    buf.insert(buf.end(), message.begin(), message.end());
    const Digest d = digest(params.hash(), buf);
    return params.reduce(from_bytes(d));
}

}  // namespace detail

inline Signature sign(const GroupParams& params, const CaKeypair& ca, std::span<const std::uint8_t> message,
                      Rng& rng) {
    const Scalar nonce = random_scalar(rng, params.q(), false);
    const GroupElement commitment_point = params.exp_g(nonce);
    const Scalar e = detail::challenge(params, commitment_point, message);
    const Scalar s = params.reduce(nonce.value - ca.signing_scalar.value * e.value);
    return Signature{e, s};
}

inline bool verify(const GroupParams& params, const GroupElement& verify_element,
                   std::span<const std::uint8_t> message, const Signature& sig) {
    if (!params.is_scalar(sig.commitment.value) || !params.is_scalar(sig.response.value)) {
        return false;
    }
    if (!params.is_element(verify_element.value)) {
        return false;
    }
    // g^s * y^e = g^(k - x e + x e) = g^k
    const Integer rebuilt = mod_exp(params.g(), sig.response.value, params.p()) *
                            mod_exp(verify_element.value, sig.commitment.value, params.p()) % params.p();
    return detail::challenge(params, GroupElement{rebuilt}, message) == sig.commitment;
}

/// id as |q| bytes followed by the key as |p| bytes, both big-endian.
inline Bytes certificate_payload(const GroupParams& params, const Scalar& member_id,
                                 const GroupElement& public_key) {
    Bytes out = to_fixed_bytes(member_id.value, params.q_bytes());
    const Bytes key = to_fixed_bytes(public_key.value, params.p_bytes());
    out.insert(out.end(), key.begin(), key.end());
    return out;
}

inline bool verify_certificate(const GroupParams& params, const GroupElement& ca_verify_element,
                               const Certificate& cert) {
    if (!params.is_scalar(cert.member_id.value) || sgn(cert.member_id.value) == 0) {
        return false;
    }
    if (!params.is_element(cert.public_key.value)) {
        return false;
    }
    return verify(params, ca_verify_element, certificate_payload(params, cert.member_id, cert.public_key),
                  cert.signature);
}

inline Member member_from_private_key(const GroupParams& params, const Scalar& id, const Scalar& private_key,
                                      const CaKeypair& ca, Rng& rng) {
    if (sgn(id.value) == 0) {
        throw Error(ErrorCode::ZeroIdentifier, "identifier 0 is reserved for the key abscissa");
    }
    params.scalar(id.value);
    params.scalar(private_key.value);
    const GroupElement y = params.exp_g(private_key);
    Certificate cert{id, y, sign(params, ca, certificate_payload(params, id, y), rng)};
    return Member{id, private_key, y, std::move(cert)};
}

inline Member member_keygen(const GroupParams& params, const Scalar& id, const CaKeypair& ca, Rng& rng) {
    if (sgn(id.value) == 0) {
        throw Error(ErrorCode::ZeroIdentifier, "identifier 0 is reserved for the key abscissa");
    }
    const Scalar x = random_scalar(rng, params.q(), false);
    return member_from_private_key(params, id, x, ca, rng);
}

/// Members keyed by identifier. Iteration order is ascending id.
class Registry {
public:
    void add(Member member) {
        if (sgn(member.id.value) == 0) {
            throw Error(ErrorCode::ZeroIdentifier, "identifier 0 is reserved for the key abscissa");
        }
        const Integer key = member.id.value;
        if (!members_.emplace(key, std::move(member)).second) {
            throw Error(ErrorCode::DuplicateIdentifier, "identifier " + to_hex(key) + " already registered");
        }
    }

    bool contains(const Scalar& id) const { return members_.count(id.value) != 0; }

    const Member& at(const Scalar& id) const {
        auto it = members_.find(id.value);
        if (it == members_.end()) {
            throw Error(ErrorCode::UnknownMember, "no member with identifier " + to_hex(id.value));
        }
        return it->second;
    }

    std::size_t size() const noexcept { return members_.size(); }

    std::vector<Scalar> ids() const {
        std::vector<Scalar> out;
        out.reserve(members_.size());
        for (const auto& [id, member] : members_) {
            out.push_back(member.id);
        }
        return out;
    }

    auto begin() const { return members_.begin(); }
    auto end() const { return members_.end(); }

private:
    std::map<Integer, Member> members_;
};

}  // namespace gkt
