// One honest session on the 23/11/2 group followed by each attack,
// printed step by step.

#include <iostream>

#include "gkt/adversary.hpp"
#include "gkt/param_sets.hpp"

int main() {
    using namespace gkt;

    const GroupParams params = param_sets::tiny();
    Rng rng(7);
    const CaKeypair ca = ca_keygen(params, rng);
    const Member alice = member_from_private_key(params, Scalar{1}, Scalar{3}, ca, rng);
    const Member bob = member_from_private_key(params, Scalar{4}, Scalar{4}, ca, rng);
    const Member carol = member_from_private_key(params, Scalar{6}, Scalar{9}, ca, rng);

    const Timestamp t0 = 1'700'000'000;
    const SessionKey key{Scalar{7}};
    const std::vector<Certificate> group{bob.certificate, carol.certificate};
    const BuiltBroadcast built = build_broadcast(params, ca.verify_element, alice, group, key, t0, rng);
    const BroadcastMessage& msg = built.message;

    std::cout << "alice broadcasts r=" << msg.r.value << " t=" << t0 << " points:";
    for (const Point& pt : msg.public_points) {
        std::cout << " (" << pt.x.value << "," << pt.y.value << ")";
    }
    std::cout << "\n";
    for (const Member* m : {&bob, &carol}) {
        const AcceptanceResult r = process_broadcast(params, *m, alice.certificate, msg, t0);
        std::cout << "  member " << m->id.value << ": "
                  << (r.accepted() ? "accepted K=" + r.key().key.value.get_str() : std::string(to_string(r.reason())))
                  << "\n";
    }

    // Replay: K leaks, the old broadcast is re-dated an hour later.
    const BroadcastMessage replayed = forge_replay(params, ObservedSession{msg, key}, t0 + 3600);
    std::cout << "replay an hour later -> bob: "
              << (process_broadcast(params, bob, alice.certificate, replayed, t0 + 3600).accepted() ? "accepted"
                                                                                                    : "rejected")
              << "\n";

    // Insider: bob learns carol's one-time key and sends K* = 2 as alice.
    const RecoveredShareSet shares = insider_recover_shares(params, bob, alice.certificate, msg);
    const BroadcastMessage forged =
        insider_forge_broadcast(params, shares, msg.r, alice.id, SessionKey{Scalar{2}}, t0 + 7200, rng);
    const AcceptanceResult at_carol = process_broadcast(params, carol, alice.certificate, forged, t0 + 7200);
    std::cout << "bob impersonates alice -> carol: "
              << (at_carol.accepted() ? "accepted K=" + at_carol.key().key.value.get_str() : "rejected") << "\n";

    // Outsider: discrete logs in a toy group expose K from public data.
    const SessionKey stolen = outsider_recover_key(params, msg, carol.certificate, alice.certificate);
    std::cout << "outsider recovers K=" << stolen.key.value << " from public values\n";
    return 0;
}
