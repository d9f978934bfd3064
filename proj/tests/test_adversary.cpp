#include <gtest/gtest.h>

#include <set>

#include "gkt/adversary.hpp"
#include "gkt/param_sets.hpp"

using namespace gkt;

namespace {

template <typename F>
ErrorCode code_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "expected gkt::Error";
    return ErrorCode::Parse;
}

constexpr Timestamp kT0 = 1'700'000'000;

struct Session {
    GroupParams params;
    CaKeypair ca;
    std::vector<Member> members;  // members[0] initiates; the rest form the group
    SessionKey key;
    BuiltBroadcast built;

    const Member& initiator() const { return members[0]; }
    std::vector<Member> group() const { return {members.begin() + 1, members.end()}; }
};

Session make_session(const GroupParams& params, std::size_t group_size, std::uint64_t seed) {
    Rng rng(seed);
    const CaKeypair ca = ca_keygen(params, rng);
    std::vector<Member> members;
    std::set<Integer> used;
    while (members.size() < group_size + 1) {
        const Scalar id = random_scalar(rng, params.q(), false);
        if (used.insert(id.value).second) members.push_back(member_keygen(params, id, ca, rng));
    }
    std::vector<Certificate> certs;
    for (std::size_t i = 1; i < members.size(); ++i) certs.push_back(members[i].certificate);
    const SessionKey key{random_scalar(rng, params.q(), false)};
    BuiltBroadcast built = build_broadcast(params, ca.verify_element, members[0], certs, key, kT0, rng);
    return Session{params, ca, std::move(members), key, std::move(built)};
}

}  // namespace

TEST(ForgeReplay, AcceptedByEveryRecipientAtTheNewTime) {
    for (int trial = 0; trial < 20; ++trial) {
        const Session s = make_session(param_sets::standard(), 1 + trial % 6, 100 + trial);
        const Timestamp t_new = kT0 + 86400 * (1 + trial);
        const BroadcastMessage forged = forge_replay(s.params, ObservedSession{s.built.message, s.key}, t_new);
        EXPECT_EQ(forged.t, t_new);
        EXPECT_EQ(forged.r, s.built.message.r);
        EXPECT_EQ(forged.public_points, s.built.message.public_points);
        EXPECT_EQ(forged.recipient_ids, s.built.message.recipient_ids);
        EXPECT_EQ(forged.initiator_id, s.built.message.initiator_id);
        for (const Member& m : s.group()) {
            const AcceptanceResult r = process_broadcast(s.params, m, s.initiator().certificate, forged, t_new);
            ASSERT_TRUE(r.accepted());
            EXPECT_EQ(r.key(), s.key);
            // The original is long stale at that time.
            EXPECT_TRUE(process_broadcast(s.params, m, s.initiator().certificate, s.built.message, t_new)
                            .rejected_for(RejectReason::StaleTimestamp));
        }
    }
}

TEST(ForgeReplay, IdentityAndFreshnessEdges) {
    const Session s = make_session(param_sets::small(), 3, 7);
    const ObservedSession observed{s.built.message, s.key};
    EXPECT_EQ(forge_replay(s.params, observed, s.built.message.t), s.built.message);

    const Timestamp t_new = kT0 + 5000;
    const BroadcastMessage forged = forge_replay(s.params, observed, t_new);
    const Member victim = s.group()[0];
    EXPECT_TRUE(process_broadcast(s.params, victim, s.initiator().certificate, forged, t_new + kDefaultFreshnessWindow + 1)
                    .rejected_for(RejectReason::StaleTimestamp));

    EXPECT_EQ(code_of([&] { forge_replay(s.params, ObservedSession{s.built.message, std::nullopt}, t_new); }),
              ErrorCode::MissingLeakedKey);
}

TEST(InsiderRecoverShares, MatchesInitiatorGroundTruth) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Session s = make_session(param_sets::standard(), 2 + seed % 9, 200 + seed);
        const auto group = s.group();
        const Member& insider = group[seed % group.size()];
        const RecoveredShareSet shares =
            insider_recover_shares(s.params, insider, s.initiator().certificate, s.built.message);
        ASSERT_EQ(shares.pairs.size(), group.size());
        for (std::size_t i = 0; i < group.size(); ++i) {
            EXPECT_EQ(shares.pairs[i].member_id, group[i].id);
            const Scalar truth =
                pairwise_key_initiator(s.params, s.initiator().private_key, s.built.ephemeral, group[i].public_key);
            EXPECT_EQ(shares.pairs[i].k, truth);
            if (group[i].id == insider.id) {
                EXPECT_EQ(shares.pairs[i].k, pairwise_key_recipient(s.params, insider.private_key, s.built.message.r,
                                                                    s.initiator().public_key));
            }
        }
    }
}

TEST(InsiderRecoverShares, NonMemberRejected) {
    const Session s = make_session(param_sets::small(), 2, 9);
    EXPECT_EQ(code_of([&] {
                  insider_recover_shares(s.params, s.initiator(), s.initiator().certificate, s.built.message);
              }),
              ErrorCode::NotAMember);
}

TEST(InsiderForgeBroadcast, AcceptedByWholeGroup) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Session s = make_session(param_sets::standard(), 2 + seed % 9, 300 + seed);
        const auto group = s.group();
        const Member& insider = group[0];
        const RecoveredShareSet shares =
            insider_recover_shares(s.params, insider, s.initiator().certificate, s.built.message);
        Rng rng(seed);
        const SessionKey k_star{random_scalar(rng, s.params.q(), false)};
        const Timestamp t_star = kT0 + 7 * 86400;
        const BroadcastMessage forged = insider_forge_broadcast(s.params, shares, s.built.message.r,
                                                                s.built.message.initiator_id, k_star, t_star, rng);
        EXPECT_EQ(forged.r, s.built.message.r);
        EXPECT_EQ(forged.initiator_id, s.initiator().id);
        for (const Point& p : forged.public_points) {
            EXPECT_NE(p.x.value, 0);
            EXPECT_FALSE(forged.is_recipient(p.x));
        }
        for (const Member& m : group) {
            const AcceptanceResult r = process_broadcast(s.params, m, s.initiator().certificate, forged, t_star);
            ASSERT_TRUE(r.accepted());
            EXPECT_EQ(r.key(), k_star);
        }
        // Outside the group the addressed format turns the forgery away.
        EXPECT_TRUE(process_broadcast(s.params, s.initiator(), s.initiator().certificate, forged, t_star)
                        .rejected_for(RejectReason::NotAddressed));
    }
}

TEST(InsiderForgeBroadcast, SameKeyAndTimeDiffersOnlyInPublicPoints) {
    const Session s = make_session(param_sets::small(), 4, 11);
    const RecoveredShareSet shares =
        insider_recover_shares(s.params, s.group()[1], s.initiator().certificate, s.built.message);
    Rng rng(12);
    const BroadcastMessage forged = insider_forge_broadcast(s.params, shares, s.built.message.r,
                                                            s.built.message.initiator_id, s.key, s.built.message.t, rng);
    EXPECT_EQ(forged.key_commitment, s.built.message.key_commitment);
    EXPECT_EQ(forged.recipient_ids, s.built.message.recipient_ids);
    EXPECT_NE(forged.public_points, s.built.message.public_points);
    for (const Member& m : s.group()) {
        const AcceptanceResult r = process_broadcast(s.params, m, s.initiator().certificate, forged, s.built.message.t);
        ASSERT_TRUE(r.accepted());
        EXPECT_EQ(r.key(), s.key);
    }
}

TEST(BruteForceDlog, Examples) {
    const GroupParams tiny = param_sets::tiny();
    EXPECT_EQ(brute_force_dlog(tiny, GroupElement{9}), Scalar{5});
    EXPECT_EQ(brute_force_dlog(tiny, GroupElement{1}), Scalar{0});
    EXPECT_EQ(brute_force_dlog(tiny, GroupElement{2}), Scalar{1});
    EXPECT_EQ(code_of([&] { brute_force_dlog(tiny, GroupElement{9}, Integer(4)); }), ErrorCode::NotFound);
    // 5 is outside the order-11 subgroup.
    EXPECT_EQ(code_of([&] { brute_force_dlog(tiny, GroupElement{5}); }), ErrorCode::NotFound);
    EXPECT_EQ(code_of([] { brute_force_dlog(param_sets::standard(), GroupElement{1}); }), ErrorCode::ParamsTooLarge);
}

TEST(BruteForceDlog, RecoversRandomExponentsOnToyGroup) {
    const GroupParams params = param_sets::toy();
    Rng rng(13);
    for (int i = 0; i < 10; ++i) {
        const Scalar x = random_scalar(rng, params.q(), true);
        EXPECT_EQ(brute_force_dlog(params, params.exp_g(x)), x);
    }
}

TEST(OutsiderRecoverKey, TinySessionGivesSeven) {
    const GroupParams params = param_sets::tiny();
    Rng rng(5);
    const CaKeypair ca = ca_from_signing_scalar(params, Scalar{3});
    const Member initiator = member_from_private_key(params, Scalar{1}, Scalar{3}, ca, rng);
    const Member recipient = member_from_private_key(params, Scalar{4}, Scalar{4}, ca, rng);
    const std::vector<Certificate> certs{recipient.certificate};
    const std::vector<Scalar> abscissas{Scalar{2}};
    const BroadcastMessage msg = build_broadcast_with(params, ca.verify_element, initiator, certs,
                                                      SessionKey{Scalar{7}}, kT0, Scalar{2}, abscissas)
                                     .message;
    EXPECT_EQ(outsider_recover_key(params, msg, recipient.certificate, initiator.certificate).key, Scalar{7});
}

TEST(OutsiderRecoverKey, HonestToySessionsAndTampering) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const Session s = make_session(param_sets::toy(), 1 + seed % 4, 400 + seed);
        const Member victim = s.group().back();
        EXPECT_EQ(outsider_recover_key(s.params, s.built.message, victim.certificate, s.initiator().certificate), s.key);

        BroadcastMessage tampered = s.built.message;
        tampered.public_points[0].y = s.params.reduce(tampered.public_points[0].y.value + 1);
        EXPECT_EQ(code_of([&] {
                      outsider_recover_key(s.params, tampered, victim.certificate, s.initiator().certificate);
                  }),
                  ErrorCode::CommitmentMismatch);
    }
}
