#include <gtest/gtest.h>

#include <set>

#include "gkt/harness.hpp"

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

Scenario scenario(ScenarioKind kind, std::vector<long> group, long initiator, std::uint64_t seed = 0) {
    Scenario s;
    s.kind = kind;
    s.seed = seed;
    for (long id : group) s.group.push_back(Scalar{id});
    s.initiator = Scalar{initiator};
    return s;
}

const Community& toy_community() {
    static const Community c = setup_community(5, ParamsSource::Toy, 1, IdMode::Sequential);
    return c;
}

}  // namespace

TEST(SetupCommunity, DeterministicUnderSeed) {
    const Community a = setup_community(5, ParamsSource::Toy, 3);
    const Community b = setup_community(5, ParamsSource::Toy, 3);
    EXPECT_EQ(to_json(a).dump(), to_json(b).dump());
    const Community c = setup_community(5, ParamsSource::Toy, 4);
    EXPECT_NE(to_json(a).dump(), to_json(c).dump());
}

TEST(SetupCommunity, IdsAndInvariants) {
    const Community& c = toy_community();
    std::set<Integer> ids;
    for (const auto& [id, m] : c.members) {
        ids.insert(id);
        EXPECT_TRUE(verify_certificate(c.params, c.ca.verify_element, m.certificate));
    }
    EXPECT_EQ(ids, (std::set<Integer>{1, 2, 3, 4, 5}));

    const Community r = setup_community(30, ParamsSource::Toy, 9);
    EXPECT_EQ(r.members.size(), 30u);
    for (const auto& [id, m] : r.members) EXPECT_NE(id, 0);

    EXPECT_EQ(code_of([] { setup_community(0, ParamsSource::Toy, 1); }), ErrorCode::OutOfRange);
    Rng rng(1);
    EXPECT_EQ(code_of([&] { setup_community(param_sets::tiny(), "tiny", 11, rng); }), ErrorCode::OutOfRange);
}

TEST(CommunityCodec, RoundTripAndValidation) {
    const Community& c = toy_community();
    const json j = to_json(c);
    const Community back = community_from_json(j);
    EXPECT_EQ(to_json(back).dump(), j.dump());

    json tampered = j;
    tampered["members"][0]["x"] = "2";
    EXPECT_EQ(code_of([&] { community_from_json(tampered); }), ErrorCode::Parse);

    json dup = j;
    dup["members"][1] = dup["members"][0];
    EXPECT_EQ(code_of([&] { community_from_json(dup); }), ErrorCode::DuplicateIdentifier);

    json bad_params = j;
    bad_params["params"]["g"] = "1";
    EXPECT_EQ(code_of([&] { community_from_json(bad_params); }), ErrorCode::BadGenerator);
}

TEST(MessageCodec, RoundTripBothFormats) {
    const Community& c = toy_community();
    Rng rng(5);
    const std::vector<Certificate> certs{c.certificate(Scalar{1}), c.certificate(Scalar{2})};
    for (MessageFormat f : {MessageFormat::Addressed, MessageFormat::PaperLiteral}) {
        for (int i = 0; i < 20; ++i) {
            const BroadcastMessage msg = build_broadcast(c.params, c.ca.verify_element, c.member(Scalar{3}), certs,
                                                         SessionKey{random_scalar(rng, c.params.q(), false)},
                                                         rng.next_u64(), rng, f)
                                             .message;
            const json j = codec::to_json(msg);
            EXPECT_EQ(codec::message_from_json(j), msg);
            EXPECT_EQ(j.contains("recipient_ids"), f == MessageFormat::Addressed);
            EXPECT_EQ(j.contains("initiator_id"), f == MessageFormat::Addressed);
        }
    }
    EXPECT_EQ(code_of([] { codec::message_from_json(json{{"format", "addressed"}}); }), ErrorCode::Parse);
}

TEST(CertificateCodec, RecordShape) {
    const Community& c = toy_community();
    const Certificate& cert = c.certificate(Scalar{2});
    const json j = codec::to_json(cert);
    EXPECT_EQ(j.size(), 4u);
    EXPECT_EQ(j.at("id"), "2");
    EXPECT_EQ(codec::certificate_from_json(j), cert);
}

TEST(RunScenario, HonestVerdict) {
    const Transcript t = run_scenario(toy_community(), scenario(ScenarioKind::Honest, {1, 2, 3}, 4));
    const VerdictEvent* v = t.last_verdict();
    ASSERT_NE(v, nullptr);
    EXPECT_TRUE(v->success);
    EXPECT_EQ(v->summary, "3/3 accepted, keys equal");
    EXPECT_TRUE(audit_transcript(t).ok());
}

TEST(RunScenario, ReplayVerdict) {
    Scenario s = scenario(ScenarioKind::Replay, {1, 2, 3}, 4);
    const Transcript t = run_scenario(toy_community(), s);
    EXPECT_EQ(t.last_verdict()->summary, "3/3 accepted forged replay");
    EXPECT_TRUE(t.last_verdict()->success);
    EXPECT_TRUE(audit_transcript(t).ok());

    s.leak_key = false;
    EXPECT_EQ(code_of([&] { run_scenario(toy_community(), s); }), ErrorCode::MissingLeakedKey);
}

TEST(RunScenario, InsiderVerdict) {
    Scenario s = scenario(ScenarioKind::Insider, {1, 2, 3}, 4);
    s.insider = Scalar{1};
    const Transcript t = run_scenario(toy_community(), s);
    EXPECT_EQ(t.last_verdict()->summary, "3/3 accepted K*");
    EXPECT_TRUE(t.last_verdict()->success);
    EXPECT_TRUE(audit_transcript(t).ok());

    s.insider = Scalar{5};
    EXPECT_EQ(code_of([&] { run_scenario(toy_community(), s); }), ErrorCode::ScenarioInvalid);
}

TEST(RunScenario, DlogVerdict) {
    Scenario s = scenario(ScenarioKind::DlogBreak, {1, 2, 3}, 4);
    s.victim = Scalar{2};
    const Transcript t = run_scenario(toy_community(), s);
    EXPECT_TRUE(t.last_verdict()->success);
    EXPECT_EQ(t.last_verdict()->summary, "recovered K equals ground truth");

    const Community big = setup_community(3, ParamsSource::Standard, 1, IdMode::Sequential);
    EXPECT_EQ(code_of([&] { run_scenario(big, scenario(ScenarioKind::DlogBreak, {1, 2}, 3)); }),
              ErrorCode::ParamsTooLarge);
}

TEST(RunScenario, PaperLiteralCountsWastedRecoveries) {
    const Community c = setup_community(8, ParamsSource::Standard, 2, IdMode::Sequential);
    const Transcript t = run_scenario(c, scenario(ScenarioKind::PaperLiteral, {1, 2, 3}, 4));
    const VerdictEvent* v = t.last_verdict();
    EXPECT_TRUE(v->success);
    EXPECT_EQ(v->deliveries, 3u);
    EXPECT_EQ(v->accepted, 3u);
    EXPECT_EQ(v->non_member_attempts, 4u);  // members 5..8; the initiator does not process its own broadcast
    EXPECT_EQ(v->non_member_mismatches, 4u);
    EXPECT_EQ(v->false_accepts, 0u);
    EXPECT_TRUE(audit_transcript(t).ok());
}

TEST(RunScenario, InvalidScenarios) {
    const Community& c = toy_community();
    EXPECT_EQ(code_of([&] { run_scenario(c, scenario(ScenarioKind::Honest, {}, 4)); }), ErrorCode::ScenarioInvalid);
    EXPECT_EQ(code_of([&] { run_scenario(c, scenario(ScenarioKind::Honest, {1, 9}, 4)); }),
              ErrorCode::ScenarioInvalid);
    EXPECT_EQ(code_of([&] { run_scenario(c, scenario(ScenarioKind::Honest, {1, 1}, 4)); }),
              ErrorCode::ScenarioInvalid);
    EXPECT_EQ(code_of([&] { run_scenario(c, scenario(ScenarioKind::Honest, {1}, 9)); }), ErrorCode::ScenarioInvalid);
}

TEST(Transcript, DeterministicBytes) {
    for (ScenarioKind kind : {ScenarioKind::Honest, ScenarioKind::Replay, ScenarioKind::DlogBreak,
                              ScenarioKind::PaperLiteral, ScenarioKind::Insider}) {
        Scenario s = scenario(kind, {1, 2, 3}, 4, 77);
        s.insider = Scalar{2};
        const std::string a = run_scenario(toy_community(), s).to_jsonl();
        const std::string b = run_scenario(toy_community(), s).to_jsonl();
        EXPECT_EQ(a, b) << to_string(kind);
        s.seed = 78;
        EXPECT_NE(a, run_scenario(toy_community(), s).to_jsonl()) << to_string(kind);
    }
}

TEST(Transcript, JsonLinesRoundTrip) {
    Scenario s = scenario(ScenarioKind::Insider, {1, 2, 3, 5}, 4, 3);
    s.insider = Scalar{5};
    const Transcript t = run_scenario(toy_community(), s);
    const std::string text = t.to_jsonl();
    const Transcript back = Transcript::from_jsonl(text);
    EXPECT_EQ(back.to_jsonl(), text);
    EXPECT_EQ(back.events().size(), t.events().size());
    EXPECT_TRUE(audit_transcript(back).ok());
    // One event per line.
    EXPECT_EQ(static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')), t.events().size());
}

TEST(Transcript, AttacksContinueFromParsedTranscript) {
    const Transcript honest = run_scenario(toy_community(), scenario(ScenarioKind::Honest, {1, 2, 3}, 4, 5));
    Transcript replay = Transcript::from_jsonl(honest.to_jsonl());
    replay_attack(replay, 600, 5);
    EXPECT_EQ(replay.last_verdict()->summary, "15/15 accepted forged replay");
    EXPECT_TRUE(audit_transcript(replay).ok());

    Transcript insider = Transcript::from_jsonl(honest.to_jsonl());
    insider_attack(insider, Scalar{3}, SessionKey{Scalar{0xabc}}, 0);
    EXPECT_TRUE(insider.last_verdict()->success);
    EXPECT_EQ(insider.last_verdict()->key, Scalar{0xabc});

    Transcript dlog = Transcript::from_jsonl(honest.to_jsonl());
    dlog_attack(dlog, Scalar{1});
    EXPECT_TRUE(dlog.last_verdict()->success);
}

TEST(Transcript, EavesdropperSeesEveryBroadcastVerbatim) {
    Scenario s = scenario(ScenarioKind::Replay, {1, 2, 3}, 4, 8);
    s.replay_rounds = 3;
    const Transcript t = run_scenario(toy_community(), s);
    for (const Event& e : t.events()) {
        if (const auto* b = std::get_if<BroadcastEvent>(&e.body)) {
            EXPECT_EQ(codec::message_from_json(codec::to_json(b->message)), b->message);
        }
    }
    // The log records one initiator broadcast and three forgeries.
    std::size_t broadcasts = 0;
    for (const Event& e : t.events()) broadcasts += std::holds_alternative<BroadcastEvent>(e.body);
    EXPECT_EQ(broadcasts, 4u);
}

TEST(Audit, DetectsInflatedVerdict) {
    const Transcript t = run_scenario(toy_community(), scenario(ScenarioKind::Honest, {1, 2, 3}, 4));
    const std::string text = t.to_jsonl();
    // Rewrite the verdict to claim an extra acceptance.
    const std::size_t last_start = text.rfind('\n', text.size() - 2) + 1;
    json verdict = json::parse(text.substr(last_start));
    verdict["accepted"] = 4;
    const std::string forged = text.substr(0, last_start) + verdict.dump() + "\n";
    const AuditReport report = audit_transcript(Transcript::from_jsonl(forged));
    EXPECT_FALSE(report.ok());

    EXPECT_EQ(code_of([&] { Transcript::from_jsonl(text + text); }), ErrorCode::Parse);  // steps restart
}
