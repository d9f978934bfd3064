#pragma once

// Deterministic scenario runner.
//
// A Community is the user set, its group parameters and its CA. Scenarios
// run a session over a public broadcast channel that every community member
// (and any eavesdropper) sees, then optionally mount an attack on it. All
// randomness flows from the scenario seed and all time from a logical clock,
// so the same inputs always yield the same transcript bytes.

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "gkt/adversary.hpp"
#include "gkt/codec.hpp"
#include "gkt/param_sets.hpp"
#include "gkt/pki.hpp"
#include "gkt/protocol.hpp"

namespace gkt {

using json = nlohmann::json;

enum class ParamsSource { Toy, Standard, Generate };
enum class IdMode { Random, Sequential };

inline std::string_view to_string(ParamsSource s) {
    switch (s) {
        case ParamsSource::Toy: return "toy";
        case ParamsSource::Standard: return "std";
        case ParamsSource::Generate: return "gen";
    }
    return "unknown";
}

struct Community {
    GroupParams params;
    std::string params_source;
    CaKeypair ca;
    Registry members;

    const Member& member(const Scalar& id) const { return members.at(id); }
    const Certificate& certificate(const Scalar& id) const { return members.at(id).certificate; }
};

inline GroupParams load_params(ParamsSource source, Rng& rng) {
    switch (source) {
        case ParamsSource::Toy: return param_sets::toy();
        case ParamsSource::Standard: return param_sets::standard();
        case ParamsSource::Generate: return generate_params(rng, 1024, 160);
    }
    throw Error(ErrorCode::OutOfRange, "unknown parameter source");
}

/// Builds a community from explicit parameters. Draw order: CA key, then for
/// each member its id (random mode), private key and certificate nonce.
inline Community setup_community(const GroupParams& params, std::string source_name, std::size_t n, Rng& rng,
                                 IdMode ids = IdMode::Random) {
    if (n == 0) {
        throw Error(ErrorCode::OutOfRange, "a community needs at least one member");
    }
    if (params.q() <= static_cast<unsigned long>(n)) {
        throw Error(ErrorCode::OutOfRange, "community size must be below q");
    }
    Community c{params, std::move(source_name), ca_keygen(params, rng), {}};
    std::set<Integer> used;
    for (std::size_t i = 0; i < n; ++i) {
        Scalar id;
        if (ids == IdMode::Sequential) {
            id = Scalar{Integer(static_cast<unsigned long>(i + 1))};
        } else {
            do {
                id = random_scalar(rng, params.q(), false);
            } while (used.count(id.value) != 0);
        }
        used.insert(id.value);
        c.members.add(member_keygen(params, id, c.ca, rng));
    }
    return c;
}

inline Community setup_community(std::size_t n, ParamsSource source, std::uint64_t seed,
                                 IdMode ids = IdMode::Random) {
    Rng rng(seed);
    const GroupParams params = load_params(source, rng);
    return setup_community(params, std::string(to_string(source)), n, rng, ids);
}

inline json to_json(const Community& c) {
    json members = json::array();
    for (const auto& [id, m] : c.members) {
        members.push_back(codec::to_json(m));
    }
    return json{{"params", codec::to_json(c.params)},
                {"params_source", c.params_source},
                {"ca", codec::to_json(c.ca)},
                {"members", std::move(members)}};
}

inline Community community_from_json(const json& j) {
    const GroupParams params = codec::params_from_json(codec::detail::field(j, "params"));
    Community c{params, codec::detail::string_field(j, "params_source"),
                codec::ca_from_json(codec::detail::field(j, "ca"), params), {}};
    const json& members = codec::detail::field(j, "members");
    if (!members.is_array() || members.empty()) {
        throw Error(ErrorCode::Parse, "community needs a non-empty member array");
    }
    for (const json& m : members) {
        c.members.add(codec::member_from_json(m, params, c.ca.verify_element));
    }
    return c;
}

// ---------------------------------------------------------------------------
// Transcript

enum class ScenarioKind { Honest, Replay, Insider, DlogBreak, PaperLiteral };

inline std::string_view to_string(ScenarioKind k) {
    switch (k) {
        case ScenarioKind::Honest: return "honest";
        case ScenarioKind::Replay: return "replay";
        case ScenarioKind::Insider: return "insider";
        case ScenarioKind::DlogBreak: return "dlog";
        case ScenarioKind::PaperLiteral: return "paper-literal";
    }
    return "unknown";
}

inline ScenarioKind scenario_kind_from_string(std::string_view s) {
    for (ScenarioKind k : {ScenarioKind::Honest, ScenarioKind::Replay, ScenarioKind::Insider,
                           ScenarioKind::DlogBreak, ScenarioKind::PaperLiteral}) {
        if (s == to_string(k)) {
            return k;
        }
    }
    throw Error(ErrorCode::Parse, "unknown scenario kind '" + std::string(s) + "'");
}

struct SetupEvent {
    Community community;
    Timestamp freshness_window = kDefaultFreshnessWindow;
};

struct BroadcastEvent {
    std::string origin;            // "initiator", "replay-forgery", "insider-forgery"
    std::optional<Scalar> sender;  // who actually transmitted, when known to the simulator
    BroadcastMessage message;
};

struct DeliveryEvent {
    Scalar member;
    std::uint64_t broadcast_step = 0;
    bool in_group = false;  // member belongs to the group the session targets
    AcceptanceResult result;
};

struct AttackEvent {
    std::string kind;
    json details;
};

struct VerdictEvent {
    ScenarioKind scenario = ScenarioKind::Honest;
    bool success = false;
    std::string summary;
    std::vector<std::uint64_t> broadcasts;  // broadcast steps the counts cover
    std::size_t deliveries = 0;             // deliveries to group members
    std::size_t accepted = 0;               // group members that accepted the expected key
    std::size_t non_member_attempts = 0;
    std::size_t non_member_mismatches = 0;
    std::size_t false_accepts = 0;
    std::optional<Scalar> key;  // the key the verdict is about
};

using EventBody = std::variant<SetupEvent, BroadcastEvent, DeliveryEvent, AttackEvent, VerdictEvent>;

struct Event {
    std::uint64_t step = 0;
    Timestamp clock = 0;
    EventBody body;
};

inline json to_json(const Event& e) {
    json j{{"step", e.step}, {"clock", codec::timestamp_hex(e.clock)}};
    std::visit(
        [&](const auto& body) {
            using T = std::decay_t<decltype(body)>;
            if constexpr (std::is_same_v<T, SetupEvent>) {
                j["event"] = "setup";
                j["community"] = to_json(body.community);
                j["freshness_window"] = codec::timestamp_hex(body.freshness_window);
            } else if constexpr (std::is_same_v<T, BroadcastEvent>) {
                j["event"] = "broadcast";
                j["origin"] = body.origin;
                if (body.sender) {
                    j["sender"] = codec::hex(*body.sender);
                }
                j["message"] = codec::to_json(body.message);
            } else if constexpr (std::is_same_v<T, DeliveryEvent>) {
                j["event"] = "delivery";
                j["member"] = codec::hex(body.member);
                j["broadcast_step"] = body.broadcast_step;
                j["in_group"] = body.in_group;
                j["result"] = codec::to_json(body.result);
            } else if constexpr (std::is_same_v<T, AttackEvent>) {
                j["event"] = "attack";
                j["kind"] = body.kind;
                j["details"] = body.details;
            } else {
                j["event"] = "verdict";
                j["scenario"] = std::string(to_string(body.scenario));
                j["success"] = body.success;
                j["summary"] = body.summary;
                j["broadcasts"] = body.broadcasts;
                j["deliveries"] = body.deliveries;
                j["accepted"] = body.accepted;
                j["non_member_attempts"] = body.non_member_attempts;
                j["non_member_mismatches"] = body.non_member_mismatches;
                j["false_accepts"] = body.false_accepts;
                if (body.key) {
                    j["key"] = codec::hex(*body.key);
                }
            }
        },
        e.body);
    return j;
}

inline Event event_from_json(const json& j) {
    using codec::detail::field;
    using codec::detail::string_field;
    auto count = [&](const char* name) -> std::uint64_t {
        const json& v = field(j, name);
        if (!v.is_number_unsigned()) {
            throw Error(ErrorCode::Parse, std::string("field '") + name + "' must be a non-negative integer");
        }
        return v.get<std::uint64_t>();
    };
    auto flag = [&](const char* name) {
        const json& v = field(j, name);
        if (!v.is_boolean()) {
            throw Error(ErrorCode::Parse, std::string("field '") + name + "' must be a boolean");
        }
        return v.get<bool>();
    };

    const std::uint64_t step = count("step");
    const Timestamp clock = codec::timestamp_from_hex(string_field(j, "clock"));
    const std::string kind = string_field(j, "event");
    if (kind == "setup") {
        return Event{step, clock,
                     SetupEvent{community_from_json(field(j, "community")),
                                codec::timestamp_from_hex(string_field(j, "freshness_window"))}};
    }
    if (kind == "broadcast") {
        std::optional<Scalar> sender;
        if (j.contains("sender")) {
            sender = Scalar{codec::detail::hex_field(j, "sender")};
        }
        return Event{step, clock,
                     BroadcastEvent{string_field(j, "origin"), sender, codec::message_from_json(field(j, "message"))}};
    }
    if (kind == "delivery") {
        return Event{step, clock,
                     DeliveryEvent{Scalar{codec::detail::hex_field(j, "member")}, count("broadcast_step"),
                                   flag("in_group"), codec::acceptance_from_json(field(j, "result"))}};
    }
    if (kind == "attack") {
        return Event{step, clock, AttackEvent{string_field(j, "kind"), field(j, "details")}};
    }
    if (kind == "verdict") {
        VerdictEvent v;
        v.scenario = scenario_kind_from_string(string_field(j, "scenario"));
        v.success = flag("success");
        v.summary = string_field(j, "summary");
        const json& bs = field(j, "broadcasts");
        if (!bs.is_array()) {
            throw Error(ErrorCode::Parse, "broadcasts must be an array");
        }
        for (const json& b : bs) {
            if (!b.is_number_unsigned()) {
                throw Error(ErrorCode::Parse, "broadcast steps must be non-negative integers");
            }
            v.broadcasts.push_back(b.get<std::uint64_t>());
        }
        v.deliveries = count("deliveries");
        v.accepted = count("accepted");
        v.non_member_attempts = count("non_member_attempts");
        v.non_member_mismatches = count("non_member_mismatches");
        v.false_accepts = count("false_accepts");
        if (j.contains("key")) {
            v.key = Scalar{codec::detail::hex_field(j, "key")};
        }
        return Event{step, clock, std::move(v)};
    }
    throw Error(ErrorCode::Parse, "unknown event kind '" + kind + "'");
}

/// Ordered event log. Steps are assigned on append and equal the index.
class Transcript {
public:
    std::uint64_t append(Timestamp clock, EventBody body) {
        const std::uint64_t step = events_.size();
        events_.push_back(Event{step, clock, std::move(body)});
        return step;
    }

    const std::vector<Event>& events() const noexcept { return events_; }
    bool empty() const noexcept { return events_.empty(); }
    Timestamp clock() const { return events_.empty() ? 0 : events_.back().clock; }

    const SetupEvent& setup() const {
        if (events_.empty() || !std::holds_alternative<SetupEvent>(events_.front().body)) {
            throw Error(ErrorCode::ScenarioInvalid, "transcript does not start with a setup event");
        }
        return std::get<SetupEvent>(events_.front().body);
    }

    const Community& community() const { return setup().community; }

    const VerdictEvent* last_verdict() const {
        for (auto it = events_.rbegin(); it != events_.rend(); ++it) {
            if (const auto* v = std::get_if<VerdictEvent>(&it->body)) {
                return v;
            }
        }
        return nullptr;
    }

    std::string to_jsonl() const {
        std::string out;
        for (const Event& e : events_) {
            out += to_json(e).dump();
            out += '\n';
        }
        return out;
    }

    static Transcript from_jsonl(std::string_view text) {
        Transcript t;
        std::istringstream in{std::string(text)};
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) {
                continue;
            }
            json j;
            try {
                j = json::parse(line);
            } catch (const json::parse_error& e) {
                throw Error(ErrorCode::Parse, std::string("transcript line is not JSON: ") + e.what());
            }
            Event e = event_from_json(j);
            if (e.step != t.events_.size()) {
                throw Error(ErrorCode::Parse, "transcript steps out of order at step " + std::to_string(e.step));
            }
            t.events_.push_back(std::move(e));
        }
        return t;
    }

private:
    std::vector<Event> events_;
};

// ---------------------------------------------------------------------------
// Scenarios

inline constexpr Timestamp kDefaultStartTime = 1'700'000'000;
inline constexpr Timestamp kDefaultAttackDelay = 3600;

struct Scenario {
    ScenarioKind kind = ScenarioKind::Honest;
    std::uint64_t seed = 0;
    std::vector<Scalar> group;  // recipients
    Scalar initiator;
    // Clock schedule: the session broadcasts at start_time; attacks happen
    // attack_delay later (replay round i at start_time + i * attack_delay).
    Timestamp start_time = kDefaultStartTime;
    Timestamp attack_delay = kDefaultAttackDelay;
    Timestamp freshness_window = kDefaultFreshnessWindow;
    unsigned replay_rounds = 1;
    bool leak_key = true;
    std::optional<Scalar> insider;
    std::optional<SessionKey> new_key;
    std::optional<Scalar> victim;
};

namespace detail {

inline std::uint64_t attack_seed(std::uint64_t seed) {
    return seed ^ 0x9e3779b97f4a7c15ULL;
}

inline void require(bool cond, const std::string& what) {
    if (!cond) {
        throw Error(ErrorCode::ScenarioInvalid, what);
    }
}

inline std::string ratio(std::size_t a, std::size_t b) {
    return std::to_string(a) + "/" + std::to_string(b);
}

/// The honest session a transcript records: its initiator broadcast and the
/// ground truth from the session verdict.
struct SessionView {
    std::uint64_t broadcast_step = 0;
    Timestamp clock = 0;
    std::optional<BroadcastMessage> message;
    Scalar initiator;
    std::vector<Scalar> group;
    std::optional<SessionKey> ground_truth;
    std::optional<SessionKey> leaked;  // first key a recipient accepted
};

inline SessionView session_view(const Transcript& t) {
    SessionView view;
    for (const Event& e : t.events()) {
        if (const auto* b = std::get_if<BroadcastEvent>(&e.body); b && b->origin == "initiator" && !view.message) {
            view.message = b->message;
            view.broadcast_step = e.step;
            view.clock = e.clock;
            require(b->sender.has_value(), "initiator broadcast has no recorded sender");
            view.initiator = *b->sender;
        } else if (const auto* d = std::get_if<DeliveryEvent>(&e.body);
                   d && view.message && d->broadcast_step == view.broadcast_step) {
            if (d->in_group) {
                view.group.push_back(d->member);
            }
            if (d->in_group && d->result.accepted() && !view.leaked) {
                view.leaked = d->result.key();
            }
        } else if (const auto* v = std::get_if<VerdictEvent>(&e.body);
                   v && view.message && !view.ground_truth && v->key &&
                   (v->scenario == ScenarioKind::Honest || v->scenario == ScenarioKind::PaperLiteral)) {
            view.ground_truth = SessionKey{*v->key};
        }
    }
    require(view.message.has_value(), "transcript holds no initiator broadcast");
    return view;
}

inline void validate_session(const Community& c, const Scenario& s) {
    require(!s.group.empty(), "group must not be empty");
    require(c.members.contains(s.initiator), "initiator " + to_hex(s.initiator.value) + " is not a community member");
    std::set<Integer> seen;
    for (const Scalar& id : s.group) {
        require(c.members.contains(id), "group member " + to_hex(id.value) + " is not a community member");
        require(seen.insert(id.value).second, "group member " + to_hex(id.value) + " listed twice");
    }
}

}  // namespace detail

/// Runs one key transfer (Honest or PaperLiteral format) from a fresh
/// transcript. Addressed broadcasts are delivered to the listed recipients;
/// literal broadcasts reach every community member except the sender unless
/// the sender is itself in the group.
inline Transcript run_session(const Community& c, const Scenario& s) {
    detail::validate_session(c, s);
    const bool literal = s.kind == ScenarioKind::PaperLiteral;
    Rng rng(s.seed);
    Transcript t;
    Timestamp clock = s.start_time;
    t.append(clock, SetupEvent{c, s.freshness_window});

    const SessionKey key{random_scalar(rng, c.params.q(), false)};
    std::vector<Certificate> certs;
    certs.reserve(s.group.size());
    for (const Scalar& id : s.group) {
        certs.push_back(c.certificate(id));
    }
    const Member& initiator = c.member(s.initiator);
    BuiltBroadcast built = build_broadcast(c.params, c.ca.verify_element, initiator, certs, key, clock, rng,
                                           literal ? MessageFormat::PaperLiteral : MessageFormat::Addressed);
    const std::uint64_t bstep = t.append(clock, BroadcastEvent{"initiator", s.initiator, built.message});

    const ReceiverPolicy policy{s.freshness_window};
    const Certificate& initiator_cert = initiator.certificate;
    VerdictEvent v;
    v.scenario = s.kind;
    v.broadcasts = {bstep};
    v.key = key.key;

    for (const Scalar& id : s.group) {
        AcceptanceResult r = process_broadcast(c.params, c.member(id), initiator_cert, built.message, clock, policy);
        ++v.deliveries;
        if (r.accepted() && r.key() == key) {
            ++v.accepted;
        }
        t.append(clock, DeliveryEvent{id, bstep, true, std::move(r)});
    }
    if (literal) {
        const std::set<Integer> in_group = [&] {
            std::set<Integer> ids;
            for (const Scalar& id : s.group) ids.insert(id.value);
            return ids;
        }();
        for (const auto& [id, member] : c.members) {
            if (in_group.count(id) != 0 || member.id == s.initiator) {
                continue;
            }
            AcceptanceResult r = process_broadcast(c.params, member, initiator_cert, built.message, clock, policy);
            ++v.non_member_attempts;
            if (r.rejected_for(RejectReason::CommitmentMismatch)) {
                ++v.non_member_mismatches;
            }
            if (r.accepted()) {
                ++v.false_accepts;
            }
            t.append(clock, DeliveryEvent{member.id, bstep, false, std::move(r)});
        }
        v.success = v.accepted == v.deliveries && v.non_member_mismatches == v.non_member_attempts &&
                    v.false_accepts == 0;
        v.summary = detail::ratio(v.accepted, v.deliveries) + " members accepted; " +
                    detail::ratio(v.non_member_mismatches, v.non_member_attempts) +
                    " non-member recoveries rejected (commitment mismatch); " + std::to_string(v.false_accepts) +
                    " false accepts";
    } else {
        v.success = v.accepted == v.deliveries;
        v.summary = detail::ratio(v.accepted, v.deliveries) + " accepted, keys " + (v.success ? "equal" : "differ");
    }
    t.append(clock, std::move(v));
    return t;
}

/// Replays the recorded session under `rounds` successive fresh timestamps,
/// each `t_offset` seconds after the previous one, using a key leaked by a
/// recipient. Recipient clocks are set to each new timestamp.
inline void replay_attack(Transcript& t, Timestamp t_offset, unsigned rounds = 1, bool leak_key = true) {
    const detail::SessionView view = detail::session_view(t);
    const Community c = t.community();  // t grows below; keep no references into it
    detail::require(view.message->addressed(), "replay targets an addressed session");
    detail::require(rounds >= 1, "replay needs at least one round");

    ObservedSession observed{*view.message, std::nullopt};
    if (leak_key) {
        detail::require(view.leaked.has_value(), "no recipient accepted the session key, nothing to leak");
        observed.leaked_key = view.leaked;
    }
    const ReceiverPolicy policy{t.setup().freshness_window};
    const Certificate& initiator_cert = c.certificate(view.initiator);
    const BroadcastMessage original = observed.msg;

    VerdictEvent v;
    v.scenario = ScenarioKind::Replay;
    if (observed.leaked_key) {
        v.key = observed.leaked_key->key;
    }
    for (unsigned round = 1; round <= rounds; ++round) {
        const Timestamp t_new = original.t + static_cast<Timestamp>(round) * t_offset;
        const BroadcastMessage forged = forge_replay(c.params, observed, t_new);
        t.append(t_new, AttackEvent{"replay-forgery",
                                    json{{"round", round},
                                         {"t_new", codec::timestamp_hex(t_new)},
                                         {"replayed_step", view.broadcast_step},
                                         {"leaked_key", codec::hex(observed.leaked_key->key)}}});
        const std::uint64_t bstep = t.append(t_new, BroadcastEvent{"replay-forgery", std::nullopt, forged});
        v.broadcasts.push_back(bstep);
        for (const Scalar& id : original.recipient_ids) {
            AcceptanceResult r = process_broadcast(c.params, c.member(id), initiator_cert, forged, t_new, policy);
            ++v.deliveries;
            if (r.accepted() && r.key() == *observed.leaked_key) {
                ++v.accepted;
            }
            t.append(t_new, DeliveryEvent{id, bstep, true, std::move(r)});
        }
    }
    v.success = v.accepted == v.deliveries;
    v.summary = detail::ratio(v.accepted, v.deliveries) + " accepted forged replay";
    t.append(t.clock(), std::move(v));
}

/// A recipient of the recorded session recovers every one-time key and
/// impersonates the initiator with its own key, reusing the original r.
inline void insider_attack(Transcript& t, const Scalar& insider_id, std::optional<SessionKey> new_key,
                           std::uint64_t seed, Timestamp delay = kDefaultAttackDelay) {
    const detail::SessionView view = detail::session_view(t);
    const Community c = t.community();  // t grows below; keep no references into it
    const BroadcastMessage original = *view.message;
    detail::require(original.addressed(), "insider attack targets an addressed session");
    detail::require(original.is_recipient(insider_id),
                    "insider " + to_hex(insider_id.value) + " is not a recipient of the session");

    Rng rng(detail::attack_seed(seed));
    const Member& insider = c.member(insider_id);
    const Certificate& initiator_cert = c.certificate(view.initiator);
    const RecoveredShareSet shares = insider_recover_shares(c.params, insider, initiator_cert, original);

    // Ground truth for the audit trail: each recipient's own view of its key.
    bool shares_match = true;
    for (const RecoveredShare& sh : shares.pairs) {
        const Scalar truth =
            pairwise_key_recipient(c.params, c.member(sh.member_id).private_key, original.r, initiator_cert.public_key);
        shares_match = shares_match && truth == sh.k;
    }

    const SessionKey forged_key = new_key ? *new_key : SessionKey{random_scalar(rng, c.params.q(), false)};
    const Timestamp t_star = original.t + delay;
    json recovered = json::array();
    for (const RecoveredShare& sh : shares.pairs) {
        recovered.push_back(json::array({codec::hex(sh.member_id), codec::hex(sh.k)}));
    }
    t.append(t_star, AttackEvent{"insider-share-recovery",
                                 json{{"insider", codec::hex(insider_id)},
                                      {"recovered", std::move(recovered)},
                                      {"shares_match_ground_truth", shares_match}}});

    const BroadcastMessage forged =
        insider_forge_broadcast(c.params, shares, original.r, original.initiator_id, forged_key, t_star, rng);
    t.append(t_star, AttackEvent{"insider-forgery",
                                 json{{"insider", codec::hex(insider_id)},
                                      {"impersonated", codec::hex(original.initiator_id)},
                                      {"new_key", codec::hex(forged_key.key)},
                                      {"t_star", codec::timestamp_hex(t_star)}}});
    const std::uint64_t bstep = t.append(t_star, BroadcastEvent{"insider-forgery", insider_id, forged});

    const ReceiverPolicy policy{t.setup().freshness_window};
    VerdictEvent v;
    v.scenario = ScenarioKind::Insider;
    v.broadcasts = {bstep};
    v.key = forged_key.key;
    for (const Scalar& id : forged.recipient_ids) {
        AcceptanceResult r = process_broadcast(c.params, c.member(id), initiator_cert, forged, t_star, policy);
        ++v.deliveries;
        if (r.accepted() && r.key() == forged_key) {
            ++v.accepted;
        }
        t.append(t_star, DeliveryEvent{id, bstep, true, std::move(r)});
    }
    v.success = v.accepted == v.deliveries && shares_match;
    v.summary = detail::ratio(v.accepted, v.deliveries) + " accepted K*";
    t.append(t_star, std::move(v));
}

/// An outsider takes the victim's discrete log and reads the session key
/// off the broadcast. Only feasible on toy parameters.
inline void dlog_attack(Transcript& t, const Scalar& victim_id) {
    const detail::SessionView view = detail::session_view(t);
    const Community c = t.community();  // t grows below; keep no references into it
    detail::require(view.ground_truth.has_value(), "transcript has no session verdict with a key");
    const Certificate& victim_cert = c.certificate(victim_id);
    const Certificate& initiator_cert = c.certificate(view.initiator);

    const SessionKey recovered = outsider_recover_key(c.params, *view.message, victim_cert, initiator_cert);
    const Scalar victim_private = brute_force_dlog(c.params, victim_cert.public_key);
    t.append(t.clock(), AttackEvent{"discrete-log-break",
                                    json{{"victim", codec::hex(victim_id)},
                                         {"recovered_private_key", codec::hex(victim_private)},
                                         {"recovered_key", codec::hex(recovered.key)}}});
    VerdictEvent v;
    v.scenario = ScenarioKind::DlogBreak;
    v.key = recovered.key;
    v.success = recovered == *view.ground_truth;
    v.summary = v.success ? "recovered K equals ground truth" : "recovered K differs from ground truth";
    t.append(t.clock(), std::move(v));
}

inline Transcript run_scenario(const Community& c, const Scenario& s) {
    Scenario session = s;
    if (s.kind != ScenarioKind::PaperLiteral) {
        session.kind = ScenarioKind::Honest;
    }
    switch (s.kind) {
        case ScenarioKind::Insider:
            detail::require(s.insider.has_value(), "insider scenario needs an insider");
            detail::require(std::find(s.group.begin(), s.group.end(), *s.insider) != s.group.end(),
                            "insider must belong to the group");
            break;
        case ScenarioKind::DlogBreak:
            if (s.victim) {
                detail::require(std::find(s.group.begin(), s.group.end(), *s.victim) != s.group.end(),
                                "victim must belong to the group");
            }
            break;
        default: break;
    }
    Transcript t = run_session(c, session);
    switch (s.kind) {
        case ScenarioKind::Honest:
        case ScenarioKind::PaperLiteral: break;
        case ScenarioKind::Replay: replay_attack(t, s.attack_delay, s.replay_rounds, s.leak_key); break;
        case ScenarioKind::Insider: insider_attack(t, *s.insider, s.new_key, s.seed, s.attack_delay); break;
        case ScenarioKind::DlogBreak: dlog_attack(t, s.victim.value_or(s.group.front())); break;
    }
    return t;
}

// ---------------------------------------------------------------------------
// Self-audit

struct AuditReport {
    std::vector<std::string> problems;
    bool ok() const noexcept { return problems.empty(); }
};

/// Re-derives every verdict count from the delivery events and checks event
/// ordering. A clean report means the verdicts say nothing the log does not.
inline AuditReport audit_transcript(const Transcript& t) {
    AuditReport report;
    std::set<std::uint64_t> broadcasts;
    std::vector<std::pair<std::uint64_t, const DeliveryEvent*>> deliveries;
    const auto& events = t.events();
    for (std::size_t i = 0; i < events.size(); ++i) {
        const Event& e = events[i];
        if (e.step != i) {
            report.problems.push_back("step " + std::to_string(e.step) + " at index " + std::to_string(i));
        }
        if (i == 0 && !std::holds_alternative<SetupEvent>(e.body)) {
            report.problems.push_back("first event is not setup");
        }
        if (i > 0 && std::holds_alternative<SetupEvent>(e.body)) {
            report.problems.push_back("setup event at step " + std::to_string(i));
        }
        if (std::holds_alternative<BroadcastEvent>(e.body)) {
            broadcasts.insert(e.step);
        } else if (const auto* d = std::get_if<DeliveryEvent>(&e.body)) {
            if (broadcasts.count(d->broadcast_step) == 0) {
                report.problems.push_back("delivery at step " + std::to_string(e.step) +
                                          " references no prior broadcast");
            }
            deliveries.emplace_back(e.step, d);
        } else if (const auto* v = std::get_if<VerdictEvent>(&e.body)) {
            VerdictEvent recount;
            const std::set<std::uint64_t> covered(v->broadcasts.begin(), v->broadcasts.end());
            for (const auto& [step, d] : deliveries) {
                if (covered.count(d->broadcast_step) == 0) {
                    continue;
                }
                if (d->in_group) {
                    ++recount.deliveries;
                    if (d->result.accepted() && v->key && d->result.key().key == *v->key) {
                        ++recount.accepted;
                    }
                } else {
                    ++recount.non_member_attempts;
                    if (d->result.rejected_for(RejectReason::CommitmentMismatch)) {
                        ++recount.non_member_mismatches;
                    }
                    if (d->result.accepted()) {
                        ++recount.false_accepts;
                    }
                }
            }
            auto check = [&](const char* name, std::size_t stated, std::size_t actual) {
                if (stated != actual) {
                    report.problems.push_back("verdict at step " + std::to_string(e.step) + ": " + name + " states " +
                                              std::to_string(stated) + ", log shows " + std::to_string(actual));
                }
            };
            check("deliveries", v->deliveries, recount.deliveries);
            check("accepted", v->accepted, recount.accepted);
            check("non_member_attempts", v->non_member_attempts, recount.non_member_attempts);
            check("non_member_mismatches", v->non_member_mismatches, recount.non_member_mismatches);
            check("false_accepts", v->false_accepts, recount.false_accepts);
        }
    }
    return report;
}

}  // namespace gkt
