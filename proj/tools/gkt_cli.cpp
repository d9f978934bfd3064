// gkt: command-line front end for the group key transfer simulator.
//
//   gkt setup --n 5 --params toy --seed 1 --ids sequential --out community.json
//   gkt run honest --community community.json --group 1,2,3 --initiator 4 --out transcript.jsonl
//   gkt attack replay --transcript transcript.jsonl --leak-key --t-offset 3600
//   gkt attack insider --transcript transcript.jsonl --insider 1 --new-key random
//   gkt attack dlog --transcript transcript.jsonl --victim 2
//   gkt run paper-literal --community community.json --group 1,2,3 --initiator 4
//
// Identifiers and keys are lowercase hex. Exit status: 0 when the scenario
// achieved its outcome, 1 when it ran but did not, 2 on error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "gkt/harness.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw gkt::Error(gkt::ErrorCode::Parse, "cannot open " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw gkt::Error(gkt::ErrorCode::Parse, "cannot write " + path);
    }
    out << contents;
}

std::vector<gkt::Scalar> parse_id_list(const std::string& text) {
    std::vector<gkt::Scalar> ids;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) {
            ids.push_back(gkt::Scalar{gkt::from_hex(item)});
        }
    }
    if (ids.empty()) {
        throw gkt::Error(gkt::ErrorCode::ScenarioInvalid, "empty id list");
    }
    return ids;
}

gkt::Community load_community(const std::string& path) {
    try {
        return gkt::community_from_json(gkt::json::parse(read_file(path)));
    } catch (const gkt::json::parse_error& e) {
        throw gkt::Error(gkt::ErrorCode::Parse, path + ": " + e.what());
    }
}

int report(const gkt::Transcript& t, const std::string& out_path) {
    if (!out_path.empty()) {
        write_file(out_path, t.to_jsonl());
    }
    const gkt::VerdictEvent* v = t.last_verdict();
    if (v == nullptr) {
        std::cerr << "error: scenario produced no verdict\n";
        return 2;
    }
    std::cout << gkt::to_string(v->scenario) << ": " << v->summary << "\n";
    return v->success ? 0 : 1;
}

struct SessionOptions {
    std::string community;
    std::string group;
    std::string initiator;
    std::uint64_t seed = 0;
    gkt::Timestamp start = gkt::kDefaultStartTime;
    gkt::Timestamp window = gkt::kDefaultFreshnessWindow;
    std::string out;
};

void add_session_options(CLI::App* cmd, SessionOptions& o, bool out_required) {
    cmd->add_option("--community", o.community, "community file from 'setup'")->required();
    cmd->add_option("--group", o.group, "recipient ids, comma separated hex")->required();
    cmd->add_option("--initiator", o.initiator, "initiator id (hex)")->required();
    cmd->add_option("--seed", o.seed, "scenario seed")->capture_default_str();
    cmd->add_option("--start", o.start, "logical broadcast time, seconds")->capture_default_str();
    cmd->add_option("--window", o.window, "freshness window, seconds")->capture_default_str();
    auto* out = cmd->add_option("--out", o.out, "transcript output (JSON lines)");
    if (out_required) {
        out->required();
    }
}

int run_session_command(const SessionOptions& o, gkt::ScenarioKind kind) {
    const gkt::Community c = load_community(o.community);
    gkt::Scenario s;
    s.kind = kind;
    s.seed = o.seed;
    s.group = parse_id_list(o.group);
    s.initiator = gkt::Scalar{gkt::from_hex(o.initiator)};
    s.start_time = o.start;
    s.freshness_window = o.window;
    return report(gkt::run_scenario(c, s), o.out);
}

gkt::Transcript load_transcript(const std::string& path) {
    return gkt::Transcript::from_jsonl(read_file(path));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Group key transfer simulator: honest sessions and attacks"};
    app.require_subcommand(1);

    // setup
    auto* setup = app.add_subcommand("setup", "create a community of members with CA-signed keys");
    std::size_t n = 0;
    std::string params = "toy";
    std::uint64_t setup_seed = 0;
    std::string ids = "random";
    std::string setup_out = "community.json";
    setup->add_option("--n", n, "number of members")->required();
    setup->add_option("--params", params, "toy | std | gen")
        ->check(CLI::IsMember({"toy", "std", "gen"}))
        ->capture_default_str();
    setup->add_option("--seed", setup_seed)->capture_default_str();
    setup->add_option("--ids", ids, "random | sequential")
        ->check(CLI::IsMember({"random", "sequential"}))
        ->capture_default_str();
    setup->add_option("--out", setup_out)->capture_default_str();

    // run
    auto* run = app.add_subcommand("run", "run a key transfer session");
    run->require_subcommand(1);
    SessionOptions honest_opts;
    SessionOptions literal_opts;
    auto* run_honest = run->add_subcommand("honest", "addressed broadcast to the group");
    add_session_options(run_honest, honest_opts, true);
    auto* run_literal = run->add_subcommand("paper-literal", "broadcast without identifiers; everyone tries");
    add_session_options(run_literal, literal_opts, false);

    // attack
    auto* attack = app.add_subcommand("attack", "attack a recorded session");
    attack->require_subcommand(1);

    std::string replay_transcript;
    bool leak_key = false;
    gkt::Timestamp t_offset = 0;
    unsigned rounds = 1;
    std::string replay_out;
    auto* replay = attack->add_subcommand("replay", "re-date a broadcast whose key leaked");
    replay->add_option("--transcript", replay_transcript)->required();
    replay->add_flag("--leak-key", leak_key, "give the attacker a key accepted by a recipient");
    replay->add_option("--t-offset", t_offset, "seconds between the original and the forged timestamp")
        ->required();
    replay->add_option("--rounds", rounds, "number of successive forgeries")->capture_default_str();
    replay->add_option("--seed", setup_seed, "unused; accepted for uniformity")->capture_default_str();
    replay->add_option("--out", replay_out, "extended transcript output");

    std::string insider_transcript;
    std::string insider_id;
    std::string new_key = "random";
    std::uint64_t insider_seed = 0;
    gkt::Timestamp delay = gkt::kDefaultAttackDelay;
    std::string insider_out;
    auto* insider = attack->add_subcommand("insider", "a recipient impersonates the initiator");
    insider->add_option("--transcript", insider_transcript)->required();
    insider->add_option("--insider", insider_id, "attacking recipient id (hex)")->required();
    insider->add_option("--new-key", new_key, "hex key or 'random'")->capture_default_str();
    insider->add_option("--seed", insider_seed)->capture_default_str();
    insider->add_option("--delay", delay, "seconds after the original broadcast")->capture_default_str();
    insider->add_option("--out", insider_out, "extended transcript output");

    std::string dlog_transcript;
    std::string victim;
    std::string dlog_out;
    auto* dlog = attack->add_subcommand("dlog", "recover the session key from public data (toy params)");
    dlog->add_option("--transcript", dlog_transcript)->required();
    dlog->add_option("--victim", victim, "recipient whose key is broken (hex)")->required();
    dlog->add_option("--seed", setup_seed, "unused; accepted for uniformity")->capture_default_str();
    dlog->add_option("--out", dlog_out, "extended transcript output");

    CLI11_PARSE(app, argc, argv);

    try {
        if (setup->parsed()) {
            const gkt::ParamsSource source = params == "toy"   ? gkt::ParamsSource::Toy
                                             : params == "std" ? gkt::ParamsSource::Standard
                                                               : gkt::ParamsSource::Generate;
            const gkt::Community c = gkt::setup_community(
                n, source, setup_seed, ids == "sequential" ? gkt::IdMode::Sequential : gkt::IdMode::Random);
            write_file(setup_out, gkt::to_json(c).dump(2) + "\n");
            std::cout << "setup: " << c.members.size() << " members, params " << c.params_source << ", wrote "
                      << setup_out << "\n";
            return 0;
        }
        if (run_honest->parsed()) {
            return run_session_command(honest_opts, gkt::ScenarioKind::Honest);
        }
        if (run_literal->parsed()) {
            return run_session_command(literal_opts, gkt::ScenarioKind::PaperLiteral);
        }
        if (replay->parsed()) {
            gkt::Transcript t = load_transcript(replay_transcript);
            gkt::replay_attack(t, t_offset, rounds, leak_key);
            return report(t, replay_out);
        }
        if (insider->parsed()) {
            gkt::Transcript t = load_transcript(insider_transcript);
            std::optional<gkt::SessionKey> key;
            if (new_key != "random") {
                key = gkt::SessionKey{t.community().params.scalar(gkt::from_hex(new_key))};
            }
            gkt::insider_attack(t, gkt::Scalar{gkt::from_hex(insider_id)}, key, insider_seed, delay);
            return report(t, insider_out);
        }
        if (dlog->parsed()) {
            gkt::Transcript t = load_transcript(dlog_transcript);
            gkt::dlog_attack(t, gkt::Scalar{gkt::from_hex(victim)});
            return report(t, dlog_out);
        }
    } catch (const gkt::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
