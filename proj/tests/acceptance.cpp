// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Usage: acceptance <scenario-dir>
#include <chrono>
#include <cstdio>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hipot/attacksim.hpp"
#include "hipot/pipeline.hpp"

using namespace hipot;

namespace {

int failures = 0;
std::vector<std::string> notes;

void report(int criterion, const char* what, bool ok) {
  std::printf("%s  criterion %2d: %s\n", ok ? "PASS" : "FAIL", criterion, what);
  if (!ok) ++failures;
  for (const std::string& n : notes) std::printf("      %s\n", n.c_str());
  notes.clear();
}

void note(const std::string& s) { notes.push_back(s); }

bool check(bool cond, const std::string& msg) {
  if (!cond) note("check failed: " + msg);
  return cond;
}

std::string scenario_dir;

GenerateResult load_and_generate(const std::string& name) {
  return generate(Scenario::load_file(scenario_dir + "/" + name + ".json"));
}

CredentialPolicy policy_of(const Scenario& sc) {
  CredentialPolicy p;
  for (const Account& a : sc.accounts) p.add_account(a);
  return p;
}

// ---------------------------------------------------------------------------

void criterion1_partition() {
  const auto t0 = std::chrono::steady_clock::now();
  Scenario sc = Scenario::load_file(scenario_dir + "/fig3.json");
  GenerateResult gen = generate(sc);
  Analysis a = analyze_events(gen.events, ForensicsConfig{});
  PartitionCounts part = partition_report(a.profiles);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  bool ok = true;
  ok &= check(part.total_ips == 480, "480 source addresses");
  ok &= check(part.dictionary == 197, "197 dictionary attackers, got " +
                                          std::to_string(part.dictionary));
  ok &= check(part.dictionary_succeeded == 18, "18 dictionary successes, got " +
                                                   std::to_string(part.dictionary_succeeded));
  ok &= check(part.intruders == 35, "35 intruders, got " +
                                        std::to_string(part.intruders));
  ok &= check(part.scanners == 248, "248 scanners, got " +
                                        std::to_string(part.scanners));
  ok &= check(part.unknown == 0, "no unknown residue");

  // Zero misclassifications against the generator's labels.
  int mismatches = 0;
  for (const IpLabel& l : gen.ip_labels) {
    auto it = a.profiles.find(l.ip);
    if (it == a.profiles.end() ||
        source_class_name(it->second.classification) != l.cls)
      ++mismatches;
  }
  ok &= check(mismatches == 0,
              std::to_string(mismatches) + " label mismatches");
  ok &= check(secs < 30.0, "runtime under 30 s");
  report(1, "figure-3 partition recovered exactly", ok);
}

void criterion2_table1() {
  GenerateResult gen = load_and_generate("table1");
  std::uint64_t total = 0;
  for (const Event& e : gen.events)
    if (e.kind == EventKind::Auth) ++total;

  struct Expect {
    const char* account;
    std::uint64_t attempts;
    std::uint64_t passwords;
    const char* pct;
  };
  const Expect expected[] = {
      {"root", 34251, 12027, "13.77"}, {"admin", 4007, 1425, "1.61"},
      {"test", 3109, 561, "1.25"},     {"user", 1247, 267, "0.50"},
      {"guest", 1128, 201, "0.45"},    {"info", 886, 203, "0.36"},
      {"mysql", 870, 211, "0.35"},     {"oracle", 857, 226, "0.34"},
      {"postgres", 834, 194, "0.34"},  {"webmaster", 728, 170, "0.29"},
  };

  bool ok = check(total == 248717,
                  "248717 attempts, got " + std::to_string(total));
  auto rows = top_accounts(gen.events, 10);
  ok &= check(rows.size() == 10, "ten rows");
  for (std::size_t i = 0; i < rows.size() && i < 10; ++i) {
    const Expect& x = expected[i];
    ok &= check(rows[i].account == x.account,
                std::string("row order: expected ") + x.account + ", got " +
                    rows[i].account);
    ok &= check(rows[i].attempts == x.attempts,
                std::string(x.account) + " attempts");
    ok &= check(rows[i].distinct_passwords == x.passwords,
                std::string(x.account) + " distinct passwords");
    ok &= check(rows[i].percentage == x.pct,
                std::string(x.account) + " pct: expected " + x.pct + ", got " +
                    rows[i].percentage);
  }
  report(2, "table-1 histogram and 13.77% root share", ok);
}

void criterion3_table2() {
  const std::int64_t day = kDay / 1000, minute = kMinute / 1000;
  struct Row {
    const char* account;
    std::int64_t d1_sec;
    std::int64_t d2_sec;  // -1 = null
  };
  const Row rows[] = {
      {"UA1", day, 4 * day},        {"UA2", day / 2, 4 * minute},
      {"UA3", 15 * day, day},       {"UA4", 5 * day, 10 * day},
      {"UA5", 5 * day, -1},         {"UA6", day, 4 * day},
      {"UA7", 5 * day, 8 * day},    {"UA8", day, 9 * day},
      {"UA9", day, 12 * day},       {"UA10", 3 * day, 2 * minute},
      {"UA11", 7 * day, 4 * day},   {"UA12", day, 8 * day},
      {"UA13", 5 * day, 17 * day},  {"UA14", 5 * day, 13 * day},
      {"UA15", 9 * day, 7 * day},   {"UA16", day, 14 * day},
      {"UA17", day, 12 * day},
  };

  Scenario sc = Scenario::load_file(scenario_dir + "/table2.json");
  GenerateResult gen = generate(sc);
  CredentialPolicy accounts = policy_of(sc);
  Analysis a = analyze_events(gen.events, ForensicsConfig{}, &accounts);

  bool ok = check(a.timelines.size() == 17, "17 accounts");
  for (const Row& r : rows) {
    const AccountTimeline* t = nullptr;
    for (const AccountTimeline& cand : a.timelines)
      if (cand.account == r.account) t = &cand;
    if (!check(t != nullptr, std::string(r.account) + " present")) {
      ok = false;
      continue;
    }
    ok &= check(t->d1 && *t->d1 / 1000 == r.d1_sec,
                std::string(r.account) + " d1");
    if (r.d2_sec < 0) {
      ok &= check(!t->d2, std::string(r.account) + " d2 null");
    } else {
      ok &= check(t->d2 && *t->d2 / 1000 == r.d2_sec,
                  std::string(r.account) + " d2");
    }
  }
  report(3, "table-2 timelines, all 17 accounts incl. UA5 null", ok);
}

void criterion4_operators() {
  GenerateResult gen = load_and_generate("operators38");
  Analysis a = analyze_events(gen.events, ForensicsConfig{});

  int human = 0, script = 0, inconclusive = 0;
  for (const SessionAnalysis& s : a.intrusions) {
    switch (s.verdict.verdict) {
      case Operator::Human: ++human; break;
      case Operator::Script: ++script; break;
      case Operator::Inconclusive: ++inconclusive; break;
    }
  }
  bool ok = check(a.intrusions.size() == 38, "38 sessions, got " +
                                                 std::to_string(a.intrusions.size()));
  ok &= check(human == 33, "33 human, got " + std::to_string(human));
  ok &= check(inconclusive == 5,
              "5 inconclusive, got " + std::to_string(inconclusive));
  ok &= check(script == 0, "0 script, got " + std::to_string(script));
  report(4, "operator verdicts 33 human / 5 inconclusive / 0 script", ok);
}

std::vector<std::string> oracle_lines(const std::string& bytes) {
  std::vector<std::string> lines;
  std::string cur;
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    const unsigned char c = static_cast<unsigned char>(bytes[i]);
    if (c == 0x08 || c == 0x7F) {
      if (!cur.empty()) cur.pop_back();
    } else if (c == '\r' || c == '\n') {
      if (c == '\r' && i + 1 < bytes.size() && bytes[i + 1] == '\n') ++i;
      lines.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(bytes[i]);
    }
  }
  return lines;
}

bool matches_oracle(const std::string& bytes,
                    const std::vector<std::string>& chunks) {
  auto expect = oracle_lines(bytes);
  auto got = reconstruct_input(chunks);
  if (got.size() != expect.size()) return false;
  for (std::size_t i = 0; i < got.size(); ++i)
    if (got[i].text != expect[i]) return false;
  return true;
}

void criterion5_reconstruction() {
  bool ok = true;
  std::uint64_t cases = 0;

  // Exhaustive: all strings of length <= 12 over {char, BS, LF}.
  const char alphabet[] = {'a', '\x08', '\n'};
  for (int len = 0; len <= 12 && ok; ++len) {
    std::uint64_t combos = 1;
    for (int i = 0; i < len; ++i) combos *= 3;
    for (std::uint64_t m = 0; m < combos; ++m) {
      std::string bytes;
      std::uint64_t x = m;
      for (int i = 0; i < len; ++i, x /= 3) bytes.push_back(alphabet[x % 3]);
      std::vector<std::string> whole;
      if (!bytes.empty()) whole.push_back(bytes);
      std::vector<std::string> singles;
      for (char c : bytes) singles.push_back(std::string(1, c));
      if (!matches_oracle(bytes, whole) || !matches_oracle(bytes, singles)) {
        ok = check(false, "mismatch on exhaustive case of length " +
                              std::to_string(len));
        break;
      }
      ++cases;
    }
  }

  // Randomized: 10^4 inputs up to 256 bytes, random chunk boundaries.
  std::mt19937_64 rng(5150);
  const std::string pool = "abcdefgh /.-\x08\x7f\r\n";
  for (int round = 0; round < 10000 && ok; ++round) {
    std::string bytes;
    const std::size_t n = rng() % 257;
    for (std::size_t i = 0; i < n; ++i) bytes.push_back(pool[rng() % pool.size()]);
    std::vector<std::string> chunks;
    for (std::size_t i = 0; i < bytes.size();) {
      const std::size_t take = 1 + rng() % 8;
      chunks.push_back(bytes.substr(i, take));
      i += take;
    }
    if (!matches_oracle(bytes, chunks)) {
      ok = check(false, "mismatch on randomized case " + std::to_string(round));
      break;
    }
    ++cases;
  }
  note(std::to_string(cases) + " cases, zero mismatches");
  report(5, "tty reconstruction equals the stack-machine oracle", ok);
}

void criterion6_password_lifecycle() {
  bool ok = true;
  std::mt19937_64 rng(6006);
  for (int round = 0; round < 100 && ok; ++round) {
    const std::uint64_t distinct = 5 + rng() % 8;   // dictionary size
    const std::uint64_t hit = rng() % distinct;     // index of the weak password
    const std::string old_pw = "pw" + std::to_string(hit);
    const std::string new_pw = "Chg!" + std::to_string(rng() % 100000);

    Scenario sc;
    sc.seed = 1000 + round;
    sc.start_ts = *parse_rfc3339_ms("2026-05-01T00:00:00.000Z");
    Account acct;
    acct.name = "prey";
    acct.weak = true;
    acct.created_ts = sc.start_ts;
    acct.passwords.emplace_back(sc.start_ts, old_pw);
    sc.accounts.push_back(acct);

    PersonaSpec bot1;
    bot1.kind = "dictbot";
    bot1.ip = "50.0.0.1";
    bot1.account = "prey";
    bot1.attempts = distinct;
    bot1.pairs = distinct;
    bot1.distinct_passwords = distinct;
    sc.population.push_back(bot1);

    PersonaSpec intruder;
    intruder.kind = "script_intruder";
    intruder.ip = "50.0.0.2";
    intruder.account = "prey";
    intruder.new_password = new_pw;
    intruder.start_offset_ms = kHour;
    SessionScript script;
    script.offset_ms = kHour;
    script.lines = {"passwd", "$PASS", "$NEWPASS", "$NEWPASS"};
    script.char_by_char = false;
    intruder.sessions.push_back(script);
    sc.population.push_back(intruder);

    PersonaSpec bot2 = bot1;  // the same dictionary, after the change
    bot2.ip = "50.0.0.3";
    bot2.start_offset_ms = 2 * kHour;
    sc.population.push_back(bot2);

    GenerateResult gen = generate(sc);

    TimeMs change_ts = -1;
    for (const Event& e : gen.events)
      if (e.kind == EventKind::Exec && e.path == "passwd") change_ts = e.ts;
    ok &= check(change_ts > 0, "passwd executed");

    int ok_before = 0, ok_after = 0, old_pw_after = 0, old_pw_after_ok = 0;
    for (const Event& e : gen.events) {
      if (e.kind != EventKind::Auth || e.ip == "50.0.0.2") continue;
      if (e.ts <= change_ts && e.ok) ++ok_before;
      if (e.ts > change_ts) {
        if (e.ok) ++ok_after;
        if (e.pass == old_pw) {
          ++old_pw_after;
          if (e.ok) ++old_pw_after_ok;
        }
      }
    }
    ok &= check(ok_before == 1, "the first bot finds the weak password");
    ok &= check(old_pw_after > 0, "the old password is retried after the change");
    ok &= check(old_pw_after_ok == 0, "old password denied after the change");
    ok &= check(ok_after == 0, "the second bot never succeeds");
    if (!ok) note("failing round " + std::to_string(round));
  }
  report(6, "password lifecycle over 100 randomized scenarios", ok);
}

void criterion7_egress() {
  const char* names[] = {"fig3",        "table1",      "table2",
                         "operators38", "twosensor_a", "twosensor_b"};
  bool ok = true;
  int wget_sessions = 0, inband_sessions = 0;
  ForensicsConfig cfg;
  for (const char* name : names) {
    GenerateResult gen = load_and_generate(name);
    for (const Event& e : gen.events) {
      if (e.kind == EventKind::Egress && (e.port == 80 || e.port == 443))
        ok &= check(e.verdict == EgressVerdict::Deny,
                    std::string("http egress denied in ") + name);
    }
    SessionizeResult sr = sessionize(gen.events);
    for (const Session& s : sr.sessions) {
      bool has_wget = false, has_inband = false, inband_allowed = false;
      for (const Event& e : s.events) {
        if (e.kind == EventKind::Exec && e.path == "wget") has_wget = true;
        if (e.kind == EventKind::Exec &&
            (e.path == "inband-get" || e.path == "sftp"))
          has_inband = true;
        if (e.kind == EventKind::Egress && e.verdict == EgressVerdict::Allow)
          inband_allowed = true;
      }
      if (has_wget) {
        ++wget_sessions;
        ok &= check(tag_activities(s, cfg).count(ActivityTag::DownloadBlocked) == 1,
                    std::string("wget session tagged download_blocked in ") + name);
      }
      if (has_inband) {
        ++inband_sessions;
        ok &= check(inband_allowed,
                    std::string("in-band fetch allowed in ") + name);
      }
    }
  }
  ok &= check(wget_sessions > 0, "corpus exercises wget");
  ok &= check(inband_sessions > 0, "corpus exercises in-band transfer");
  note(std::to_string(wget_sessions) + " wget sessions, " +
       std::to_string(inband_sessions) + " in-band sessions, zero violations");
  report(7, "egress policy: wget denied + tagged, in-band allowed", ok);
}

void criterion8_correlation() {
  GenerateResult a = load_and_generate("twosensor_a");
  GenerateResult b = load_and_generate("twosensor_b");
  Analysis aa = analyze_events(a.events, ForensicsConfig{});
  Analysis ab = analyze_events(b.events, ForensicsConfig{});
  OverlapCounts ov = correlate_sensors(aa.profiles, ab.profiles);

  bool ok = true;
  ok &= check(ov.class_size.at(SourceClass::Intruder) == 2, "2 intruder IPs on A");
  ok &= check(ov.overlap_with_b.at(SourceClass::Intruder) == 0,
              "intruder overlap is zero");
  ok &= check(ov.class_size.at(SourceClass::Scanner) == 4 &&
                  ov.overlap_with_b.at(SourceClass::Scanner) == 4,
              "scanner overlap 4 of 4");
  ok &= check(ov.class_size.at(SourceClass::DictionaryAttacker) == 3 &&
                  ov.overlap_with_b.at(SourceClass::DictionaryAttacker) == 2,
              "dictionary overlap 2 of 3");
  report(8, "two-sensor correlation: intruders never overlap", ok);
}

void criterion9_determinism() {
  bool ok = true;
  for (const char* name : {"operators38", "fig3"}) {
    Scenario sc = Scenario::load_file(scenario_dir + "/" + name + ".json");
    std::string out[2];
    for (int i = 0; i < 2; ++i) {
      GenerateResult gen = generate(sc);
      CredentialPolicy accounts = policy_of(sc);
      Analysis a = analyze_events(gen.events, ForensicsConfig{}, &accounts);
      ReportInputs in;
      in.events = a.events;
      in.sessions = a.sessions;
      in.profiles = a.profiles;
      in.timelines = a.timelines;
      std::string blob = gen.labels_to_jsonl();
      for (const Event& e : gen.events) blob += encode_event(e) + "\n";
      blob += analysis_to_json(a);
      blob += render_report(in, "json");
      out[i] = std::move(blob);
    }
    ok &= check(out[0] == out[1],
                std::string(name) + ": byte-identical on repeat");
  }
  report(9, "simulate + analyze + report are deterministic", ok);
}

void criterion10_roundtrip() {
  bool ok = true;
  std::mt19937_64 rng(1010);
  auto rand_bytes = [&](std::size_t max_len) {
    std::string s;
    const std::size_t len = rng() % (max_len + 1);
    for (std::size_t i = 0; i < len; ++i)
      s.push_back(static_cast<char>(rng() & 0xFF));
    return s;
  };
  for (int i = 0; i < 10000; ++i) {
    Event e;
    e.seq = rng();
    e.ts = static_cast<TimeMs>(rng() % 4102444800000LL);
    if (rng() % 2) e.sid = "s" + std::to_string(rng() % 512);
    switch (rng() % 7) {
      case 0: e.kind = EventKind::Connect; e.ip = "10.0.0.1"; break;
      case 1:
        e.kind = EventKind::Auth;
        e.ip = "10.0.0.2";
        e.user = rand_bytes(16);
        e.pass = rand_bytes(24);
        e.ok = rng() % 2;
        break;
      case 2:
        e.kind = EventKind::TtyRead;
        e.tty = "pts/0";
        e.data = rand_bytes(64);
        if (e.data.empty()) e.data = "x";
        break;
      case 3:
        e.kind = EventKind::TtyWrite;
        e.tty = "pts/0";
        e.data = rand_bytes(64);
        break;
      case 4:
        e.kind = EventKind::Exec;
        e.path = "/bin/t" + std::to_string(rng() % 64);
        for (int k = 0; k < static_cast<int>(rng() % 4); ++k)
          e.argv.push_back(rand_bytes(10));
        break;
      case 5:
        e.kind = EventKind::Egress;
        e.dst = "203.0.113.5";
        e.port = static_cast<int>(rng() % 65536);
        e.verdict = rng() % 2 ? EgressVerdict::Allow : EgressVerdict::Deny;
        e.bait = rng() % 8 == 0;
        break;
      default: e.kind = EventKind::Disconnect; e.ip = "10.0.0.3"; break;
    }
    if (!(decode_event(encode_event(e)) == e)) {
      ok = check(false, "round-trip loss at case " + std::to_string(i));
      break;
    }
  }

  // Sessionization accounting on a real corpus: every event lands in exactly
  // one bucket.
  GenerateResult gen = load_and_generate("fig3");
  SessionizeResult sr = sessionize(gen.events);
  std::size_t bucketed = sr.auth_attempts.size() + sr.orphans.size();
  for (const Session& s : sr.sessions) bucketed += s.events.size();
  ok &= check(bucketed == gen.events.size(),
              "partition accounting: " + std::to_string(bucketed) + " of " +
                  std::to_string(gen.events.size()));
  report(10, "log round-trip and sessionization accounting", ok);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: acceptance <scenario-dir>\n");
    return 2;
  }
  scenario_dir = argv[1];

  criterion1_partition();
  criterion2_table1();
  criterion3_table2();
  criterion4_operators();
  criterion5_reconstruction();
  criterion6_password_lifecycle();
  criterion7_egress();
  criterion8_correlation();
  criterion9_determinism();
  criterion10_roundtrip();

  if (failures) {
    std::printf("\n%d criterion(s) failed\n", failures);
    return 1;
  }
  std::printf("\nall criteria passed\n");
  return 0;
}
