#include <doctest.h>

#include <random>

#include "hipot/report.hpp"

using namespace hipot;

namespace {

Event auth_event(const std::string& user, const std::string& pass,
                 const std::string& ip = "10.0.0.1", bool ok = false) {
  Event e;
  e.kind = EventKind::Auth;
  e.ip = ip;
  e.user = user;
  e.pass = pass;
  e.ok = ok;
  return e;
}

}  // namespace

TEST_CASE("render_percent rounds half-up to two decimals") {
  CHECK(render_percent(34251, 248717) == "13.77");
  CHECK(render_percent(0, 100) == "0.00");
  CHECK(render_percent(100, 100) == "100.00");
  CHECK(render_percent(1, 3) == "33.33");
  CHECK(render_percent(2, 3) == "66.67");
  CHECK(render_percent(1, 8) == "12.50");
  CHECK(render_percent(1, 16000) == "0.01");   // 0.00625 -> 0.01
  CHECK(render_percent(1, 40000) == "0.00");   // 0.0025 -> 0.00
  CHECK(render_percent(5, 0) == "0.00");
}

TEST_CASE("top accounts: ordering, percentages, distinct passwords") {
  std::vector<Event> events;
  for (int i = 0; i < 50; ++i) events.push_back(auth_event("root", "p" + std::to_string(i % 20)));
  for (int i = 0; i < 30; ++i) events.push_back(auth_event("admin", "x"));
  for (int i = 0; i < 20; ++i) events.push_back(auth_event("test", "p" + std::to_string(i)));

  auto rows = top_accounts(events, 2);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].account == "root");
  CHECK(rows[0].attempts == 50);
  CHECK(rows[0].distinct_passwords == 20);
  CHECK(rows[0].percentage == "50.00");
  CHECK(rows[1].account == "admin");
  CHECK(rows[1].distinct_passwords == 1);

  // Ties break by account name.
  std::vector<Event> tie = {auth_event("bbb", "x"), auth_event("aaa", "x")};
  auto t = top_accounts(tie, 10);
  CHECK(t[0].account == "aaa");
}

TEST_CASE("percentages over all accounts sum to ~100") {
  std::mt19937_64 rng(7);
  std::vector<Event> events;
  for (int i = 0; i < 5000; ++i)
    events.push_back(auth_event("u" + std::to_string(rng() % 40),
                                std::to_string(rng() % 1000)));
  auto rows = top_accounts(events, 9999);
  double sum = 0;
  for (const auto& r : rows) sum += std::stod(r.percentage);
  CHECK(sum == doctest::Approx(100.0).epsilon(0.01));
}

TEST_CASE("partition report counts every class exactly once") {
  std::map<std::string, SourceProfile> profiles;
  auto add = [&](const char* ip, SourceClass cls, std::uint64_t successes = 0) {
    SourceProfile p;
    p.ip = ip;
    p.classification = cls;
    p.successes = successes;
    profiles[ip] = p;
  };
  add("1.1.1.1", SourceClass::Scanner);
  add("1.1.1.2", SourceClass::Scanner);
  add("2.2.2.2", SourceClass::DictionaryAttacker);
  add("2.2.2.3", SourceClass::DictionaryAttacker, 1);
  add("3.3.3.3", SourceClass::Intruder, 1);
  add("4.4.4.4", SourceClass::Unknown);

  PartitionCounts c = partition_report(profiles);
  CHECK(c.total_ips == 6);
  CHECK(c.scanners == 2);
  CHECK(c.dictionary == 2);
  CHECK(c.dictionary_succeeded == 1);
  CHECK(c.intruders == 1);
  CHECK(c.unknown == 1);
  CHECK(c.scanners + c.dictionary + c.intruders + c.unknown == c.total_ips);
}

TEST_CASE("intrusions per account") {
  auto mk = [](const char* sid, const char* acct, const char* ip,
               const char* pw, bool with_exec) {
    Session s;
    s.sid = sid;
    s.account = acct;
    s.source_ip = ip;
    s.authenticated = true;
    Event a;
    a.kind = EventKind::Auth;
    a.sid = sid;
    a.user = acct;
    a.pass = pw;
    a.ok = true;
    s.events.push_back(a);
    if (with_exec) {
      Event e;
      e.kind = EventKind::Exec;
      e.sid = sid;
      e.path = "w";
      e.argv = {"w"};
      s.events.push_back(e);
    }
    return s;
  };
  std::vector<Session> sessions = {
      mk("s1", "ua4", "10.1.0.1", "a", true),
      mk("s2", "ua4", "10.1.0.2", "a", true),
      mk("s3", "ua4", "10.1.0.1", "b", true),
      mk("s4", "ua4", "10.9.0.9", "c", false),  // login only: no intrusion
      mk("s5", "ua7", "10.2.0.1", "z", true),
  };
  auto rows = intrusions_per_account(sessions);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].account == "ua4");
  CHECK(rows[0].intrusions == 3);
  CHECK(rows[0].distinct_passwords == 2);
  CHECK(rows[0].distinct_ips == 2);
  CHECK(rows[1].account == "ua7");
  CHECK(rows[1].intrusions == 1);
}

TEST_CASE("sensor correlation: self-overlap equals class size") {
  std::map<std::string, SourceProfile> a;
  auto add = [&](const char* ip, SourceClass cls) {
    SourceProfile p;
    p.ip = ip;
    p.classification = cls;
    a[ip] = p;
  };
  add("1.1.1.1", SourceClass::Scanner);
  add("1.1.1.2", SourceClass::Scanner);
  add("2.2.2.2", SourceClass::Intruder);

  OverlapCounts self = correlate_sensors(a, a);
  for (auto cls : {SourceClass::Scanner, SourceClass::DictionaryAttacker,
                   SourceClass::Intruder, SourceClass::Unknown})
    CHECK(self.overlap_with_b.at(cls) == self.class_size.at(cls));

  // Against an empty peer, overlap vanishes but sizes stay.
  OverlapCounts none = correlate_sensors(a, {});
  CHECK(none.class_size.at(SourceClass::Scanner) == 2);
  CHECK(none.overlap_with_b.at(SourceClass::Scanner) == 0);

  // Overlap is monotone in the peer set.
  std::map<std::string, SourceProfile> b;
  b["1.1.1.1"] = a["1.1.1.1"];
  OverlapCounts partial = correlate_sensors(a, b);
  CHECK(partial.overlap_with_b.at(SourceClass::Scanner) == 1);
  b["1.1.1.2"] = a["1.1.1.2"];
  OverlapCounts more = correlate_sensors(a, b);
  CHECK(more.overlap_with_b.at(SourceClass::Scanner) == 2);
}

TEST_CASE("report rendering is deterministic and complete") {
  ReportInputs in;
  for (int i = 0; i < 15; ++i)
    in.events.push_back(auth_event("root", "p" + std::to_string(i),
                                   "10.5.0." + std::to_string(i % 3)));
  in.events.push_back(auth_event("ua2", "pw", "10.6.0.1", true));
  in.sessions = sessionize({});
  ForensicsConfig cfg;
  in.profiles = build_profiles(in.events, in.sessions);
  for (auto& [ip, p] : in.profiles) p.classification = classify_source(p, cfg);

  const std::string text = render_report(in, "text");
  CHECK(text == render_report(in, "text"));
  CHECK(text.find("Connection attempts: 16 (1 successful)") != std::string::npos);
  CHECK(text.find("root") != std::string::npos);

  const std::string js = render_report(in, "json");
  CHECK(js == render_report(in, "json"));
  CHECK(js.find("\"auth_attempts\": 16") != std::string::npos);
  CHECK(js.find("\"top_accounts\"") != std::string::npos);

  // Peer section appears only when a peer log is supplied.
  CHECK(text.find("Cross-sensor overlap") == std::string::npos);
  in.peer_profiles = &in.profiles;
  CHECK(render_report(in, "text").find("Cross-sensor overlap") != std::string::npos);
  CHECK(render_report(in, "json").find("sensor_overlap") != std::string::npos);
}
