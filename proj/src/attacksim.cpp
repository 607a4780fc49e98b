#include "hipot/attacksim.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

namespace hipot {

using json = nlohmann::json;

namespace {

TimeMs parse_ts_field(const json& j, const char* key, TimeMs fallback) {
  if (!j.contains(key)) return fallback;
  auto ts = parse_rfc3339_ms(j.at(key).get<std::string>());
  if (!ts) throw std::runtime_error(std::string("bad timestamp in `") + key + "`");
  return *ts;
}

double normal_sample(std::mt19937_64& rng) {
  // Box-Muller on explicit uniforms keeps the stream library-independent.
  const double u1 =
      (static_cast<double>(rng() >> 11) + 1.0) / 9007199254740993.0;
  const double u2 = static_cast<double>(rng() >> 11) / 9007199254740992.0;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

TimeMs keystroke_delay(std::mt19937_64& rng) {
  // Log-normal around ~150 ms.
  const double d = std::exp(5.0 + 0.4 * normal_sample(rng));
  return static_cast<TimeMs>(std::clamp(d, 30.0, 2000.0));
}

}  // namespace

Scenario Scenario::parse_json(const std::string& text) {
  json j = json::parse(text);
  Scenario sc;
  sc.seed = j.value("seed", std::uint64_t{1});
  sc.start_ts = parse_ts_field(j, "start_ts", 0);
  if (j.contains("accounts")) {
    for (const json& a : j.at("accounts")) {
      Account acct;
      acct.name = a.at("name").get<std::string>();
      acct.weak = a.value("weak", true);
      acct.created_ts = parse_ts_field(a, "created", sc.start_ts);
      acct.passwords.emplace_back(acct.created_ts, a.at("password").get<std::string>());
      sc.accounts.push_back(std::move(acct));
    }
  }
  if (j.contains("sandbox")) {
    const json& s = j.at("sandbox");
    sc.sandbox.bait_addr = s.value("bait_addr", sc.sandbox.bait_addr);
    sc.sandbox.kernel_version = s.value("kernel_version", sc.sandbox.kernel_version);
    sc.sandbox.kernel_banner = s.value("kernel_banner", sc.sandbox.kernel_banner);
    sc.sandbox.motd = s.value("motd", sc.sandbox.motd);
  }
  if (j.contains("fixtures"))
    sc.catalog = FixtureCatalog::parse_json(j.at("fixtures").dump());
  for (const json& p : j.value("population", json::array())) {
    PersonaSpec spec;
    spec.kind = p.at("kind").get<std::string>();
    if (spec.kind != "scanner" && spec.kind != "dictbot" &&
        spec.kind != "human_intruder" && spec.kind != "script_intruder")
      throw std::runtime_error("unknown persona kind `" + spec.kind + "`");
    spec.count = p.value("count", 1);
    spec.ip = p.value("ip", std::string{});
    spec.ip_prefix = p.value("ip_prefix", std::string{});
    if (p.contains("ips")) spec.ips = p.at("ips").get<std::vector<std::string>>();
    spec.start_offset_ms = p.value("start_offset_ms", std::int64_t{0});
    spec.spacing_ms = p.value("spacing_ms", std::int64_t{60000});
    spec.probe_pairs = p.value("probe_pairs", 0);
    spec.account = p.value("account", std::string{});
    spec.pairs = p.value("pairs", std::uint64_t{50});
    spec.attempts = p.value("attempts", std::uint64_t{0});
    spec.distinct_passwords = p.value("distinct_passwords", std::uint64_t{0});
    spec.succeed = p.value("succeed", false);
    spec.attempt_interval_ms = p.value("attempt_interval_ms", std::int64_t{400});
    spec.password = p.value("password", std::string{});
    spec.new_password = p.value("new_password", std::string{});
    for (const json& s : p.value("sessions", json::array())) {
      SessionScript script;
      script.offset_ms = s.value("offset_ms", std::int64_t{0});
      script.lines = s.value("lines", std::vector<std::string>{});
      script.typo_prob = s.value("typo_prob", 0.0);
      script.char_by_char = s.value("char_by_char",
                                    spec.kind == "human_intruder");
      script.expect_verdict = s.value("expect_verdict", std::string{});
      if (s.contains("expect_tags"))
        script.expect_tags = s.at("expect_tags").get<std::vector<std::string>>();
      spec.sessions.push_back(std::move(script));
    }
    if ((spec.kind == "human_intruder" || spec.kind == "script_intruder") &&
        spec.sessions.empty())
      throw std::runtime_error("intruder persona without sessions");
    sc.population.push_back(std::move(spec));
  }
  // Validate fixture references in scripted download commands.
  for (const PersonaSpec& spec : sc.population)
    for (const SessionScript& s : spec.sessions)
      for (const std::string& line : s.lines) {
        if (line.rfind("inband-get ", 0) == 0) {
          const std::string name = line.substr(line.rfind(' ') + 1);
          if (!sc.catalog.find(name))
            throw std::runtime_error("scenario references unknown fixture `" +
                                     name + "`");
        }
      }
  return sc;
}

Scenario Scenario::load_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open scenario file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_json(buf.str());
}

std::string GenerateResult::labels_to_jsonl() const {
  std::string out;
  for (const IpLabel& l : ip_labels) {
    json j;
    j["type"] = "ip";
    j["ip"] = l.ip;
    j["class"] = l.cls;
    j["dict_success"] = l.dict_success;
    out += j.dump() + "\n";
  }
  for (const SessionLabel& l : session_labels) {
    json j;
    j["type"] = "session";
    j["sid"] = l.sid;
    j["ip"] = l.ip;
    j["account"] = l.account;
    j["verdict"] = l.verdict;
    if (l.tags) j["tags"] = *l.tags;
    out += j.dump() + "\n";
  }
  return out;
}

namespace {

struct Activity {
  TimeMs start;
  std::size_t order;
  const PersonaSpec* spec;
  int instance;
  std::string ip;
};

std::string derive_ip(const PersonaSpec& spec, int instance) {
  if (!spec.ips.empty()) return spec.ips[instance % spec.ips.size()];
  if (!spec.ip.empty() && spec.count == 1) return spec.ip;
  const std::string prefix = spec.ip_prefix.empty() ? "198.51.100" : spec.ip_prefix;
  const int dots = static_cast<int>(std::count(prefix.begin(), prefix.end(), '.'));
  if (dots >= 2) return prefix + "." + std::to_string(instance % 254 + 1);
  return prefix + "." + std::to_string(instance / 254) + "." +
         std::to_string(instance % 254 + 1);
}

class Generator {
 public:
  explicit Generator(const Scenario& sc) : sc_(sc), rng_(sc.seed) {
    for (const Account& a : sc.accounts) policy_.add_account(a);
  }

  GenerateResult run() {
    std::vector<Activity> activities;
    std::size_t order = 0;
    for (const PersonaSpec& spec : sc_.population) {
      for (int i = 0; i < spec.count; ++i) {
        Activity a;
        a.start = sc_.start_ts + spec.start_offset_ms +
                  static_cast<TimeMs>(i) * spec.spacing_ms;
        a.order = order++;
        a.spec = &spec;
        a.instance = i;
        a.ip = derive_ip(spec, i);
        activities.push_back(std::move(a));
      }
    }
    std::stable_sort(activities.begin(), activities.end(),
                     [](const Activity& a, const Activity& b) {
                       if (a.start != b.start) return a.start < b.start;
                       return a.order < b.order;
                     });
    for (const Activity& a : activities) {
      if (a.spec->kind == "scanner") run_scanner(a);
      else if (a.spec->kind == "dictbot") run_dictbot(a);
      else run_intruder(a);
    }

    std::stable_sort(result_.events.begin(), result_.events.end(),
                     [](const Event& a, const Event& b) { return a.ts < b.ts; });
    for (std::size_t i = 0; i < result_.events.size(); ++i)
      result_.events[i].seq = i;
    return std::move(result_);
  }

 private:
  std::string new_sid() { return "g" + std::to_string(next_sid_++); }

  Event base(EventKind kind, TimeMs ts) {
    Event e;
    e.kind = kind;
    e.ts = ts;
    return e;
  }

  void push(Event e) { result_.events.push_back(std::move(e)); }

  void run_scanner(const Activity& a) {
    TimeMs t = a.start;
    const std::string sid = new_sid();
    Event c = base(EventKind::Connect, t);
    c.sid = sid;
    c.ip = a.ip;
    push(c);
    for (int i = 0; i < a.spec->probe_pairs; ++i) {
      t += 700;
      Event e = base(EventKind::Auth, t);
      e.ip = a.ip;
      e.user = "probe" + std::to_string(i);
      e.pass = "123456";
      e.ok = false;
      push(e);
    }
    Event d = base(EventKind::Disconnect, t + 300);
    d.sid = sid;
    d.ip = a.ip;
    push(d);
    result_.ip_labels.push_back({a.ip, "scanner", false});
  }

  void run_dictbot(const Activity& a) {
    const PersonaSpec& spec = *a.spec;
    TimeMs t = a.start;
    const std::string sid = new_sid();
    Event c = base(EventKind::Connect, t);
    c.sid = sid;
    c.ip = a.ip;
    push(c);

    static const char* kUserPool[] = {"root", "admin", "test", "user", "guest",
                                      "info", "mysql", "oracle", "postgres",
                                      "webmaster", "alice", "michel", "sarah"};
    const std::uint64_t total = spec.attempts ? spec.attempts : spec.pairs;
    const std::uint64_t distinct_pw =
        spec.distinct_passwords ? spec.distinct_passwords
                                : (spec.attempts ? spec.attempts : spec.pairs);
    std::uint64_t success_at = spec.succeed ? spec.pairs / 2 + rng_() % (spec.pairs / 2 + 1)
                                            : total + 1;
    if (spec.succeed && success_at >= total) success_at = total - 1;
    bool succeeded = false;
    for (std::uint64_t i = 0; i < total; ++i) {
      t += spec.attempt_interval_ms;
      Event e = base(EventKind::Auth, t);
      e.ip = a.ip;
      if (!spec.account.empty()) {
        e.user = spec.account;
        e.pass = "pw" + std::to_string(i % distinct_pw);
      } else {
        e.user = kUserPool[rng_() % (sizeof(kUserPool) / sizeof(*kUserPool))];
        e.pass = "d" + std::to_string(a.order) + "_" + std::to_string(i);
      }
      if (spec.succeed && i == success_at && !spec.account.empty())
        e.pass = policy_.find(spec.account)->password_at(t);
      e.ok = policy_.check(e.user, e.pass, t);
      if (e.ok) e.sid = sid;
      push(e);
      if (e.ok) {
        succeeded = true;
        break;  // bot found a password; records it and moves on
      }
    }
    Event d = base(EventKind::Disconnect, t + 200);
    d.sid = sid;
    d.ip = a.ip;
    push(d);
    result_.ip_labels.push_back({a.ip, "dictionary", succeeded});
  }

  SandboxState& sandbox_for(const std::string& account) {
    auto it = sandboxes_.find(account);
    if (it == sandboxes_.end())
      it = sandboxes_
               .emplace(account, make_sandbox(account, sc_.sandbox, policy_))
               .first;
    return it->second;
  }

  void run_intruder(const Activity& a) {
    const PersonaSpec& spec = *a.spec;
    bool labelled_ip = false;
    for (const SessionScript& script : spec.sessions) {
      TimeMs t = sc_.start_ts + script.offset_ms +
                 static_cast<TimeMs>(a.instance) * spec.spacing_ms;
      if (script.offset_ms == 0) t = a.start;
      const std::string sid = new_sid();
      Event c = base(EventKind::Connect, t);
      c.sid = sid;
      c.ip = a.ip;
      push(c);

      t += 800;
      const std::string login_pw =
          spec.password.empty()
              ? policy_.find(spec.account)->password_at(t)
              : spec.password;
      Event auth = base(EventKind::Auth, t);
      auth.ip = a.ip;
      auth.user = spec.account;
      auth.pass = login_pw;
      auth.ok = policy_.check(spec.account, login_pw, t);
      if (auth.ok) auth.sid = sid;
      push(auth);

      if (!auth.ok) {
        Event d = base(EventKind::Disconnect, t + 200);
        d.sid = sid;
        d.ip = a.ip;
        push(d);
        continue;
      }

      SandboxState& state = sandbox_for(spec.account);
      EgressFn egress = [&](const EgressRequest& req) {
        const EgressVerdict verdict = egress_policy_.check(req.proto, t);
        Event e = base(EventKind::Egress, t);
        e.sid = sid;
        e.dst = req.dst;
        e.port = req.port;
        e.verdict = verdict;
        e.bait = req.bait;
        push(e);
        return verdict;
      };
      Shellbox shell(sc_.sandbox, sc_.catalog, &policy_, egress);

      for (std::string line : script.lines) {
        auto expand = [&](const std::string& token, const std::string& value) {
          for (auto pos = line.find(token); pos != std::string::npos;
               pos = line.find(token))
            line.replace(pos, token.size(), value);
        };
        expand("$NEWPASS", spec.new_password);
        expand("$PASS", login_pw);

        t += 900 + static_cast<TimeMs>(rng_() % 400);
        if (script.char_by_char) {
          for (char ch : line) {
            if (script.typo_prob > 0.0 &&
                (script.typo_prob >= 1.0 ||
                 (rng_() % 1000) < static_cast<std::uint64_t>(script.typo_prob * 1000))) {
              const char wrong = 'a' + static_cast<char>(rng_() % 26);
              push(tty_read(sid, std::string(1, wrong), t));
              t += keystroke_delay(rng_);
              push(tty_read(sid, std::string(1, '\x08'), t));
              t += keystroke_delay(rng_);
            }
            push(tty_read(sid, std::string(1, ch), t));
            t += keystroke_delay(rng_);
          }
          push(tty_read(sid, "\n", t));
        } else {
          push(tty_read(sid, line + "\n", t));
        }
        t += 40;

        ShellResult r = shell.execute(line, state, t);
        for (const ExecRecord& x : r.execs) {
          Event e = base(EventKind::Exec, t);
          e.sid = sid;
          e.path = x.path;
          e.argv = x.argv;
          push(e);
        }
        if (!r.output.empty()) {
          Event w = base(EventKind::TtyWrite, t);
          w.sid = sid;
          w.tty = "pts/0";
          w.data = r.output;
          push(w);
        }
        t += 300;
      }

      Event d = base(EventKind::Disconnect, t + 500);
      d.sid = sid;
      d.ip = a.ip;
      push(d);

      SessionLabel label;
      label.sid = sid;
      label.ip = a.ip;
      label.account = spec.account;
      label.verdict = !script.expect_verdict.empty()
                          ? script.expect_verdict
                          : (spec.kind == "human_intruder" ? "human" : "script");
      if (!script.expect_tags.empty()) label.tags = script.expect_tags;
      result_.session_labels.push_back(std::move(label));
      if (!labelled_ip) {
        result_.ip_labels.push_back({a.ip, "intruder", false});
        labelled_ip = true;
      }
    }
  }

  Event tty_read(const std::string& sid, std::string data, TimeMs ts) {
    Event e = base(EventKind::TtyRead, ts);
    e.sid = sid;
    e.tty = "pts/0";
    e.data = std::move(data);
    return e;
  }

  const Scenario& sc_;
  std::mt19937_64 rng_;
  CredentialPolicy policy_;
  EgressPolicy egress_policy_;
  std::map<std::string, SandboxState> sandboxes_;
  GenerateResult result_;
  int next_sid_ = 1;
};

}  // namespace

GenerateResult generate(const Scenario& scenario) {
  return Generator(scenario).run();
}

namespace {

struct TcpClient {
  int fd = -1;
  std::string buf;

  bool connect_to(const std::string& host, int port) {
    fd = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd < 0) return false;
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(static_cast<std::uint16_t>(port));
    if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1 ||
        ::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) < 0) {
      ::close(fd);
      fd = -1;
      return false;
    }
    return true;
  }

  bool send_line(const std::string& line) {
    const std::string data = line + "\n";
    std::size_t off = 0;
    while (off < data.size()) {
      ssize_t n = ::send(fd, data.data() + off, data.size() - off, MSG_NOSIGNAL);
      if (n <= 0) return false;
      off += static_cast<std::size_t>(n);
    }
    return true;
  }

  std::optional<std::string> read_line() {
    char tmp[4096];
    while (true) {
      auto nl = buf.find('\n');
      if (nl != std::string::npos) {
        std::string line = buf.substr(0, nl);
        buf.erase(0, nl + 1);
        return line;
      }
      ssize_t n = ::recv(fd, tmp, sizeof(tmp), 0);
      if (n <= 0) return std::nullopt;
      buf.append(tmp, static_cast<std::size_t>(n));
    }
  }

  void close() {
    if (fd >= 0) ::close(fd);
    fd = -1;
  }
};

}  // namespace

ReplayReport replay_log(const std::vector<Event>& events, const std::string& host,
                        int port) {
  ReplayReport rep;
  std::map<std::string, TcpClient> conns;

  auto abort_all = [&](const std::string& why) {
    for (auto& [sid, c] : conns) c.close();
    rep.aborted = true;
    rep.error = why;
    return rep;
  };

  for (const Event& e : events) {
    switch (e.kind) {
      case EventKind::Connect: {
        if (!e.sid) break;
        TcpClient c;
        if (!c.connect_to(host, port)) return abort_all("connection refused");
        ++rep.connections;
        // The motd banner arrives unframed before the first reply; it is
        // consumed lazily by discarding non-protocol lines in read_line users.
        c.send_line("IP " + e.ip);
        c.send_line("TS " + std::to_string(e.ts));
        c.send_line("CONNECT");
        conns[*e.sid] = std::move(c);
        break;
      }
      case EventKind::Auth: {
        ++rep.auths;
        if (e.sid && conns.count(*e.sid)) {
          TcpClient& c = conns[*e.sid];
          c.send_line("TS " + std::to_string(e.ts));
          c.send_line("USER " + e.user);
          c.send_line("PASS " + e.pass);
          while (auto line = c.read_line()) {
            if (line->rfind("OK", 0) == 0 || *line == "FAIL") break;
          }
        } else {
          // Pre-session probe: one short-lived connection per attempt.
          TcpClient c;
          if (!c.connect_to(host, port)) return abort_all("connection refused");
          ++rep.connections;
          c.send_line("IP " + e.ip);
          c.send_line("TS " + std::to_string(e.ts));
          c.send_line("USER " + e.user);
          c.send_line("PASS " + e.pass);
          while (auto line = c.read_line()) {
            if (line->rfind("OK", 0) == 0 || *line == "FAIL") break;
          }
          c.send_line("Q");
          c.close();
        }
        break;
      }
      case EventKind::TtyRead: {
        if (!e.sid || !conns.count(*e.sid)) break;
        TcpClient& c = conns[*e.sid];
        c.send_line("TS " + std::to_string(e.ts));
        c.send_line("D " + to_hex(e.data));
        ++rep.chunks;
        while (auto line = c.read_line()) {
          if (line->rfind("O ", 0) == 0 || line->rfind("ERR", 0) == 0) break;
        }
        break;
      }
      case EventKind::Disconnect: {
        if (!e.sid || !conns.count(*e.sid)) break;
        TcpClient& c = conns[*e.sid];
        c.send_line("TS " + std::to_string(e.ts));
        c.send_line("Q");
        c.close();
        conns.erase(*e.sid);
        break;
      }
      default:
        break;  // TtyWrite/Exec/Egress are produced by the sensor itself
    }
  }
  for (auto& [sid, c] : conns) c.close();
  return rep;
}

}  // namespace hipot
