#include "hipot/sensor.hpp"

#include <fstream>

namespace hipot {

Sensor::Sensor(SensorConfig config, CredentialPolicy policy, LogWriter& log)
    : config_(std::move(config)), policy_(std::move(policy)), log_(log) {
  shell_ = std::make_unique<Shellbox>(config_.sandbox, config_.catalog, &policy_,
                                      EgressFn{});
}

std::string Sensor::connect(const std::string& ip, TimeMs ts) {
  std::lock_guard<std::mutex> lock(mu_);
  Connection c;
  c.sid = "s" + std::to_string(next_conn_++);
  c.ip = ip;
  c.tty = "pts/" + std::to_string(next_tty_++);
  Event e;
  e.ts = ts;
  e.sid = c.sid;
  e.kind = EventKind::Connect;
  e.ip = ip;
  log_.append(e);
  std::string sid = c.sid;
  conns_[sid] = std::move(c);
  return sid;
}

AuthResult Sensor::authenticate(const std::string& sid, const std::string& ip,
                                const std::string& user, const std::string& pass,
                                TimeMs ts) {
  std::lock_guard<std::mutex> lock(mu_);
  const bool ok = policy_.check(user, pass, ts);
  Event e;
  e.ts = ts;
  e.kind = EventKind::Auth;
  e.ip = ip;
  e.user = user;
  e.pass = pass;
  e.ok = ok;
  if (ok) e.sid = sid;
  log_.append(e);
  if (!ok) return {};
  auto it = conns_.find(sid);
  if (it == conns_.end()) return {};
  it->second.authenticated = true;
  it->second.account = user;
  return {true, sid};
}

Sensor::AccountBox& Sensor::sandbox_for(const std::string& account) {
  auto it = boxes_.find(account);
  if (it == boxes_.end()) {
    auto box = std::make_unique<AccountBox>();
    box->state = make_sandbox(account, config_.sandbox, policy_);
    it = boxes_.emplace(account, std::move(box)).first;
  }
  return *it->second;
}

std::string Sensor::feed(const std::string& sid, const std::string& chunk,
                         TimeMs ts) {
  Connection* conn;
  AccountBox* box;
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = conns_.find(sid);
    if (it == conns_.end() || !it->second.authenticated || chunk.empty()) return "";
    conn = &it->second;
    box = &sandbox_for(conn->account);

    Event e;
    e.ts = ts;
    e.sid = sid;
    e.kind = EventKind::TtyRead;
    e.tty = conn->tty;
    e.data = chunk;
    log_.append(e);
  }

  // Line assembly: backspace editing happens here; the raw bytes are already
  // preserved in the TtyRead event above.
  std::vector<std::string> lines;
  for (std::size_t i = 0; i < chunk.size(); ++i) {
    const unsigned char c = static_cast<unsigned char>(chunk[i]);
    if (c == 0x08 || c == 0x7F) {
      if (!conn->line_buf.empty()) conn->line_buf.pop_back();
    } else if (c == '\r' || c == '\n') {
      if (c == '\r' && i + 1 < chunk.size() && chunk[i + 1] == '\n') ++i;
      lines.push_back(conn->line_buf);
      conn->line_buf.clear();
    } else {
      conn->line_buf.push_back(static_cast<char>(c));
    }
  }
  if (lines.empty()) return "";

  std::string output;
  {
    std::lock_guard<std::mutex> sandbox_lock(box->mu);
    EgressFn egress = [&](const EgressRequest& req) {
      const EgressVerdict verdict = config_.egress.check(req.proto, ts);
      Event e;
      e.ts = ts;
      e.sid = sid;
      e.kind = EventKind::Egress;
      e.dst = req.dst;
      e.port = req.port;
      e.verdict = verdict;
      e.bait = req.bait;
      log_.append(e);
      return verdict;
    };
    Shellbox shell(config_.sandbox, config_.catalog, &policy_, egress);
    for (const std::string& line : lines) {
      ShellResult r;
      try {
        r = shell.execute(line, box->state, ts);
      } catch (const std::exception&) {
        // Fail closed: the emulated shell must never take the session down
        // with host access; close the session instead.
        disconnect(sid, ts);
        return output;
      }
      for (const ExecRecord& x : r.execs) {
        Event e;
        e.ts = ts;
        e.sid = sid;
        e.kind = EventKind::Exec;
        e.path = x.path;
        e.argv = x.argv;
        log_.append(e);
      }
      output += r.output;
    }
  }

  if (!output.empty()) {
    std::lock_guard<std::mutex> lock(mu_);
    Event e;
    e.ts = ts;
    e.sid = sid;
    e.kind = EventKind::TtyWrite;
    e.tty = conn->tty;
    e.data = output;
    log_.append(e);
  }
  persist_policy();
  return output;
}

void Sensor::disconnect(const std::string& sid, TimeMs ts) {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = conns_.find(sid);
  if (it == conns_.end()) return;
  Event e;
  e.ts = ts;
  e.sid = sid;
  e.kind = EventKind::Disconnect;
  e.ip = it->second.ip;
  log_.append(e);
  conns_.erase(it);
}

void Sensor::persist_policy() {
  if (config_.state_file.empty()) return;
  std::ofstream out(config_.state_file, std::ios::binary | std::ios::trunc);
  out << policy_.serialize();
}

}  // namespace hipot
