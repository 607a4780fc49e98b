#include "hipot/eventlog.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace hipot {

LogWriter::LogWriter(const std::string& path) : out_(nullptr) {
  file_.open(path, std::ios::binary | std::ios::app);
  if (!file_) throw std::runtime_error("cannot open log file: " + path);
  out_ = &file_;
}

LogWriter::LogWriter(std::ostream& out) : out_(&out) {}

Event LogWriter::append(Event e) {
  std::lock_guard<std::mutex> lock(mu_);
  e.seq = seq_++;
  *out_ << encode_event(e) << '\n';
  out_->flush();
  return e;
}

std::uint64_t LogWriter::next_seq() const {
  std::lock_guard<std::mutex> lock(mu_);
  return seq_;
}

LogReadResult read_log(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open log file: " + path);
  return read_log_stream(in);
}

LogReadResult read_log_stream(std::istream& in) {
  LogReadResult result;
  std::string line;
  std::size_t line_no = 0;
  while (true) {
    if (!std::getline(in, line)) break;
    ++line_no;
    const bool has_newline = !in.eof();
    if (line.empty() && !has_newline) break;  // trailing newline at EOF
    try {
      result.events.push_back(decode_event(line, line_no));
    } catch (const ParseError&) {
      if (!has_newline) {
        // Sensor may have been killed mid-write; the tail is recoverable.
        result.partial_tail = true;
        break;
      }
      throw;
    }
  }
  return result;
}

bool Session::has_exec() const {
  return std::any_of(events.begin(), events.end(),
                     [](const Event& e) { return e.kind == EventKind::Exec; });
}

SessionizeResult sessionize(const std::vector<Event>& events) {
  SessionizeResult result;
  std::map<std::string, std::size_t> open;  // sid -> index into sessions
  for (const Event& e : events) {
    if (!e.sid) {
      if (e.kind == EventKind::Auth) {
        result.auth_attempts.push_back(e);
      } else {
        result.orphans.push_back(e);
      }
      continue;
    }
    auto it = open.find(*e.sid);
    if (it == open.end()) {
      if (e.kind != EventKind::Connect) {
        result.orphans.push_back(e);
        continue;
      }
      Session s;
      s.sid = *e.sid;
      s.source_ip = e.ip;
      s.start_ts = e.ts;
      s.end_ts = e.ts;
      s.events.push_back(e);
      open.emplace(*e.sid, result.sessions.size());
      result.sessions.push_back(std::move(s));
      continue;
    }
    Session& s = result.sessions[it->second];
    s.events.push_back(e);
    s.end_ts = std::max(s.end_ts, e.ts);
    if (e.kind == EventKind::Auth && e.ok) {
      s.authenticated = true;
      s.account = e.user;
    }
  }
  std::stable_sort(result.sessions.begin(), result.sessions.end(),
                   [](const Session& a, const Session& b) {
                     if (a.start_ts != b.start_ts) return a.start_ts < b.start_ts;
                     return a.sid < b.sid;
                   });
  return result;
}

}  // namespace hipot
