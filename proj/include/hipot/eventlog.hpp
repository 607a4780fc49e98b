#pragma once

#include <fstream>
#include <mutex>
#include <ostream>
#include <string>
#include <vector>

#include "hipot/events.hpp"

namespace hipot {

// Single serializer for a log file: assigns seq and appends one line per
// event. All producers funnel through append(); append is atomic per line.
class LogWriter {
 public:
  explicit LogWriter(const std::string& path);
  explicit LogWriter(std::ostream& out);

  // Stamps seq (and returns the stamped event), then writes and flushes.
  Event append(Event e);

  std::uint64_t next_seq() const;

 private:
  mutable std::mutex mu_;
  std::ofstream file_;
  std::ostream* out_;
  std::uint64_t seq_ = 0;
};

struct LogReadResult {
  std::vector<Event> events;
  // Set when the final line is truncated mid-write (no newline, unparsable).
  bool partial_tail = false;
};

// Reads a whole log file. Malformed interior lines throw ParseError with the
// line number; a truncated final line is reported via partial_tail instead.
LogReadResult read_log(const std::string& path);
LogReadResult read_log_stream(std::istream& in);

struct Session {
  std::string sid;
  std::string account;  // empty when the connection never authenticated
  std::string source_ip;
  TimeMs start_ts = 0;
  TimeMs end_ts = 0;
  bool authenticated = false;
  std::vector<Event> events;

  bool has_exec() const;
};

struct SessionizeResult {
  std::vector<Session> sessions;        // ordered by start_ts, then sid
  std::vector<Event> auth_attempts;     // pre-session probes (no sid)
  std::vector<Event> orphans;           // sid events with no prior Connect
};

// Partitions a seq-ordered event stream into per-connection sessions.
// Deterministic: identical input -> identical output.
SessionizeResult sessionize(const std::vector<Event>& events);

}  // namespace hipot
