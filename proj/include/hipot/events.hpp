#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hipot/timeutil.hpp"

namespace hipot {

// Log format version written in every line's `v` key.
inline constexpr int kLogFormatVersion = 1;

enum class EventKind {
  Connect,
  Auth,
  TtyRead,
  TtyWrite,
  Exec,
  Egress,
  Disconnect,
};

const char* kind_name(EventKind k);
std::optional<EventKind> kind_from_name(const std::string& name);

enum class EgressVerdict { Allow, Deny };

// One captured event. A single flat record covers every kind; only the
// fields relevant to `kind` are meaningful (and serialized).
//
//   Connect/Disconnect: ip
//   Auth:               ip, user, pass, ok (sid present only when granted)
//   TtyRead/TtyWrite:   tty, data (raw bytes)
//   Exec:               path, argv
//   Egress:             dst, port, verdict, bait
struct Event {
  std::uint64_t seq = 0;
  TimeMs ts = 0;
  std::optional<std::string> sid;  // absent for pre-session auth probes
  EventKind kind = EventKind::Connect;

  std::string ip;
  std::string user;
  std::string pass;
  bool ok = false;
  std::string tty;
  std::string data;  // raw bytes, hex-escaped on the wire
  std::string path;
  std::vector<std::string> argv;
  std::string dst;
  int port = 0;
  EgressVerdict verdict = EgressVerdict::Deny;
  bool bait = false;

  bool operator==(const Event& other) const;
};

struct ParseError : std::runtime_error {
  explicit ParseError(std::size_t line_no_, const std::string& msg)
      : std::runtime_error("line " + std::to_string(line_no_) + ": " + msg),
        line_no(line_no_) {}
  std::size_t line_no;
};

// One line of the hipot-log v1 format, without trailing newline.
// decode_event(encode_event(e)) == e for every representable event.
std::string encode_event(const Event& e);

// Throws ParseError on malformed input. line_no is used for diagnostics only.
Event decode_event(const std::string& line, std::size_t line_no = 0);

std::string to_hex(const std::string& bytes);
std::optional<std::string> from_hex(const std::string& hex);

}  // namespace hipot
