#include "hipot/events.hpp"

#include <nlohmann/json.hpp>

namespace hipot {

using json = nlohmann::json;

namespace {

// Byte strings (usernames, passwords, argv...) may contain arbitrary bytes.
// They go on the wire as JSON strings with each byte mapped to code point
// U+0000..U+00FF. Printable ASCII stays readable and the mapping is lossless.
std::string bytes_to_text(const std::string& bytes) {
  std::string out;
  out.reserve(bytes.size());
  for (unsigned char c : bytes) {
    if (c < 0x80) {
      out.push_back(static_cast<char>(c));
    } else {
      out.push_back(static_cast<char>(0xC0 | (c >> 6)));
      out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    }
  }
  return out;
}

std::optional<std::string> text_to_bytes(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    unsigned char c = static_cast<unsigned char>(text[i]);
    if (c < 0x80) {
      out.push_back(static_cast<char>(c));
    } else if ((c & 0xE0) == 0xC0 && i + 1 < text.size()) {
      unsigned char c2 = static_cast<unsigned char>(text[++i]);
      unsigned cp = ((c & 0x1F) << 6) | (c2 & 0x3F);
      if (cp > 0xFF) return std::nullopt;  // not a byte string we wrote
      out.push_back(static_cast<char>(cp));
    } else {
      return std::nullopt;
    }
  }
  return out;
}

const char* verdict_name(EgressVerdict v) {
  return v == EgressVerdict::Allow ? "allow" : "deny";
}

}  // namespace

const char* kind_name(EventKind k) {
  switch (k) {
    case EventKind::Connect: return "connect";
    case EventKind::Auth: return "auth";
    case EventKind::TtyRead: return "tty_read";
    case EventKind::TtyWrite: return "tty_write";
    case EventKind::Exec: return "exec";
    case EventKind::Egress: return "egress";
    case EventKind::Disconnect: return "disconnect";
  }
  return "?";
}

std::optional<EventKind> kind_from_name(const std::string& name) {
  if (name == "connect") return EventKind::Connect;
  if (name == "auth") return EventKind::Auth;
  if (name == "tty_read") return EventKind::TtyRead;
  if (name == "tty_write") return EventKind::TtyWrite;
  if (name == "exec") return EventKind::Exec;
  if (name == "egress") return EventKind::Egress;
  if (name == "disconnect") return EventKind::Disconnect;
  return std::nullopt;
}

bool Event::operator==(const Event& o) const {
  if (seq != o.seq || ts != o.ts || sid != o.sid || kind != o.kind) return false;
  switch (kind) {
    case EventKind::Connect:
    case EventKind::Disconnect:
      return ip == o.ip;
    case EventKind::Auth:
      return ip == o.ip && user == o.user && pass == o.pass && ok == o.ok;
    case EventKind::TtyRead:
    case EventKind::TtyWrite:
      return tty == o.tty && data == o.data;
    case EventKind::Exec:
      return path == o.path && argv == o.argv;
    case EventKind::Egress:
      return dst == o.dst && port == o.port && verdict == o.verdict && bait == o.bait;
  }
  return false;
}

std::string to_hex(const std::string& bytes) {
  static const char digits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (unsigned char c : bytes) {
    out.push_back(digits[c >> 4]);
    out.push_back(digits[c & 0x0F]);
  }
  return out;
}

std::optional<std::string> from_hex(const std::string& hex) {
  if (hex.size() % 2 != 0) return std::nullopt;
  auto nib = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
  };
  std::string out;
  out.reserve(hex.size() / 2);
  for (std::size_t i = 0; i < hex.size(); i += 2) {
    int hi = nib(hex[i]), lo = nib(hex[i + 1]);
    if (hi < 0 || lo < 0) return std::nullopt;
    out.push_back(static_cast<char>((hi << 4) | lo));
  }
  return out;
}

std::string encode_event(const Event& e) {
  json j;
  j["v"] = kLogFormatVersion;
  j["seq"] = e.seq;
  j["ts"] = format_rfc3339_ms(e.ts);
  j["kind"] = kind_name(e.kind);
  if (e.sid) j["sid"] = *e.sid;
  switch (e.kind) {
    case EventKind::Connect:
    case EventKind::Disconnect:
      j["ip"] = e.ip;
      break;
    case EventKind::Auth:
      j["ip"] = e.ip;
      j["user"] = bytes_to_text(e.user);
      j["pass"] = bytes_to_text(e.pass);
      j["ok"] = e.ok;
      break;
    case EventKind::TtyRead:
    case EventKind::TtyWrite:
      j["tty"] = e.tty;
      j["data_hex"] = to_hex(e.data);
      break;
    case EventKind::Exec: {
      j["path"] = bytes_to_text(e.path);
      json args = json::array();
      for (const auto& a : e.argv) args.push_back(bytes_to_text(a));
      j["argv"] = std::move(args);
      break;
    }
    case EventKind::Egress:
      j["dst"] = e.dst;
      j["port"] = e.port;
      j["verdict"] = verdict_name(e.verdict);
      if (e.bait) j["bait"] = true;
      break;
  }
  return j.dump();
}

Event decode_event(const std::string& line, std::size_t line_no) {
  if (line.empty()) throw ParseError(line_no, "empty line");
  json j = json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw ParseError(line_no, "not a JSON object");

  auto need = [&](const char* key) -> const json& {
    auto it = j.find(key);
    if (it == j.end()) throw ParseError(line_no, std::string("missing key `") + key + "`");
    return *it;
  };
  auto str = [&](const char* key) -> std::string {
    const json& v = need(key);
    if (!v.is_string()) throw ParseError(line_no, std::string("key `") + key + "` is not a string");
    return v.get<std::string>();
  };
  auto bytes = [&](const char* key) -> std::string {
    auto b = text_to_bytes(str(key));
    if (!b) throw ParseError(line_no, std::string("key `") + key + "` is not a byte string");
    return *b;
  };

  if (!need("v").is_number_integer() || need("v").get<int>() != kLogFormatVersion)
    throw ParseError(line_no, "unsupported format version");

  Event e;
  if (!need("seq").is_number_unsigned())
    throw ParseError(line_no, "seq is not an unsigned integer");
  e.seq = need("seq").get<std::uint64_t>();

  auto ts = parse_rfc3339_ms(str("ts"));
  if (!ts) throw ParseError(line_no, "bad timestamp");
  e.ts = *ts;

  const std::string kind = str("kind");
  auto k = kind_from_name(kind);
  if (!k) throw ParseError(line_no, "unknown kind tag `" + kind + "`");
  e.kind = *k;

  if (j.contains("sid")) e.sid = str("sid");

  switch (e.kind) {
    case EventKind::Connect:
    case EventKind::Disconnect:
      e.ip = str("ip");
      break;
    case EventKind::Auth: {
      e.ip = str("ip");
      e.user = bytes("user");
      e.pass = bytes("pass");
      const json& ok = need("ok");
      if (!ok.is_boolean()) throw ParseError(line_no, "ok is not a boolean");
      e.ok = ok.get<bool>();
      break;
    }
    case EventKind::TtyRead:
    case EventKind::TtyWrite: {
      e.tty = str("tty");
      auto d = from_hex(str("data_hex"));
      if (!d) throw ParseError(line_no, "bad data_hex");
      e.data = *d;
      if (e.kind == EventKind::TtyRead && e.data.empty())
        throw ParseError(line_no, "empty tty_read payload");
      break;
    }
    case EventKind::Exec: {
      e.path = bytes("path");
      const json& args = need("argv");
      if (!args.is_array()) throw ParseError(line_no, "argv is not an array");
      for (const auto& a : args) {
        if (!a.is_string()) throw ParseError(line_no, "argv entry is not a string");
        auto b = text_to_bytes(a.get<std::string>());
        if (!b) throw ParseError(line_no, "argv entry is not a byte string");
        e.argv.push_back(*b);
      }
      break;
    }
    case EventKind::Egress: {
      e.dst = str("dst");
      const json& port = need("port");
      if (!port.is_number_integer()) throw ParseError(line_no, "port is not an integer");
      e.port = port.get<int>();
      const std::string v = str("verdict");
      if (v == "allow") e.verdict = EgressVerdict::Allow;
      else if (v == "deny") e.verdict = EgressVerdict::Deny;
      else throw ParseError(line_no, "unknown verdict `" + v + "`");
      if (j.contains("bait")) {
        const json& b = j["bait"];
        if (!b.is_boolean()) throw ParseError(line_no, "bait is not a boolean");
        e.bait = b.get<bool>();
      }
      break;
    }
  }
  return e;
}

}  // namespace hipot
