#include "hipot/forensics.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numeric>

namespace hipot {

namespace {

std::string basename_of(const std::string& path) {
  auto pos = path.rfind('/');
  return pos == std::string::npos ? path : path.substr(pos + 1);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

bool parse_ipv4(const std::string& s, std::array<int, 4>& out) {
  int a, b, c, d;
  char ch;
  if (std::sscanf(s.c_str(), "%d.%d.%d.%d%c", &a, &b, &c, &d, &ch) != 4) return false;
  if (a < 0 || a > 255 || b < 0 || b > 255 || c < 0 || c > 255 || d < 0 || d > 255)
    return false;
  out = {a, b, c, d};
  return true;
}

std::uint32_t ip_to_u32(const std::array<int, 4>& o) {
  return (static_cast<std::uint32_t>(o[0]) << 24) |
         (static_cast<std::uint32_t>(o[1]) << 16) |
         (static_cast<std::uint32_t>(o[2]) << 8) | static_cast<std::uint32_t>(o[3]);
}

std::optional<std::string> region_label(const std::string& ip,
                                        const ForensicsConfig& config) {
  std::array<int, 4> o;
  if (!parse_ipv4(ip, o)) return std::nullopt;
  const std::uint32_t addr = ip_to_u32(o);
  std::optional<std::string> best;
  int best_len = -1;
  for (const auto& [cidr, label] : config.region_by_cidr) {
    auto slash = cidr.find('/');
    if (slash == std::string::npos) continue;
    std::array<int, 4> base;
    if (!parse_ipv4(cidr.substr(0, slash), base)) continue;
    const int bits = std::atoi(cidr.c_str() + slash + 1);
    if (bits < 0 || bits > 32) continue;
    const std::uint32_t mask = bits == 0 ? 0 : ~std::uint32_t{0} << (32 - bits);
    if ((addr & mask) == (ip_to_u32(base) & mask) && bits > best_len) {
      best = label;
      best_len = bits;
    }
  }
  return best;
}

}  // namespace

const char* source_class_name(SourceClass c) {
  switch (c) {
    case SourceClass::Scanner: return "scanner";
    case SourceClass::DictionaryAttacker: return "dictionary";
    case SourceClass::Intruder: return "intruder";
    case SourceClass::Unknown: return "unknown";
  }
  return "?";
}

const char* operator_name(Operator v) {
  switch (v) {
    case Operator::Human: return "human";
    case Operator::Script: return "script";
    case Operator::Inconclusive: return "inconclusive";
  }
  return "?";
}

const char* tag_name(ActivityTag t) {
  switch (t) {
    case ActivityTag::PasswordChange: return "password_change";
    case ActivityTag::DownloadBlocked: return "download_blocked";
    case ActivityTag::DownloadInBand: return "download_inband";
    case ActivityTag::StealthInstall: return "stealth_install";
    case ActivityTag::SshScan: return "ssh_scan";
    case ActivityTag::IrcBot: return "irc_bot";
    case ActivityTag::PrivEscAttempt: return "privesc_attempt";
    case ActivityTag::PrivEscPartial: return "privesc_partial";
    case ActivityTag::Phishing: return "phishing";
    case ActivityTag::HistoryCleanup: return "history_cleanup";
    case ActivityTag::FingerprintProbe: return "fingerprint_probe";
    case ActivityTag::BaitFollowed: return "bait_followed";
    case ActivityTag::ConnectivityProbe: return "connectivity_probe";
  }
  return "?";
}

const char* skill_name(SkillClass c) {
  switch (c) {
    case SkillClass::ScriptKiddie: return "script_kiddie";
    case SkillClass::Intermediate: return "intermediate";
    case SkillClass::BlackHat: return "black_hat";
  }
  return "?";
}

std::vector<CommandLine> reconstruct_input(const std::vector<std::string>& chunks) {
  std::vector<CommandLine> lines;
  CommandLine cur;
  bool pending_cr = false;
  for (const std::string& chunk : chunks) {
    bool contributed = false;
    std::size_t portion = 0;
    auto touch = [&] {
      if (!contributed) {
        contributed = true;
        ++cur.chunks;
        if (chunk.size() == 1) ++cur.single_char_chunks;
      }
      ++portion;
      ++cur.input_bytes;
    };
    auto finish_line = [&] {
      cur.max_chunk_len = std::max(cur.max_chunk_len, portion);
      lines.push_back(cur);
      cur = CommandLine{};
      contributed = false;
      portion = 0;
    };
    for (char raw : chunk) {
      const unsigned char c = static_cast<unsigned char>(raw);
      if (pending_cr && c == '\n') {
        // LF completing a CRLF pair; the line already ended at CR.
        pending_cr = false;
        continue;
      }
      pending_cr = false;
      touch();
      if (c == 0x08 || c == 0x7F) {
        ++cur.backspaces;
        if (!cur.text.empty()) cur.text.pop_back();
      } else if (c == '\r' || c == '\n') {
        pending_cr = (c == '\r');
        finish_line();
      } else {
        cur.text.push_back(raw);
      }
    }
    if (contributed) cur.max_chunk_len = std::max(cur.max_chunk_len, portion);
  }
  // Unterminated trailing input is never executed; drop it.
  return lines;
}

std::map<std::string, SourceProfile> build_profiles(
    const std::vector<Event>& events, const SessionizeResult& sessions) {
  std::map<std::string, SourceProfile> profiles;
  std::map<std::string, std::set<std::pair<std::string, std::string>>> pairs;

  auto touch = [&](const std::string& ip, TimeMs ts) -> SourceProfile& {
    SourceProfile& p = profiles[ip];
    if (p.ip.empty()) {
      p.ip = ip;
      p.first_seen = p.last_seen = ts;
    }
    p.first_seen = std::min(p.first_seen, ts);
    p.last_seen = std::max(p.last_seen, ts);
    return p;
  };

  for (const Event& e : events) {
    if (e.kind == EventKind::Auth) {
      SourceProfile& p = touch(e.ip, e.ts);
      ++p.auth_attempts;
      pairs[e.ip].insert({e.user, e.pass});
      if (e.ok) ++p.successes;
    } else if (e.kind == EventKind::Connect) {
      touch(e.ip, e.ts).connected = true;
    } else if (e.kind == EventKind::Disconnect) {
      touch(e.ip, e.ts);
    }
  }
  for (const Session& s : sessions.sessions) {
    if (s.source_ip.empty()) continue;
    SourceProfile& p = touch(s.source_ip, s.start_ts);
    p.session_ids.push_back(s.sid);
    if (s.authenticated && s.has_exec()) p.has_exec_session = true;
  }
  for (auto& [ip, p] : profiles) p.distinct_pairs = pairs[ip].size();
  return profiles;
}

bool detect_dictionary(const SourceProfile& profile, std::uint64_t threshold) {
  return profile.distinct_pairs > threshold;
}

SourceClass classify_source(const SourceProfile& profile,
                            const ForensicsConfig& config) {
  if (profile.has_exec_session) return SourceClass::Intruder;
  if (detect_dictionary(profile, config.dict_threshold))
    return SourceClass::DictionaryAttacker;
  if (profile.successes == 0 && (profile.connected || profile.auth_attempts > 0))
    return SourceClass::Scanner;
  return SourceClass::Unknown;
}

OperatorVerdict classify_operator(const std::vector<CommandLine>& lines,
                                  const ForensicsConfig& config) {
  OperatorVerdict v;
  if (lines.empty()) {
    v.too_short = true;
    return v;
  }
  std::size_t total_input = 0;
  bool all_paste = true;
  for (const CommandLine& l : lines) {
    total_input += l.input_bytes;
    if (l.backspaces > 0) ++v.backspace_lines;
    if (l.single_char_chunks >= config.char_by_char_min) ++v.char_by_char_lines;
    if (l.chunks == 1 && l.max_chunk_len > 1) ++v.paste_only_lines;
    else all_paste = false;
  }
  if (v.backspace_lines > 0) {
    v.verdict = Operator::Human;
  } else if (v.char_by_char_lines > 0) {
    v.verdict = Operator::Human;
  } else if (all_paste && total_input >= config.paste_min_bytes) {
    v.verdict = Operator::Script;
  } else {
    v.verdict = Operator::Inconclusive;
    v.too_short = total_input < config.paste_min_bytes;
  }
  return v;
}

std::set<ActivityTag> tag_activities(const Session& session,
                                     const ForensicsConfig& config) {
  std::set<ActivityTag> tags;
  const std::string home = "/home/" + session.account;
  std::string cwd = home;

  bool saw_blocked = false;
  bool first_download_seen = false;

  auto in_stealth_dir = [](const std::string& p) {
    return p.rfind("/tmp", 0) == 0 || p.rfind("/var/tmp", 0) == 0 ||
           p.rfind("/dev/shm", 0) == 0;
  };
  auto fixture_behavior = [&](const std::string& name) -> std::string {
    const FixtureSpec* f = config.catalog.find(name);
    return f ? f->behavior : "";
  };

  for (const Event& e : session.events) {
    if (e.kind == EventKind::Egress) {
      if (e.bait) tags.insert(ActivityTag::BaitFollowed);
      if (e.verdict == EgressVerdict::Deny) {
        if (e.port == 80 || e.port == 443) {
          tags.insert(ActivityTag::DownloadBlocked);
          saw_blocked = true;
        } else if (e.port == 22 && !e.bait) {
          tags.insert(ActivityTag::SshScan);
        } else if (e.port == 6667) {
          tags.insert(ActivityTag::IrcBot);
        } else if (e.port == 25) {
          tags.insert(ActivityTag::Phishing);
        }
      }
      continue;
    }
    if (e.kind != EventKind::Exec) continue;

    const std::string cmd = basename_of(e.path);
    if (cmd == "cd" && e.argv.size() > 1) {
      cwd = canonical_path(cwd, e.argv[1]);
    } else if (cmd == "passwd") {
      tags.insert(ActivityTag::PasswordChange);
    } else if (cmd == "wget" || cmd == "inband-get" || cmd == "sftp") {
      const std::string target =
          e.argv.size() > 1 ? basename_of(e.argv.back()) : "";
      const FixtureSpec* f = config.catalog.find(target);
      if (!first_download_seen && f && f->behavior == "inert" &&
          f->size >= config.connectivity_probe_min_size) {
        tags.insert(ActivityTag::ConnectivityProbe);
      }
      first_download_seen = true;
      if (cmd != "wget") tags.insert(ActivityTag::DownloadInBand);
    } else if (cmd == "tar" || cmd == "gzip" || cmd == "gunzip") {
      std::string dest = cwd;
      for (std::size_t i = 1; i + 1 < e.argv.size(); ++i)
        if (e.argv[i] == "-C") dest = canonical_path(cwd, e.argv[i + 1]);
      if (in_stealth_dir(dest)) tags.insert(ActivityTag::StealthInstall);
    } else if (cmd == "mv" && e.argv.size() >= 3) {
      const std::string dst = basename_of(e.argv[2]);
      if (dst == "crond" || dst == "inetd") tags.insert(ActivityTag::IrcBot);
    } else if (cmd == "unset") {
      if (std::find(e.argv.begin(), e.argv.end(), "HISTFILE") != e.argv.end())
        tags.insert(ActivityTag::HistoryCleanup);
    } else if (cmd == "rm") {
      for (std::size_t i = 1; i < e.argv.size(); ++i) {
        const std::string b = basename_of(e.argv[i]);
        if (b == ".bash_history" || b == ".history")
          tags.insert(ActivityTag::HistoryCleanup);
      }
    } else if (cmd == "cat") {
      for (std::size_t i = 1; i < e.argv.size(); ++i)
        if (canonical_path(cwd, e.argv[i]) == "/proc/cpuinfo")
          tags.insert(ActivityTag::FingerprintProbe);
    } else if (cmd == "mail" || cmd == "sendmail") {
      tags.insert(ActivityTag::Phishing);
    }

    // Fixture binaries run as ./name or /path/name.
    if (e.path.rfind("./", 0) == 0 || e.path[0] == '/') {
      const std::string behavior = fixture_behavior(cmd);
      if (behavior == "scan-tool") tags.insert(ActivityTag::SshScan);
      else if (behavior == "irc-bot") tags.insert(ActivityTag::IrcBot);
      else if (behavior == "rootkit-A") tags.insert(ActivityTag::PrivEscAttempt);
      else if (behavior == "rootkit-B") {
        tags.insert(ActivityTag::PrivEscAttempt);
        tags.insert(ActivityTag::PrivEscPartial);
      } else if (behavior == "mailer") {
        tags.insert(ActivityTag::Phishing);
      }
    }

    // VM-marker probes beyond /proc/cpuinfo.
    for (const std::string& a : e.argv) {
      if (lower(a).find("vmware") != std::string::npos)
        tags.insert(ActivityTag::FingerprintProbe);
    }
  }
  (void)saw_blocked;
  return tags;
}

SkillAssessment score_skill(const Session& session,
                            const std::set<ActivityTag>& tags,
                            const ForensicsConfig& config) {
  SkillAssessment a;

  int blocked_count = 0;
  std::uint64_t first_blocked_seq = 0;
  bool has_blocked = false;
  std::uint64_t first_inband_seq = 0;
  bool has_inband = false;
  bool perm_errors = false;
  bool kill_others = false;
  bool fp_deep = false;
  bool last_exec_was_kill = false;

  for (const Event& e : session.events) {
    if (e.kind == EventKind::Egress && e.verdict == EgressVerdict::Deny &&
        (e.port == 80 || e.port == 443)) {
      ++blocked_count;
      if (!has_blocked) {
        has_blocked = true;
        first_blocked_seq = e.seq;
      }
    }
    if (e.kind == EventKind::Exec) {
      const std::string cmd = e.path.substr(e.path.rfind('/') + 1);
      if ((cmd == "inband-get" || cmd == "sftp") && !has_inband) {
        has_inband = true;
        first_inband_seq = e.seq;
      }
      last_exec_was_kill = (cmd == "kill");
      for (const std::string& arg : e.argv)
        if (lower(arg).find("vmware") != std::string::npos) fp_deep = true;
    }
    if (e.kind == EventKind::TtyWrite) {
      if (e.data.find("Permission denied") != std::string::npos) perm_errors = true;
      if (last_exec_was_kill &&
          e.data.find("Operation not permitted") != std::string::npos)
        kill_others = true;
    }
  }

  auto add = [&](int w, const char* why) {
    if (w == 0) return;
    a.score += w;
    a.factors.push_back(why);
  };

  if (has_blocked && has_inband && first_inband_seq > first_blocked_seq)
    add(config.w_inband_after_blocked, "in-band fallback after blocked download");
  if (tags.count(ActivityTag::HistoryCleanup))
    add(config.w_history_cleanup, "history cleanup");
  if (fp_deep) add(config.w_fingerprint_deep, "vm fingerprint probing");
  if (tags.count(ActivityTag::BaitFollowed))
    add(config.w_bait_followed, "followed bait host");
  if (blocked_count >= 2 && !has_inband)
    add(config.w_repeated_blocked, "repeated blocked downloads, no fallback");
  if (perm_errors) add(config.w_permission_errors, "permission errors");
  if (kill_others) add(config.w_kill_others, "killed other users' processes");

  if (a.score < 0) a.cls = SkillClass::ScriptKiddie;
  else if (a.score < 4) a.cls = SkillClass::Intermediate;
  else a.cls = SkillClass::BlackHat;
  return a;
}

bool ips_proximate(const std::string& a, const std::string& b,
                   const ForensicsConfig& config) {
  if (a == b) return true;
  if (!config.region_by_cidr.empty()) {
    auto la = region_label(a, config);
    auto lb = region_label(b, config);
    if (la && lb) return *la == *lb;
    // Missing mapping for one side: fall back to the prefix predicate.
  }
  std::array<int, 4> oa, ob;
  if (!parse_ipv4(a, oa) || !parse_ipv4(b, ob)) return false;
  return oa[0] == ob[0] && oa[1] == ob[1];
}

std::vector<IdentityCluster> link_intruders(const std::vector<Session>& sessions,
                                            const ForensicsConfig& config) {
  struct Item {
    const Session* s;
    std::string password;
  };
  std::map<std::string, std::vector<Item>> by_account;
  for (const Session& s : sessions) {
    if (!s.authenticated || !s.has_exec()) continue;
    std::string pw;
    for (const Event& e : s.events)
      if (e.kind == EventKind::Auth && e.ok) {
        pw = e.pass;
        break;
      }
    by_account[s.account].push_back({&s, pw});
  }

  std::vector<IdentityCluster> clusters;
  for (auto& [account, items] : by_account) {
    std::vector<std::size_t> parent(items.size());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
      return parent[x] == x ? x : parent[x] = find(parent[x]);
    };
    for (std::size_t i = 0; i < items.size(); ++i)
      for (std::size_t j = i + 1; j < items.size(); ++j)
        if (items[i].password == items[j].password &&
            ips_proximate(items[i].s->source_ip, items[j].s->source_ip, config))
          parent[find(i)] = find(j);

    std::map<std::size_t, IdentityCluster> roots;
    for (std::size_t i = 0; i < items.size(); ++i) {
      IdentityCluster& c = roots[find(i)];
      c.account = account;
      c.session_ids.push_back(items[i].s->sid);
      c.ips.push_back(items[i].s->source_ip);
    }
    for (auto& [root, c] : roots) {
      std::sort(c.session_ids.begin(), c.session_ids.end());
      std::sort(c.ips.begin(), c.ips.end());
      c.ips.erase(std::unique(c.ips.begin(), c.ips.end()), c.ips.end());
      clusters.push_back(std::move(c));
    }
  }
  std::sort(clusters.begin(), clusters.end(),
            [](const IdentityCluster& a, const IdentityCluster& b) {
              if (a.account != b.account) return a.account < b.account;
              return a.session_ids < b.session_ids;
            });
  return clusters;
}

std::vector<AccountTimeline> compute_account_timelines(
    const std::vector<Event>& events, const SessionizeResult& sessions,
    const CredentialPolicy& accounts) {
  std::vector<AccountTimeline> out;
  for (const auto& [name, acct] : accounts.accounts()) {
    AccountTimeline t;
    t.account = name;
    t.created_ts = acct.created_ts;

    std::optional<std::uint64_t> first_success_seq;
    for (const Event& e : events) {
      if (e.kind == EventKind::Auth && e.ok && e.user == name) {
        if (!t.first_success_ts || e.ts < *t.first_success_ts) {
          t.first_success_ts = e.ts;
          first_success_seq = e.seq;
        }
      }
    }
    std::optional<std::uint64_t> intrusion_auth_seq;
    for (const Session& s : sessions.sessions) {
      if (!s.authenticated || s.account != name || !s.has_exec()) continue;
      for (const Event& e : s.events) {
        if (e.kind == EventKind::Auth && e.ok) {
          if (!t.first_intrusion_ts || e.ts < *t.first_intrusion_ts) {
            t.first_intrusion_ts = e.ts;
            intrusion_auth_seq = e.seq;
          }
          break;
        }
      }
    }
    if (t.first_success_ts) t.d1 = *t.first_success_ts - t.created_ts;
    if (t.first_success_ts && t.first_intrusion_ts &&
        first_success_seq != intrusion_auth_seq) {
      t.d2 = *t.first_intrusion_ts - *t.first_success_ts;
    }
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace hipot
