#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hipot/eventlog.hpp"
#include "hipot/policy.hpp"
#include "hipot/shellbox.hpp"

namespace hipot {

// One scripted session of an intruder persona.
struct SessionScript {
  TimeMs offset_ms = 0;       // from scenario start
  std::vector<std::string> lines;  // command lines; $PASS/$NEWPASS expand
  double typo_prob = 0.0;     // per-character (wrong char + backspace) injection
  bool char_by_char = true;   // false: each line arrives as one paste chunk
  std::string expect_verdict; // declared ground truth; defaults by kind
  std::vector<std::string> expect_tags;  // declared ground truth, optional
};

struct PersonaSpec {
  std::string kind;  // scanner | dictbot | human_intruder | script_intruder
  int count = 1;
  std::string ip;         // explicit, or derived from ip_prefix + index
  std::string ip_prefix;  // e.g. "10.1"
  std::vector<std::string> ips;  // explicit list (overrides prefix)
  TimeMs start_offset_ms = 0;
  TimeMs spacing_ms = 60000;  // between instances of this persona

  // scanner
  int probe_pairs = 0;  // 0 = connect/disconnect only; stays <= threshold

  // dictbot
  std::string account;       // fixed target account ("" = random pool)
  std::uint64_t pairs = 50;  // distinct (user,password) pairs per burst
  std::uint64_t attempts = 0;            // total attempts (>= pairs); 0 = pairs
  std::uint64_t distinct_passwords = 0;  // with fixed account; 0 = pairs
  bool succeed = false;  // dictionary contains the target's weak password
  TimeMs attempt_interval_ms = 400;

  // intruders
  std::string password;  // "" = the account's current password at login time
  std::string new_password;  // $NEWPASS expansion
  std::vector<SessionScript> sessions;
};

struct Scenario {
  std::uint64_t seed = 1;
  TimeMs start_ts = 0;
  std::vector<Account> accounts;
  SandboxConfig sandbox;
  FixtureCatalog catalog = FixtureCatalog::defaults();
  std::vector<PersonaSpec> population;

  static Scenario parse_json(const std::string& text);
  static Scenario load_file(const std::string& path);
};

struct IpLabel {
  std::string ip;
  std::string cls;  // scanner | dictionary | intruder
  bool dict_success = false;
};

struct SessionLabel {
  std::string sid;
  std::string ip;
  std::string account;
  std::string verdict;
  std::optional<std::vector<std::string>> tags;
};

struct GenerateResult {
  std::vector<Event> events;       // seq-stamped, ts-ordered
  std::vector<IpLabel> ip_labels;
  std::vector<SessionLabel> session_labels;

  std::string labels_to_jsonl() const;
};

// Pure function of the scenario document: byte-identical output for
// identical (scenario, seed).
GenerateResult generate(const Scenario& scenario);

// Drives a live plain-mode sensor with the connections encoded in `events`.
struct ReplayReport {
  int connections = 0;
  int auths = 0;
  int chunks = 0;
  bool aborted = false;
  std::string error;
};

ReplayReport replay_log(const std::vector<Event>& events, const std::string& host,
                        int port);

}  // namespace hipot
