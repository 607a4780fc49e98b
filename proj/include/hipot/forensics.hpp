#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hipot/eventlog.hpp"
#include "hipot/policy.hpp"
#include "hipot/shellbox.hpp"

namespace hipot {

// ---------------------------------------------------------------------------
// Input reconstruction

struct CommandLine {
  std::string text;       // after backspace editing
  int backspaces = 0;     // raw backspace bytes seen while typing this line
  int chunks = 0;         // tty_read chunks that contributed to this line
  int single_char_chunks = 0;
  std::size_t max_chunk_len = 0;
  std::size_t input_bytes = 0;  // raw bytes, including edits and terminator
};

// Applies backspace (0x08/0x7F) and CR/LF line termination to an ordered
// chunk stream. Trailing unterminated input is dropped (never executed).
std::vector<CommandLine> reconstruct_input(const std::vector<std::string>& chunks);

// ---------------------------------------------------------------------------
// Source classification

enum class SourceClass { Scanner, DictionaryAttacker, Intruder, Unknown };
const char* source_class_name(SourceClass c);

struct SourceProfile {
  std::string ip;
  TimeMs first_seen = 0;
  TimeMs last_seen = 0;
  std::uint64_t auth_attempts = 0;
  std::uint64_t distinct_pairs = 0;
  std::uint64_t successes = 0;
  std::vector<std::string> session_ids;
  bool has_exec_session = false;
  bool connected = false;
  SourceClass classification = SourceClass::Unknown;
};

struct ForensicsConfig {
  std::uint64_t dict_threshold = 10;   // "more than 10" distinct pairs
  int char_by_char_min = 4;            // L: single-char chunks per line
  std::size_t paste_min_bytes = 8;     // M: minimum paste evidence
  std::string bait_addr;
  std::uint64_t connectivity_probe_min_size = 1 << 20;
  FixtureCatalog catalog = FixtureCatalog::defaults();
  // IP proximity for intruder linkage: same /16, or same region label.
  std::map<std::string, std::string> region_by_cidr;  // "a.b.c.d/n" -> label

  // Skill rubric weights.
  int w_inband_after_blocked = 2;
  int w_history_cleanup = 2;
  int w_fingerprint_deep = 2;
  int w_bait_followed = 1;
  int w_repeated_blocked = -2;
  int w_permission_errors = -1;
  int w_kill_others = -1;
};

// Builds per-source aggregates from the full event stream + sessions.
std::map<std::string, SourceProfile> build_profiles(
    const std::vector<Event>& events, const SessionizeResult& sessions);

bool detect_dictionary(const SourceProfile& profile, std::uint64_t threshold = 10);

// Priority: Intruder > DictionaryAttacker > Scanner > Unknown.
SourceClass classify_source(const SourceProfile& profile,
                            const ForensicsConfig& config);

// ---------------------------------------------------------------------------
// Operator detection

enum class Operator { Human, Script, Inconclusive };
const char* operator_name(Operator v);

struct OperatorVerdict {
  Operator verdict = Operator::Inconclusive;
  int backspace_lines = 0;
  int char_by_char_lines = 0;
  int paste_only_lines = 0;
  bool too_short = false;
};

OperatorVerdict classify_operator(const std::vector<CommandLine>& lines,
                                  const ForensicsConfig& config);

// ---------------------------------------------------------------------------
// Activity tagging and skill

enum class ActivityTag {
  PasswordChange,
  DownloadBlocked,
  DownloadInBand,
  StealthInstall,
  SshScan,
  IrcBot,
  PrivEscAttempt,
  PrivEscPartial,
  Phishing,
  HistoryCleanup,
  FingerprintProbe,
  BaitFollowed,
  ConnectivityProbe,
};
const char* tag_name(ActivityTag t);

std::set<ActivityTag> tag_activities(const Session& session,
                                     const ForensicsConfig& config);

enum class SkillClass { ScriptKiddie, Intermediate, BlackHat };
const char* skill_name(SkillClass c);

struct SkillAssessment {
  int score = 0;
  SkillClass cls = SkillClass::Intermediate;
  std::vector<std::string> factors;
};

SkillAssessment score_skill(const Session& session,
                            const std::set<ActivityTag>& tags,
                            const ForensicsConfig& config);

// ---------------------------------------------------------------------------
// Intruder linkage

struct IdentityCluster {
  std::string account;
  std::vector<std::string> session_ids;
  std::vector<std::string> ips;
};

// Sessions on one account merge when they share the login password and their
// source IPs satisfy the proximity predicate (same /16, or same region label).
std::vector<IdentityCluster> link_intruders(const std::vector<Session>& sessions,
                                            const ForensicsConfig& config);

// ---------------------------------------------------------------------------
// Account timelines

struct AccountTimeline {
  std::string account;
  TimeMs created_ts = 0;
  std::optional<TimeMs> first_success_ts;
  std::optional<TimeMs> first_intrusion_ts;
  std::optional<TimeMs> d1;  // first success - creation
  std::optional<TimeMs> d2;  // first intrusion - first success; absent when
                             // the first success *is* the first intrusion
};

std::vector<AccountTimeline> compute_account_timelines(
    const std::vector<Event>& events, const SessionizeResult& sessions,
    const CredentialPolicy& accounts);

// Proximity predicate, exposed for tests.
bool ips_proximate(const std::string& a, const std::string& b,
                   const ForensicsConfig& config);

}  // namespace hipot
