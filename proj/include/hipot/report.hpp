#pragma once

#include <map>
#include <string>
#include <vector>

#include "hipot/forensics.hpp"

namespace hipot {

struct AccountRow {
  std::string account;
  std::uint64_t attempts = 0;
  std::string percentage;  // "13.77", half-up to 2 decimals
  std::uint64_t distinct_passwords = 0;
};

// Top-k accounts by attempt count, descending (name ascending on ties).
std::vector<AccountRow> top_accounts(const std::vector<Event>& events, std::size_t k);

struct PartitionCounts {
  std::uint64_t total_ips = 0;
  std::uint64_t scanners = 0;
  std::uint64_t dictionary = 0;
  std::uint64_t dictionary_succeeded = 0;
  std::uint64_t intruders = 0;
  std::uint64_t unknown = 0;
};

PartitionCounts partition_report(const std::map<std::string, SourceProfile>& profiles);

struct IntrusionRow {
  std::string account;
  std::uint64_t intrusions = 0;
  std::uint64_t distinct_passwords = 0;
  std::uint64_t distinct_ips = 0;
};

// One row per account with at least one intrusion.
std::vector<IntrusionRow> intrusions_per_account(const std::vector<Session>& sessions);

struct OverlapCounts {
  std::map<SourceClass, std::uint64_t> class_size;     // per class in A
  std::map<SourceClass, std::uint64_t> overlap_with_b; // ...seen anywhere in B
};

OverlapCounts correlate_sensors(const std::map<std::string, SourceProfile>& a,
                                const std::map<std::string, SourceProfile>& b);

// Half-up to 2 decimals, e.g. render_percent(34251, 248717) == "13.77".
std::string render_percent(std::uint64_t part, std::uint64_t total);

struct ReportInputs {
  std::vector<Event> events;
  SessionizeResult sessions;
  std::map<std::string, SourceProfile> profiles;
  std::vector<AccountTimeline> timelines;  // empty when no accounts metadata
  const std::map<std::string, SourceProfile>* peer_profiles = nullptr;
};

// Deterministic, byte-stable output. format: "text" or "json".
std::string render_report(const ReportInputs& in, const std::string& format);

}  // namespace hipot
