#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hipot/forensics.hpp"
#include "hipot/report.hpp"

namespace hipot {

struct SessionAnalysis {
  std::string sid;
  std::string ip;
  std::string account;
  std::vector<CommandLine> lines;
  OperatorVerdict verdict;
  std::set<ActivityTag> tags;
  SkillAssessment skill;
};

struct Analysis {
  std::vector<Event> events;
  bool partial_tail = false;
  SessionizeResult sessions;
  std::map<std::string, SourceProfile> profiles;  // classified
  std::vector<SessionAnalysis> intrusions;        // authenticated sessions
  std::vector<IdentityCluster> clusters;
  std::vector<AccountTimeline> timelines;  // when accounts metadata given
};

// The full forensics pass over one parsed log. Deterministic.
Analysis analyze_events(std::vector<Event> events, const ForensicsConfig& config,
                        const CredentialPolicy* accounts = nullptr);

// Stable, byte-deterministic JSON rendering of an analysis.
std::string analysis_to_json(const Analysis& a);

}  // namespace hipot
