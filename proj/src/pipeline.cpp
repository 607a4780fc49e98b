#include "hipot/pipeline.hpp"

#include <nlohmann/json.hpp>

namespace hipot {

using json = nlohmann::json;

Analysis analyze_events(std::vector<Event> events, const ForensicsConfig& config,
                        const CredentialPolicy* accounts) {
  Analysis a;
  a.events = std::move(events);
  a.sessions = sessionize(a.events);
  a.profiles = build_profiles(a.events, a.sessions);
  for (auto& [ip, p] : a.profiles)
    p.classification = classify_source(p, config);

  for (const Session& s : a.sessions.sessions) {
    if (!s.authenticated) continue;
    SessionAnalysis sa;
    sa.sid = s.sid;
    sa.ip = s.source_ip;
    sa.account = s.account;
    std::vector<std::string> chunks;
    for (const Event& e : s.events)
      if (e.kind == EventKind::TtyRead) chunks.push_back(e.data);
    sa.lines = reconstruct_input(chunks);
    sa.verdict = classify_operator(sa.lines, config);
    sa.tags = tag_activities(s, config);
    sa.skill = score_skill(s, sa.tags, config);
    a.intrusions.push_back(std::move(sa));
  }

  a.clusters = link_intruders(a.sessions.sessions, config);
  if (accounts)
    a.timelines = compute_account_timelines(a.events, a.sessions, *accounts);
  return a;
}

std::string analysis_to_json(const Analysis& a) {
  json j;
  j["event_count"] = a.events.size();
  j["partial_tail"] = a.partial_tail;
  j["orphan_count"] = a.sessions.orphans.size();
  j["session_count"] = a.sessions.sessions.size();

  json sources = json::array();
  for (const auto& [ip, p] : a.profiles) {
    sources.push_back({{"ip", p.ip},
                       {"class", source_class_name(p.classification)},
                       {"auth_attempts", p.auth_attempts},
                       {"distinct_pairs", p.distinct_pairs},
                       {"successes", p.successes},
                       {"sessions", p.session_ids}});
  }
  j["sources"] = std::move(sources);

  json sess = json::array();
  for (const SessionAnalysis& sa : a.intrusions) {
    json tags = json::array();
    for (ActivityTag t : sa.tags) tags.push_back(tag_name(t));
    json lines = json::array();
    for (const CommandLine& l : sa.lines)
      lines.push_back({{"text", l.text},
                       {"backspaces", l.backspaces},
                       {"chunks", l.chunks},
                       {"max_chunk_len", l.max_chunk_len}});
    sess.push_back({{"sid", sa.sid},
                    {"ip", sa.ip},
                    {"account", sa.account},
                    {"verdict", operator_name(sa.verdict.verdict)},
                    {"evidence",
                     {{"backspace_lines", sa.verdict.backspace_lines},
                      {"char_by_char_lines", sa.verdict.char_by_char_lines},
                      {"paste_only_lines", sa.verdict.paste_only_lines},
                      {"too_short", sa.verdict.too_short}}},
                    {"tags", std::move(tags)},
                    {"skill",
                     {{"score", sa.skill.score},
                      {"class", skill_name(sa.skill.cls)},
                      {"factors", sa.skill.factors}}},
                    {"lines", std::move(lines)}});
  }
  j["sessions"] = std::move(sess);

  json clusters = json::array();
  for (const IdentityCluster& c : a.clusters)
    clusters.push_back({{"account", c.account},
                        {"sessions", c.session_ids},
                        {"ips", c.ips}});
  j["clusters"] = std::move(clusters);

  if (!a.timelines.empty()) {
    json tl = json::array();
    for (const AccountTimeline& t : a.timelines) {
      json row;
      row["account"] = t.account;
      row["created_ts"] = format_rfc3339_ms(t.created_ts);
      row["d1_seconds"] = t.d1 ? json(*t.d1 / 1000) : json(nullptr);
      row["d2_seconds"] = t.d2 ? json(*t.d2 / 1000) : json(nullptr);
      tl.push_back(std::move(row));
    }
    j["account_timelines"] = std::move(tl);
  }
  return j.dump(2) + "\n";
}

}  // namespace hipot
