#include "hipot/report.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace hipot {

using json = nlohmann::json;

std::string render_percent(std::uint64_t part, std::uint64_t total) {
  if (total == 0) return "0.00";
  // Half-up in units of 0.01%.
  const std::uint64_t num = part * 10000;
  std::uint64_t q = num / total;
  if (2 * (num % total) >= total) ++q;
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%llu.%02llu",
                static_cast<unsigned long long>(q / 100),
                static_cast<unsigned long long>(q % 100));
  return buf;
}

std::vector<AccountRow> top_accounts(const std::vector<Event>& events,
                                     std::size_t k) {
  std::map<std::string, std::uint64_t> attempts;
  std::map<std::string, std::set<std::string>> passwords;
  std::uint64_t total = 0;
  for (const Event& e : events) {
    if (e.kind != EventKind::Auth) continue;
    ++attempts[e.user];
    passwords[e.user].insert(e.pass);
    ++total;
  }
  std::vector<AccountRow> rows;
  for (const auto& [account, n] : attempts) {
    AccountRow r;
    r.account = account;
    r.attempts = n;
    r.percentage = render_percent(n, total);
    r.distinct_passwords = passwords[account].size();
    rows.push_back(std::move(r));
  }
  std::sort(rows.begin(), rows.end(), [](const AccountRow& a, const AccountRow& b) {
    if (a.attempts != b.attempts) return a.attempts > b.attempts;
    return a.account < b.account;
  });
  if (rows.size() > k) rows.resize(k);
  return rows;
}

PartitionCounts partition_report(
    const std::map<std::string, SourceProfile>& profiles) {
  PartitionCounts c;
  for (const auto& [ip, p] : profiles) {
    ++c.total_ips;
    switch (p.classification) {
      case SourceClass::Scanner: ++c.scanners; break;
      case SourceClass::DictionaryAttacker:
        ++c.dictionary;
        if (p.successes > 0) ++c.dictionary_succeeded;
        break;
      case SourceClass::Intruder: ++c.intruders; break;
      case SourceClass::Unknown: ++c.unknown; break;
    }
  }
  return c;
}

std::vector<IntrusionRow> intrusions_per_account(
    const std::vector<Session>& sessions) {
  std::map<std::string, IntrusionRow> rows;
  std::map<std::string, std::set<std::string>> pws, ips;
  for (const Session& s : sessions) {
    if (!s.authenticated || !s.has_exec()) continue;
    IntrusionRow& r = rows[s.account];
    r.account = s.account;
    ++r.intrusions;
    ips[s.account].insert(s.source_ip);
    for (const Event& e : s.events)
      if (e.kind == EventKind::Auth && e.ok) pws[s.account].insert(e.pass);
  }
  std::vector<IntrusionRow> out;
  for (auto& [account, r] : rows) {
    r.distinct_passwords = pws[account].size();
    r.distinct_ips = ips[account].size();
    out.push_back(r);
  }
  return out;  // std::map iteration: account ascending
}

OverlapCounts correlate_sensors(const std::map<std::string, SourceProfile>& a,
                                const std::map<std::string, SourceProfile>& b) {
  OverlapCounts c;
  for (auto cls : {SourceClass::Scanner, SourceClass::DictionaryAttacker,
                   SourceClass::Intruder, SourceClass::Unknown}) {
    c.class_size[cls] = 0;
    c.overlap_with_b[cls] = 0;
  }
  for (const auto& [ip, p] : a) {
    ++c.class_size[p.classification];
    if (b.count(ip)) ++c.overlap_with_b[p.classification];
  }
  return c;
}

std::string render_report(const ReportInputs& in, const std::string& format) {
  const PartitionCounts part = partition_report(in.profiles);
  const auto accounts = top_accounts(in.events, 10);
  const auto intrusions = intrusions_per_account(in.sessions.sessions);

  std::uint64_t total_attempts = 0, total_success = 0;
  for (const Event& e : in.events)
    if (e.kind == EventKind::Auth) {
      ++total_attempts;
      if (e.ok) ++total_success;
    }

  if (format == "json") {
    json j;
    j["auth_attempts"] = total_attempts;
    j["auth_successes"] = total_success;
    j["distinct_ips"] = part.total_ips;
    j["partition"] = {{"scanners", part.scanners},
                      {"dictionary", part.dictionary},
                      {"dictionary_succeeded", part.dictionary_succeeded},
                      {"intruders", part.intruders},
                      {"unknown", part.unknown}};
    json acct = json::array();
    for (const AccountRow& r : accounts)
      acct.push_back({{"account", r.account},
                      {"attempts", r.attempts},
                      {"percentage", r.percentage},
                      {"distinct_passwords", r.distinct_passwords}});
    j["top_accounts"] = std::move(acct);
    json intr = json::array();
    for (const IntrusionRow& r : intrusions)
      intr.push_back({{"account", r.account},
                      {"intrusions", r.intrusions},
                      {"distinct_passwords", r.distinct_passwords},
                      {"distinct_ips", r.distinct_ips}});
    j["intrusions_per_account"] = std::move(intr);
    if (!in.timelines.empty()) {
      json tl = json::array();
      for (const AccountTimeline& t : in.timelines) {
        json row;
        row["account"] = t.account;
        row["created_ts"] = format_rfc3339_ms(t.created_ts);
        if (t.d1) row["d1_seconds"] = *t.d1 / 1000;
        else row["d1_seconds"] = nullptr;
        if (t.d2) row["d2_seconds"] = *t.d2 / 1000;
        else row["d2_seconds"] = nullptr;
        tl.push_back(std::move(row));
      }
      j["account_timelines"] = std::move(tl);
    }
    if (in.peer_profiles) {
      const OverlapCounts ov = correlate_sensors(in.profiles, *in.peer_profiles);
      json o;
      for (auto cls : {SourceClass::Scanner, SourceClass::DictionaryAttacker,
                       SourceClass::Intruder, SourceClass::Unknown}) {
        o[source_class_name(cls)] = {
            {"size", ov.class_size.at(cls)},
            {"overlap", ov.overlap_with_b.at(cls)}};
      }
      j["sensor_overlap"] = std::move(o);
    }
    return j.dump(2) + "\n";
  }

  std::ostringstream out;
  out << "hipot report\n============\n\n";
  out << "Connection attempts: " << total_attempts << " (" << total_success
      << " successful)\n";
  out << "Distinct source IPs: " << part.total_ips << "\n\n";

  out << "Source classification\n---------------------\n";
  out << "  intruders            " << part.intruders << "\n";
  out << "  dictionary attackers " << part.dictionary << " ("
      << part.dictionary_succeeded << " found a password)\n";
  out << "  scanners             " << part.scanners << "\n";
  out << "  unknown              " << part.unknown << "\n\n";

  out << "Top accounts\n------------\n";
  out << "  account          attempts   pct      passwords\n";
  for (const AccountRow& r : accounts) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "  %-15s %9llu  %6s%%  %9llu\n",
                  r.account.c_str(),
                  static_cast<unsigned long long>(r.attempts),
                  r.percentage.c_str(),
                  static_cast<unsigned long long>(r.distinct_passwords));
    out << buf;
  }
  out << "\n";

  if (!intrusions.empty()) {
    out << "Intrusions per account\n----------------------\n";
    out << "  account          intrusions  passwords  ips\n";
    for (const IntrusionRow& r : intrusions) {
      char buf[96];
      std::snprintf(buf, sizeof(buf), "  %-15s %10llu  %9llu  %3llu\n",
                    r.account.c_str(),
                    static_cast<unsigned long long>(r.intrusions),
                    static_cast<unsigned long long>(r.distinct_passwords),
                    static_cast<unsigned long long>(r.distinct_ips));
      out << buf;
    }
    out << "\n";
  }

  if (!in.timelines.empty()) {
    out << "Account timelines\n-----------------\n";
    out << "  account       to first success   to first intrusion\n";
    for (const AccountTimeline& t : in.timelines) {
      out << "  " << t.account;
      for (std::size_t i = t.account.size(); i < 14; ++i) out << ' ';
      out << (t.d1 ? format_duration_coarse(*t.d1) : "-");
      out << "   " << (t.d2 ? format_duration_coarse(*t.d2)
                            : (t.d1 ? "null" : "-"))
          << "\n";
    }
    out << "\n";
  }

  if (in.peer_profiles) {
    const OverlapCounts ov = correlate_sensors(in.profiles, *in.peer_profiles);
    out << "Cross-sensor overlap\n--------------------\n";
    for (auto cls : {SourceClass::Intruder, SourceClass::DictionaryAttacker,
                     SourceClass::Scanner, SourceClass::Unknown}) {
      out << "  " << source_class_name(cls) << ": " << ov.overlap_with_b.at(cls)
          << " of " << ov.class_size.at(cls) << " also seen on peer\n";
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace hipot
