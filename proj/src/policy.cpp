#include "hipot/policy.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace hipot {

CredentialPolicy::CredentialPolicy(const CredentialPolicy& other) {
  std::lock_guard<std::mutex> lock(other.mu_);
  accounts_ = other.accounts_;
}

CredentialPolicy& CredentialPolicy::operator=(const CredentialPolicy& other) {
  if (this == &other) return *this;
  std::scoped_lock lock(mu_, other.mu_);
  accounts_ = other.accounts_;
  return *this;
}

const std::string& Account::password_at(TimeMs ts) const {
  const std::string* pw = &passwords.front().second;
  for (const auto& [since, p] : passwords) {
    if (since <= ts) pw = &p;
    else break;
  }
  return *pw;
}

void CredentialPolicy::add_account(Account a) {
  std::lock_guard<std::mutex> lock(mu_);
  std::string name = a.name;
  accounts_[name] = std::move(a);
}

bool CredentialPolicy::has_account(const std::string& user) const {
  std::lock_guard<std::mutex> lock(mu_);
  return accounts_.count(user) != 0;
}

const Account* CredentialPolicy::find(const std::string& user) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = accounts_.find(user);
  return it == accounts_.end() ? nullptr : &it->second;
}

bool CredentialPolicy::check(const std::string& user, const std::string& pass,
                             TimeMs ts) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = accounts_.find(user);
  if (it == accounts_.end() || it->second.passwords.empty()) return false;
  return it->second.password_at(ts) == pass;
}

bool CredentialPolicy::change_password(const std::string& user,
                                       const std::string& old_pw,
                                       const std::string& new_pw, TimeMs ts) {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = accounts_.find(user);
  if (it == accounts_.end() || it->second.passwords.empty()) return false;
  if (it->second.password_at(ts) != old_pw) return false;
  it->second.passwords.emplace_back(ts, new_pw);
  return true;
}

CredentialPolicy CredentialPolicy::parse(const std::string& text) {
  CredentialPolicy policy;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> parts;
    std::size_t pos = 0;
    while (parts.size() < 3) {
      std::size_t colon = line.find(':', pos);
      if (colon == std::string::npos) break;
      parts.push_back(line.substr(pos, colon - pos));
      pos = colon + 1;
    }
    parts.push_back(line.substr(pos));
    if (parts.size() < 3)
      throw std::runtime_error("accounts file line " + std::to_string(line_no) +
                               ": expected user:password:weak|strong");
    Account a;
    a.name = parts[0];
    if (parts[2] == "weak") a.weak = true;
    else if (parts[2] == "strong") a.weak = false;
    else
      throw std::runtime_error("accounts file line " + std::to_string(line_no) +
                               ": bad strength `" + parts[2] + "`");
    if (parts.size() >= 4 && !parts[3].empty()) {
      auto ts = parse_rfc3339_ms(parts[3]);
      if (!ts)
        throw std::runtime_error("accounts file line " + std::to_string(line_no) +
                                 ": bad created timestamp");
      a.created_ts = *ts;
    }
    a.passwords.emplace_back(a.created_ts, parts[1]);
    policy.add_account(std::move(a));
  }
  return policy;
}

CredentialPolicy CredentialPolicy::load_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open accounts file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

std::string CredentialPolicy::serialize() const {
  std::lock_guard<std::mutex> lock(mu_);
  std::ostringstream out;
  for (const auto& [name, a] : accounts_) {
    out << name << ':' << a.passwords.back().second << ':'
        << (a.weak ? "weak" : "strong") << ':' << format_rfc3339_ms(a.created_ts)
        << '\n';
  }
  return out.str();
}

EgressVerdict EgressPolicy::check(const std::string& proto, TimeMs ts) const {
  if (proto == kInBandProto) return EgressVerdict::Allow;
  for (const AllowWindow& w : allow_windows) {
    if (w.proto == proto && w.start_ts <= ts && ts < w.end_ts)
      return EgressVerdict::Allow;
  }
  return EgressVerdict::Deny;
}

EgressPolicy EgressPolicy::parse(const std::string& text) {
  EgressPolicy policy;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    std::string proto, start, end;
    if (!(fields >> proto >> start >> end))
      throw std::runtime_error("egress file line " + std::to_string(line_no) +
                               ": expected `proto start end`");
    auto s = parse_rfc3339_ms(start);
    auto e = parse_rfc3339_ms(end);
    if (!s || !e)
      throw std::runtime_error("egress file line " + std::to_string(line_no) +
                               ": bad timestamp");
    policy.allow_windows.push_back({proto, *s, *e});
  }
  return policy;
}

EgressPolicy EgressPolicy::load_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open egress file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

}  // namespace hipot
