#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "hipot/events.hpp"
#include "hipot/timeutil.hpp"

namespace hipot {

// One honeypot account. Password changes are timestamped so that
// authentication at time t checks the password valid at t.
struct Account {
  std::string name;
  bool weak = true;
  TimeMs created_ts = 0;
  // (effective_from, password), ascending. First entry is the initial password.
  std::vector<std::pair<TimeMs, std::string>> passwords;

  const std::string& password_at(TimeMs ts) const;
};

class CredentialPolicy {
 public:
  CredentialPolicy() = default;
  CredentialPolicy(const CredentialPolicy& other);
  CredentialPolicy& operator=(const CredentialPolicy& other);

  void add_account(Account a);
  bool has_account(const std::string& user) const;
  const Account* find(const std::string& user) const;
  const std::map<std::string, Account>& accounts() const { return accounts_; }

  // True iff (user,pass) matches the password valid at ts. Unlimited retries.
  bool check(const std::string& user, const std::string& pass, TimeMs ts) const;

  // The passwd builtin: succeeds only when `old_pw` matches at ts.
  bool change_password(const std::string& user, const std::string& old_pw,
                       const std::string& new_pw, TimeMs ts);

  // Accounts file: `user:password:weak|strong[:created_rfc3339]` per line.
  static CredentialPolicy load_file(const std::string& path);
  static CredentialPolicy parse(const std::string& text);
  std::string serialize() const;  // current passwords, for the state file

 private:
  mutable std::mutex mu_;
  std::map<std::string, Account> accounts_;
};

struct AllowWindow {
  std::string proto;  // "http", "smtp", ...
  TimeMs start_ts = 0;
  TimeMs end_ts = 0;
};

// Default deny; in-band transfer over the established channel always allowed.
struct EgressPolicy {
  std::vector<AllowWindow> allow_windows;

  EgressVerdict check(const std::string& proto, TimeMs ts) const;

  // Egress file: `proto start_rfc3339 end_rfc3339` per line, `#` comments.
  static EgressPolicy load_file(const std::string& path);
  static EgressPolicy parse(const std::string& text);
};

inline constexpr const char* kInBandProto = "inband";

}  // namespace hipot
