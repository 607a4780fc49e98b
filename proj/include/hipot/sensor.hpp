#pragma once

#include <atomic>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "hipot/eventlog.hpp"
#include "hipot/policy.hpp"
#include "hipot/shellbox.hpp"

namespace hipot {

struct SensorConfig {
  SandboxConfig sandbox;
  FixtureCatalog catalog = FixtureCatalog::defaults();
  EgressPolicy egress;
  // Persists password changes across sensor restarts; empty disables.
  std::string state_file;
};

struct AuthResult {
  bool granted = false;
  std::string session_id;  // set when granted
};

// Transport-agnostic sensor core. One instance serves many concurrent
// connections; every event funnels through the single log serializer.
class Sensor {
 public:
  Sensor(SensorConfig config, CredentialPolicy policy, LogWriter& log);

  // Logs Connect and returns the connection's session id.
  std::string connect(const std::string& ip, TimeMs ts);

  // Logs an AuthAttempt for every call. Unknown users are still logged.
  AuthResult authenticate(const std::string& sid, const std::string& ip,
                          const std::string& user, const std::string& pass,
                          TimeMs ts);

  // One delivered input chunk -> exactly one TtyRead event with the exact
  // byte count. Returns the emulated terminal output (also logged TtyWrite).
  std::string feed(const std::string& sid, const std::string& chunk, TimeMs ts);

  void disconnect(const std::string& sid, TimeMs ts);

  const std::string& motd() const { return config_.sandbox.motd; }
  CredentialPolicy& policy() { return policy_; }

 private:
  struct Connection {
    std::string sid;
    std::string ip;
    std::string account;
    std::string tty;
    bool authenticated = false;
    std::string line_buf;  // backspace already applied
  };

  struct AccountBox {
    std::mutex mu;
    SandboxState state;
  };

  AccountBox& sandbox_for(const std::string& account);
  void persist_policy();

  SensorConfig config_;
  CredentialPolicy policy_;
  LogWriter& log_;
  std::mutex mu_;
  std::map<std::string, Connection> conns_;
  std::map<std::string, std::unique_ptr<AccountBox>> boxes_;
  std::unique_ptr<Shellbox> shell_;
  int next_conn_ = 1;
  int next_tty_ = 0;
};

// `--plain` transport: trivial line preamble over TCP, for deterministic
// integration tests.
//
//   IP a.b.c.d      declare the claimed source address (optional)
//   TS <ms>         set the logical clock for subsequent events (optional)
//   USER name
//   PASS secret     -> "OK <sid>" or "FAIL"
//   D <hex>         one tty input chunk (after OK); output comes back as
//                   "O <hex>" lines
//   Q               disconnect
class PlainServer {
 public:
  PlainServer(Sensor& sensor, const std::string& bind_addr, int port);
  ~PlainServer();

  // Binds and starts the accept loop; returns the bound port (useful with
  // port 0).
  int start();
  void stop();
  int port() const { return port_; }

 private:
  void accept_loop();
  void handle_client(int fd);

  Sensor& sensor_;
  std::string bind_addr_;
  int port_;
  int listen_fd_ = -1;
  std::atomic<bool> running_{false};
  std::thread accept_thread_;
  std::mutex workers_mu_;
  std::vector<std::thread> workers_;
};

}  // namespace hipot
