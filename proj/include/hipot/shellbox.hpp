#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hipot/policy.hpp"
#include "hipot/timeutil.hpp"

namespace hipot {

// Scripted behavior of a downloadable fixture binary.
struct FixtureSpec {
  std::string name;
  std::string behavior;  // scan-tool | irc-bot | rootkit-A | rootkit-B | mailer | inert
  std::uint64_t size = 0;
  std::string kernel_version;  // rootkits: version the exploit targets
  std::string scan_base;       // scan-tool: first three octets, e.g. "10.9.0"
  int scan_count = 8;
  std::string irc_server = "irc.example.net";
};

struct FixtureCatalog {
  std::map<std::string, FixtureSpec> fixtures;

  const FixtureSpec* find(const std::string& name) const;
  static FixtureCatalog defaults();
  static FixtureCatalog load_file(const std::string& path);
  static FixtureCatalog parse_json(const std::string& text);
};

struct SandboxConfig {
  std::string hostname = "falcon";
  std::string kernel_version = "2.6.8-2-386";
  std::string kernel_banner =
      "Linux falcon 2.6.8-2-386 #1 Tue May 31 23:31:20 UTC 2005 i686 GNU/Linux";
  std::string cpuinfo =
      "processor\t: 0\nvendor_id\t: GenuineIntel\nmodel name\t: Intel(R) "
      "Pentium(R) 4 CPU 2.40GHz\ncpu MHz\t\t: 2399.153\ncache size\t: 512 KB\n";
  std::string motd =
      "Debian GNU/Linux comes with ABSOLUTELY NO WARRANTY.\n"
      "In order to use the software fstat, please connect to 10.30.0.7\n";
  std::string bait_addr = "10.30.0.7";
};

struct VFile {
  bool is_dir = false;
  int owner_uid = 0;
  bool world_writable = false;
  bool executable = false;
  bool protected_file = false;  // survives partial-root rm attempts
  std::uint64_t size = 0;
  std::string content;
  std::string fixture;  // behavior lookup key when this is a fixture binary
};

struct Proc {
  int pid = 0;
  int uid = 0;
  std::string name;
};

struct SandboxState {
  std::string account;
  int uid = 1000;
  bool partial_root = false;  // root obtained, but access control half-broken
  std::string cwd;
  std::map<std::string, VFile> vfs;  // canonical absolute path -> file
  std::map<std::string, std::string> env;
  std::vector<std::string> history;
  std::vector<Proc> procs;
  int next_pid = 4000;

  // Modal prompt state (passwd dialogue).
  enum class Prompt { None, PasswdOld, PasswdNew, PasswdRetype };
  Prompt prompt = Prompt::None;
  std::string prompt_old, prompt_new;

  std::string histfile_default() const { return "/home/" + account + "/.bash_history"; }
};

// Builds the initial filesystem/process table for one account.
SandboxState make_sandbox(const std::string& account, const SandboxConfig& config,
                          const CredentialPolicy& policy);

struct ExecRecord {
  std::string path;
  std::vector<std::string> argv;
};

struct EgressRequest {
  std::string dst;
  int port = 0;
  std::string proto;
  bool bait = false;
};

// Callback into the sensor: logs the EgressAttempt and returns the verdict.
using EgressFn = std::function<EgressVerdict(const EgressRequest&)>;

struct ShellResult {
  std::string output;
  std::vector<ExecRecord> execs;
};

// Emulated shell for one sandbox. execute() is deterministic in
// (line, state, ts); every spawned command (each pipeline stage) produces
// one ExecRecord.
class Shellbox {
 public:
  Shellbox(SandboxConfig config, FixtureCatalog catalog, CredentialPolicy* policy,
           EgressFn egress);

  ShellResult execute(const std::string& line, SandboxState& state, TimeMs ts);

  const SandboxConfig& config() const { return config_; }

 private:
  struct Ctx;
  std::string run_command(const std::vector<std::string>& argv, SandboxState& state,
                          TimeMs ts);
  std::string run_fixture_binary(const std::string& path_as_typed,
                                 const std::string& canonical, SandboxState& state,
                                 TimeMs ts);
  std::string handle_prompt(const std::string& line, SandboxState& state, TimeMs ts);

  SandboxConfig config_;
  FixtureCatalog catalog_;
  CredentialPolicy* policy_;
  EgressFn egress_;
};

// Path helpers shared with tests.
std::string canonical_path(const std::string& cwd, const std::string& path);
std::vector<std::string> tokenize_command(const std::string& stage);

}  // namespace hipot
