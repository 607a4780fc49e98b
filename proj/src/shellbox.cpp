#include "hipot/shellbox.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace hipot {

using json = nlohmann::json;

const FixtureSpec* FixtureCatalog::find(const std::string& name) const {
  auto it = fixtures.find(name);
  return it == fixtures.end() ? nullptr : &it->second;
}

FixtureCatalog FixtureCatalog::defaults() {
  FixtureCatalog c;
  auto add = [&](FixtureSpec f) { c.fixtures[f.name] = std::move(f); };
  add({"pscan.tgz", "scan-tool", 14231, "", "10.9.0", 8, ""});
  add({"pscan", "scan-tool", 31744, "", "10.9.0", 8, ""});
  add({"emech.tar.gz", "irc-bot", 481202, "", "", 0, "irc.example.net"});
  add({"emech", "irc-bot", 1038336, "", "", 0, "irc.example.net"});
  add({"psybnc.tgz", "irc-bot", 352871, "", "", 0, "irc.example.net"});
  add({"mremap_pte", "rootkit-A", 18944, "2.4.24", "", 0, ""});
  add({"rk.tgz", "rootkit-A", 20480, "2.4.24", "", 0, ""});
  add({"ld-expl", "rootkit-B", 16128, "", "", 0, ""});
  add({"mailer.tgz", "mailer", 9216, "", "", 0, ""});
  add({"mailer", "mailer", 24576, "", "", 0, ""});
  add({"driver.bin", "inert", 52428800, "", "", 0, ""});
  return c;
}

FixtureCatalog FixtureCatalog::parse_json(const std::string& text) {
  json j = json::parse(text);
  FixtureCatalog c;
  for (auto it = j.begin(); it != j.end(); ++it) {
    FixtureSpec f;
    f.name = it.key();
    const json& v = it.value();
    f.behavior = v.at("behavior").get<std::string>();
    f.size = v.value("size", std::uint64_t{0});
    f.kernel_version = v.value("kernel_version", std::string{});
    f.scan_base = v.value("scan_base", std::string{});
    f.scan_count = v.value("scan_count", 8);
    f.irc_server = v.value("irc_server", std::string{"irc.example.net"});
    c.fixtures[f.name] = std::move(f);
  }
  return c;
}

FixtureCatalog FixtureCatalog::load_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open fixture manifest: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_json(buf.str());
}

std::string canonical_path(const std::string& cwd, const std::string& path) {
  std::string full = path.empty() ? cwd
                     : path[0] == '/' ? path
                                      : cwd + "/" + path;
  std::vector<std::string> parts;
  std::string part;
  std::istringstream in(full);
  while (std::getline(in, part, '/')) {
    if (part.empty() || part == ".") continue;
    if (part == "..") {
      if (!parts.empty()) parts.pop_back();
      continue;
    }
    parts.push_back(part);
  }
  std::string out;
  for (const auto& p : parts) out += "/" + p;
  return out.empty() ? "/" : out;
}

std::vector<std::string> tokenize_command(const std::string& stage) {
  std::vector<std::string> argv;
  std::string cur;
  bool in_token = false;
  char quote = 0;
  for (char ch : stage) {
    if (quote) {
      if (ch == quote) quote = 0;
      else cur.push_back(ch);
      continue;
    }
    if (ch == '\'' || ch == '"') {
      quote = ch;
      in_token = true;
      continue;
    }
    if (ch == ' ' || ch == '\t') {
      if (in_token) {
        argv.push_back(cur);
        cur.clear();
        in_token = false;
      }
      continue;
    }
    cur.push_back(ch);
    in_token = true;
  }
  if (in_token) argv.push_back(cur);
  return argv;
}

namespace {

std::string dirname_of(const std::string& canon) {
  auto pos = canon.rfind('/');
  if (pos == 0) return "/";
  return canon.substr(0, pos);
}

std::string basename_of(const std::string& path) {
  auto pos = path.rfind('/');
  return pos == std::string::npos ? path : path.substr(pos + 1);
}

std::string url_basename(const std::string& url) {
  auto pos = url.rfind('/');
  return pos == std::string::npos ? url : url.substr(pos + 1);
}

void add_dir(SandboxState& s, const std::string& path, int owner,
             bool world_writable) {
  VFile d;
  d.is_dir = true;
  d.owner_uid = owner;
  d.world_writable = world_writable;
  s.vfs[path] = std::move(d);
}

void add_file(SandboxState& s, const std::string& path, std::string content,
              int owner, bool prot = false) {
  VFile f;
  f.owner_uid = owner;
  f.content = std::move(content);
  f.size = f.content.size();
  f.protected_file = prot;
  s.vfs[path] = std::move(f);
}

// Write/remove permission is decided by the containing directory.
enum class Perm { Ok, Denied, NotPermitted };

Perm check_modify(const SandboxState& s, const std::string& canon) {
  auto fit = s.vfs.find(canon);
  if (fit != s.vfs.end() && fit->second.protected_file && s.partial_root)
    return Perm::NotPermitted;
  if (s.uid == 0) return Perm::Ok;
  auto dit = s.vfs.find(dirname_of(canon));
  if (dit == s.vfs.end()) return Perm::Denied;
  const VFile& dir = dit->second;
  if (dir.world_writable || dir.owner_uid == s.uid) return Perm::Ok;
  return Perm::Denied;
}

std::string strip_archive_suffix(const std::string& name) {
  for (const char* suf : {".tar.gz", ".tgz", ".tar"}) {
    std::string s(suf);
    if (name.size() > s.size() &&
        name.compare(name.size() - s.size(), s.size(), s) == 0)
      return name.substr(0, name.size() - s.size());
  }
  return name;
}

}  // namespace

SandboxState make_sandbox(const std::string& account, const SandboxConfig& config,
                          const CredentialPolicy& policy) {
  SandboxState s;
  s.account = account;
  s.cwd = "/home/" + account;
  s.env["HOME"] = s.cwd;
  s.env["SHELL"] = "/bin/bash";
  s.env["HISTFILE"] = s.histfile_default();

  add_dir(s, "/", 0, false);
  add_dir(s, "/etc", 0, false);
  add_dir(s, "/bin", 0, false);
  add_dir(s, "/usr", 0, false);
  add_dir(s, "/proc", 0, false);
  add_dir(s, "/tmp", 0, true);
  add_dir(s, "/var", 0, false);
  add_dir(s, "/var/tmp", 0, true);
  add_dir(s, "/dev", 0, false);
  add_dir(s, "/dev/shm", 0, true);
  add_dir(s, "/home", 0, false);
  add_dir(s, "/root", 0, false);
  add_dir(s, "/home/" + account, 1000, false);

  std::string passwd = "root:x:0:0:root:/root:/bin/bash\n";
  for (const auto& [name, acct] : policy.accounts()) {
    if (name == "root") continue;
    passwd += name + ":x:1000:1000::/home/" + name + ":/bin/bash\n";
  }
  add_file(s, "/etc/passwd", passwd, 0, true);
  add_file(s, "/etc/motd", config.motd, 0, true);
  add_file(s, "/etc/shadow", "", 0, true);
  add_file(s, "/etc/hosts", "127.0.0.1\tlocalhost\n", 0, true);
  add_file(s, "/proc/cpuinfo", config.cpuinfo, 0, true);
  add_file(s, "/proc/version", config.kernel_banner + "\n", 0, true);
  add_file(s, "/home/" + account + "/.bash_history", "", 1000);

  s.procs = {
      {1, 0, "init"},
      {3, 0, "ksoftirqd/0"},
      {412, 0, "sshd"},
      {501, 0, "crond"},
      {617, 48, "apache"},
      {618, 48, "apache"},
  };
  return s;
}

struct Shellbox::Ctx {};

Shellbox::Shellbox(SandboxConfig config, FixtureCatalog catalog,
                   CredentialPolicy* policy, EgressFn egress)
    : config_(std::move(config)),
      catalog_(std::move(catalog)),
      policy_(policy),
      egress_(std::move(egress)) {}

std::string Shellbox::handle_prompt(const std::string& line, SandboxState& state,
                                    TimeMs ts) {
  switch (state.prompt) {
    case SandboxState::Prompt::PasswdOld:
      state.prompt_old = line;
      state.prompt = SandboxState::Prompt::PasswdNew;
      return "Enter new UNIX password: ";
    case SandboxState::Prompt::PasswdNew:
      state.prompt_new = line;
      state.prompt = SandboxState::Prompt::PasswdRetype;
      return "Retype new UNIX password: ";
    case SandboxState::Prompt::PasswdRetype: {
      state.prompt = SandboxState::Prompt::None;
      if (line != state.prompt_new)
        return "Sorry, passwords do not match.\npasswd: password unchanged\n";
      if (!policy_ ||
          !policy_->change_password(state.account, state.prompt_old,
                                    state.prompt_new, ts))
        return "passwd: Authentication token manipulation error\n";
      return "passwd: password updated successfully\n";
    }
    case SandboxState::Prompt::None:
      break;
  }
  return "";
}

ShellResult Shellbox::execute(const std::string& line, SandboxState& state,
                              TimeMs ts) {
  ShellResult result;
  if (state.prompt != SandboxState::Prompt::None) {
    result.output = handle_prompt(line, state, ts);
    return result;
  }

  std::string trimmed = line;
  while (!trimmed.empty() && (trimmed.back() == ' ' || trimmed.back() == '\t'))
    trimmed.pop_back();
  std::size_t start = trimmed.find_first_not_of(" \t");
  if (start == std::string::npos) return result;
  trimmed = trimmed.substr(start);

  if (state.env.count("HISTFILE")) {
    state.history.push_back(trimmed);
    auto it = state.vfs.find(canonical_path(state.cwd, state.env["HISTFILE"]));
    if (it == state.vfs.end()) {
      add_file(state, canonical_path(state.cwd, state.env["HISTFILE"]), "",
               state.uid);
      it = state.vfs.find(canonical_path(state.cwd, state.env["HISTFILE"]));
    }
    it->second.content += trimmed + "\n";
    it->second.size = it->second.content.size();
  }

  // `&&` and `|` are sequencing only.
  std::vector<std::string> stages;
  std::string rest = trimmed;
  for (std::size_t i = 0; i < rest.size();) {
    if (rest.compare(i, 2, "&&") == 0) {
      stages.push_back(rest.substr(0, i));
      rest = rest.substr(i + 2);
      i = 0;
    } else if (rest[i] == '|') {
      stages.push_back(rest.substr(0, i));
      rest = rest.substr(i + 1);
      i = 0;
    } else {
      ++i;
    }
  }
  stages.push_back(rest);

  for (const std::string& stage : stages) {
    std::vector<std::string> argv = tokenize_command(stage);
    if (argv.empty()) continue;
    result.execs.push_back({argv[0], argv});
    result.output += run_command(argv, state, ts);
  }
  return result;
}

std::string Shellbox::run_command(const std::vector<std::string>& argv,
                                  SandboxState& state, TimeMs ts) {
  const std::string& arg0 = argv[0];
  if (arg0[0] == '/' || arg0.compare(0, 2, "./") == 0)
    return run_fixture_binary(arg0, canonical_path(state.cwd, arg0), state, ts);

  auto canon = [&](const std::string& p) { return canonical_path(state.cwd, p); };
  auto lookup = [&](const std::string& p) -> VFile* {
    auto it = state.vfs.find(canon(p));
    return it == state.vfs.end() ? nullptr : &it->second;
  };

  if (arg0 == "ls") {
    std::string target = state.cwd;
    bool all = false;
    for (std::size_t i = 1; i < argv.size(); ++i) {
      if (!argv[i].empty() && argv[i][0] == '-')
        all = all || argv[i].find('a') != std::string::npos;
      else
        target = argv[i];
    }
    const std::string dir = canon(target);
    const VFile* d = lookup(target);
    if (!d) return "ls: " + target + ": No such file or directory\n";
    if (!d->is_dir) return basename_of(dir) + "\n";
    std::vector<std::string> names;
    const std::string prefix = dir == "/" ? "/" : dir + "/";
    for (const auto& [path, f] : state.vfs) {
      if (path.size() <= prefix.size() || path.compare(0, prefix.size(), prefix) != 0)
        continue;
      const std::string rest = path.substr(prefix.size());
      if (rest.find('/') != std::string::npos) continue;
      if (!all && rest[0] == '.') continue;
      names.push_back(rest);
    }
    std::sort(names.begin(), names.end());
    std::string out;
    for (const auto& n : names) out += n + "\n";
    return out;
  }

  if (arg0 == "cd") {
    const std::string target = argv.size() > 1 ? argv[1] : "/home/" + state.account;
    const VFile* d = lookup(target);
    if (!d) return "-bash: cd: " + target + ": No such file or directory\n";
    if (!d->is_dir) return "-bash: cd: " + target + ": Not a directory\n";
    state.cwd = canon(target);
    return "";
  }

  if (arg0 == "cat") {
    std::string out;
    for (std::size_t i = 1; i < argv.size(); ++i) {
      const VFile* f = lookup(argv[i]);
      if (!f) {
        out += "cat: " + argv[i] + ": No such file or directory\n";
      } else if (f->is_dir) {
        out += "cat: " + argv[i] + ": Is a directory\n";
      } else if (canon(argv[i]) == "/etc/shadow" && state.uid != 0) {
        out += "cat: " + argv[i] + ": Permission denied\n";
      } else {
        out += f->content;
      }
    }
    return out;
  }

  if (arg0 == "w") {
    const TimeMs rem = ts % kDay;
    char clock[16];
    std::snprintf(clock, sizeof(clock), "%02d:%02d:%02d",
                  static_cast<int>(rem / kHour),
                  static_cast<int>((rem / kMinute) % 60),
                  static_cast<int>((rem / kSecond) % 60));
    return std::string(" ") + clock +
           " up 42 days,  1 user,  load average: 0.00, 0.01, 0.00\n"
           "USER     TTY      FROM              LOGIN@   IDLE   JCPU   PCPU WHAT\n" +
           state.account + "  pts/0    -                -        0.00s  0.02s  0.00s w\n";
  }

  if (arg0 == "ps") {
    std::string out = "  PID TTY          TIME CMD\n";
    for (const Proc& p : state.procs) {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%5d ?        00:00:00 %s\n", p.pid,
                    p.name.c_str());
      out += buf;
    }
    return out;
  }

  if (arg0 == "kill") {
    std::string out;
    for (std::size_t i = 1; i < argv.size(); ++i) {
      if (!argv[i].empty() && argv[i][0] == '-') continue;
      int pid = std::atoi(argv[i].c_str());
      auto it = std::find_if(state.procs.begin(), state.procs.end(),
                             [&](const Proc& p) { return p.pid == pid; });
      if (it == state.procs.end()) {
        out += "-bash: kill: (" + argv[i] + ") - No such process\n";
      } else if (it->uid != state.uid && (state.uid != 0 || state.partial_root)) {
        out += "-bash: kill: (" + argv[i] + ") - Operation not permitted\n";
      } else {
        state.procs.erase(it);
      }
    }
    return out;
  }

  if (arg0 == "uname") {
    bool all = false, release = false;
    for (std::size_t i = 1; i < argv.size(); ++i) {
      all = all || argv[i].find('a') != std::string::npos;
      release = release || argv[i].find('r') != std::string::npos;
    }
    if (all) return config_.kernel_banner + "\n";
    if (release) return config_.kernel_version + "\n";
    return "Linux\n";
  }

  if (arg0 == "passwd") {
    state.prompt = SandboxState::Prompt::PasswdOld;
    return "Changing password for " + state.account +
           "\n(current) UNIX password: ";
  }

  if (arg0 == "wget") {
    if (argv.size() < 2) return "wget: missing URL\n";
    const std::string& url = argv[1];
    std::string host = url;
    int port = 80;
    std::string proto = "http";
    auto scheme = host.find("://");
    if (scheme != std::string::npos) {
      proto = host.substr(0, scheme);
      host = host.substr(scheme + 3);
      if (proto == "https") port = 443;
      else if (proto == "ftp") port = 21;
    }
    auto slash = host.find('/');
    if (slash != std::string::npos) host = host.substr(0, slash);
    auto colon = host.find(':');
    if (colon != std::string::npos) {
      port = std::atoi(host.c_str() + colon + 1);
      host = host.substr(0, colon);
    }
    EgressRequest req{host, port, "http", host == config_.bait_addr};
    const EgressVerdict verdict = egress_ ? egress_(req) : EgressVerdict::Deny;
    if (verdict == EgressVerdict::Deny) {
      return "--" + format_rfc3339_ms(ts) + "--  " + url + "\nConnecting to " +
             host + ":" + std::to_string(port) +
             "... failed: Connection timed out.\nRetrying.\n";
    }
    const std::string name = url_basename(url);
    const FixtureSpec* fix = catalog_.find(name);
    if (!fix)
      return "--" + format_rfc3339_ms(ts) + "--  " + url +
             "\nERROR 404: Not Found.\n";
    VFile f;
    f.owner_uid = state.uid;
    f.size = fix->size;
    f.fixture = fix->name;
    state.vfs[canon(name)] = std::move(f);
    return "`" + name + "' saved [" + std::to_string(fix->size) + "]\n";
  }

  if (arg0 == "inband-get" || arg0 == "sftp") {
    if (argv.size() < 2) return arg0 + ": missing file name\n";
    const std::string name = basename_of(url_basename(argv.back()));
    EgressRequest req{"ssh-channel", 22, kInBandProto, false};
    const EgressVerdict verdict = egress_ ? egress_(req) : EgressVerdict::Allow;
    if (verdict == EgressVerdict::Deny) return arg0 + ": connection closed\n";
    const FixtureSpec* fix = catalog_.find(name);
    if (!fix) return "File \"" + name + "\" not found.\nNo such file\n";
    VFile f;
    f.owner_uid = state.uid;
    f.size = fix->size;
    f.fixture = fix->name;
    state.vfs[canon(name)] = std::move(f);
    return "Fetching " + name + " to " + name + "\n" + name + "  100% " +
           std::to_string(fix->size) + "\n";
  }

  if (arg0 == "tar") {
    std::string flags, file, dest;
    for (std::size_t i = 1; i < argv.size(); ++i) {
      if (argv[i] == "-C" && i + 1 < argv.size()) dest = argv[++i];
      else if (flags.empty()) flags = argv[i];
      else if (file.empty()) file = argv[i];
    }
    if (file.empty()) return "tar: no archive specified\n";
    VFile* f = lookup(file);
    if (!f) return "tar: " + file + ": Cannot open: No such file or directory\n";
    const std::string stem = strip_archive_suffix(basename_of(file));
    if (stem == basename_of(file))
      return "tar: This does not look like a tar archive\n";
    const std::string base = dest.empty() ? state.cwd : canon(dest);
    if (check_modify(state, base + "/" + stem) != Perm::Ok)
      return "tar: " + stem + ": Cannot mkdir: Permission denied\n";
    add_dir(state, base + "/" + stem, state.uid, false);
    VFile payload;
    payload.owner_uid = state.uid;
    payload.executable = true;
    payload.fixture = f->fixture.empty() ? stem : f->fixture;
    payload.size = f->size;
    state.vfs[base + "/" + stem + "/" + stem] = std::move(payload);
    add_file(state, base + "/" + stem + "/README", "", state.uid);
    std::string out;
    if (flags.find('v') != std::string::npos)
      out = stem + "/\n" + stem + "/" + stem + "\n" + stem + "/README\n";
    return out;
  }

  if (arg0 == "gzip" || arg0 == "gunzip") {
    if (argv.size() < 2) return arg0 + ": missing operand\n";
    const std::string file = argv.back();
    VFile* f = lookup(file);
    if (!f) return arg0 + ": " + file + ": No such file or directory\n";
    const std::string p = canon(file);
    if (p.size() > 3 && p.compare(p.size() - 3, 3, ".gz") == 0) {
      state.vfs[p.substr(0, p.size() - 3)] = *f;
      state.vfs.erase(p);
    }
    return "";
  }

  if (arg0 == "chmod") {
    if (argv.size() < 3) return "chmod: missing operand\n";
    const std::string& mode = argv[1];
    std::string out;
    for (std::size_t i = 2; i < argv.size(); ++i) {
      VFile* f = lookup(argv[i]);
      if (!f) {
        out += "chmod: cannot access `" + argv[i] + "': No such file or directory\n";
        continue;
      }
      if (state.uid != 0 && f->owner_uid != state.uid) {
        out += "chmod: changing permissions of `" + argv[i] + "': Operation not permitted\n";
        continue;
      }
      if (mode.find('x') != std::string::npos) {
        f->executable = mode.find('-') != 0;
      } else {
        // octal: any execute bit set
        int m = std::strtol(mode.c_str(), nullptr, 8);
        f->executable = (m & 0111) != 0;
      }
    }
    return out;
  }

  if (arg0 == "rm") {
    std::string out;
    for (std::size_t i = 1; i < argv.size(); ++i) {
      if (!argv[i].empty() && argv[i][0] == '-') continue;
      const std::string p = canon(argv[i]);
      auto it = state.vfs.find(p);
      if (it == state.vfs.end()) {
        out += "rm: cannot remove `" + argv[i] + "': No such file or directory\n";
        continue;
      }
      switch (check_modify(state, p)) {
        case Perm::Denied:
          out += "rm: cannot remove `" + argv[i] + "': Permission denied\n";
          continue;
        case Perm::NotPermitted:
          out += "rm: cannot remove `" + argv[i] + "': Operation not permitted\n";
          continue;
        case Perm::Ok:
          break;
      }
      if (state.env.count("HISTFILE") &&
          p == canonical_path(state.cwd, state.env["HISTFILE"])) {
        state.history.clear();
      }
      state.vfs.erase(it);
    }
    return out;
  }

  if (arg0 == "mv") {
    if (argv.size() < 3) return "mv: missing operand\n";
    const std::string src = canon(argv[1]);
    auto it = state.vfs.find(src);
    if (it == state.vfs.end())
      return "mv: cannot stat `" + argv[1] + "': No such file or directory\n";
    if (check_modify(state, src) != Perm::Ok)
      return "mv: cannot move `" + argv[1] + "': Permission denied\n";
    std::string dst = canon(argv[2]);
    auto dit = state.vfs.find(dst);
    if (dit != state.vfs.end() && dit->second.is_dir)
      dst += "/" + basename_of(src);
    if (check_modify(state, dst) != Perm::Ok)
      return "mv: cannot create `" + argv[2] + "': Permission denied\n";
    VFile moved = it->second;
    state.vfs.erase(it);
    state.vfs[dst] = std::move(moved);
    return "";
  }

  if (arg0 == "unset") {
    for (std::size_t i = 1; i < argv.size(); ++i) state.env.erase(argv[i]);
    return "";
  }

  if (arg0 == "export") {
    for (std::size_t i = 1; i < argv.size(); ++i) {
      auto eq = argv[i].find('=');
      if (eq == std::string::npos) continue;
      state.env[argv[i].substr(0, eq)] = argv[i].substr(eq + 1);
    }
    return "";
  }

  if (arg0 == "history") {
    std::string out;
    for (std::size_t i = 0; i < state.history.size(); ++i) {
      char buf[16];
      std::snprintf(buf, sizeof(buf), "%5zu  ", i + 1);
      out += buf + state.history[i] + "\n";
    }
    return out;
  }

  if (arg0 == "echo") {
    std::string out;
    for (std::size_t i = 1; i < argv.size(); ++i) {
      if (i > 1) out += " ";
      out += argv[i];
    }
    return out + "\n";
  }

  if (arg0 == "ssh") {
    if (argv.size() < 2) return "usage: ssh [user@]hostname\n";
    std::string host = argv.back();
    auto at = host.find('@');
    if (at != std::string::npos) host = host.substr(at + 1);
    EgressRequest req{host, 22, "ssh", host == config_.bait_addr};
    egress_(req);
    return "ssh: connect to host " + host + " port 22: Connection timed out\n";
  }

  if (arg0 == "mail" || arg0 == "sendmail") {
    EgressRequest req{"smtp-relay", 25, "smtp", false};
    const EgressVerdict verdict = egress_ ? egress_(req) : EgressVerdict::Deny;
    if (verdict == EgressVerdict::Deny)
      return arg0 + ": cannot connect to mail relay: Connection refused\n";
    return "";
  }

  if (arg0 == "id") {
    if (state.uid == 0) return "uid=0(root) gid=0(root) groups=0(root)\n";
    return "uid=1000(" + state.account + ") gid=1000(" + state.account +
           ") groups=1000(" + state.account + ")\n";
  }

  if (arg0 == "whoami") return (state.uid == 0 ? "root" : state.account) + "\n";

  if (arg0 == "pwd") return state.cwd + "\n";

  if (arg0 == "grep" || arg0 == "head" || arg0 == "tail" || arg0 == "more" ||
      arg0 == "less") {
    return "";  // pipeline filler; sequencing only
  }

  return "-bash: " + arg0 + ": command not found\n";
}

std::string Shellbox::run_fixture_binary(const std::string& path_as_typed,
                                         const std::string& canonical,
                                         SandboxState& state, TimeMs /*ts*/) {
  auto it = state.vfs.find(canonical);
  if (it == state.vfs.end())
    return "-bash: " + path_as_typed + ": No such file or directory\n";
  VFile& f = it->second;
  if (f.is_dir) return "-bash: " + path_as_typed + ": Is a directory\n";
  if (!f.executable) return "-bash: " + path_as_typed + ": Permission denied\n";

  const FixtureSpec* fix = catalog_.find(f.fixture);
  if (!fix) fix = catalog_.find(basename_of(canonical));
  if (!fix) return "Segmentation fault\n";

  if (fix->behavior == "scan-tool") {
    std::string out = "Usage: ./" + basename_of(canonical) +
                      " <b-block>\nScanning " + fix->scan_base + ".0/24 port 22\n";
    for (int i = 1; i <= fix->scan_count; ++i) {
      const std::string dst = fix->scan_base + "." + std::to_string(i);
      egress_({dst, 22, "ssh", dst == config_.bait_addr});
      out += dst + ":22 - connection timed out\n";
    }
    return out;
  }

  if (fix->behavior == "irc-bot") {
    state.procs.push_back({state.next_pid++, state.uid, basename_of(canonical)});
    egress_({fix->irc_server, 6667, "irc", false});
    return "EnergyMech 2.8, December 2nd, 2001\ninit: connecting to " +
           fix->irc_server + ":6667\n";
  }

  if (fix->behavior == "rootkit-A") {
    if (fix->kernel_version != config_.kernel_version) {
      return "[-] kernel " + config_.kernel_version +
             " not vulnerable (exploit targets " + fix->kernel_version +
             ")\nKilled\n";
    }
    state.uid = 0;
    return "[+] got root!\n";
  }

  if (fix->behavior == "rootkit-B") {
    state.uid = 0;
    state.partial_root = true;
    return "[+] overflow ok\n[+] got r00t\nsh-2.05b#\n";
  }

  if (fix->behavior == "mailer") {
    egress_({"smtp-relay", 25, "smtp", false});
    return "sendmail: cannot connect to relay: Connection refused\n";
  }

  return "";  // inert
}

}  // namespace hipot
