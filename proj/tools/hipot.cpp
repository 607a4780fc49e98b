#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "hipot/attacksim.hpp"
#include "hipot/pipeline.hpp"
#include "hipot/report.hpp"
#include "hipot/sensor.hpp"

namespace {

constexpr const char* kToolVersion = "hipot 0.1.0 (log format v1)";

volatile std::sig_atomic_t g_stop = 0;
void on_signal(int) { g_stop = 1; }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << data;
}

hipot::ForensicsConfig load_forensics_config(const std::string& region_map_path,
                                             const std::string& fixtures_path,
                                             const std::string& bait_addr) {
  hipot::ForensicsConfig config;
  if (!bait_addr.empty()) config.bait_addr = bait_addr;
  if (!fixtures_path.empty())
    config.catalog = hipot::FixtureCatalog::load_file(fixtures_path);
  if (!region_map_path.empty()) {
    std::istringstream in(read_file(region_map_path));
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      auto tab = line.find('\t');
      if (tab == std::string::npos) continue;
      config.region_by_cidr[line.substr(0, tab)] = line.substr(tab + 1);
    }
  }
  return config;
}

int split_host_port(const std::string& listen, std::string& host, int& port) {
  auto colon = listen.rfind(':');
  if (colon == std::string::npos) return -1;
  host = listen.substr(0, colon);
  port = std::atoi(listen.c_str() + colon + 1);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SSH honeypot sensor and attack forensics pipeline"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  // sense
  auto* sense = app.add_subcommand("sense", "run the sensor");
  std::string listen = "127.0.0.1:2222", mode = "plain";
  std::string accounts_path, egress_path, log_path = "hipot.log", motd_path;
  std::string state_path;
  sense->add_option("--listen", listen, "addr:port to bind");
  sense->add_option("--mode", mode)->check(CLI::IsMember({"ssh", "plain"}));
  sense->add_option("--accounts", accounts_path)->required();
  sense->add_option("--egress", egress_path);
  sense->add_option("--log", log_path);
  sense->add_option("--motd", motd_path);
  sense->add_option("--state", state_path, "password-change state file");

  // simulate
  auto* simulate = app.add_subcommand("simulate", "generate a labeled corpus");
  std::string scenario_path, out_dir = ".";
  std::uint64_t seed_override = 0;
  bool seed_set = false;
  simulate->add_option("--scenario", scenario_path)->required();
  simulate->add_option("--out", out_dir, "output directory");
  simulate->add_option("--seed", seed_override)->each([&](const std::string&) {
    seed_set = true;
  });

  // replay
  auto* replay = app.add_subcommand("replay", "drive a live plain-mode sensor");
  std::string replay_log_path, target = "127.0.0.1:2222";
  replay->add_option("--log", replay_log_path)->required();
  replay->add_option("--target", target, "sensor addr:port");

  // ingest
  auto* ingest = app.add_subcommand("ingest", "validate a log and print counts");
  std::string ingest_log;
  ingest->add_option("--log", ingest_log)->required();

  // analyze
  auto* analyze = app.add_subcommand("analyze", "run the forensics pipeline");
  std::string an_log, an_out, an_accounts, an_region, an_fixtures, an_bait;
  analyze->add_option("--log", an_log)->required();
  analyze->add_option("--out", an_out);
  analyze->add_option("--accounts", an_accounts, "accounts file (timelines)");
  analyze->add_option("--region-map", an_region, "CIDR<TAB>label file");
  analyze->add_option("--fixtures", an_fixtures, "fixture manifest JSON");
  analyze->add_option("--bait", an_bait, "bait host address");

  // report
  auto* report = app.add_subcommand("report", "aggregate statistics");
  std::string rp_log, rp_peer, rp_format = "text", rp_out, rp_accounts;
  report->add_option("--log", rp_log)->required();
  report->add_option("--peer-log", rp_peer);
  report->add_option("--format", rp_format)->check(CLI::IsMember({"text", "json"}));
  report->add_option("--out", rp_out);
  report->add_option("--accounts", rp_accounts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*sense) {
      if (mode == "ssh") {
        std::cerr << "hipot: ssh transport is not available in this build; "
                     "use --mode plain\n";
        return 1;
      }
      std::string host;
      int port = 0;
      if (split_host_port(listen, host, port) != 0) {
        std::cerr << "hipot: bad --listen value\n";
        return 2;
      }
      hipot::SensorConfig config;
      config.state_file = state_path;
      if (!egress_path.empty())
        config.egress = hipot::EgressPolicy::load_file(egress_path);
      if (!motd_path.empty()) config.sandbox.motd = read_file(motd_path);
      hipot::CredentialPolicy policy =
          hipot::CredentialPolicy::load_file(accounts_path);
      hipot::LogWriter log(log_path);
      hipot::Sensor sensor(std::move(config), std::move(policy), log);
      hipot::PlainServer server(sensor, host, port);
      port = server.start();
      std::cerr << "hipot: listening on " << host << ":" << port << " (plain)\n";
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      while (!g_stop) ::usleep(200000);
      server.stop();
      return 0;
    }

    if (*simulate) {
      hipot::Scenario sc = hipot::Scenario::load_file(scenario_path);
      if (seed_set) sc.seed = seed_override;
      hipot::GenerateResult gen = hipot::generate(sc);
      std::filesystem::create_directories(out_dir);
      std::string log_text;
      for (const hipot::Event& e : gen.events)
        log_text += hipot::encode_event(e) + "\n";
      write_file(out_dir + "/corpus.log", log_text);
      write_file(out_dir + "/labels.jsonl", gen.labels_to_jsonl());
      std::cerr << "hipot: wrote " << gen.events.size() << " events, "
                << gen.ip_labels.size() << " ip labels, "
                << gen.session_labels.size() << " session labels\n";
      return 0;
    }

    if (*replay) {
      std::string host;
      int port = 0;
      if (split_host_port(target, host, port) != 0) {
        std::cerr << "hipot: bad --target value\n";
        return 2;
      }
      hipot::LogReadResult log = hipot::read_log(replay_log_path);
      hipot::ReplayReport rep = hipot::replay_log(log.events, host, port);
      std::cout << "connections=" << rep.connections << " auths=" << rep.auths
                << " chunks=" << rep.chunks
                << (rep.aborted ? " ABORTED: " + rep.error : std::string{})
                << "\n";
      return rep.aborted ? 1 : 0;
    }

    if (*ingest) {
      hipot::LogReadResult log = hipot::read_log(ingest_log);
      hipot::SessionizeResult sess = hipot::sessionize(log.events);
      std::size_t in_session = 0;
      for (const auto& s : sess.sessions) in_session += s.events.size();
      std::cout << "events=" << log.events.size()
                << " sessions=" << sess.sessions.size()
                << " in_session_events=" << in_session
                << " loose_auth=" << sess.auth_attempts.size()
                << " orphans=" << sess.orphans.size()
                << " partial_tail=" << (log.partial_tail ? "yes" : "no") << "\n";
      return 0;
    }

    if (*analyze) {
      hipot::ForensicsConfig config =
          load_forensics_config(an_region, an_fixtures, an_bait);
      hipot::LogReadResult log = hipot::read_log(an_log);
      std::optional<hipot::CredentialPolicy> accounts;
      if (!an_accounts.empty())
        accounts = hipot::CredentialPolicy::load_file(an_accounts);
      hipot::Analysis a = hipot::analyze_events(
          std::move(log.events), config, accounts ? &*accounts : nullptr);
      a.partial_tail = log.partial_tail;
      const std::string out = hipot::analysis_to_json(a);
      if (an_out.empty()) std::cout << out;
      else write_file(an_out, out);
      return 0;
    }

    if (*report) {
      hipot::ForensicsConfig config;
      hipot::ReportInputs in;
      hipot::LogReadResult log = hipot::read_log(rp_log);
      in.events = std::move(log.events);
      in.sessions = hipot::sessionize(in.events);
      in.profiles = hipot::build_profiles(in.events, in.sessions);
      for (auto& [ip, p] : in.profiles)
        p.classification = hipot::classify_source(p, config);
      if (!rp_accounts.empty()) {
        hipot::CredentialPolicy accounts =
            hipot::CredentialPolicy::load_file(rp_accounts);
        in.timelines =
            hipot::compute_account_timelines(in.events, in.sessions, accounts);
      }
      std::map<std::string, hipot::SourceProfile> peer;
      if (!rp_peer.empty()) {
        hipot::LogReadResult peer_log = hipot::read_log(rp_peer);
        hipot::SessionizeResult peer_sess = hipot::sessionize(peer_log.events);
        peer = hipot::build_profiles(peer_log.events, peer_sess);
        in.peer_profiles = &peer;
      }
      const std::string out = hipot::render_report(in, rp_format);
      if (rp_out.empty()) std::cout << out;
      else write_file(rp_out, out);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "hipot: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
