#include "hipot/sensor.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <chrono>
#include <cstring>
#include <stdexcept>

namespace hipot {

namespace {

TimeMs wall_clock_ms() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

bool send_all(int fd, const std::string& data) {
  std::size_t off = 0;
  while (off < data.size()) {
    ssize_t n = ::send(fd, data.data() + off, data.size() - off, MSG_NOSIGNAL);
    if (n <= 0) return false;
    off += static_cast<std::size_t>(n);
  }
  return true;
}

}  // namespace

PlainServer::PlainServer(Sensor& sensor, const std::string& bind_addr, int port)
    : sensor_(sensor), bind_addr_(bind_addr), port_(port) {}

PlainServer::~PlainServer() { stop(); }

int PlainServer::start() {
  listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listen_fd_ < 0) throw std::runtime_error("socket() failed");
  int one = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(static_cast<std::uint16_t>(port_));
  if (::inet_pton(AF_INET, bind_addr_.c_str(), &addr.sin_addr) != 1)
    throw std::runtime_error("bad bind address: " + bind_addr_);
  if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) < 0)
    throw std::runtime_error("bind() failed on " + bind_addr_ + ":" +
                             std::to_string(port_));
  if (::listen(listen_fd_, 64) < 0) throw std::runtime_error("listen() failed");
  socklen_t len = sizeof(addr);
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.sin_port);
  running_ = true;
  accept_thread_ = std::thread([this] { accept_loop(); });
  return port_;
}

void PlainServer::stop() {
  if (!running_.exchange(false)) return;
  ::shutdown(listen_fd_, SHUT_RDWR);
  ::close(listen_fd_);
  if (accept_thread_.joinable()) accept_thread_.join();
  std::lock_guard<std::mutex> lock(workers_mu_);
  for (auto& t : workers_)
    if (t.joinable()) t.join();
  workers_.clear();
}

void PlainServer::accept_loop() {
  while (running_) {
    sockaddr_in peer{};
    socklen_t len = sizeof(peer);
    int fd = ::accept(listen_fd_, reinterpret_cast<sockaddr*>(&peer), &len);
    if (fd < 0) {
      if (!running_) break;
      continue;
    }
    std::lock_guard<std::mutex> lock(workers_mu_);
    workers_.emplace_back([this, fd] { handle_client(fd); });
  }
}

void PlainServer::handle_client(int fd) {
  std::string ip = "127.0.0.1";
  std::optional<TimeMs> clock;
  auto now = [&] { return clock ? *clock : wall_clock_ms(); };

  std::string buf, user, sid;
  bool connected = false, authed = false;
  char tmp[4096];
  send_all(fd, sensor_.motd());
  while (true) {
    auto nl = buf.find('\n');
    if (nl == std::string::npos) {
      ssize_t n = ::recv(fd, tmp, sizeof(tmp), 0);
      if (n <= 0) break;
      buf.append(tmp, static_cast<std::size_t>(n));
      continue;
    }
    std::string line = buf.substr(0, nl);
    buf.erase(0, nl + 1);
    if (!line.empty() && line.back() == '\r') line.pop_back();

    if (line.rfind("IP ", 0) == 0 && !connected) {
      ip = line.substr(3);
    } else if (line.rfind("TS ", 0) == 0) {
      clock = std::strtoll(line.c_str() + 3, nullptr, 10);
    } else if (line.rfind("USER ", 0) == 0) {
      user = line.substr(5);
    } else if (line.rfind("PASS ", 0) == 0) {
      if (!connected) {
        sid = sensor_.connect(ip, now());
        connected = true;
      }
      AuthResult r = sensor_.authenticate(sid, ip, user, line.substr(5), now());
      if (r.granted) {
        authed = true;
        send_all(fd, "OK " + sid + "\n");
      } else {
        send_all(fd, "FAIL\n");
      }
    } else if (line.rfind("D ", 0) == 0 && authed) {
      auto chunk = from_hex(line.substr(2));
      if (!chunk) {
        send_all(fd, "ERR bad hex\n");
        continue;
      }
      std::string out = sensor_.feed(sid, *chunk, now());
      send_all(fd, "O " + to_hex(out) + "\n");
    } else if (line == "Q") {
      break;
    } else if (line == "CONNECT") {
      // Scanner-style contact: register the connection without auth.
      if (!connected) {
        sid = sensor_.connect(ip, now());
        connected = true;
      }
    }
  }
  if (connected) sensor_.disconnect(sid, now());
  ::close(fd);
}

}  // namespace hipot
