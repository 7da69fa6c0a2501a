#include "csazkp/wire.hpp"

#include <netdb.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>

#include "csazkp/errors.hpp"
#include "csazkp/rng.hpp"

namespace csazkp {
namespace {

std::pair<std::string, std::string> split_address(const std::string& address) {
  const std::size_t colon = address.rfind(':');
  if (colon == std::string::npos) throw SessionError("address must be host:port");
  std::string host = address.substr(0, colon);
  if (host.size() >= 2 && host.front() == '[' && host.back() == ']') host = host.substr(1, host.size() - 2);
  return {host.empty() ? "127.0.0.1" : host, address.substr(colon + 1)};
}

struct AddrInfo {
  addrinfo* head = nullptr;
  ~AddrInfo() {
    if (head) freeaddrinfo(head);
  }
};

}  // namespace

std::string to_string(MessageType t) {
  switch (t) {
    case MessageType::hello:
      return "hello";
    case MessageType::commitment:
      return "commitment";
    case MessageType::challenge_bit:
      return "challenge_bit";
    case MessageType::response_iso:
      return "response_iso";
    case MessageType::p2_challenge:
      return "p2_challenge";
    case MessageType::p2_response:
      return "p2_response";
    case MessageType::verdict:
      return "verdict";
    case MessageType::error:
      return "error";
  }
  return "unknown";
}

SessionId random_session_id(Rng& rng) {
  SessionId id{};
  rng.fill(id);
  return id;
}

std::string encode_message(const WireMessage& m) {
  std::string out;
  out.reserve(1 + m.session.size() + m.payload.size());
  out.push_back(static_cast<char>(m.type));
  out.append(reinterpret_cast<const char*>(m.session.data()), m.session.size());
  out.append(m.payload);
  return out;
}

WireMessage decode_message(std::string_view body) {
  if (body.size() < 17) throw SessionError("frame body shorter than its header");
  const auto tag = static_cast<std::uint8_t>(body[0]);
  if (tag < 1 || tag > 8) throw SessionError("unknown message type " + std::to_string(tag));
  WireMessage m;
  m.type = static_cast<MessageType>(tag);
  std::memcpy(m.session.data(), body.data() + 1, m.session.size());
  m.payload.assign(body.substr(17));
  return m;
}

FdTransport::FdTransport(int read_fd, int write_fd, bool owns) : read_fd_(read_fd), write_fd_(write_fd), owns_(owns) {}

FdTransport::~FdTransport() {
  if (!owns_) return;
  ::close(read_fd_);
  if (write_fd_ != read_fd_) ::close(write_fd_);
}

void FdTransport::write_all(std::string_view bytes) {
  std::size_t done = 0;
  while (done < bytes.size()) {
    ssize_t n = ::send(write_fd_, bytes.data() + done, bytes.size() - done, MSG_NOSIGNAL);
    if (n < 0 && errno == ENOTSOCK) n = ::write(write_fd_, bytes.data() + done, bytes.size() - done);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw SessionError(std::string("write failed: ") + std::strerror(errno));
    }
    done += static_cast<std::size_t>(n);
  }
}

std::string FdTransport::read_exact(std::size_t n, std::chrono::steady_clock::time_point deadline) {
  std::string out(n, '\0');
  std::size_t done = 0;
  while (done < n) {
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) throw SessionError("frame timeout");
    pollfd p{read_fd_, POLLIN, 0};
    const int ready = ::poll(&p, 1, static_cast<int>(std::min<long long>(left.count(), 1 << 30)));
    if (ready < 0) {
      if (errno == EINTR) continue;
      throw SessionError(std::string("poll failed: ") + std::strerror(errno));
    }
    if (ready == 0) throw SessionError("frame timeout");
    const ssize_t got = ::read(read_fd_, out.data() + done, n - done);
    if (got < 0) {
      if (errno == EINTR || errno == EAGAIN) continue;
      throw SessionError(std::string("read failed: ") + std::strerror(errno));
    }
    if (got == 0) throw SessionError("peer closed the stream");
    done += static_cast<std::size_t>(got);
  }
  return out;
}

std::string BufferTransport::read_exact(std::size_t n, std::chrono::steady_clock::time_point) {
  if (input_.size() - pos_ < n) {
    pos_ = input_.size();
    throw SessionError("peer closed the stream");
  }
  std::string out = input_.substr(pos_, n);
  pos_ += n;
  return out;
}

std::string frame_bytes(const WireMessage& m) {
  const std::string body = encode_message(m);
  if (body.size() > kMaxFrameBytes) throw SessionError("frame exceeds the size cap");
  const auto len = static_cast<std::uint32_t>(body.size());
  std::string out;
  out.reserve(4 + body.size());
  for (int shift = 24; shift >= 0; shift -= 8) out.push_back(static_cast<char>((len >> shift) & 0xFFU));
  out.append(body);
  return out;
}

void send_frame(Transport& t, const WireMessage& m) { t.write_all(frame_bytes(m)); }

WireMessage recv_frame(Transport& t, std::chrono::milliseconds timeout) {
  const auto deadline = std::chrono::steady_clock::now() + timeout;
  const std::string head = t.read_exact(4, deadline);
  std::uint32_t len = 0;
  for (char c : head) len = (len << 8U) | static_cast<std::uint8_t>(c);
  if (len > kMaxFrameBytes) throw SessionError("declared frame length " + std::to_string(len) + " exceeds the cap");
  if (len < 17) throw SessionError("frame body shorter than its header");
  return decode_message(t.read_exact(len, deadline));
}

int connect_tcp(const std::string& address) {
  const auto [host, port] = split_address(address);
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  AddrInfo info;
  if (::getaddrinfo(host.c_str(), port.c_str(), &hints, &info.head) != 0) throw SessionError("cannot resolve " + address);
  for (addrinfo* a = info.head; a; a = a->ai_next) {
    const int fd = ::socket(a->ai_family, a->ai_socktype, a->ai_protocol);
    if (fd < 0) continue;
    if (::connect(fd, a->ai_addr, a->ai_addrlen) == 0) return fd;
    ::close(fd);
  }
  throw SessionError("cannot connect to " + address);
}

int listen_tcp(const std::string& address, int backlog) {
  const auto [host, port] = split_address(address);
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  hints.ai_flags = AI_PASSIVE;
  AddrInfo info;
  if (::getaddrinfo(host.c_str(), port.c_str(), &hints, &info.head) != 0) throw SessionError("cannot resolve " + address);
  for (addrinfo* a = info.head; a; a = a->ai_next) {
    const int fd = ::socket(a->ai_family, a->ai_socktype, a->ai_protocol);
    if (fd < 0) continue;
    const int yes = 1;
    ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof yes);
    if (::bind(fd, a->ai_addr, a->ai_addrlen) == 0 && ::listen(fd, backlog) == 0) return fd;
    ::close(fd);
  }
  throw SessionError("cannot listen on " + address);
}

int bound_port(int listen_fd) {
  sockaddr_storage addr{};
  socklen_t len = sizeof addr;
  if (::getsockname(listen_fd, reinterpret_cast<sockaddr*>(&addr), &len) != 0) throw SessionError("getsockname failed");
  if (addr.ss_family == AF_INET) return ntohs(reinterpret_cast<sockaddr_in*>(&addr)->sin_port);
  if (addr.ss_family == AF_INET6) return ntohs(reinterpret_cast<sockaddr_in6*>(&addr)->sin6_port);
  return -1;
}

}  // namespace csazkp
