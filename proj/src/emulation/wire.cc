// Copyright 2026 The dpiov Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dpiov/emulation/wire.h"

#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <memory>
#include <set>
#include <thread>

namespace dpiov {
namespace {

using nlohmann::json;
using Millis = std::chrono::milliseconds;

std::string Errno(const std::string& what) { return what + ": " + std::strerror(errno); }

struct AddrInfoDeleter {
  void operator()(addrinfo* p) const { freeaddrinfo(p); }
};

std::unique_ptr<addrinfo, AddrInfoDeleter> Resolve(const std::string& host, std::uint16_t port,
                                                    bool passive) {
  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  if (passive) hints.ai_flags = AI_PASSIVE;
  addrinfo* out = nullptr;
  const int rc = getaddrinfo(host.c_str(), std::to_string(port).c_str(), &hints, &out);
  if (rc != 0) throw WireError("cannot resolve " + host + ": " + gai_strerror(rc));
  return std::unique_ptr<addrinfo, AddrInfoDeleter>(out);
}

json Envelope(const char* type) { return {{"v", kProtocolVersion}, {"type", type}}; }

json ErrorMessage(const std::string& message) {
  json m = Envelope("error");
  m["message"] = message;
  return m;
}

void Expect(const json& m, const char* type) {
  if (m["type"] == "error") {
    throw WireError("peer error: " + m.value("message", std::string("unspecified")));
  }
  if (m["type"] != type) {
    throw WireError("expected '" + std::string(type) + "' message, got '" +
                    m["type"].get<std::string>() + "'");
  }
}

std::uint32_t NodeIdOf(const json& m) {
  if (!m.contains("node_id") || !m["node_id"].is_number_unsigned()) {
    throw WireError("message without a valid node_id");
  }
  return m["node_id"].get<std::uint32_t>();
}

// Per-connection state owned by the aggregator.
struct Peer {
  explicit Peer(int fd) : socket(fd) {}
  LineSocket socket;
  std::uint32_t node_id = 0;
  bool identified = false;
  int classes = 0;
  LabeledData data;
  std::optional<double> accuracy;
  std::string failure;
};

}  // namespace

LineSocket::~LineSocket() {
  if (fd_ >= 0) ::close(fd_);
}

LineSocket::LineSocket(LineSocket&& other) noexcept
    : fd_(std::exchange(other.fd_, -1)), buffer_(std::move(other.buffer_)) {}

LineSocket& LineSocket::operator=(LineSocket&& other) noexcept {
  if (this != &other) {
    if (fd_ >= 0) ::close(fd_);
    fd_ = std::exchange(other.fd_, -1);
    buffer_ = std::move(other.buffer_);
  }
  return *this;
}

void LineSocket::SendLine(const std::string& line) {
  std::string payload = line;
  payload.push_back('\n');
  std::size_t sent = 0;
  while (sent < payload.size()) {
    const ssize_t n = ::send(fd_, payload.data() + sent, payload.size() - sent, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw WireError(Errno("send failed"));
    }
    sent += static_cast<std::size_t>(n);
  }
}

std::string LineSocket::ReadLine(Millis timeout) {
  const auto deadline = std::chrono::steady_clock::now() + timeout;
  for (;;) {
    const auto newline = buffer_.find('\n');
    if (newline != std::string::npos) {
      std::string line = buffer_.substr(0, newline);
      buffer_.erase(0, newline + 1);
      return line;
    }
    const auto left =
        std::chrono::duration_cast<Millis>(deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) throw WireError("timed out waiting for peer");
    pollfd p{fd_, POLLIN, 0};
    const int rc = ::poll(&p, 1, static_cast<int>(left.count()));
    if (rc < 0) {
      if (errno == EINTR) continue;
      throw WireError(Errno("poll failed"));
    }
    if (rc == 0) continue;
    char chunk[65536];
    const ssize_t n = ::recv(fd_, chunk, sizeof(chunk), 0);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw WireError(Errno("recv failed"));
    }
    if (n == 0) throw WireError("connection closed by peer");
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

json ParseMessage(const std::string& line) {
  json m = json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (m.is_discarded() || !m.is_object()) throw WireError("malformed message");
  if (!m.contains("v") || !m["v"].is_number_integer() || m["v"].get<int>() != kProtocolVersion) {
    throw WireError("unsupported protocol version in message");
  }
  if (!m.contains("type") || !m["type"].is_string()) throw WireError("message without type");
  return m;
}

json HelloMessage(std::uint32_t node_id) {
  json m = Envelope("hello");
  m["node_id"] = node_id;
  return m;
}

json DataMessage(std::uint32_t node_id, int classes, const LabeledData& data, bool noised) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < data.features.rows(); ++r) {
    std::vector<double> row(static_cast<std::size_t>(data.features.cols()));
    for (Eigen::Index c = 0; c < data.features.cols(); ++c) row[c] = data.features(r, c);
    rows.push_back(std::move(row));
  }
  json m = Envelope("data");
  m["node_id"] = node_id;
  m["classes"] = classes;
  m["features"] = std::move(rows);
  m["labels"] = data.labels;
  m["noised"] = noised;
  return m;
}

LabeledData DataFromMessage(const json& m) {
  const auto rows = m.at("features").get<std::vector<std::vector<double>>>();
  LabeledData out;
  out.labels = m.at("labels").get<std::vector<int>>();
  if (rows.size() != out.labels.size()) throw WireError("features and labels differ in length");
  const std::size_t dim = rows.empty() ? 0 : rows[0].size();
  out.features.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(dim));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != dim) throw WireError("ragged feature rows");
    for (std::size_t c = 0; c < dim; ++c) out.features(r, c) = rows[r][c];
  }
  return out;
}

Aggregator::Aggregator(const std::string& host, std::uint16_t port, int expected_nodes,
                       SharingMode mode, PipelineConfig config, Millis timeout)
    : expected_nodes_(expected_nodes), mode_(mode), config_(std::move(config)),
      timeout_(timeout) {
  if (expected_nodes <= 0) throw std::invalid_argument("expected_nodes must be positive");
  config_.Validate();
  auto addr = Resolve(host, port, /*passive=*/true);
  listen_fd_ = ::socket(addr->ai_family, addr->ai_socktype, addr->ai_protocol);
  if (listen_fd_ < 0) throw WireError(Errno("socket failed"));
  const int one = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  if (::bind(listen_fd_, addr->ai_addr, addr->ai_addrlen) != 0) {
    const std::string msg = Errno("cannot bind " + host + ":" + std::to_string(port));
    ::close(listen_fd_);
    throw WireError(msg);
  }
  if (::listen(listen_fd_, expected_nodes + 8) != 0) {
    const std::string msg = Errno("listen failed");
    ::close(listen_fd_);
    throw WireError(msg);
  }
  sockaddr_in bound{};
  socklen_t len = sizeof(bound);
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&bound), &len);
  port_ = ntohs(bound.sin_port);
}

Aggregator::~Aggregator() {
  if (listen_fd_ >= 0) ::close(listen_fd_);
}

std::vector<std::string> Aggregator::message_log() const {
  std::lock_guard lock(log_mutex_);
  return log_;
}

PipelineReport Aggregator::Run() {
  std::vector<std::unique_ptr<Peer>> peers;
  std::vector<std::thread> workers;
  std::mutex ids_mutex;
  std::set<std::uint32_t> ids;

  auto receive = [&](Peer& peer) {
    std::string line = peer.socket.ReadLine(timeout_);
    {
      std::lock_guard lock(log_mutex_);
      log_.push_back(line);
    }
    return ParseMessage(line);
  };

  auto serve = [&](Peer& peer) {
    try {
      json hello = receive(peer);
      Expect(hello, "hello");
      peer.node_id = NodeIdOf(hello);
      {
        std::lock_guard lock(ids_mutex);
        if (!ids.insert(peer.node_id).second) {
          peer.failure = "duplicate node_id " + std::to_string(peer.node_id);
          peer.socket.Send(ErrorMessage(peer.failure));
          return;
        }
      }
      peer.identified = true;
      json data = receive(peer);
      Expect(data, "data");
      if (NodeIdOf(data) != peer.node_id) throw WireError("node_id changed mid-session");
      const bool noised = data.value("noised", false);
      if (noised != (mode_ == SharingMode::kLdp)) {
        throw WireError(mode_ == SharingMode::kLdp ? "LDP node sent raw records"
                                                   : "GDP node sent noised records");
      }
      peer.classes = data.at("classes").get<int>();
      peer.data = DataFromMessage(data);
      if (mode_ == SharingMode::kLdp) {
        json report = receive(peer);
        Expect(report, "report");
        if (NodeIdOf(report) != peer.node_id) throw WireError("report for the wrong node_id");
        peer.accuracy = report.at("accuracy").get<double>();
      }
    } catch (const std::exception& e) {
      if (peer.failure.empty()) peer.failure = e.what();
    }
  };

  // Accept exactly expected_nodes_ connections.
  const auto deadline = std::chrono::steady_clock::now() + timeout_;
  while (static_cast<int>(peers.size()) < expected_nodes_) {
    const auto left =
        std::chrono::duration_cast<Millis>(deadline - std::chrono::steady_clock::now());
    pollfd p{listen_fd_, POLLIN, 0};
    const int rc = left.count() > 0 ? ::poll(&p, 1, static_cast<int>(left.count())) : 0;
    if (rc < 0 && errno == EINTR) continue;
    if (rc <= 0) {
      for (auto& w : workers) w.join();
      for (auto& peer : peers) {
        try {
          peer->socket.Send(ErrorMessage("aggregator timed out waiting for nodes"));
        } catch (const WireError&) {
        }
      }
      throw WireError("timed out waiting for nodes: " + std::to_string(peers.size()) + " of " +
                      std::to_string(expected_nodes_) + " connected");
    }
    const int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) {
      if (errno == EINTR || errno == ECONNABORTED) continue;
      throw WireError(Errno("accept failed"));
    }
    const int one = 1;
    ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
    peers.push_back(std::make_unique<Peer>(fd));
    workers.emplace_back(serve, std::ref(*peers.back()));
  }
  for (auto& w : workers) w.join();

  // Barrier reached: everything below is deterministic in node_id order.
  std::sort(peers.begin(), peers.end(), [](const auto& a, const auto& b) {
    if (a->identified != b->identified) return a->identified;
    return a->node_id < b->node_id;
  });

  auto abort_all = [&](const std::string& reason) {
    for (auto& peer : peers) {
      if (!peer->failure.empty()) continue;
      try {
        peer->socket.Send(ErrorMessage("run aborted: " + reason));
      } catch (const WireError&) {
      }
    }
    throw WireError(reason);
  };

  for (const auto& peer : peers) {
    if (!peer->failure.empty()) abort_all(peer->failure);
  }
  const int classes = peers.front()->classes;
  for (const auto& peer : peers) {
    if (peer->classes != classes) abort_all("nodes disagree on the number of classes");
  }

  if (mode_ == SharingMode::kGdp) {
    std::vector<NodePayload> parts;
    for (const auto& peer : peers) parts.push_back({peer->node_id, &peer->data});
    LinearClassifier model;
    try {
      model = TrainGlobalModel(parts, classes, config_);
    } catch (const std::exception& e) {
      abort_all(e.what());
    }
    json message = Envelope("model");
    message["weights"] = model.ToJson();
    const std::string line = message.dump();
    for (auto& peer : peers) peer->socket.SendLine(line);
    for (auto& peer : peers) {
      json report = receive(*peer);
      Expect(report, "report");
      if (NodeIdOf(report) != peer->node_id) abort_all("report for the wrong node_id");
      peer->accuracy = report.at("accuracy").get<double>();
    }
  }

  std::vector<NodeAccuracy> accuracies;
  for (auto& peer : peers) {
    accuracies.push_back({peer->node_id, *peer->accuracy});
    try {
      peer->socket.Send(Envelope("shutdown"));
    } catch (const WireError&) {
    }
  }
  return MakeReport(mode_, config_, std::move(accuracies));
}

NodeRunResult RunNode(const std::string& host, std::uint16_t port, const NodeDataset& node,
                      SharingMode mode, const PipelineConfig& config, const NodeOptions& options) {
  config.Validate();
  auto addr = Resolve(host, port, /*passive=*/false);
  int fd = -1;
  for (int attempt = 0; attempt < std::max(1, options.connect_attempts); ++attempt) {
    fd = ::socket(addr->ai_family, addr->ai_socktype, addr->ai_protocol);
    if (fd < 0) throw WireError(Errno("socket failed"));
    if (::connect(fd, addr->ai_addr, addr->ai_addrlen) == 0) break;
    ::close(fd);
    fd = -1;
    std::this_thread::sleep_for(options.retry_delay);
  }
  if (fd < 0) {
    throw WireError("node " + std::to_string(node.node_id) + " could not reach aggregator at " +
                    host + ":" + std::to_string(port));
  }
  const int one = 1;
  ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
  LineSocket socket(fd);
  NodeRunResult result;
  auto send = [&](const json& m) {
    result.sent.push_back(m.dump());
    socket.SendLine(result.sent.back());
  };
  auto receive = [&] { return ParseMessage(socket.ReadLine(options.timeout)); };

  send(HelloMessage(node.node_id));
  if (mode == SharingMode::kGdp) {
    send(DataMessage(node.node_id, node.classes, node.train, /*noised=*/false));
    json model_message = receive();
    Expect(model_message, "model");
    const auto model = LinearClassifier::FromJson(model_message.at("weights"));
    result.accuracy = model.Accuracy(node.validation.features, node.validation.labels);
  } else {
    LabeledData shared;
    result.accuracy = RunLocalNode(node, config, &shared);
    send(DataMessage(node.node_id, node.classes, shared, /*noised=*/true));
  }
  json report = Envelope("report");
  report["node_id"] = node.node_id;
  report["accuracy"] = result.accuracy;
  send(report);
  Expect(receive(), "shutdown");
  return result;
}

}  // namespace dpiov
