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

#ifndef DPIOV_EMULATION_WIRE_H_
#define DPIOV_EMULATION_WIRE_H_

#include <chrono>
#include <cstdint>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dpiov/emulation/fleet.h"
#include "dpiov/emulation/pipeline.h"
#include "json.hpp"

// Newline-delimited JSON over TCP, protocol version 1.
//
//   node -> aggregator  {"v":1,"type":"hello","node_id":u32}
//   node -> aggregator  {"v":1,"type":"data","node_id":u32,"classes":k,
//                        "features":[[f64]],"labels":[u32],"noised":bool}
//   aggregator -> node  {"v":1,"type":"model","weights":[[f64]]}      (GDP)
//   node -> aggregator  {"v":1,"type":"report","node_id":u32,"accuracy":f64}
//   aggregator -> node  {"v":1,"type":"shutdown"}
//   aggregator -> node  {"v":1,"type":"error","message":text}
//
// GDP nodes send raw training records and score the returned model on their
// clean validation split. LDP nodes noise locally, train locally and send
// only noised records plus their score.

namespace dpiov {

inline constexpr int kProtocolVersion = 1;

class WireError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Owning, line-buffered TCP connection.
class LineSocket {
 public:
  explicit LineSocket(int fd) : fd_(fd) {}
  ~LineSocket();
  LineSocket(LineSocket&& other) noexcept;
  LineSocket& operator=(LineSocket&& other) noexcept;
  LineSocket(const LineSocket&) = delete;
  LineSocket& operator=(const LineSocket&) = delete;

  void SendLine(const std::string& line);
  void Send(const nlohmann::json& message) { SendLine(message.dump()); }
  // Throws WireError on timeout, EOF or socket errors.
  std::string ReadLine(std::chrono::milliseconds timeout);

 private:
  int fd_ = -1;
  std::string buffer_;
};

// Parses and validates one protocol line (version and type present).
nlohmann::json ParseMessage(const std::string& line);

nlohmann::json HelloMessage(std::uint32_t node_id);
nlohmann::json DataMessage(std::uint32_t node_id, int classes, const LabeledData& data,
                           bool noised);
LabeledData DataFromMessage(const nlohmann::json& message);

class Aggregator {
 public:
  // Binds and listens immediately; port 0 picks a free port. Throws WireError
  // when the address is unavailable (e.g. port in use).
  Aggregator(const std::string& host, std::uint16_t port, int expected_nodes, SharingMode mode,
             PipelineConfig config,
             std::chrono::milliseconds timeout = std::chrono::seconds(30));
  ~Aggregator();
  Aggregator(const Aggregator&) = delete;
  Aggregator& operator=(const Aggregator&) = delete;

  std::uint16_t port() const { return port_; }

  // Serves one run. Randomised work happens only after every node's payload
  // has arrived and been sorted by node_id, so the report equals the
  // in-process pipeline's regardless of arrival order.
  PipelineReport Run();

  // Every line received from nodes, in arrival order.
  std::vector<std::string> message_log() const;

 private:
  int listen_fd_ = -1;
  std::uint16_t port_ = 0;
  int expected_nodes_;
  SharingMode mode_;
  PipelineConfig config_;
  std::chrono::milliseconds timeout_;
  mutable std::mutex log_mutex_;
  std::vector<std::string> log_;
};

struct NodeOptions {
  int connect_attempts = 50;
  std::chrono::milliseconds retry_delay{100};
  std::chrono::milliseconds timeout{30000};
};

struct NodeRunResult {
  double accuracy = 0;
  std::vector<std::string> sent;  // every line this node sent
};

// Runs one vehicle node against an aggregator. Retries the connection, then
// throws WireError; also throws when the aggregator replies with an error.
NodeRunResult RunNode(const std::string& host, std::uint16_t port, const NodeDataset& node,
                      SharingMode mode, const PipelineConfig& config,
                      const NodeOptions& options = {});

}  // namespace dpiov

#endif  // DPIOV_EMULATION_WIRE_H_
