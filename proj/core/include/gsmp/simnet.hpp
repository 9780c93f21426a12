// Copyright 2026 The gsmp Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// In-process star network between one orchestrator and N agents.
//
// Wire layout, little-endian throughout. Byte 0 is the payload tag.
//   tag 0x01, quantized:  f64 delta | i64 min_index | i64 range | u32 d |
//                         d indices of (index - min_index), each
//                         max(1, ceil(log2(range + 1))) bits, packed
//                         LSB-first and zero-padded to a byte
//   tag 0x02, full:       u32 d | d f64 values
// Payload bits count the packed indices (quantized) or 64 d (full); the
// remaining bytes are header.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <mutex>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "gsmp/quantizer.hpp"

namespace gsmp {

inline constexpr int kOrchestrator = -1;

enum class MessageKind { kThetaDown, kZetaUp };

const char* to_string(MessageKind k);

using Payload = std::variant<Weights, QuantizedVector>;

struct Message {
  MessageKind kind = MessageKind::kThetaDown;
  int sender = kOrchestrator;
  int receiver = 0;
  int round = 0;
  Payload payload;
  /// Assigned by the bus on send; strictly increasing over all messages.
  std::uint64_t sequence = 0;
};

std::vector<std::uint8_t> encode(const Payload& payload);
/// Throws DecodeError on a malformed or truncated buffer.
Payload decode(std::span<const std::uint8_t> bytes);

std::uint64_t payload_bits(const Payload& payload);

struct Receipt {
  std::uint64_t sequence = 0;
  std::uint64_t payload_bits = 0;
  std::uint64_t total_bits = 0;
};

struct RoundBits {
  int round = 0;
  std::uint64_t payload_bits = 0;
  std::uint64_t total_bits = 0;
};

/// Cumulative counters of one directed link; the totals equal the sums
/// over `rounds`.
struct LinkStats {
  std::uint64_t messages = 0;
  std::uint64_t payload_bits = 0;
  std::uint64_t total_bits = 0;
  std::vector<RoundBits> rounds;

  void add(int round, std::uint64_t payload, std::uint64_t total);
};

/// Exactly-once, in-order delivery. Each link carries at most one message
/// per round and rounds increase strictly; theta_down only flows from the
/// orchestrator and zeta_up only towards it. Violations throw ProtocolError.
class Bus {
 public:
  explicit Bus(int num_agents);

  Receipt send(Message msg);
  /// Delivers every queued message for `receiver` tagged `round`, in send
  /// order. Throws if an older round is still queued for that receiver.
  std::vector<Message> poll(int receiver, int round);

  int num_agents() const { return num_agents_; }
  LinkStats sent_stats(int sender, int receiver) const;
  LinkStats received_stats(int sender, int receiver) const;
  /// Sums over every link leaving (sent) or entering (received) the node.
  LinkStats node_sent(int node) const;
  LinkStats node_received(int node) const;

  /// Columns: sender,receiver,round,payload_bits,total_bits.
  void write_csv(std::ostream& os) const;

 private:
  struct Queued {
    Message header;  // payload left empty while queued
    std::vector<std::uint8_t> bytes;
  };
  using Link = std::pair<int, int>;

  void check_node(int id) const;

  int num_agents_;
  mutable std::mutex mu_;
  std::uint64_t next_sequence_ = 1;
  std::map<int, std::vector<Queued>> queues_;
  std::map<Link, int> last_round_;
  std::map<Link, LinkStats> sent_;
  std::map<Link, LinkStats> received_;
};

}  // namespace gsmp
