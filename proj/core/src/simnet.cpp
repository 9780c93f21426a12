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

#include "gsmp/simnet.hpp"

#include <bit>
#include <climits>
#include <cmath>
#include <cstring>
#include <ostream>
#include <string>

namespace gsmp {
namespace {

constexpr std::uint8_t kTagQuantized = 0x01;
constexpr std::uint8_t kTagFull = 0x02;

template <typename T>
void put(std::vector<std::uint8_t>& out, T v) {
  static_assert(std::endian::native == std::endian::little);
  std::uint8_t b[sizeof(T)];
  std::memcpy(b, &v, sizeof(T));
  out.insert(out.end(), b, b + sizeof(T));
}

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  template <typename T>
  T get() {
    if (bytes_.size() - pos_ < sizeof(T)) throw DecodeError("truncated payload");
    T v;
    std::memcpy(&v, bytes_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return v;
  }
  std::size_t remaining() const { return bytes_.size() - pos_; }
  std::span<const std::uint8_t> rest() const { return bytes_.subspan(pos_); }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

const char* to_string(MessageKind k) {
  return k == MessageKind::kThetaDown ? "theta_down" : "zeta_up";
}

std::vector<std::uint8_t> encode(const Payload& payload) {
  std::vector<std::uint8_t> out;
  if (const auto* w = std::get_if<Weights>(&payload)) {
    out.reserve(5 + 8 * static_cast<std::size_t>(w->size()));
    out.push_back(kTagFull);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(w->size()));
    for (Eigen::Index k = 0; k < w->size(); ++k) put<double>(out, (*w)(k));
    return out;
  }
  const auto& qv = std::get<QuantizedVector>(payload);
  const int width = index_width(qv);
  const auto range = static_cast<std::uint64_t>(qv.max_index) - static_cast<std::uint64_t>(qv.min_index);
  out.push_back(kTagQuantized);
  put<double>(out, qv.delta);
  put<std::int64_t>(out, qv.min_index);
  put<std::int64_t>(out, static_cast<std::int64_t>(range));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(qv.size()));
  const std::size_t body_bits = static_cast<std::size_t>(bits_required(qv));
  const std::size_t base = out.size();
  out.resize(base + (body_bits + 7) / 8, 0);
  std::size_t bit = 0;
  for (std::int64_t m : qv.indices) {
    const std::uint64_t off = static_cast<std::uint64_t>(m) - static_cast<std::uint64_t>(qv.min_index);
    if (off > range) throw InvalidArgument("index outside [min_index, max_index]");
    for (int b = 0; b < width; ++b, ++bit)
      if ((off >> b) & 1u) out[base + bit / 8] |= static_cast<std::uint8_t>(1u << (bit % 8));
  }
  return out;
}

Payload decode(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  const auto tag = r.get<std::uint8_t>();
  if (tag == kTagFull) {
    const auto d = r.get<std::uint32_t>();
    if (r.remaining() != 8ull * d) throw DecodeError("full payload length mismatch");
    Weights w(static_cast<Eigen::Index>(d));
    for (std::uint32_t k = 0; k < d; ++k) w(k) = r.get<double>();
    return w;
  }
  if (tag != kTagQuantized) throw DecodeError("unknown payload tag " + std::to_string(tag));
  const auto delta = r.get<double>();
  const auto min_index = r.get<std::int64_t>();
  const auto range_raw = r.get<std::int64_t>();
  const auto d = r.get<std::uint32_t>();
  if (!(delta > 0.0) || !std::isfinite(delta)) throw DecodeError("lattice step must be finite and > 0");
  if (range_raw < 0) throw DecodeError("negative index range");
  const auto range = static_cast<std::uint64_t>(range_raw);
  if (min_index > 0 && range > static_cast<std::uint64_t>(INT64_MAX - min_index))
    throw DecodeError("index range overflows");
  const int width = std::max(1, static_cast<int>(std::bit_width(range)));
  const std::size_t body_bits = static_cast<std::size_t>(d) * static_cast<std::size_t>(width);
  if (r.remaining() != (body_bits + 7) / 8) throw DecodeError("quantized payload length mismatch");
  const auto body = r.rest();
  std::vector<std::int64_t> idx(d);
  std::size_t bit = 0;
  for (std::uint32_t k = 0; k < d; ++k) {
    std::uint64_t off = 0;
    for (int b = 0; b < width; ++b, ++bit)
      if ((body[bit / 8] >> (bit % 8)) & 1u) off |= std::uint64_t{1} << b;
    if (off > range) throw DecodeError("packed index exceeds header range");
    idx[k] = static_cast<std::int64_t>(static_cast<std::uint64_t>(min_index) + off);
  }
  for (; bit < 8 * body.size(); ++bit)
    if ((body[bit / 8] >> (bit % 8)) & 1u) throw DecodeError("nonzero padding bits");
  QuantizedVector qv;
  qv.indices = std::move(idx);
  qv.delta = delta;
  qv.min_index = min_index;
  qv.max_index = static_cast<std::int64_t>(static_cast<std::uint64_t>(min_index) + range);
  if (d > 0) {
    const QuantizedVector tight = QuantizedVector::from_indices(qv.indices, delta);
    if (tight.min_index != qv.min_index || tight.max_index != qv.max_index)
      throw DecodeError("header range is not attained by the indices");
  }
  return qv;
}

std::uint64_t payload_bits(const Payload& payload) {
  if (const auto* w = std::get_if<Weights>(&payload)) return 64ull * static_cast<std::uint64_t>(w->size());
  return bits_required(std::get<QuantizedVector>(payload));
}

void LinkStats::add(int round, std::uint64_t payload, std::uint64_t total) {
  ++messages;
  payload_bits += payload;
  total_bits += total;
  rounds.push_back({round, payload, total});
}

Bus::Bus(int num_agents) : num_agents_(num_agents) {
  if (num_agents < 1) throw InvalidArgument("bus needs at least one agent");
}

void Bus::check_node(int id) const {
  if (id != kOrchestrator && (id < 0 || id >= num_agents_))
    throw ProtocolError("unknown node id " + std::to_string(id));
}

Receipt Bus::send(Message msg) {
  check_node(msg.sender);
  check_node(msg.receiver);
  if (msg.kind == MessageKind::kThetaDown &&
      (msg.sender != kOrchestrator || msg.receiver == kOrchestrator))
    throw ProtocolError("theta_down must go from the orchestrator to an agent");
  if (msg.kind == MessageKind::kZetaUp &&
      (msg.sender == kOrchestrator || msg.receiver != kOrchestrator))
    throw ProtocolError("zeta_up must go from an agent to the orchestrator");
  if (msg.round < 0) throw ProtocolError("negative round");

  Queued q;
  q.bytes = encode(msg.payload);
  const std::uint64_t pbits = payload_bits(msg.payload);
  const std::uint64_t tbits = 8ull * q.bytes.size();
  msg.payload = Payload{};
  q.header = std::move(msg);

  std::lock_guard<std::mutex> lock(mu_);
  const Link link{q.header.sender, q.header.receiver};
  if (auto it = last_round_.find(link); it != last_round_.end() && q.header.round <= it->second)
    throw ProtocolError("round " + std::to_string(q.header.round) + " on link " +
                        std::to_string(link.first) + "->" + std::to_string(link.second) +
                        " does not follow round " + std::to_string(it->second));
  last_round_[link] = q.header.round;
  q.header.sequence = next_sequence_++;
  sent_[link].add(q.header.round, pbits, tbits);
  const Receipt receipt{q.header.sequence, pbits, tbits};
  queues_[q.header.receiver].push_back(std::move(q));
  return receipt;
}

std::vector<Message> Bus::poll(int receiver, int round) {
  check_node(receiver);
  std::lock_guard<std::mutex> lock(mu_);
  std::vector<Message> out;
  auto& queue = queues_[receiver];
  std::vector<Queued> keep;
  for (auto& q : queue) {
    if (q.header.round < round)
      throw ProtocolError("undelivered message from round " + std::to_string(q.header.round) +
                          " while polling round " + std::to_string(round));
    if (q.header.round != round) {
      keep.push_back(std::move(q));
      continue;
    }
    Message m = std::move(q.header);
    m.payload = decode(q.bytes);
    received_[{m.sender, m.receiver}].add(m.round, payload_bits(m.payload), 8ull * q.bytes.size());
    out.push_back(std::move(m));
  }
  queue = std::move(keep);
  return out;
}

LinkStats Bus::sent_stats(int sender, int receiver) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = sent_.find({sender, receiver});
  return it == sent_.end() ? LinkStats{} : it->second;
}

LinkStats Bus::received_stats(int sender, int receiver) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = received_.find({sender, receiver});
  return it == received_.end() ? LinkStats{} : it->second;
}

namespace {

LinkStats sum_links(const std::map<std::pair<int, int>, LinkStats>& links, int node, bool by_sender) {
  LinkStats total;
  for (const auto& [link, st] : links) {
    if ((by_sender ? link.first : link.second) != node) continue;
    total.messages += st.messages;
    total.payload_bits += st.payload_bits;
    total.total_bits += st.total_bits;
    total.rounds.insert(total.rounds.end(), st.rounds.begin(), st.rounds.end());
  }
  return total;
}

}  // namespace

LinkStats Bus::node_sent(int node) const {
  std::lock_guard<std::mutex> lock(mu_);
  return sum_links(sent_, node, true);
}

LinkStats Bus::node_received(int node) const {
  std::lock_guard<std::mutex> lock(mu_);
  return sum_links(received_, node, false);
}

void Bus::write_csv(std::ostream& os) const {
  std::lock_guard<std::mutex> lock(mu_);
  os << "sender,receiver,round,payload_bits,total_bits\n";
  for (const auto& [link, st] : sent_)
    for (const auto& r : st.rounds)
      os << link.first << "," << link.second << "," << r.round << "," << r.payload_bits << ","
         << r.total_bits << "\n";
}

}  // namespace gsmp
