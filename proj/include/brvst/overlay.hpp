#pragma once

// Addressing shared by the grid and zone manager state machines. Handlers are
// run-to-completion: they consume one message and return the messages to send.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "brvst/wire.hpp"

namespace brvst {

struct Endpoint {
  enum class Kind : std::uint8_t { kNode, kGrid, kZone };
  Kind kind = Kind::kNode;
  std::uint32_t id = 0;

  static Endpoint node(NodeId id) { return {Kind::kNode, id}; }
  static Endpoint grid(GridId id) { return {Kind::kGrid, id}; }
  static Endpoint zone(ZoneId id) { return {Kind::kZone, id}; }

  friend bool operator==(const Endpoint&, const Endpoint&) = default;
  friend auto operator<=>(const Endpoint&, const Endpoint&) = default;
};

inline std::string to_string(const Endpoint& e) {
  switch (e.kind) {
    case Endpoint::Kind::kNode: return "node:" + std::to_string(e.id);
    case Endpoint::Kind::kGrid: return "grid:" + std::to_string(e.id);
    case Endpoint::Kind::kZone: return "zone:" + std::to_string(e.id);
  }
  return "?";
}

struct Envelope {
  Endpoint to;
  Message msg;
};

struct HandlerResult {
  std::vector<Envelope> out;
  // ARV-level match evaluations performed (root filters, SOF/ZRSV entries,
  // candidate subscriptions); drives the processing-time model.
  std::size_t match_tests = 0;

  void send(Endpoint to, Message m) { out.push_back({to, std::move(m)}); }

  template <typename Body>
  std::vector<const Body*> sent() const {
    std::vector<const Body*> found;
    for (const auto& e : out) {
      if (const auto* b = std::get_if<Body>(&e.msg)) found.push_back(b);
    }
    return found;
  }
};

// 64-bit FNV-1a.
inline std::uint64_t fnv1a(const std::vector<std::uint8_t>& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (auto b : bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace brvst
