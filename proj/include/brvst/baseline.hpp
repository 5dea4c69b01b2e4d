#pragma once

// Naive non-aggregating comparison broker: the zone manager stores every
// subscription of its zone as-is and every publication goes to every zone.

#include <map>

#include "brvst/wire.hpp"

namespace brvst {

class NaiveFlatBroker {
 public:
  void add(const SubFilter& s) { subs_[s.sub_id] = encoded_size(s); }
  void remove(SubId id) { subs_.erase(id); }
  std::size_t size() const noexcept { return subs_.size(); }

  std::size_t storage_bytes() const {
    std::size_t total = 16;
    for (const auto& [id, bytes] : subs_) total += 4 + bytes;
    return total;
  }

 private:
  std::map<SubId, std::size_t> subs_;
};

}  // namespace brvst
