#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

namespace floq {

// Sets of 32-bit ids kept as sorted vectors; XOR-merge is symmetric difference.
using IdSet = std::vector<uint32_t>;

inline void xor_into(IdSet& target, const IdSet& other) {
  if (other.empty()) return;
  IdSet merged;
  merged.reserve(target.size() + other.size());
  auto a = target.cbegin();
  auto b = other.cbegin();
  while (a != target.cend() && b != other.cend()) {
    if (*a < *b) merged.push_back(*a++);
    else if (*b < *a) merged.push_back(*b++);
    else { ++a; ++b; }
  }
  merged.insert(merged.end(), a, target.cend());
  merged.insert(merged.end(), b, other.cend());
  target = std::move(merged);
}

inline bool set_contains(const IdSet& set, uint32_t id) {
  return std::binary_search(set.begin(), set.end(), id);
}

}  // namespace floq
