#pragma once

#include <cstdint>
#include <vector>

#include "floq/circuit.hpp"

namespace floq {

// A spacetime slot where a converted error mechanism may place one Pauli (or
// one outcome flip). Qubit slots are addressed as "on `qubit`, immediately
// before the kept operation with global index `before_op`"; before_op equal
// to ops().size() means after the whole circuit (just before any final
// noiseless logical readout).
struct FLocation {
  enum class Kind : uint8_t { Qubit, Outcome };
  Kind kind = Kind::Qubit;
  uint32_t qubit = 0;
  uint32_t before_op = 0;
  uint32_t outcome = 0;

  friend bool operator==(const FLocation& a, const FLocation& b) {
    return a.kind == b.kind && a.qubit == b.qubit && a.before_op == b.before_op &&
           a.outcome == b.outcome;
  }
};

// The worldline of one qubit between consecutive reset-like operations
// (state preparation, readout, check-with-reset, plain reset), together with
// the data needed to convert its erasures into independent Pauli mechanisms:
// the entangling operations G_1..G_r, the associated slot sets F_1..F_{r+1},
// the erasure locations per gap, and the erasure-check outcomes observing it.
struct Segment {
  uint32_t qubit = 0;
  int32_t open_op = -1;   // opening reset-like op (global index)
  int32_t close_op = -1;  // closing reset-like op; -1 when the wire just ends
  std::vector<uint32_t> entangling;       // op indices of G_1..G_r
  std::vector<std::vector<FLocation>> f;  // F_1..F_{r+1} (f[i-1] holds F_i)

  struct LocRef {
    uint32_t loc_index;  // index into circuit.locations()
    uint32_t gap;        // 1..r+1; gap i sits between G_{i-1} and G_i
  };
  std::vector<LocRef> locs;  // in wire order

  struct CheckRef {
    uint32_t outcome;      // outcome-bit index of the erasure check
    double flip;           // classical flip rate of that bit
    uint32_t locs_before;  // how many of `locs` precede the check on the wire
  };
  std::vector<CheckRef> checks;  // in wire order

  uint32_t r() const { return uint32_t(entangling.size()); }
};

// Partitions every wire into segments. Throws std::invalid_argument when a
// wire's first operation is not reset-like. Segments with no entangling ops,
// no erasure locations and no checks are omitted.
std::vector<Segment> extract_segments(const ErasureCircuit& c);

}  // namespace floq
