#include "floq/segments.hpp"

#include <map>
#include <stdexcept>
#include <string>

namespace floq {

namespace {

bool op_is_removed(OpKind k) {
  return k == OpKind::ErasureCheck || k == OpKind::ErasureCheckWithReset || k == OpKind::Reset;
}

// Index of the first operation at or after wire position `from` that
// survives conversion to a stabilizer circuit; ops().size() when none does.
uint32_t next_kept_op(const ErasureCircuit& c, uint32_t qubit, size_t from) {
  const auto& wire = c.wires()[qubit];
  for (size_t i = from; i < wire.size(); ++i)
    if (!op_is_removed(c.ops()[wire[i]].kind)) return wire[i];
  return uint32_t(c.ops().size());
}

}  // namespace

std::vector<Segment> extract_segments(const ErasureCircuit& c) {
  const auto& ops = c.ops();
  // Locations keyed by (qubit, earlier flanking op).
  std::map<std::pair<uint32_t, uint32_t>, uint32_t> loc_at;
  for (uint32_t l = 0; l < c.locations().size(); ++l) {
    const auto& loc = c.locations()[l];
    loc_at[{loc.qubit, loc.after_op}] = l;
  }

  std::vector<Segment> out;
  for (uint32_t q = 0; q < c.n_qubits(); ++q) {
    const auto& wire = c.wires()[q];
    if (wire.empty()) continue;
    if (!op_is_reset_like(ops[wire[0]].kind))
      throw std::invalid_argument("wire of qubit " + std::to_string(q) +
                                  " does not start with a reset-like operation");

    Segment seg;
    seg.qubit = q;
    seg.open_op = int32_t(wire[0]);

    auto flush = [&](int32_t close_op, size_t wire_pos_after_close) {
      seg.close_op = close_op;
      std::vector<FLocation> last;
      if (close_op < 0) {
        // The wire simply ends; an erased qubit stays erased, which acts as
        // a depolarization in effect until the end of the circuit.
        last.push_back({FLocation::Kind::Qubit, q, uint32_t(ops.size()), 0});
      } else {
        switch (ops[size_t(close_op)].kind) {
          case OpKind::Readout:
            // An erased qubit yields a uniformly random readout outcome;
            // equivalently the qubit is depolarized just before the readout.
            last.push_back({FLocation::Kind::Qubit, q, uint32_t(close_op), 0});
            break;
          case OpKind::ErasureCheckWithReset:
          case OpKind::Reset:
            // Reset turns an erased qubit into a maximally mixed one.
            last.push_back(
                {FLocation::Kind::Qubit, q, next_kept_op(c, q, wire_pos_after_close), 0});
            break;
          case OpKind::StatePrep:
            // Preparation discards the erased state entirely: erasures in
            // the final gap have no effect, so the last slot set is empty.
            break;
          default:
            break;
        }
      }
      seg.f.push_back(std::move(last));
      if (seg.r() > 0 || !seg.locs.empty() || !seg.checks.empty()) out.push_back(seg);
    };

    for (size_t i = 1; i < wire.size(); ++i) {
      const uint32_t op_index = wire[i];
      const Operation& op = ops[op_index];
      // The gap between wire[i-1] and wire[i] belongs to the open segment.
      auto it = loc_at.find({q, wire[i - 1]});
      if (it != loc_at.end()) seg.locs.push_back({it->second, seg.r() + 1});

      if (op_is_entangling(op.kind)) {
        seg.entangling.push_back(op_index);
        const uint32_t partner = op.targets[0] == q ? op.targets[1] : op.targets[0];
        std::vector<FLocation> fi;
        const auto& pwire = c.wires()[partner];
        size_t ppos = 0;
        while (pwire[ppos] != op_index) ++ppos;
        fi.push_back({FLocation::Kind::Qubit, partner, next_kept_op(c, partner, ppos + 1), 0});
        if (op.kind == OpKind::ProjectiveMeasurePP)
          fi.push_back({FLocation::Kind::Outcome, 0, 0, uint32_t(op.outcome)});
        seg.f.push_back(std::move(fi));
      } else if (op.kind == OpKind::ErasureCheck) {
        seg.checks.push_back({uint32_t(op.check_outcome), op.check_flip,
                              uint32_t(seg.locs.size())});
      }

      if (op_is_reset_like(op.kind)) {
        // A closing readout or check-with-reset also observes the segment.
        if (op.kind == OpKind::Readout || op.kind == OpKind::ErasureCheckWithReset)
          seg.checks.push_back({uint32_t(op.check_outcome), op.check_flip,
                                uint32_t(seg.locs.size())});
        flush(int32_t(op_index), i + 1);
        seg = Segment{};
        seg.qubit = q;
        seg.open_op = int32_t(op_index);
      }
    }
    flush(-1, wire.size());
  }
  return out;
}

}  // namespace floq
