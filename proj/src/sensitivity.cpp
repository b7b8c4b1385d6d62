#include <cstdint>
#include <utility>
#include <vector>

#include "floq/decoder.hpp"

namespace floq {

// One backward sweep maintaining, per qubit, the set of detector/logical bits
// flipped by an X (sx) or Z (sz) error inserted at the current position. A
// measurement of basis B merges the outcome's membership set into sx when B
// has a Z component (X errors anticommute) and into sz when B has an X
// component; unitaries transform the masks by conjugation; a preparation
// clears them (errors before it are discarded with the state). Erasure
// checks, resets and Pauli gates are transparent to Pauli frames.
std::vector<MechanismEffect> mechanism_effects(const ErasureCircuit& c,
                                               const std::vector<Mechanism>& mechanisms,
                                               const std::vector<Detector>& detectors,
                                               const std::vector<LogicalObservable>& logicals) {
  const uint32_t n_det = uint32_t(detectors.size());
  std::vector<IdSet> member_of(c.n_outcomes());
  for (uint32_t d = 0; d < n_det; ++d)
    for (uint32_t o : detectors[d].outcomes) member_of[o].push_back(d);
  for (uint32_t l = 0; l < uint32_t(logicals.size()); ++l)
    for (uint32_t o : logicals[l].outcomes) member_of[o].push_back(n_det + l);

  std::vector<MechanismEffect> out(mechanisms.size());
  struct Request {
    uint32_t qubit;
    uint8_t z_part;  // 0: take sx[qubit], 1: take sz[qubit]
    uint32_t mech;
    uint32_t piece;
  };
  std::vector<std::vector<Request>> requests(c.ops().size() + 1);
  for (uint32_t mi = 0; mi < uint32_t(mechanisms.size()); ++mi) {
    MechanismEffect& eff = out[mi];
    for (const MechanismComponent& comp : mechanisms[mi].components) {
      if (comp.kind == MechanismComponent::Kind::OutcomeFlip) {
        eff.pieces.push_back(member_of[comp.outcome]);
        continue;
      }
      if (comp.pauli == Pauli::I) continue;
      if (pauli_has_x(comp.pauli)) {
        requests[comp.before_op].push_back({comp.qubit, 0, mi, uint32_t(eff.pieces.size())});
        eff.pieces.emplace_back();
      }
      if (pauli_has_z(comp.pauli)) {
        requests[comp.before_op].push_back({comp.qubit, 1, mi, uint32_t(eff.pieces.size())});
        eff.pieces.emplace_back();
      }
    }
  }
  // Requests at ops().size() sit after every operation: nothing measures the
  // error, so those pieces stay empty.

  std::vector<IdSet> sx(c.n_qubits()), sz(c.n_qubits());
  auto measured = [&](uint32_t q, Pauli basis, int32_t outcome) {
    if (outcome < 0) return;
    const IdSet& mem = member_of[outcome];
    if (mem.empty()) return;
    if (pauli_has_z(basis)) xor_into(sx[q], mem);
    if (pauli_has_x(basis)) xor_into(sz[q], mem);
  };
  for (size_t t = c.ops().size(); t-- > 0;) {
    const Operation& op = c.ops()[t];
    switch (op.kind) {
      case OpKind::StatePrep:
        sx[op.targets[0]].clear();
        sz[op.targets[0]].clear();
        break;
      case OpKind::Readout:
        measured(op.targets[0], op.basis, op.outcome);
        break;
      case OpKind::ProjectiveMeasurePP:
        measured(op.targets[0], op.basis, op.outcome);
        measured(op.targets[1], op.basis, op.outcome);
        break;
      case OpKind::Clifford1Q: {
        const uint32_t q = op.targets[0];
        // Backward step: an error E before the gate U equals U E U^dag after
        // it. H exchanges X and Z; S and S^dag send X to +-Y = +-XZ; Pauli
        // gates only change signs, which frames ignore.
        if (op.gate == Gate1Q::H) std::swap(sx[q], sz[q]);
        if (op.gate == Gate1Q::S || op.gate == Gate1Q::SDag) xor_into(sx[q], sz[q]);
        break;
      }
      case OpKind::ControlledPauli: {
        // Conjugation by controlled-P: X_c -> X_c P_t, and Q_t -> Z_c Q_t for
        // every Q anticommuting with P (Q = X when P has a Z part, Q = Z when
        // P has an X part). Z_c and P_t itself pass through.
        const uint32_t ctrl = op.targets[0], tgt = op.targets[1];
        if (pauli_has_x(op.basis)) xor_into(sx[ctrl], sx[tgt]);
        if (pauli_has_z(op.basis)) xor_into(sx[ctrl], sz[tgt]);
        if (pauli_has_z(op.basis)) xor_into(sx[tgt], sz[ctrl]);
        if (pauli_has_x(op.basis)) xor_into(sz[tgt], sz[ctrl]);
        break;
      }
      case OpKind::ErasureCheck:
      case OpKind::ErasureCheckWithReset:
      case OpKind::Reset:
        break;
    }
    for (const Request& r : requests[t]) out[r.mech].pieces[r.piece] = r.z_part ? sz[r.qubit] : sx[r.qubit];
  }
  return out;
}

}  // namespace floq
