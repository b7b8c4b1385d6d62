#include "floq/engine.hpp"

#include <algorithm>
#include <stdexcept>

namespace floq {

namespace {

Gate2Q controlled_gate(Pauli p) {
  switch (p) {
    case Pauli::X: return Gate2Q::CX;
    case Pauli::Y: return Gate2Q::CY;
    case Pauli::Z: return Gate2Q::CZ;
    default: throw std::logic_error("controlled identity");
  }
}

Gate1Q pauli_gate(Pauli p) {
  switch (p) {
    case Pauli::X: return Gate1Q::X;
    case Pauli::Y: return Gate1Q::Y;
    case Pauli::Z: return Gate1Q::Z;
    default: throw std::logic_error("identity is not a gate");
  }
}

}  // namespace

Engine::Engine(const ErasureCircuit& c) : c_(&c), meas_(c.n_qubits()) {
  locs_at_.resize(c.ops().size() + 1);
  for (size_t li = 0; li < c.locations().size(); ++li)
    locs_at_[c.locations()[li].before_op].push_back(static_cast<uint32_t>(li));
}

void Engine::apply_single(Pauli p, uint32_t q) {
  if (p != Pauli::I) tab_.apply_gate1(pauli_gate(p), q);
}

// Uniform nontrivial Pauli on the op's support with total probability
// op.depol. Components on erased qubits are skipped: an erased qubit carries
// no computational state for a Pauli to act on.
void Engine::apply_depol(const Operation& op, Rng& rng) {
  if (op.depol <= 0.0 || !rng.bernoulli(op.depol)) return;
  const int m = op.n_targets();
  uint32_t code = 1 + rng.next_below((1u << (2 * m)) - 1);
  for (int j = 0; j < m; ++j) {
    const Pauli p = static_cast<Pauli>(code & 3);
    code >>= 2;
    if (!erased_[op.targets[j]]) apply_single(p, op.targets[j]);
  }
}

// Measures the op's Pauli (basis on one qubit, or the two-qubit product) on
// the tableau and returns the outcome bit.
bool Engine::measure_bit(const Operation& op, Rng& rng) {
  for (size_t q = 0; q < c_->n_qubits(); ++q) meas_.set(q, Pauli::I);
  meas_.set(op.targets[0], op.basis);
  if (op.n_targets() == 2) meas_.set(op.targets[1], op.basis);
  return tab_.measure(meas_, rng).value;
}

void Engine::run_direct(Rng& rng) {
  const auto& ops = c_->ops();
  tab_ = Tableau(c_->n_qubits());
  outcomes_.assign(c_->n_outcomes(), 0);
  fired_.assign(c_->locations().size(), 0);
  erased_.assign(c_->n_qubits(), 0);

  for (size_t t = 0; t < ops.size(); ++t) {
    for (uint32_t li : locs_at_[t]) {
      const auto& loc = c_->locations()[li];
      if (loc.rate > 0.0 && rng.bernoulli(loc.rate)) {
        fired_[li] = 1;
        if (!erased_[loc.qubit]) {
          erased_[loc.qubit] = 1;
          tab_.trace_out(loc.qubit);
        }
      }
    }

    const Operation& op = ops[t];
    const uint32_t a = op.targets[0];
    const uint32_t b = op.targets[1];
    switch (op.kind) {
      case OpKind::StatePrep:
        erased_[a] = 0;
        tab_.reset_qubit(a, op.basis, op.sign);
        apply_depol(op, rng);
        break;
      case OpKind::Clifford1Q:
        if (!erased_[a]) tab_.apply_gate1(op.gate, a);
        break;
      case OpKind::ControlledPauli:
        if (erased_[a] && erased_[b]) {
          // both blocked, both already mixed
        } else if (erased_[a]) {
          tab_.trace_out(b);
        } else if (erased_[b]) {
          tab_.trace_out(a);
        } else {
          tab_.apply_gate2(controlled_gate(op.basis), a, b);
        }
        apply_depol(op, rng);
        break;
      case OpKind::ErasureCheck:
        outcomes_[op.check_outcome] = erased_[a] ^ rng.bernoulli(op.check_flip);
        break;
      case OpKind::ErasureCheckWithReset:
        outcomes_[op.check_outcome] = erased_[a] ^ rng.bernoulli(op.check_flip);
        erased_[a] = 0;
        apply_depol(op, rng);
        break;
      case OpKind::Reset:
        erased_[a] = 0;
        apply_depol(op, rng);
        break;
      case OpKind::Readout: {
        outcomes_[op.check_outcome] = erased_[a] ^ rng.bernoulli(op.check_flip);
        // An erased qubit yields a fresh coin flip and stays erased; the
        // readout never projects it back into the computational space.
        const bool bit = erased_[a] ? rng.bernoulli(0.5) : measure_bit(op, rng);
        outcomes_[op.outcome] = bit ^ rng.bernoulli(op.outcome_flip);
        break;
      }
      case OpKind::ProjectiveMeasurePP: {
        bool bit;
        if (erased_[a] || erased_[b]) {
          bit = rng.bernoulli(0.5);
          if (!erased_[a]) tab_.trace_out(a);
          if (!erased_[b]) tab_.trace_out(b);
        } else {
          bit = measure_bit(op, rng);
        }
        outcomes_[op.outcome] = bit ^ rng.bernoulli(op.outcome_flip);
        apply_depol(op, rng);
        break;
      }
    }
  }
}

void Engine::run_converted(const ConvertedCircuit& conv, const std::vector<uint8_t>& check_outcomes,
                           Rng& rng) {
  const auto& ops = c_->ops();
  if (conv.removed.size() != ops.size())
    throw std::invalid_argument("converted circuit does not match");
  if (check_outcomes.size() != c_->n_outcomes())
    throw std::invalid_argument("check outcome vector has wrong size");

  tab_ = Tableau(c_->n_qubits());
  outcomes_.assign(c_->n_outcomes(), 0);
  flips_.assign(c_->n_outcomes(), 0);
  pending_.clear();

  for (const auto& mech : conv.set.mechanisms) {
    if (mech.probability <= 0.0 || !rng.bernoulli(mech.probability)) continue;
    for (const auto& comp : mech.components) {
      if (comp.kind == MechanismComponent::Kind::QubitPauli)
        pending_.push_back({comp.before_op, comp.qubit, comp.pauli});
      else
        flips_[comp.outcome] ^= 1;
    }
  }
  std::sort(pending_.begin(), pending_.end(),
            [](const PendingPauli& x, const PendingPauli& y) { return x.before_op < y.before_op; });

  size_t cursor = 0;
  for (size_t t = 0; t <= ops.size(); ++t) {
    while (cursor < pending_.size() && pending_[cursor].before_op == t) {
      apply_single(pending_[cursor].pauli, pending_[cursor].qubit);
      ++cursor;
    }
    if (t == ops.size()) break;

    const Operation& op = ops[t];
    if (conv.removed[t]) {
      if (op.has_check()) outcomes_[op.check_outcome] = check_outcomes[op.check_outcome];
      continue;
    }
    switch (op.kind) {
      case OpKind::StatePrep:
        tab_.reset_qubit(op.targets[0], op.basis, op.sign);
        break;
      case OpKind::Clifford1Q:
        tab_.apply_gate1(op.gate, op.targets[0]);
        break;
      case OpKind::ControlledPauli:
        tab_.apply_gate2(controlled_gate(op.basis), op.targets[0], op.targets[1]);
        break;
      case OpKind::Readout:
        outcomes_[op.check_outcome] = check_outcomes[op.check_outcome];
        outcomes_[op.outcome] = measure_bit(op, rng) ^ flips_[op.outcome];
        break;
      case OpKind::ProjectiveMeasurePP:
        outcomes_[op.outcome] = measure_bit(op, rng) ^ flips_[op.outcome];
        break;
      default:
        throw std::logic_error("checks and resets must be removed by conversion");
    }
  }
}

void apply_ops_symbolic(const ErasureCircuit& c, size_t begin, size_t end, Tableau& tab,
                        std::vector<SymbolicResult>& results) {
  const auto& ops = c.ops();
  PauliString meas(c.n_qubits());
  for (size_t t = begin; t < end; ++t) {
    const Operation& op = ops[t];
    if (op.has_check()) results[op.check_outcome] = {true, false, {}};
    switch (op.kind) {
      case OpKind::StatePrep:
        tab.reset_qubit(op.targets[0], op.basis, op.sign);
        break;
      case OpKind::Clifford1Q:
        tab.apply_gate1(op.gate, op.targets[0]);
        break;
      case OpKind::ControlledPauli:
        tab.apply_gate2(controlled_gate(op.basis), op.targets[0], op.targets[1]);
        break;
      case OpKind::Readout:
      case OpKind::ProjectiveMeasurePP: {
        for (size_t q = 0; q < c.n_qubits(); ++q) meas.set(q, Pauli::I);
        meas.set(op.targets[0], op.basis);
        if (op.n_targets() == 2) meas.set(op.targets[1], op.basis);
        results[op.outcome] = tab.measure_symbolic(meas, static_cast<uint32_t>(op.outcome));
        break;
      }
      case OpKind::ErasureCheck:
      case OpKind::ErasureCheckWithReset:
      case OpKind::Reset:
        break;  // trivial on computational states
    }
  }
}

SymbolicRun run_symbolic(const ErasureCircuit& c) {
  SymbolicRun run{Tableau(c.n_qubits(), /*track_symbols=*/true),
                  std::vector<SymbolicResult>(c.n_outcomes())};
  apply_ops_symbolic(c, 0, c.ops().size(), run.tableau, run.results);
  return run;
}

}  // namespace floq
