#include "floq/convert.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <stdexcept>

namespace floq {

namespace {

double pow4(unsigned m) { return std::ldexp(1.0, int(2 * m)); }

bool op_is_removed(OpKind k) {
  return k == OpKind::ErasureCheck || k == OpKind::ErasureCheckWithReset || k == OpKind::Reset;
}

// First kept op at or after wire position `from`; ops().size() if none.
uint32_t next_kept_op(const ErasureCircuit& c, uint32_t qubit, size_t from) {
  const auto& wire = c.wires()[qubit];
  for (size_t i = from; i < wire.size(); ++i)
    if (!op_is_removed(c.ops()[wire[i]].kind)) return wire[i];
  return uint32_t(c.ops().size());
}

bool location_less(const FLocation& a, const FLocation& b) {
  auto key = [](const FLocation& l) {
    return std::tuple(uint8_t(l.kind), l.kind == FLocation::Kind::Qubit ? l.qubit : l.outcome,
                      l.before_op);
  };
  return key(a) < key(b);
}

// Sorted union of the slot sets F_i..F_{r+1} of a segment.
std::vector<FLocation> suffix_union(const Segment& s, uint32_t i) {
  std::vector<FLocation> u;
  for (size_t j = i - 1; j < s.f.size(); ++j)
    for (const auto& el : s.f[j])
      if (std::find(u.begin(), u.end(), el) == u.end()) u.push_back(el);
  std::sort(u.begin(), u.end(), location_less);
  return u;
}

}  // namespace

std::vector<Mechanism> pauli_mechanisms_on(const std::vector<FLocation>& slots,
                                           double probability) {
  std::vector<Mechanism> out;
  const unsigned m = unsigned(slots.size());
  if (m == 0) return out;
  const uint64_t total = uint64_t(pow4(m));
  for (uint64_t code = 1; code < total; ++code) {
    Mechanism mech;
    mech.probability = probability;
    uint64_t rest = code;
    for (const auto& slot : slots) {
      const auto digit = Pauli(rest & 3);
      rest >>= 2;
      if (digit == Pauli::I) continue;
      MechanismComponent comp;
      if (slot.kind == FLocation::Kind::Qubit) {
        comp.kind = MechanismComponent::Kind::QubitPauli;
        comp.qubit = slot.qubit;
        comp.before_op = slot.before_op;
        comp.pauli = digit;
        mech.components.push_back(comp);
      } else if (pauli_has_x(digit)) {
        // On the virtual outcome-bit qubit only X-like Paulis flip the bit.
        comp.kind = MechanismComponent::Kind::OutcomeFlip;
        comp.outcome = slot.outcome;
        mech.components.push_back(comp);
      }
    }
    out.push_back(std::move(mech));
  }
  return out;
}

double depolarizing_rate(double b, unsigned m) { return b * (pow4(m) - 1.0) / pow4(m); }

double mechanism_probability(double b, unsigned m) {
  if (b < 0.0 || b > 1.0) throw std::invalid_argument("mixing probability outside [0, 1]");
  return 0.5 - 0.5 * std::pow(1.0 - b, std::ldexp(1.0, 1 - int(2 * m)));
}

double depolarizing_to_mixing(double rate, unsigned m) {
  const double b = rate * pow4(m) / (pow4(m) - 1.0);
  if (rate < 0.0 || b > 1.0)
    throw std::invalid_argument("depolarizing rate not decomposable into mechanisms");
  return b;
}

std::vector<double> disjoint_to_independent(const std::vector<double>& a) {
  double total = 0.0;
  for (double ai : a) {
    if (ai < -1e-15 || ai > 1.0 + 1e-12) throw std::invalid_argument("event probability outside [0, 1]");
    total += ai;
  }
  if (total > 1.0 + 1e-9) throw std::invalid_argument("disjoint probabilities sum above 1");
  std::vector<double> b(a.size(), 0.0);
  double prefix = 1.0;  // (1-b_1)...(1-b_{i-1})
  for (size_t i = 0; i < a.size(); ++i) {
    if (prefix <= 1e-300) {
      b[i] = 0.0;
      continue;
    }
    b[i] = std::clamp(a[i] / prefix, 0.0, 1.0);
    prefix *= 1.0 - b[i];
  }
  return b;
}

namespace {

// Weights of the r+2 first-erasure hypotheses (location 0..L-1 in wire
// order, or never erased) multiplied by the likelihood of the check bits.
std::vector<double> first_erasure_weights(const ErasureCircuit& c, const Segment& s,
                                          const std::vector<uint8_t>& check_outcomes) {
  const size_t n_locs = s.locs.size();
  std::vector<double> weight(n_locs + 1, 0.0);
  double survive = 1.0;
  for (size_t l = 0; l < n_locs; ++l) {
    const double e = c.locations()[s.locs[l].loc_index].rate;
    weight[l] = survive * e;
    survive *= 1.0 - e;
  }
  weight[n_locs] = survive;

  // A check placed after `locs_before` locations reads 1 (before any
  // classical flip) iff the first erasure happened strictly before it.
  for (const auto& ck : s.checks) {
    if (ck.outcome >= check_outcomes.size()) throw std::out_of_range("check outcome id out of range");
    const bool obs = check_outcomes[ck.outcome] != 0;
    for (size_t l = 0; l <= n_locs; ++l) {
      const bool value = l < n_locs && l < ck.locs_before;
      weight[l] *= (obs != value) ? ck.flip : 1.0 - ck.flip;
    }
  }
  return weight;
}

}  // namespace

double check_pattern_probability(const ErasureCircuit& c, const Segment& s,
                                 const std::vector<uint8_t>& check_outcomes) {
  double z = 0.0;
  for (double w : first_erasure_weights(c, s, check_outcomes)) z += w;
  return z;
}

std::vector<double> posterior_first_erasure(const ErasureCircuit& c, const Segment& s,
                                            const std::vector<uint8_t>& check_outcomes) {
  const auto weight = first_erasure_weights(c, s, check_outcomes);
  double z = 0.0;
  for (double w : weight) z += w;
  if (z <= 0.0) throw std::domain_error("erasure-check pattern has zero probability");

  std::vector<double> a(s.r() + 1, 0.0);
  for (size_t l = 0; l + 1 < weight.size(); ++l) a[s.locs[l].gap - 1] += weight[l] / z;
  return a;
}

std::vector<uint8_t> removed_ops(const ErasureCircuit& c) {
  std::vector<uint8_t> removed(c.ops().size(), 0);
  for (size_t i = 0; i < c.ops().size(); ++i) removed[i] = op_is_removed(c.ops()[i].kind);
  return removed;
}

MechanismSet build_mechanism_set(const ErasureCircuit& c, const std::vector<Segment>& segments) {
  MechanismSet set;
  const auto& ops = c.ops();

  // Baseline mechanisms from the per-op noise attributes. Depolarizing
  // channels get the exact same-slot mechanism decomposition as erasures.
  for (uint32_t t = 0; t < ops.size(); ++t) {
    const Operation& op = ops[t];
    if (op.depol > 0.0) {
      std::vector<FLocation> slots;
      for (int k = 0; k < op.n_targets(); ++k) {
        const uint32_t q = op.targets[size_t(k)];
        const auto& wire = c.wires()[q];
        size_t pos = 0;
        while (wire[pos] != t) ++pos;
        slots.push_back({FLocation::Kind::Qubit, q, next_kept_op(c, q, pos + 1), 0});
      }
      std::sort(slots.begin(), slots.end(), location_less);
      const double b = depolarizing_to_mixing(op.depol, unsigned(slots.size()));
      const double p = mechanism_probability(b, unsigned(slots.size()));
      auto mechs = pauli_mechanisms_on(slots, p);
      std::move(mechs.begin(), mechs.end(), std::back_inserter(set.mechanisms));
    }
    if (op.outcome_flip > 0.0 && op.has_outcome()) {
      Mechanism mech;
      mech.components.push_back(
          {MechanismComponent::Kind::OutcomeFlip, 0, 0, Pauli::I, uint32_t(op.outcome)});
      mech.probability = op.outcome_flip;
      set.mechanisms.push_back(std::move(mech));
    }
  }
  set.n_baseline = uint32_t(set.mechanisms.size());

  // One block of 4^m - 1 mechanisms per segment and per event index i.
  for (uint32_t si = 0; si < segments.size(); ++si) {
    const Segment& s = segments[si];
    for (uint32_t i = 1; i <= s.r() + 1; ++i) {
      const auto slots = suffix_union(s, i);
      if (slots.empty()) continue;
      MechanismSet::Block block;
      block.segment = si;
      block.i = i;
      block.m = uint32_t(slots.size());
      block.begin = uint32_t(set.mechanisms.size());
      auto mechs = pauli_mechanisms_on(slots, 0.0);
      std::move(mechs.begin(), mechs.end(), std::back_inserter(set.mechanisms));
      block.end = uint32_t(set.mechanisms.size());
      set.blocks.push_back(block);
    }
  }
  return set;
}

void reweight_mechanisms(MechanismSet& set, const ErasureCircuit& c,
                         const std::vector<Segment>& segments,
                         const std::vector<uint8_t>& check_outcomes) {
  uint32_t current_segment = UINT32_MAX;
  std::vector<double> b;
  for (const auto& block : set.blocks) {
    if (block.segment != current_segment) {
      current_segment = block.segment;
      b = disjoint_to_independent(
          posterior_first_erasure(c, segments[current_segment], check_outcomes));
    }
    const double p = mechanism_probability(b[block.i - 1], block.m);
    for (uint32_t j = block.begin; j < block.end; ++j) set.mechanisms[j].probability = p;
  }
}

ConvertedCircuit convert(const ErasureCircuit& c, const std::vector<Segment>& segments,
                         const std::vector<uint8_t>& check_outcomes) {
  ConvertedCircuit out;
  out.removed = removed_ops(c);
  out.set = build_mechanism_set(c, segments);
  reweight_mechanisms(out.set, c, segments, check_outcomes);
  return out;
}

}  // namespace floq
