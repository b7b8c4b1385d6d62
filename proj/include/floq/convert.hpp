#pragma once

#include <cstdint>
#include <vector>

#include "floq/circuit.hpp"
#include "floq/segments.hpp"

namespace floq {

// One slot of an error mechanism: either a Pauli applied on a qubit
// immediately before a given kept operation (before_op == ops().size()
// meaning after the whole circuit), or a classical flip of an outcome bit.
struct MechanismComponent {
  enum class Kind : uint8_t { QubitPauli, OutcomeFlip };
  Kind kind = Kind::QubitPauli;
  uint32_t qubit = 0;
  uint32_t before_op = 0;
  Pauli pauli = Pauli::I;
  uint32_t outcome = 0;

  friend bool operator==(const MechanismComponent& a, const MechanismComponent& b) {
    return a.kind == b.kind && a.qubit == b.qubit && a.before_op == b.before_op &&
           a.pauli == b.pauli && a.outcome == b.outcome;
  }
};

// An independent error mechanism: with probability `probability` apply every
// component. Components may be empty (e.g. the virtual-qubit Pauli on an
// outcome bit that does not flip it); such mechanisms have no effect.
struct Mechanism {
  std::vector<MechanismComponent> components;
  double probability = 0.0;
};

// Total rate of the depolarizing channel realized by firing all 4^m - 1
// nontrivial Pauli mechanisms on m slots, each with probability b-derived
// mechanism_probability(b, m): equals b*(4^m - 1)/4^m.
double depolarizing_rate(double b, unsigned m);

// Per-mechanism firing probability making the product of all 4^m - 1
// nontrivial Pauli mechanisms equal a "replace by maximally mixed with
// probability b" channel on m slots: 1/2 - (1/2)(1 - b)^(2^(1-2m)).
double mechanism_probability(double b, unsigned m);

// Inverse of mechanism composition: the b whose 4^m - 1 mechanisms compose
// to a uniform depolarizing channel of total rate `rate` on m slots.
double depolarizing_to_mixing(double rate, unsigned m);

// The 4^m - 1 mechanisms enumerating every nontrivial Pauli over the given
// slots, each with the given probability. Identity-effect digits (Pauli Z on
// an outcome bit) contribute no component.
std::vector<Mechanism> pauli_mechanisms_on(const std::vector<FLocation>& slots,
                                           double probability);

// Probability of observing the given check bits for this segment (the
// normalization of the posterior).
double check_pattern_probability(const ErasureCircuit& c, const Segment& s,
                                 const std::vector<uint8_t>& check_outcomes);

// Converts probabilities of disjoint events (a_1..a_k, sum <= 1) into
// probabilities of independent events (b_1..b_k) such that "B_i fires and no
// B_j with j < i fires" has probability a_i. When the prefix product
// (1-b_1)...(1-b_{i-1}) vanishes, a_i must be 0 and b_i is set to 0.
std::vector<double> disjoint_to_independent(const std::vector<double>& a);

// Posterior probabilities a_i (i = 1..r+1) that the segment's qubit was
// first erased in gap i, given the observed check outcome bits. The full
// outcome vector is indexed by outcome-bit id; only positions named by the
// segment's checks are read. Throws std::domain_error when the observed
// pattern has zero probability.
std::vector<double> posterior_first_erasure(const ErasureCircuit& c, const Segment& s,
                                            const std::vector<uint8_t>& check_outcomes);

// A full mechanism list for a circuit: baseline mechanisms (from the
// standard per-op noise attributes) followed by per-segment erasure blocks.
// The structure is independent of the erasure-check pattern; only the block
// probabilities change under reweighting.
struct MechanismSet {
  std::vector<Mechanism> mechanisms;
  struct Block {
    uint32_t segment;  // index into the segment list
    uint32_t i;        // event index, 1..r+1
    uint32_t m;        // |union of slot sets F_i..F_{r+1}|
    uint32_t begin;    // first mechanism of the block
    uint32_t end;      // one past the last
  };
  std::vector<Block> blocks;
  uint32_t n_baseline = 0;  // mechanisms [0, n_baseline) are pattern-independent
};

MechanismSet build_mechanism_set(const ErasureCircuit& c, const std::vector<Segment>& segments);

// Updates the probabilities of every erasure block for the given check
// pattern; baseline mechanisms are untouched.
void reweight_mechanisms(MechanismSet& set, const ErasureCircuit& c,
                         const std::vector<Segment>& segments,
                         const std::vector<uint8_t>& check_outcomes);

// Per-op flags: true for operations deleted in the converted stabilizer
// circuit (erasure checks, checks-with-reset and resets).
std::vector<uint8_t> removed_ops(const ErasureCircuit& c);

// Full conversion for one check pattern: stabilizer circuit (original ops +
// removal flags) plus the reweighted independent mechanisms.
struct ConvertedCircuit {
  std::vector<uint8_t> removed;
  MechanismSet set;
};
ConvertedCircuit convert(const ErasureCircuit& c, const std::vector<Segment>& segments,
                         const std::vector<uint8_t>& check_outcomes);

}  // namespace floq
