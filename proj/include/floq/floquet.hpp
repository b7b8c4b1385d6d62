#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "floq/circuit.hpp"
#include "floq/graph.hpp"
#include "floq/pauli.hpp"
#include "floq/sorted_set.hpp"

namespace floq {

// Periodic measurement schedule: round r measures P(r) ⊗ P(r) on every edge
// of color(r), with r taken mod the period.
struct MeasurementSchedule {
  struct Round {
    uint8_t color = 0;
    Pauli type = Pauli::Z;
  };
  std::vector<Round> rounds;
  uint32_t period() const { return uint32_t(rounds.size()); }
};

// Period 3: XX on color 0, YY on color 1, ZZ on color 2.
MeasurementSchedule honeycomb_schedule();
// Period 6, CSS checks only: X and Z rounds alternate while the color walks
// 0,1,2 twice, giving (0,X),(1,Z),(2,X),(0,Z),(1,X),(2,Z).
MeasurementSchedule css_schedule();

// The two-body check operator measured on an edge.
PauliString edge_check(uint32_t n_qubits, const ColoredEdge& e, Pauli type);

// Parity of the listed outcome bits that equals `expected` in every
// noise-free run.
struct Detector {
  IdSet outcomes;
  bool expected = false;
};

// Like a detector, but its parity reproduces a logical-operator eigenvalue;
// the decoder's job is to predict its flips.
struct LogicalObservable {
  IdSet outcomes;
  bool expected = false;
};

// How edge checks are realized in hardware.
//  * Ancilla: each check uses a dedicated ancilla prepared in |+>, two
//    controlled-Pauli gates onto the edge's qubits and an X readout, with
//    erasure checks-with-reset after each entangling layer (data qubit after
//    its gate, ancilla between the two gates).
//  * Em (entangling measurement): the two-qubit Pauli product is measured
//    natively, followed by a check-with-reset on every data qubit.
enum class Scheme { Ancilla, Em };

struct CompiledMemory {
  ErasureCircuit circuit;              // instrumented, erasure locations inserted
  std::vector<Detector> detectors;
  LogicalObservable logical;
  Scheme scheme = Scheme::Em;
  uint32_t n_data = 0;                 // graph vertices; ancillas live above
  uint32_t rounds = 0;                 // noisy measurement rounds
  uint32_t period = 0;
  Pauli data_basis = Pauli::Z;         // transversal prep/readout basis
  PauliString tracked;                 // logical representative verified at the end
  uint32_t first_noisy_op = 0;         // ops before this index run noise-free
  uint32_t end_noisy_op = 0;           // ops from this index on run noise-free
};

// Symbolic derivation of deterministic outcome parities. Every measurement
// whose bit is a noise-free-deterministic parity of earlier outcomes yields a
// Detector (its own index included, so the set is GF(2)-independent).
// Each entry of `end_paulis` is measured virtually after the last operation;
// when that virtual bit is deterministic the corresponding slot holds the
// observable over real outcomes, otherwise nullopt.
struct DerivedRelations {
  std::vector<Detector> detectors;
  std::vector<std::optional<LogicalObservable>> logicals;
};
DerivedRelations derive_detectors(const ErasureCircuit& c,
                                  const std::vector<PauliString>& end_paulis = {});

// Builds a full memory experiment on graph `g`: transversal data preparation,
// one noise-free schedule period to enter the steady state, `rounds` noisy
// rounds (rounds >= 2 * period required), and a noise-free transversal data
// readout. The tracked logical is chosen from the schedule's bare logical
// operators as one whose end-of-circuit virtual measurement is deterministic,
// preferring representatives of type `logical_sel`; the preparation basis is
// matched to that choice. Throws std::invalid_argument for bad inputs and
// std::logic_error if no deterministic logical exists.
CompiledMemory compile(const ColoredGraph& g, const MeasurementSchedule& s, Scheme scheme,
                       uint32_t rounds, NoiseParams noise, Pauli logical_sel = Pauli::Z);

}  // namespace floq
