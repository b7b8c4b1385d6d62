#pragma once

#include <cstdint>
#include <vector>

#include "floq/circuit.hpp"
#include "floq/convert.hpp"
#include "floq/rng.hpp"
#include "floq/tableau.hpp"

namespace floq {

// Stabilizer sampler for circuits with erasure noise. Two sampling routes
// are provided; by construction they produce identically distributed records
// (outcome bits and post-circuit states), which the tests verify against
// dense-matrix oracles.
//
//  * run_direct executes the instrumented circuit with explicit per-qubit
//    erasure flags. A fired erasure location replaces the qubit's state by
//    the maximally mixed one and raises its flag. While flagged: one-qubit
//    gates do nothing; a two-qubit op replaces its unflagged partner by the
//    maximally mixed state instead of acting; readouts return fresh uniform
//    bits and leave the flag up; erasure checks read 1 up to the check-flip
//    rate. Preparations clear the flag and prepare; plain resets and the
//    reset half of a check-with-reset clear the flag but leave the (mixed)
//    computational state untouched.
//
//  * run_converted executes only the kept operations of a converted circuit.
//    All noise — the standard per-op noise and the erasure aftermath
//    conditioned on the supplied check outcomes — enters through the
//    independent Pauli/flip mechanism list; check outcome bits are copied
//    from the conditioning pattern.
class Engine {
 public:
  explicit Engine(const ErasureCircuit& c);

  void run_direct(Rng& rng);
  void run_converted(const ConvertedCircuit& conv, const std::vector<uint8_t>& check_outcomes,
                     Rng& rng);

  const ErasureCircuit& circuit() const { return *c_; }
  const std::vector<uint8_t>& outcomes() const { return outcomes_; }
  // Which erasure locations fired during the last run_direct.
  const std::vector<uint8_t>& fired() const { return fired_; }
  // Per-qubit erasure flags after the last run_direct.
  const std::vector<uint8_t>& erased() const { return erased_; }
  // State after the last run, for noise-free follow-up measurements.
  Tableau& state() { return tab_; }
  const Tableau& state() const { return tab_; }

 private:
  void apply_depol(const Operation& op, Rng& rng);
  void apply_single(Pauli p, uint32_t q);
  bool measure_bit(const Operation& op, Rng& rng);

  const ErasureCircuit* c_;
  std::vector<std::vector<uint32_t>> locs_at_;  // location indices keyed by before_op
  Tableau tab_{0};
  std::vector<uint8_t> outcomes_;
  std::vector<uint8_t> fired_;
  std::vector<uint8_t> erased_;
  std::vector<uint8_t> flips_;  // per-outcome accumulated mechanism flips
  // Fired mechanism Pauli components of the current converted run, sorted by
  // insertion time.
  struct PendingPauli {
    uint32_t before_op;
    uint32_t qubit;
    Pauli pauli;
  };
  std::vector<PendingPauli> pending_;
  PauliString meas_;  // reusable measurement operand
};

// Applies ops [begin, end) of `c` to `tab` noiselessly, recording each
// outcome bit's symbolic relation at its outcome index. `results` must be
// sized to c.n_outcomes(). Erasure-check bits, which are always 0 in
// noise-free execution, are recorded as deterministic with empty relations.
void apply_ops_symbolic(const ErasureCircuit& c, size_t begin, size_t end, Tableau& tab,
                        std::vector<SymbolicResult>& results);

// Noise-free symbolic execution of the whole circuit.
struct SymbolicRun {
  Tableau tableau{0};
  std::vector<SymbolicResult> results;
};
SymbolicRun run_symbolic(const ErasureCircuit& c);

}  // namespace floq
