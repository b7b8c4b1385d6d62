#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "floq/pauli.hpp"
#include "floq/tableau.hpp"

namespace floq {

// Global noise strengths: e = erasure rate per location, p = Pauli error
// rate, q = classical outcome bit-flip rate.
struct NoiseParams {
  double e = 0.0;
  double p = 0.0;
  double q = 0.0;
  bool valid() const {
    auto ok = [](double v) { return v >= 0.0 && v <= 1.0; };
    return ok(e) && ok(p) && ok(q);
  }
};

enum class OpKind : uint8_t {
  StatePrep,              // 1Q preparation of a basis eigenstate
  Readout,                // 1Q basis readout; includes a co-located erasure check
  Clifford1Q,             // 1Q Clifford gate
  ControlledPauli,        // controlled-X/Y/Z, targets = (control, target)
  ErasureCheck,           // nondestructive computational-vs-erased check
  ErasureCheckWithReset,  // check followed immediately by reset (no gap)
  Reset,                  // trivial on computational states; erased -> mixed
  ProjectiveMeasurePP,    // 2Q Pauli-product projective measurement
};

constexpr bool op_is_reset_like(OpKind k) {
  return k == OpKind::StatePrep || k == OpKind::Readout ||
         k == OpKind::ErasureCheckWithReset || k == OpKind::Reset;
}
constexpr bool op_is_entangling(OpKind k) {
  return k == OpKind::ControlledPauli || k == OpKind::ProjectiveMeasurePP;
}
constexpr int op_target_count(OpKind k) { return op_is_entangling(k) ? 2 : 1; }
const char* op_name(OpKind k);

struct Operation {
  OpKind kind = OpKind::Reset;
  std::array<uint32_t, 2> targets{0, 0};
  uint32_t time_index = 0;  // layer; ops in one layer act on disjoint qubits
  Pauli basis = Pauli::Z;   // StatePrep/Readout basis, ControlledPauli/MPP Pauli
  int8_t sign = +1;         // StatePrep eigenvalue sign
  Gate1Q gate = Gate1Q::H;  // Clifford1Q only

  // Noise attributes filled by instrument_noise (all zero on ideal circuits).
  double depol = 0.0;         // depolarizing rate on the op's support, after it
  double check_flip = 0.0;    // flip rate of the erasure-check outcome bit
  double outcome_flip = 0.0;  // flip rate of the measurement outcome bit

  // Outcome bit indices (assigned at construction); -1 when absent.
  int32_t check_outcome = -1;  // Readout, ErasureCheck, ErasureCheckWithReset
  int32_t outcome = -1;        // Readout, ProjectiveMeasurePP

  int n_targets() const { return op_target_count(kind); }
  bool has_check() const { return check_outcome >= 0; }
  bool has_outcome() const { return outcome >= 0; }
};

// One possible erasure event site, between two consecutive operations on a
// wire. No location exists inside an atomic op (check-with-reset, readout).
struct ErasureLocation {
  uint32_t qubit = 0;
  uint32_t after_op = 0;   // global index of the earlier flanking op
  uint32_t before_op = 0;  // global index of the later flanking op
  double rate = 0.0;
};

class ErasureCircuit {
 public:
  explicit ErasureCircuit(uint32_t n_qubits, NoiseParams noise = {});

  // Builder API. Ops are appended into the current layer; tick() closes it.
  uint32_t prep(uint32_t q, Pauli basis = Pauli::Z, int sign = +1);
  uint32_t readout(uint32_t q, Pauli basis = Pauli::Z);
  uint32_t gate1(Gate1Q g, uint32_t q);
  uint32_t controlled_pauli(uint32_t control, uint32_t target, Pauli p);
  uint32_t measure_pp(uint32_t a, uint32_t b, Pauli p);
  uint32_t erasure_check(uint32_t q);
  uint32_t erasure_check_with_reset(uint32_t q);
  uint32_t reset(uint32_t q);
  void tick();

  uint32_t n_qubits() const { return n_qubits_; }
  uint32_t n_outcomes() const { return n_outcomes_; }
  uint32_t n_layers() const;
  const NoiseParams& noise() const { return noise_; }
  const std::vector<Operation>& ops() const { return ops_; }
  std::vector<Operation>& mutable_ops() { return ops_; }
  const std::vector<ErasureLocation>& locations() const { return locations_; }
  std::vector<ErasureLocation>& mutable_locations() { return locations_; }
  bool instrumented() const { return instrumented_; }
  bool locations_inserted() const { return locations_inserted_; }
  // Per-qubit list of op indices in time order.
  const std::vector<std::vector<uint32_t>>& wires() const { return wires_; }

  void mark_instrumented() { instrumented_ = true; }
  void mark_locations_inserted() { locations_inserted_ = true; }

 private:
  uint32_t push(Operation op);
  uint32_t n_qubits_ = 0;
  NoiseParams noise_;
  std::vector<Operation> ops_;
  std::vector<ErasureLocation> locations_;
  std::vector<std::vector<uint32_t>> wires_;
  uint32_t n_outcomes_ = 0;
  uint32_t layer_ = 0;
  bool instrumented_ = false;
  bool locations_inserted_ = false;
};

// Inserts exactly one erasure location (rate = noise.e) on each wire between
// each pair of consecutive operations on that wire.
ErasureCircuit insert_erasure_locations(const ErasureCircuit& c);

// Adds the standard noise attributes to every operation:
//   StatePrep -> 1Q depolarizing 3p/2; Readout -> check flip q + outcome flip
//   q; ErasureCheckWithReset -> check flip q + 1Q depolarizing p; Reset -> 1Q
//   depolarizing p; ErasureCheck -> check flip q; ControlledPauli -> 2Q
//   depolarizing p; ProjectiveMeasurePP -> 2Q depolarizing p + outcome flip q.
// Throws std::logic_error when called on an already-instrumented circuit.
// `noisy` optionally restricts instrumentation (and location rates, when
// locations are present) to ops with noisy[op_index] == true.
ErasureCircuit instrument_noise(const ErasureCircuit& c);
ErasureCircuit instrument_noise(const ErasureCircuit& c, const std::vector<uint8_t>& noisy);

// Structural diagnostics; empty result means the circuit is well-formed.
std::vector<std::string> validate(const ErasureCircuit& c);

// Overrides each location's rate with (wa*T_A + wb*T_B)/T_E where T_A, T_B
// are the durations of the flanking ops and the weight on a reset-like
// flanking op is 1 (segment endpoint); otherwise wa = a, wb = b.
// Throws std::invalid_argument if any resulting rate exceeds 1.
ErasureCircuit adjust_erasure_rates(const ErasureCircuit& c,
                                    const std::map<OpKind, double>& durations, double t_erasure,
                                    double a, double b);

// Text round trip. One op per line, TICK separates layers, '#' comments.
std::string format_circuit(const ErasureCircuit& c);
ErasureCircuit parse_circuit(const std::string& text);

}  // namespace floq
