#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "floq/pauli.hpp"
#include "floq/rng.hpp"
#include "floq/sorted_set.hpp"

namespace floq {

enum class Gate1Q : uint8_t { H, S, SDag, X, Y, Z };
enum class Gate2Q : uint8_t { CX, CY, CZ };

struct MeasureResult {
  bool deterministic;
  bool value;  // measured eigenvalue bit: 0 -> +1, 1 -> -1
};

// Result of a measurement with symbolic outcome tracking. For deterministic
// measurements, `relation` lists the previously assigned outcome ids (plus
// the current one) whose GF(2) parity always equals `offset` in noise-free
// execution.
struct SymbolicResult {
  bool deterministic;
  bool offset;
  IdSet relation;
};

// Stabilizer tableau with paired destabilizer rows.
//
// Mixed states are supported: a maximally mixed qubit simply has no
// stabilizer row acting on it, so the tableau may hold fewer than n rows.
// Invariants: stabilizer rows are Hermitian, commute pairwise and are
// independent; destabilizer row j anticommutes with stabilizer row j and
// commutes with every other row.
class Tableau {
 public:
  explicit Tableau(size_t n, bool track_symbols = false);  // |0...0>
  static Tableau maximally_mixed(size_t n, bool track_symbols = false);

  size_t n_qubits() const { return n_; }
  size_t rank() const { return stabs_.size(); }

  void apply_gate1(Gate1Q g, size_t q);
  void apply_gate2(Gate2Q g, size_t control, size_t target);
  void apply_pauli(const PauliString& p);

  // Measures a Hermitian multi-qubit Pauli. Random outcomes consume one bit
  // from `rng`.
  MeasureResult measure(const PauliString& p, Rng& rng);

  // Measurement with symbolic tracking; random outcomes get labeled with
  // `outcome_id` instead of drawing a value.
  SymbolicResult measure_symbolic(const PauliString& p, uint32_t outcome_id);

  // Discards a qubit's state (partial trace); the qubit becomes maximally
  // mixed and afterwards carries no stabilizer row.
  void trace_out(size_t q);

  // Discards the qubit's state and prepares the +/- eigenstate of `basis`.
  void reset_qubit(size_t q, Pauli basis = Pauli::Z, int sign = +1);

  // Returns the sign (+1/-1) if p (up to sign) is in the stabilizer group.
  std::optional<int> group_sign(const PauliString& p) const;

  // True if any stabilizer group element acts nontrivially on q alone
  // (i.e. +/-X_q, +/-Y_q or +/-Z_q is a stabilizer).
  bool has_single_qubit_stabilizer(size_t q) const;

  // True if any stabilizer generator row touches q at all.
  bool any_row_touches(size_t q) const;

  const std::vector<PauliString>& stabilizers() const { return stabs_; }
  const std::vector<PauliString>& destabilizers() const { return destabs_; }
  const std::vector<IdSet>& symbols() const { return symbols_; }

  // Validates all tableau invariants; throws std::logic_error on violation.
  void check_invariants() const;

 private:
  // Appends a new (stabilizer, destabilizer) pair for an independent,
  // commuting Hermitian Pauli.
  void append_pair(PauliString stab, IdSet syms);
  PauliString solve_destabilizer(const PauliString& new_stab) const;
  // stab_[m] *= stab_[p] with destabilizer and symbol bookkeeping.
  void left_multiply_stab(size_t m, size_t p);
  void erase_pair(size_t index);

  size_t n_;
  bool track_symbols_;
  std::vector<PauliString> stabs_;
  std::vector<PauliString> destabs_;
  std::vector<IdSet> symbols_;  // per stabilizer row, when tracking
};

}  // namespace floq
