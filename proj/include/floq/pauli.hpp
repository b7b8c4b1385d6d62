#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace floq {

// Single-qubit Pauli kind. Values are chosen so that the X bit is bit 0 and
// the Z bit is bit 1 (I=00, X=01, Y=11, Z=10).
enum class Pauli : uint8_t { I = 0, X = 1, Y = 3, Z = 2 };

inline bool pauli_has_x(Pauli p) { return static_cast<uint8_t>(p) & 1u; }
inline bool pauli_has_z(Pauli p) { return static_cast<uint8_t>(p) & 2u; }
inline char pauli_char(Pauli p) {
  switch (p) {
    case Pauli::I: return 'I';
    case Pauli::X: return 'X';
    case Pauli::Y: return 'Y';
    case Pauli::Z: return 'Z';
  }
  return '?';
}
Pauli pauli_from_char(char c);

// n-qubit Pauli operator stored as bit-packed X/Z masks with a global phase.
//
// The represented operator is i^phase * prod_q P_q where P_q is the canonical
// single-qubit Pauli (Y itself, not XZ). Phase is an exponent of i, mod 4.
// Hermitian operators have even phase (+1 for 0, -1 for 2).
class PauliString {
 public:
  PauliString() : n_(0), phase_(0) {}
  explicit PauliString(size_t n) : n_(n), phase_(0), xs_(words_for(n), 0), zs_(words_for(n), 0) {}

  // Parses strings like "+XIZ", "-IYY", "XX" (implicit +), "iX", "-iZ".
  static PauliString from_string(const std::string& text);
  static PauliString single(size_t n, size_t qubit, Pauli p);

  size_t n_qubits() const { return n_; }
  uint8_t phase() const { return phase_; }
  void set_phase(uint8_t value) { phase_ = value & 3u; }
  int sign() const;  // +1 or -1; requires even phase

  Pauli get(size_t q) const {
    const uint8_t x = (xs_[q >> 6] >> (q & 63)) & 1u;
    const uint8_t z = (zs_[q >> 6] >> (q & 63)) & 1u;
    return static_cast<Pauli>(x | (z << 1));
  }
  void set(size_t q, Pauli p) {
    const uint64_t bit = 1ull << (q & 63);
    if (pauli_has_x(p)) xs_[q >> 6] |= bit; else xs_[q >> 6] &= ~bit;
    if (pauli_has_z(p)) zs_[q >> 6] |= bit; else zs_[q >> 6] &= ~bit;
  }

  bool is_identity_bits() const;           // ignores phase
  bool commutes_with(const PauliString& other) const;
  size_t weight() const;

  // this <- this * other (operator product, exact phase tracking).
  void mul(const PauliString& other);
  PauliString times(const PauliString& other) const {
    PauliString r = *this;
    r.mul(other);
    return r;
  }

  // Equal bit masks, phase ignored.
  bool bits_equal(const PauliString& other) const { return xs_ == other.xs_ && zs_ == other.zs_; }
  bool operator==(const PauliString& other) const {
    return n_ == other.n_ && phase_ == other.phase_ && bits_equal(other);
  }

  std::string str() const;  // e.g. "+XIZY", "-iYZ"

  const std::vector<uint64_t>& x_words() const { return xs_; }
  const std::vector<uint64_t>& z_words() const { return zs_; }

  // Symplectic product parity with a single-qubit Pauli, used in hot loops.
  bool anticommutes_single(size_t q, Pauli p) const {
    const Pauli mine = get(q);
    if (mine == Pauli::I || p == Pauli::I) return false;
    return mine != p;
  }

 private:
  static size_t words_for(size_t n) { return (n + 63) / 64; }

  size_t n_;
  uint8_t phase_;
  std::vector<uint64_t> xs_, zs_;
};

}  // namespace floq
