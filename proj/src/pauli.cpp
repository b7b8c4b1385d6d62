#include "floq/pauli.hpp"

#include <bit>
#include <stdexcept>

namespace floq {

Pauli pauli_from_char(char c) {
  switch (c) {
    case 'I': case '_': return Pauli::I;
    case 'X': return Pauli::X;
    case 'Y': return Pauli::Y;
    case 'Z': return Pauli::Z;
    default: throw std::invalid_argument(std::string("not a Pauli character: ") + c);
  }
}

PauliString PauliString::from_string(const std::string& text) {
  size_t pos = 0;
  uint8_t phase = 0;
  if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
    if (text[pos] == '-') phase = 2;
    ++pos;
  }
  if (pos < text.size() && text[pos] == 'i') {
    phase = (phase + 1) & 3u;
    ++pos;
  }
  PauliString result(text.size() - pos);
  result.phase_ = phase;
  for (size_t q = 0; pos < text.size(); ++q, ++pos) result.set(q, pauli_from_char(text[pos]));
  return result;
}

PauliString PauliString::single(size_t n, size_t qubit, Pauli p) {
  PauliString result(n);
  result.set(qubit, p);
  return result;
}

int PauliString::sign() const {
  if (phase_ & 1u) throw std::logic_error("sign() on a non-Hermitian Pauli");
  return phase_ == 0 ? 1 : -1;
}

bool PauliString::is_identity_bits() const {
  for (size_t w = 0; w < xs_.size(); ++w) {
    if (xs_[w] | zs_[w]) return false;
  }
  return true;
}

bool PauliString::commutes_with(const PauliString& other) const {
  uint64_t parity = 0;
  for (size_t w = 0; w < xs_.size(); ++w) {
    parity ^= std::popcount((xs_[w] & other.zs_[w]) ^ (zs_[w] & other.xs_[w])) & 1u;
  }
  return parity == 0;
}

size_t PauliString::weight() const {
  size_t total = 0;
  for (size_t w = 0; w < xs_.size(); ++w) total += std::popcount(xs_[w] | zs_[w]);
  return total;
}

void PauliString::mul(const PauliString& other) {
  // Per-qubit phase contribution of the canonical product, accumulated mod 4:
  //   x1z1 + x2z2 + 2*(z1 & x2) + 3*(x3 & z3)   with (x3,z3) = xor of masks.
  uint32_t exponent = phase_ + other.phase_;
  for (size_t w = 0; w < xs_.size(); ++w) {
    const uint64_t x1 = xs_[w], z1 = zs_[w];
    const uint64_t x2 = other.xs_[w], z2 = other.zs_[w];
    const uint64_t x3 = x1 ^ x2, z3 = z1 ^ z2;
    exponent += std::popcount(x1 & z1) + std::popcount(x2 & z2);
    exponent += 2u * std::popcount(z1 & x2);
    exponent += 3u * std::popcount(x3 & z3);
    xs_[w] = x3;
    zs_[w] = z3;
  }
  phase_ = exponent & 3u;
}

std::string PauliString::str() const {
  std::string out;
  switch (phase_) {
    case 0: out = "+"; break;
    case 1: out = "i"; break;
    case 2: out = "-"; break;
    case 3: out = "-i"; break;
  }
  out.reserve(out.size() + n_);
  for (size_t q = 0; q < n_; ++q) out.push_back(pauli_char(get(q)));
  return out;
}

}  // namespace floq
