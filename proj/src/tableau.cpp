#include "floq/tableau.hpp"

#include <array>
#include <stdexcept>

namespace floq {

namespace {

// Conjugation table for a 2-qubit Clifford gate: for each canonical Pauli
// pair (p0, p1) it stores the image's Pauli pair and the phase increment.
struct Conj2Q {
  std::array<uint8_t, 16> pauli_bits;  // (x0 | z0<<1 | x1<<2 | z1<<3) -> same encoding
  std::array<uint8_t, 16> phase_add;   // exponent of i, mod 4
};

uint8_t encode2(Pauli p0, Pauli p1) {
  return static_cast<uint8_t>(static_cast<uint8_t>(p0) | (static_cast<uint8_t>(p1) << 2));
}

Conj2Q build_conj_table(Gate2Q g) {
  // Images of the four generators X_0, Z_0, X_1, Z_1 (qubit 0 = control).
  PauliString img_x0(2), img_z0(2), img_x1(2), img_z1(2);
  switch (g) {
    case Gate2Q::CX:
      img_x0 = PauliString::from_string("XX");
      img_z0 = PauliString::from_string("ZI");
      img_x1 = PauliString::from_string("IX");
      img_z1 = PauliString::from_string("ZZ");
      break;
    case Gate2Q::CY:
      img_x0 = PauliString::from_string("XY");
      img_z0 = PauliString::from_string("ZI");
      img_x1 = PauliString::from_string("ZX");
      img_z1 = PauliString::from_string("ZZ");
      break;
    case Gate2Q::CZ:
      img_x0 = PauliString::from_string("XZ");
      img_z0 = PauliString::from_string("ZI");
      img_x1 = PauliString::from_string("ZX");
      img_z1 = PauliString::from_string("IZ");
      break;
  }
  Conj2Q table{};
  const Pauli kinds[4] = {Pauli::I, Pauli::X, Pauli::Y, Pauli::Z};
  for (Pauli p0 : kinds) {
    for (Pauli p1 : kinds) {
      PauliString image(2);
      auto fold = [&image](Pauli p, const PauliString& ix, const PauliString& iz) {
        // U Y U^dag = i * (U X U^dag)(U Z U^dag) because Y = iXZ.
        if (p == Pauli::X) image.mul(ix);
        else if (p == Pauli::Z) image.mul(iz);
        else if (p == Pauli::Y) {
          image.mul(ix);
          image.mul(iz);
          image.set_phase((image.phase() + 1) & 3u);
        }
      };
      fold(p0, img_x0, img_z0);
      fold(p1, img_x1, img_z1);
      const uint8_t key = encode2(p0, p1);
      table.pauli_bits[key] = encode2(image.get(0), image.get(1));
      table.phase_add[key] = image.phase();
    }
  }
  return table;
}

const Conj2Q& conj_table(Gate2Q g) {
  static const Conj2Q cx = build_conj_table(Gate2Q::CX);
  static const Conj2Q cy = build_conj_table(Gate2Q::CY);
  static const Conj2Q cz = build_conj_table(Gate2Q::CZ);
  switch (g) {
    case Gate2Q::CX: return cx;
    case Gate2Q::CY: return cy;
    default: return cz;
  }
}

}  // namespace

Tableau::Tableau(size_t n, bool track_symbols) : n_(n), track_symbols_(track_symbols) {
  stabs_.reserve(n);
  destabs_.reserve(n);
  for (size_t q = 0; q < n; ++q) {
    stabs_.push_back(PauliString::single(n, q, Pauli::Z));
    destabs_.push_back(PauliString::single(n, q, Pauli::X));
  }
  if (track_symbols_) symbols_.assign(n, {});
}

Tableau Tableau::maximally_mixed(size_t n, bool track_symbols) {
  Tableau t(0, track_symbols);
  t.n_ = n;
  return t;
}

void Tableau::apply_gate1(Gate1Q g, size_t q) {
  auto transform = [&](PauliString& row) {
    const Pauli p = row.get(q);
    if (p == Pauli::I) return;
    const bool x = pauli_has_x(p), z = pauli_has_z(p);
    switch (g) {
      case Gate1Q::H:
        row.set(q, static_cast<Pauli>((z ? 1 : 0) | (x ? 2 : 0)));
        if (x && z) row.set_phase(row.phase() + 2);
        break;
      case Gate1Q::S:
        row.set(q, static_cast<Pauli>((x ? 1 : 0) | ((z ^ x) ? 2 : 0)));
        if (x && z) row.set_phase(row.phase() + 2);
        break;
      case Gate1Q::SDag:
        row.set(q, static_cast<Pauli>((x ? 1 : 0) | ((z ^ x) ? 2 : 0)));
        if (x && !z) row.set_phase(row.phase() + 2);
        break;
      case Gate1Q::X:
        if (z) row.set_phase(row.phase() + 2);
        break;
      case Gate1Q::Y:
        if (x ^ z) row.set_phase(row.phase() + 2);
        break;
      case Gate1Q::Z:
        if (x) row.set_phase(row.phase() + 2);
        break;
    }
  };
  for (auto& row : stabs_) transform(row);
  for (auto& row : destabs_) transform(row);
}

void Tableau::apply_gate2(Gate2Q g, size_t control, size_t target) {
  if (control == target) throw std::invalid_argument("2Q gate needs distinct qubits");
  const Conj2Q& table = conj_table(g);
  auto transform = [&](PauliString& row) {
    const uint8_t key = encode2(row.get(control), row.get(target));
    if (key == 0) return;
    const uint8_t img = table.pauli_bits[key];
    row.set(control, static_cast<Pauli>(img & 3u));
    row.set(target, static_cast<Pauli>((img >> 2) & 3u));
    row.set_phase(row.phase() + table.phase_add[key]);
  };
  for (auto& row : stabs_) transform(row);
  for (auto& row : destabs_) transform(row);
}

void Tableau::apply_pauli(const PauliString& p) {
  for (auto& row : stabs_) {
    if (!row.commutes_with(p)) row.set_phase(row.phase() + 2);
  }
  for (auto& row : destabs_) {
    if (!row.commutes_with(p)) row.set_phase(row.phase() + 2);
  }
}

void Tableau::left_multiply_stab(size_t m, size_t p) {
  stabs_[m].mul(stabs_[p]);
  destabs_[p].mul(destabs_[m]);
  if (track_symbols_) xor_into(symbols_[m], symbols_[p]);
}

void Tableau::erase_pair(size_t index) {
  stabs_.erase(stabs_.begin() + index);
  destabs_.erase(destabs_.begin() + index);
  if (track_symbols_) symbols_.erase(symbols_.begin() + index);
}

PauliString Tableau::solve_destabilizer(const PauliString& new_stab) const {
  // Find D with <D, stab_j> = 0, <D, destab_j> = 0 for all existing rows and
  // <D, new_stab> = 1, where <.,.> is the symplectic product. Unknowns are
  // the 2n bits (x | z) of D; the constraint vector of a row R is (R.z | R.x).
  const size_t nbits = 2 * n_;
  const size_t nwords = (nbits + 63) / 64;
  struct ConstraintRow {
    std::vector<uint64_t> bits;
    bool rhs;
  };
  std::vector<ConstraintRow> rows;
  rows.reserve(stabs_.size() * 2 + 1);
  auto push_constraint = [&](const PauliString& r, bool rhs) {
    ConstraintRow c{std::vector<uint64_t>(nwords, 0), rhs};
    const auto& zw = r.z_words();
    const auto& xw = r.x_words();
    for (size_t q = 0; q < n_; ++q) {
      if ((zw[q >> 6] >> (q & 63)) & 1u) c.bits[q >> 6] |= 1ull << (q & 63);
      const size_t b = n_ + q;
      if ((xw[q >> 6] >> (q & 63)) & 1u) c.bits[b >> 6] |= 1ull << (b & 63);
    }
    rows.push_back(std::move(c));
  };
  for (const auto& s : stabs_) push_constraint(s, false);
  for (const auto& d : destabs_) push_constraint(d, false);
  push_constraint(new_stab, true);

  // Gaussian elimination to row echelon form, tracking pivot columns.
  std::vector<size_t> pivot_col;
  size_t rank = 0;
  for (size_t col = 0; col < nbits && rank < rows.size(); ++col) {
    size_t sel = rank;
    while (sel < rows.size() && !((rows[sel].bits[col >> 6] >> (col & 63)) & 1u)) ++sel;
    if (sel == rows.size()) continue;
    std::swap(rows[rank], rows[sel]);
    for (size_t r = 0; r < rows.size(); ++r) {
      if (r != rank && ((rows[r].bits[col >> 6] >> (col & 63)) & 1u)) {
        for (size_t w = 0; w < nwords; ++w) rows[r].bits[w] ^= rows[rank].bits[w];
        rows[r].rhs = rows[r].rhs != rows[rank].rhs;
      }
    }
    pivot_col.push_back(col);
    ++rank;
  }
  for (size_t r = rank; r < rows.size(); ++r) {
    if (rows[r].rhs) throw std::logic_error("destabilizer system inconsistent");
  }

  // Free variables = 0; pivot variables = rhs.
  PauliString d(n_);
  for (size_t r = 0; r < rank; ++r) {
    if (!rows[r].rhs) continue;
    const size_t col = pivot_col[r];
    if (col < n_) d.set(col, pauli_has_z(d.get(col)) ? Pauli::Y : Pauli::X);
    else {
      const size_t q = col - n_;
      d.set(q, pauli_has_x(d.get(q)) ? Pauli::Y : Pauli::Z);
    }
  }
  return d;
}

void Tableau::append_pair(PauliString stab, IdSet syms) {
  PauliString d = solve_destabilizer(stab);
  // Existing destabilizers may anticommute with the new stabilizer; repair
  // them with the new destabilizer, which commutes with every existing row.
  for (auto& row : destabs_) {
    if (!row.commutes_with(stab)) row.mul(d);
  }
  destabs_.push_back(std::move(d));
  stabs_.push_back(std::move(stab));
  if (track_symbols_) symbols_.push_back(std::move(syms));
}

MeasureResult Tableau::measure(const PauliString& p, Rng& rng) {
  if (p.phase() & 1u) throw std::invalid_argument("measured Pauli must be Hermitian");

  std::vector<size_t> anti;
  for (size_t j = 0; j < stabs_.size(); ++j) {
    if (!stabs_[j].commutes_with(p)) anti.push_back(j);
  }
  if (!anti.empty()) {
    const size_t pivot = anti[0];
    for (size_t idx = 1; idx < anti.size(); ++idx) left_multiply_stab(anti[idx], pivot);
    for (size_t j = 0; j < destabs_.size(); ++j) {
      if (j != pivot && !destabs_[j].commutes_with(p)) destabs_[j].mul(stabs_[pivot]);
    }
    const bool value = rng.next_u64() & 1u;
    destabs_[pivot] = stabs_[pivot];
    stabs_[pivot] = p;
    stabs_[pivot].set_phase(p.phase() + (value ? 2 : 0));
    if (track_symbols_) symbols_[pivot].clear();
    return {false, value};
  }

  // p commutes with the whole group: in-group (deterministic) or independent.
  PauliString prod(n_);
  bool any = false;
  for (size_t j = 0; j < destabs_.size(); ++j) {
    if (!destabs_[j].commutes_with(p)) {
      prod.mul(stabs_[j]);
      any = true;
    }
  }
  if (any && prod.bits_equal(p)) {
    const uint8_t diff = (prod.phase() - p.phase()) & 3u;
    return {true, diff == 2};
  }
  if (!any && p.is_identity_bits()) return {true, p.phase() == 2};

  const bool value = rng.next_u64() & 1u;
  PauliString row = p;
  row.set_phase(p.phase() + (value ? 2 : 0));
  append_pair(std::move(row), {});
  return {false, value};
}

SymbolicResult Tableau::measure_symbolic(const PauliString& p, uint32_t outcome_id) {
  if (!track_symbols_) throw std::logic_error("tableau built without symbol tracking");
  if (p.phase() & 1u) throw std::invalid_argument("measured Pauli must be Hermitian");

  std::vector<size_t> anti;
  for (size_t j = 0; j < stabs_.size(); ++j) {
    if (!stabs_[j].commutes_with(p)) anti.push_back(j);
  }
  if (!anti.empty()) {
    const size_t pivot = anti[0];
    for (size_t idx = 1; idx < anti.size(); ++idx) left_multiply_stab(anti[idx], pivot);
    for (size_t j = 0; j < destabs_.size(); ++j) {
      if (j != pivot && !destabs_[j].commutes_with(p)) destabs_[j].mul(stabs_[pivot]);
    }
    destabs_[pivot] = stabs_[pivot];
    stabs_[pivot] = p;  // symbolic run keeps the +1 branch; symbols carry the sign
    symbols_[pivot] = {outcome_id};
    return {false, false, {}};
  }

  PauliString prod(n_);
  IdSet relation;
  bool any = false;
  for (size_t j = 0; j < destabs_.size(); ++j) {
    if (!destabs_[j].commutes_with(p)) {
      prod.mul(stabs_[j]);
      xor_into(relation, symbols_[j]);
      any = true;
    }
  }
  if ((any && prod.bits_equal(p)) || (!any && p.is_identity_bits())) {
    const uint8_t diff = (prod.phase() - p.phase()) & 3u;
    relation.push_back(outcome_id);  // outcome ids increase, stays sorted
    return {true, diff == 2, std::move(relation)};
  }

  append_pair(p, {outcome_id});
  return {false, false, {}};
}

void Tableau::trace_out(size_t q) {
  // Reduce so that at most one row has an X component on q and at most one
  // other row has a Z component, then drop those rows. The survivors span
  // exactly the subgroup acting trivially on q.
  std::optional<size_t> pivot_x;
  for (size_t j = 0; j < stabs_.size(); ++j) {
    if (pauli_has_x(stabs_[j].get(q))) {
      if (!pivot_x) pivot_x = j;
      else left_multiply_stab(j, *pivot_x);
    }
  }
  std::optional<size_t> pivot_z;
  for (size_t j = 0; j < stabs_.size(); ++j) {
    if (pivot_x && j == *pivot_x) continue;
    if (pauli_has_z(stabs_[j].get(q))) {
      if (!pivot_z) pivot_z = j;
      else left_multiply_stab(j, *pivot_z);
    }
  }
  if (pivot_x && pivot_z && *pivot_x < *pivot_z) std::swap(*pivot_x, *pivot_z);
  if (pivot_x) erase_pair(*pivot_x);
  if (pivot_z) erase_pair(*pivot_z);
}

void Tableau::reset_qubit(size_t q, Pauli basis, int sign) {
  trace_out(q);
  PauliString row = PauliString::single(n_, q, basis);
  if (sign < 0) row.set_phase(2);
  append_pair(std::move(row), {});
}

std::optional<int> Tableau::group_sign(const PauliString& p) const {
  for (const auto& s : stabs_) {
    if (!s.commutes_with(p)) return std::nullopt;
  }
  PauliString prod(n_);
  bool any = false;
  for (size_t j = 0; j < destabs_.size(); ++j) {
    if (!destabs_[j].commutes_with(p)) {
      prod.mul(stabs_[j]);
      any = true;
    }
  }
  if (!any) {
    if (!p.is_identity_bits()) return std::nullopt;
    return p.phase() == 0 ? 1 : -1;
  }
  if (!prod.bits_equal(p)) return std::nullopt;
  const uint8_t diff = (prod.phase() - p.phase()) & 3u;
  return diff == 0 ? 1 : -1;
}

bool Tableau::has_single_qubit_stabilizer(size_t q) const {
  for (Pauli p : {Pauli::X, Pauli::Y, Pauli::Z}) {
    if (group_sign(PauliString::single(n_, q, p))) return true;
  }
  return false;
}

bool Tableau::any_row_touches(size_t q) const {
  for (const auto& s : stabs_) {
    if (s.get(q) != Pauli::I) return true;
  }
  return false;
}

void Tableau::check_invariants() const {
  if (stabs_.size() != destabs_.size()) throw std::logic_error("row count mismatch");
  if (track_symbols_ && symbols_.size() != stabs_.size()) throw std::logic_error("symbol count mismatch");
  for (size_t i = 0; i < stabs_.size(); ++i) {
    if (stabs_[i].phase() & 1u) throw std::logic_error("non-Hermitian stabilizer row");
    for (size_t j = 0; j < stabs_.size(); ++j) {
      if (!stabs_[i].commutes_with(stabs_[j])) throw std::logic_error("stabilizer rows anticommute");
      const bool anti = !destabs_[i].commutes_with(stabs_[j]);
      if (anti != (i == j)) throw std::logic_error("destabilizer pairing broken");
    }
    for (size_t j = 0; j < destabs_.size(); ++j) {
      if (!destabs_[i].commutes_with(destabs_[j])) throw std::logic_error("destabilizer rows anticommute");
    }
    if (stabs_[i].is_identity_bits()) throw std::logic_error("identity stabilizer row");
  }
}

}  // namespace floq
