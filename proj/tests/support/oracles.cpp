#include "support/oracles.hpp"

#include <cmath>
#include <stdexcept>

namespace floq::testing {

namespace {
const Cplx kI(0.0, 1.0);

Matrix make(size_t dim, std::initializer_list<Cplx> values) {
  Matrix m(values);
  if (m.size() != dim * dim) throw std::logic_error("bad matrix literal");
  return m;
}
}  // namespace

size_t matrix_dim(const Matrix& m) {
  size_t dim = 1;
  while (dim * dim < m.size()) dim <<= 1;
  if (dim * dim != m.size()) throw std::logic_error("matrix is not square power of two");
  return dim;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  const size_t dim = matrix_dim(a);
  Matrix out(dim * dim, Cplx(0, 0));
  for (size_t i = 0; i < dim; ++i) {
    for (size_t k = 0; k < dim; ++k) {
      const Cplx aik = a[i * dim + k];
      if (aik == Cplx(0, 0)) continue;
      for (size_t j = 0; j < dim; ++j) out[i * dim + j] += aik * b[k * dim + j];
    }
  }
  return out;
}

Matrix matadj(const Matrix& a) {
  const size_t dim = matrix_dim(a);
  Matrix out(dim * dim);
  for (size_t i = 0; i < dim; ++i) {
    for (size_t j = 0; j < dim; ++j) out[j * dim + i] = std::conj(a[i * dim + j]);
  }
  return out;
}

Cplx mattrace(const Matrix& a) {
  const size_t dim = matrix_dim(a);
  Cplx t(0, 0);
  for (size_t i = 0; i < dim; ++i) t += a[i * dim + i];
  return t;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  if (a.size() != b.size()) throw std::logic_error("size mismatch");
  double worst = 0;
  for (size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

Matrix embed_gate(const Matrix& gate, const std::vector<size_t>& qubits, size_t n) {
  const size_t gdim = matrix_dim(gate);
  if (gdim != (size_t{1} << qubits.size())) throw std::logic_error("gate dim mismatch");
  const size_t dim = size_t{1} << n;
  Matrix out(dim * dim, Cplx(0, 0));
  for (size_t row = 0; row < dim; ++row) {
    size_t grow = 0;
    for (size_t t = 0; t < qubits.size(); ++t) grow |= ((row >> qubits[t]) & 1u) << t;
    for (size_t gcol = 0; gcol < gdim; ++gcol) {
      const Cplx v = gate[grow * gdim + gcol];
      if (v == Cplx(0, 0)) continue;
      size_t col = row;
      for (size_t t = 0; t < qubits.size(); ++t) {
        const size_t bit = size_t{1} << qubits[t];
        col = (col & ~bit) | (((gcol >> t) & 1u) ? bit : 0u);
      }
      out[row * dim + col] += v;
    }
  }
  return out;
}

Matrix gate1_matrix(Gate1Q g) {
  const double s = 1.0 / std::sqrt(2.0);
  switch (g) {
    case Gate1Q::H: return make(2, {s, s, s, -s});
    case Gate1Q::S: return make(2, {1, 0, 0, kI});
    case Gate1Q::SDag: return make(2, {1, 0, 0, -kI});
    case Gate1Q::X: return make(2, {0, 1, 1, 0});
    case Gate1Q::Y: return make(2, {0, -kI, kI, 0});
    case Gate1Q::Z: return make(2, {1, 0, 0, -1});
  }
  throw std::logic_error("unknown gate");
}

Matrix gate2_matrix(Gate2Q g) {
  // Qubit 0 of the gate index space is the control (least significant bit).
  Matrix m(16, Cplx(0, 0));
  const Matrix p = g == Gate2Q::CX   ? gate1_matrix(Gate1Q::X)
                   : g == Gate2Q::CY ? gate1_matrix(Gate1Q::Y)
                                     : gate1_matrix(Gate1Q::Z);
  for (size_t c = 0; c < 2; ++c) {
    for (size_t t_in = 0; t_in < 2; ++t_in) {
      for (size_t t_out = 0; t_out < 2; ++t_out) {
        const Cplx v = c == 0 ? (t_in == t_out ? Cplx(1, 0) : Cplx(0, 0)) : p[t_out * 2 + t_in];
        m[(c | (t_out << 1)) * 4 + (c | (t_in << 1))] = v;
      }
    }
  }
  return m;
}

Matrix pauli_matrix(const PauliString& p) {
  const size_t n = p.n_qubits();
  const size_t dim = size_t{1} << n;
  Matrix out(dim * dim, Cplx(0, 0));
  Cplx prefactor(1, 0);
  switch (p.phase()) {
    case 0: prefactor = 1; break;
    case 1: prefactor = kI; break;
    case 2: prefactor = -1; break;
    case 3: prefactor = -kI; break;
  }
  for (size_t col = 0; col < dim; ++col) {
    size_t row = col;
    Cplx v = prefactor;
    for (size_t q = 0; q < n; ++q) {
      const bool bit = (col >> q) & 1u;
      switch (p.get(q)) {
        case Pauli::I: break;
        case Pauli::X: row ^= size_t{1} << q; break;
        case Pauli::Y:
          row ^= size_t{1} << q;
          v *= bit ? -kI : kI;
          break;
        case Pauli::Z:
          if (bit) v = -v;
          break;
      }
    }
    out[row * dim + col] += v;
  }
  return out;
}

DensityMatrix::DensityMatrix(size_t n) : n_(n), rho_((size_t{1} << n) * (size_t{1} << n), Cplx(0, 0)) {
  rho_[0] = 1;
}

DensityMatrix DensityMatrix::maximally_mixed(size_t n) {
  DensityMatrix d(n);
  const size_t dim = size_t{1} << n;
  d.rho_.assign(dim * dim, Cplx(0, 0));
  for (size_t i = 0; i < dim; ++i) d.rho_[i * dim + i] = 1.0 / static_cast<double>(dim);
  return d;
}

double DensityMatrix::trace() const { return mattrace(rho_).real(); }

void DensityMatrix::apply_matrix(const Matrix& u, const std::vector<size_t>& qubits) {
  const Matrix full = embed_gate(u, qubits, n_);
  rho_ = matmul(full, matmul(rho_, matadj(full)));
}

void DensityMatrix::apply_gate1(Gate1Q g, size_t q) { apply_matrix(gate1_matrix(g), {q}); }

void DensityMatrix::apply_gate2(Gate2Q g, size_t control, size_t target) {
  apply_matrix(gate2_matrix(g), {control, target});
}

void DensityMatrix::apply_pauli(const PauliString& p) {
  const Matrix m = pauli_matrix(p);
  rho_ = matmul(m, matmul(rho_, matadj(m)));
}

double DensityMatrix::prob_plus(const PauliString& p) const {
  const Matrix m = pauli_matrix(p);
  const size_t dim = size_t{1} << n_;
  Matrix proj(dim * dim);
  for (size_t i = 0; i < dim * dim; ++i) proj[i] = 0.5 * m[i];
  for (size_t i = 0; i < dim; ++i) proj[i * dim + i] += 0.5;
  return mattrace(matmul(proj, rho_)).real();
}

double DensityMatrix::collapse(const PauliString& p, bool value) {
  const Matrix m = pauli_matrix(p);
  const size_t dim = size_t{1} << n_;
  const double sign = value ? -0.5 : 0.5;
  Matrix proj(dim * dim);
  for (size_t i = 0; i < dim * dim; ++i) proj[i] = sign * m[i];
  for (size_t i = 0; i < dim; ++i) proj[i * dim + i] += 0.5;
  rho_ = matmul(proj, matmul(rho_, proj));
  const double prob = mattrace(rho_).real();
  if (prob > 1e-12) {
    for (auto& v : rho_) v /= prob;
  }
  return prob;
}

void DensityMatrix::depolarize(const std::vector<size_t>& qubits, double rate) {
  const size_t count = (size_t{1} << (2 * qubits.size())) - 1;
  Matrix acc(rho_.size(), Cplx(0, 0));
  size_t made = 0;
  for (size_t code = 1; code <= count; ++code) {
    PauliString p(n_);
    size_t c = code;
    for (size_t q : qubits) {
      p.set(q, static_cast<Pauli>(c & 3u));
      c >>= 2;
    }
    const Matrix m = pauli_matrix(p);
    const Matrix term = matmul(m, matmul(rho_, matadj(m)));
    for (size_t i = 0; i < acc.size(); ++i) acc[i] += term[i];
    ++made;
  }
  for (size_t i = 0; i < rho_.size(); ++i) {
    rho_[i] = (1.0 - rate) * rho_[i] + rate / static_cast<double>(made) * acc[i];
  }
}

void DensityMatrix::trace_out_refill(size_t q) {
  const size_t dim = size_t{1} << n_;
  const size_t bit = size_t{1} << q;
  Matrix out(dim * dim, Cplx(0, 0));
  for (size_t i = 0; i < dim; ++i) {
    for (size_t j = 0; j < dim; ++j) {
      if ((i & bit) != (j & bit)) continue;  // off-diagonal in q dies
      const Cplx total = rho_[(i & ~bit) * dim + (j & ~bit)] + rho_[(i | bit) * dim + (j | bit)];
      out[i * dim + j] = 0.5 * total;
    }
  }
  rho_ = std::move(out);
}

double DensityMatrix::distance_to(const DensityMatrix& other) const {
  return max_abs_diff(rho_, other.rho_);
}

DensityMatrix density_from_tableau(const Tableau& t) {
  const size_t n = t.n_qubits();
  const size_t dim = size_t{1} << n;
  Matrix acc(dim * dim, Cplx(0, 0));
  for (size_t i = 0; i < dim; ++i) acc[i * dim + i] = 1.0 / static_cast<double>(dim);
  for (const auto& s : t.stabilizers()) {
    const Matrix m = pauli_matrix(s);
    Matrix next(dim * dim, Cplx(0, 0));
    // acc <- acc * (I + S)/... keeping the 2^-n prefactor up front: multiply
    // by (I + S) each time.
    const Matrix prod = matmul(acc, m);
    for (size_t i = 0; i < dim * dim; ++i) next[i] = acc[i] + prod[i];
    acc = std::move(next);
  }
  DensityMatrix d(n);
  d.set_data(std::move(acc));
  return d;
}

}  // namespace floq::testing
