#include "floq/analysis.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <utility>

namespace floq {

namespace {

// --- Plain GF(2) matrices, row-major bit packing ---

struct BitMat {
  size_t rows = 0, cols = 0, words = 0;
  std::vector<uint64_t> a;

  BitMat(size_t r, size_t c) : rows(r), cols(c), words((c + 63) / 64), a(r * words, 0) {}
  uint64_t* row(size_t r) { return a.data() + r * words; }
  const uint64_t* row(size_t r) const { return a.data() + r * words; }
  bool get(size_t r, size_t c) const { return (row(r)[c >> 6] >> (c & 63)) & 1u; }
  void flip(size_t r, size_t c) { row(r)[c >> 6] ^= 1ull << (c & 63); }
  void xor_rows(size_t dst, size_t src) {
    for (size_t w = 0; w < words; ++w) row(dst)[w] ^= row(src)[w];
  }
};

// In-place reduced row echelon form; returns the pivot column of each
// leading row.
std::vector<size_t> rref(BitMat& m) {
  std::vector<size_t> pivots;
  size_t r = 0;
  for (size_t c = 0; c < m.cols && r < m.rows; ++c) {
    size_t sel = r;
    while (sel < m.rows && !m.get(sel, c)) ++sel;
    if (sel == m.rows) continue;
    if (sel != r) std::swap_ranges(m.row(r), m.row(r) + m.words, m.row(sel));
    for (size_t i = 0; i < m.rows; ++i)
      if (i != r && m.get(i, c)) m.xor_rows(i, r);
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

// Basis of {x : M x = 0}, one packed cols-bit vector per basis element.
std::vector<std::vector<uint64_t>> nullspace(BitMat m) {
  auto pivots = rref(m);
  std::vector<char> is_pivot(m.cols, 0);
  for (size_t c : pivots) is_pivot[c] = 1;
  const size_t vwords = (m.cols + 63) / 64;
  std::vector<std::vector<uint64_t>> basis;
  for (size_t c = 0; c < m.cols; ++c) {
    if (is_pivot[c]) continue;
    std::vector<uint64_t> v(vwords, 0);
    v[c >> 6] |= 1ull << (c & 63);
    for (size_t r = 0; r < pivots.size(); ++r)
      if (m.get(r, c)) v[pivots[r] >> 6] ^= 1ull << (pivots[r] & 63);
    basis.push_back(std::move(v));
  }
  return basis;
}

// Particular solution of M x = b, or nullopt when inconsistent.
std::optional<std::vector<char>> solve(const BitMat& m, const std::vector<char>& b) {
  BitMat aug(m.rows, m.cols + 1);
  for (size_t r = 0; r < m.rows; ++r) {
    std::copy(m.row(r), m.row(r) + m.words, aug.row(r));
    if (b[r]) aug.flip(r, m.cols);
  }
  auto pivots = rref(aug);
  std::vector<char> x(m.cols, 0);
  for (size_t r = 0; r < pivots.size(); ++r) {
    if (pivots[r] == m.cols) return std::nullopt;  // 0 = 1 row
    x[pivots[r]] = aug.get(r, m.cols);
  }
  return x;
}

bool vec_bit(const std::vector<uint64_t>& v, size_t j) { return (v[j >> 6] >> (j & 63)) & 1u; }

// --- Pauli spans as self-reducing echelon forms over 2n bits ---

bool pauli_bit(const PauliString& p, size_t j) {
  const size_t n = p.n_qubits();
  return j < n ? (p.x_words()[j >> 6] >> (j & 63)) & 1u
               : (p.z_words()[(j - n) >> 6] >> ((j - n) & 63)) & 1u;
}

size_t pauli_pivot(const PauliString& p) {
  const size_t n2 = 2 * p.n_qubits();
  for (size_t j = 0; j < n2; ++j)
    if (pauli_bit(p, j)) return j;
  return n2;  // identity
}

struct PauliEchelon {
  size_t n = 0;
  std::vector<PauliString> rows;  // reduced; pivots strictly increasing
  std::vector<size_t> pivots;

  explicit PauliEchelon(size_t n_qubits) : n(n_qubits) {}

  PauliString reduce(PauliString p) const {
    for (size_t i = 0; i < rows.size(); ++i)
      if (pauli_bit(p, pivots[i])) p.mul(rows[i]);
    return p;
  }

  // Inserts p's residue; returns whether the span grew.
  bool insert(PauliString p) {
    p = reduce(std::move(p));
    const size_t piv = pauli_pivot(p);
    if (piv == 2 * n) return false;
    for (auto& row : rows)
      if (pauli_bit(row, piv)) row.mul(p);
    const size_t at = size_t(std::lower_bound(pivots.begin(), pivots.end(), piv) - pivots.begin());
    rows.insert(rows.begin() + at, std::move(p));
    pivots.insert(pivots.begin() + at, piv);
    return true;
  }

  bool contains(const PauliString& p) const { return pauli_pivot(reduce(p)) == 2 * n; }
};

PauliEchelon echelon_of(const std::vector<PauliString>& gens, size_t n) {
  PauliEchelon e(n);
  for (const auto& g : gens) e.insert(g);
  return e;
}

bool anticommute(const PauliString& a, const PauliString& b) { return !a.commutes_with(b); }

PauliString from_bits(const std::vector<uint64_t>& v, size_t n) {
  PauliString p(n);
  for (size_t q = 0; q < n; ++q) {
    const bool x = vec_bit(v, q), z = vec_bit(v, n + q);
    if (x || z) p.set(q, static_cast<Pauli>(uint8_t(x) | (uint8_t(z) << 1)));
  }
  return p;
}

// Rows = symplectic pairings against each generator, so the nullspace is the
// set of Paulis commuting with all of them.
BitMat commutation_matrix(const std::vector<PauliString>& gens, size_t n) {
  BitMat m(gens.size(), 2 * n);
  for (size_t r = 0; r < gens.size(); ++r)
    for (size_t q = 0; q < n; ++q) {
      // symp(v, g) = sum_q v_x[q] g_z[q] + v_z[q] g_x[q]
      if (pauli_has_z(gens[r].get(q))) m.flip(r, q);
      if (pauli_has_x(gens[r].get(q))) m.flip(r, n + q);
    }
  return m;
}

std::vector<PauliString> schedule_round_checks(const ColoredGraph& g,
                                               const MeasurementSchedule& s, uint32_t r) {
  const auto& round = s.rounds[r % s.period()];
  std::vector<PauliString> checks;
  for (uint32_t ei : g.color_edges(round.color))
    checks.push_back(edge_check(g.n_vertices, g.edges[ei], round.type));
  return checks;
}

}  // namespace

std::vector<PauliString> independent_generators(const std::vector<PauliString>& gens) {
  if (gens.empty()) return {};
  return echelon_of(gens, gens.front().n_qubits()).rows;
}

uint32_t pauli_rank(const std::vector<PauliString>& gens) {
  if (gens.empty()) return 0;
  return uint32_t(echelon_of(gens, gens.front().n_qubits()).rows.size());
}

bool in_span(const PauliString& p, const std::vector<PauliString>& gens) {
  return echelon_of(gens, p.n_qubits()).contains(p);
}

std::vector<PauliString> isg_step(const std::vector<PauliString>& prev,
                                  const std::vector<PauliString>& checks, uint32_t n) {
  for (size_t i = 0; i < checks.size(); ++i)
    for (size_t j = i + 1; j < checks.size(); ++j)
      if (anticommute(checks[i], checks[j]))
        throw std::invalid_argument("round checks must mutually commute");

  auto base = independent_generators(prev);
  std::vector<PauliString> out = checks;
  if (!base.empty()) {
    // lambda over `base` spans the commuting subgroup iff K lambda = 0 where
    // K[c][j] = symp(base_j, checks_c).
    BitMat k(checks.size(), base.size());
    for (size_t c = 0; c < checks.size(); ++c)
      for (size_t j = 0; j < base.size(); ++j)
        if (anticommute(base[j], checks[c])) k.flip(c, j);
    for (const auto& lambda : nullspace(std::move(k))) {
      PauliString prod(n);
      for (size_t j = 0; j < base.size(); ++j)
        if (vec_bit(lambda, j)) prod.mul(base[j]);
      out.push_back(std::move(prod));
    }
  }
  return independent_generators(out);
}

IsgFlow isg_flow(const ColoredGraph& g, const MeasurementSchedule& s, uint32_t periods) {
  require_valid(g);
  if (s.period() == 0) throw std::invalid_argument("schedule has no rounds");
  IsgFlow flow;
  std::vector<PauliString> gens;
  const uint32_t total = periods * s.period();
  for (uint32_t r = 0; r < total; ++r) {
    gens = isg_step(gens, schedule_round_checks(g, s, r), g.n_vertices);
    flow.k_per_round.push_back(g.n_vertices - uint32_t(gens.size()));
  }
  flow.k = flow.k_per_round.back();
  flow.steady = std::move(gens);
  return flow;
}

uint32_t logical_count(const ColoredGraph& g, const MeasurementSchedule& s) {
  for (uint32_t periods = 4; periods <= 16; periods *= 2) {
    IsgFlow flow = isg_flow(g, s, periods);
    const uint32_t p = s.period();
    const auto& ks = flow.k_per_round;
    bool settled = true;
    // Stable when the last two full periods agree round by round.
    for (uint32_t i = 0; i < p && settled; ++i)
      settled = ks[ks.size() - 1 - i] == ks[ks.size() - 1 - i - p];
    if (settled) return flow.k;
  }
  throw std::logic_error("instantaneous stabilizer flow did not settle");
}

std::vector<std::vector<PauliString>> steady_phase_groups(const ColoredGraph& g,
                                                          const MeasurementSchedule& s) {
  require_valid(g);
  if (s.period() == 0) throw std::invalid_argument("schedule has no rounds");
  const uint32_t p = s.period();
  std::vector<PauliString> gens;
  for (uint32_t r = 0; r < 6 * p; ++r)
    gens = isg_step(gens, schedule_round_checks(g, s, r), g.n_vertices);
  std::vector<std::vector<PauliString>> phases(p);
  for (uint32_t r = 0; r < p; ++r) {
    gens = isg_step(gens, schedule_round_checks(g, s, r), g.n_vertices);
    phases[r] = gens;
  }
  for (uint32_t r = 0; r < p; ++r) {
    gens = isg_step(gens, schedule_round_checks(g, s, r), g.n_vertices);
    if (gens.size() != phases[r].size())
      throw std::logic_error("instantaneous stabilizer flow did not settle");
  }
  return phases;
}

std::vector<PauliString> logical_basis(const std::vector<PauliString>& stabilizers, uint32_t n) {
  auto stab = independent_generators(stabilizers);
  std::vector<PauliString> normalizer;
  if (stab.empty()) {
    for (uint32_t q = 0; q < n; ++q) {
      normalizer.push_back(PauliString::single(n, q, Pauli::X));
      normalizer.push_back(PauliString::single(n, q, Pauli::Z));
    }
  } else {
    for (const auto& v : nullspace(commutation_matrix(stab, n)))
      normalizer.push_back(from_bits(v, n));
  }
  // Quotient N(S)/S: seed the echelon with S, keep what extends it. The kept
  // residue differs from the candidate only by stabilizers, so it stays in
  // the normalizer and in the same class.
  PauliEchelon e = echelon_of(stab, n);
  std::vector<PauliString> out;
  for (auto& v : normalizer) {
    PauliString reduced = e.reduce(v);
    if (e.insert(v)) out.push_back(std::move(reduced));
  }
  return out;
}

GaugeStructure gauge_structure(const ColoredGraph& g, const MeasurementSchedule& s) {
  require_valid(g);
  if (s.period() == 0) throw std::invalid_argument("schedule has no rounds");
  GaugeStructure out;
  std::vector<PauliString> all;
  std::vector<std::pair<uint8_t, Pauli>> seen;
  for (const auto& round : s.rounds) {
    const auto key = std::make_pair(round.color, round.type);
    if (std::find(seen.begin(), seen.end(), key) != seen.end()) continue;
    seen.push_back(key);
    for (uint32_t ei : g.color_edges(round.color))
      all.push_back(edge_check(g.n_vertices, g.edges[ei], round.type));
  }
  out.checks = independent_generators(all);
  const uint32_t n = g.n_vertices;

  // Center: products of checks commuting with every check.
  BitMat k(out.checks.size(), out.checks.size());
  for (size_t c = 0; c < out.checks.size(); ++c)
    for (size_t j = 0; j < out.checks.size(); ++j)
      if (anticommute(out.checks[j], out.checks[c])) k.flip(c, j);
  for (const auto& lambda : nullspace(std::move(k))) {
    PauliString prod(n);
    for (size_t j = 0; j < out.checks.size(); ++j)
      if (vec_bit(lambda, j)) prod.mul(out.checks[j]);
    out.center.push_back(std::move(prod));
  }
  out.center = independent_generators(out.center);

  // Bare logicals: commute with every check, modulo the center. Seeding the
  // echelon with the full check span maps each candidate to a residue that
  // differs from it only by center elements (candidates already commute with
  // everything, so any check-span part removed is central).
  PauliEchelon e = echelon_of(out.checks, n);
  for (const auto& v : nullspace(commutation_matrix(out.checks, n))) {
    PauliString cand = from_bits(v, n);
    PauliString residue = e.reduce(cand);
    if (e.insert(std::move(cand))) out.logicals.push_back(std::move(residue));
  }
  return out;
}

std::optional<PauliString> pure_basis_representative(const PauliString& logical,
                                                     const std::vector<PauliString>& stabilizers,
                                                     Pauli basis) {
  const size_t n = logical.n_qubits();
  // Offending bit of a qubit's Pauli: the component that must vanish for the
  // operator to be built from {I, basis} alone.
  auto offending = [&](const PauliString& p, size_t q) -> bool {
    const Pauli v = p.get(q);
    switch (basis) {
      case Pauli::Z: return pauli_has_x(v);
      case Pauli::X: return pauli_has_z(v);
      case Pauli::Y: return pauli_has_x(v) != pauli_has_z(v);
      case Pauli::I: break;
    }
    throw std::invalid_argument("basis must be X, Y or Z");
  };
  if (basis == Pauli::I) throw std::invalid_argument("basis must be X, Y or Z");

  BitMat m(n, stabilizers.size());
  std::vector<char> b(n, 0);
  for (size_t q = 0; q < n; ++q) {
    for (size_t j = 0; j < stabilizers.size(); ++j)
      if (offending(stabilizers[j], q)) m.flip(q, j);
    b[q] = offending(logical, q);
  }
  auto x = solve(m, b);
  if (!x) return std::nullopt;
  PauliString rep = logical;
  for (size_t j = 0; j < stabilizers.size(); ++j)
    if ((*x)[j]) rep.mul(stabilizers[j]);
  return rep;
}

// --- Surface reconstruction ---

namespace {

// vc[v][c] = the unique edge of color c at vertex v (validated graphs only).
std::vector<std::array<uint32_t, 3>> edges_by_color_at_vertex(const ColoredGraph& g) {
  std::vector<std::array<uint32_t, 3>> vc(g.n_vertices, {0, 0, 0});
  for (uint32_t i = 0; i < g.edges.size(); ++i) {
    vc[g.edges[i].u][g.edges[i].color] = i;
    vc[g.edges[i].v][g.edges[i].color] = i;
  }
  return vc;
}

struct DirectedFace {
  std::vector<uint32_t> edge_ids;
  std::vector<char> forward;  // traversed u -> v?
};

// Walks the bicolored cycle through `start` in the subgraph avoiding color
// `missing`, alternating the two remaining colors.
DirectedFace walk_face(const ColoredGraph& g, const std::vector<std::array<uint32_t, 3>>& vc,
                       uint8_t missing, uint32_t start) {
  DirectedFace face;
  uint32_t edge = start;
  uint32_t v = g.edges[start].u;
  do {
    const auto& e = g.edges[edge];
    face.edge_ids.push_back(edge);
    face.forward.push_back(e.u == v);
    v = (e.u == v) ? e.v : e.u;
    uint8_t next_color = 3 - missing - e.color;  // the other kept color
    edge = vc[v][next_color];
  } while (!(edge == start && v == g.edges[start].u));
  return face;
}

}  // namespace

std::string ManifoldData::surface_name() const {
  const int32_t chi = euler_characteristic;
  if (orientable) {
    if (chi == 2) return "sphere";
    if (chi == 0) return "torus";
    return "orientable genus-" + std::to_string((2 - chi) / 2) + " surface";
  }
  if (chi == 1) return "real projective plane";
  if (chi == 0) return "Klein bottle";
  return "nonorientable genus-" + std::to_string(2 - chi) + " surface";
}

ManifoldData build_manifold(const ColoredGraph& g) {
  require_valid(g);
  const auto vc = edges_by_color_at_vertex(g);
  ManifoldData m;
  m.vertex_count = g.n_vertices;
  m.edge_count = uint32_t(g.edges.size());

  // (face id, direction) incidences per edge; exactly two per edge overall.
  std::vector<std::vector<std::pair<uint32_t, char>>> at_edge(g.edges.size());
  std::vector<DirectedFace> directed;
  for (uint8_t missing = 0; missing < 3; ++missing) {
    std::vector<char> used(g.edges.size(), 0);
    for (uint32_t start = 0; start < g.edges.size(); ++start) {
      if (g.edges[start].color == missing || used[start]) continue;
      DirectedFace face = walk_face(g, vc, missing, start);
      const uint32_t fid = uint32_t(directed.size());
      for (size_t i = 0; i < face.edge_ids.size(); ++i) {
        used[face.edge_ids[i]] = 1;
        at_edge[face.edge_ids[i]].push_back({fid, face.forward[i]});
      }
      m.faces[missing].push_back(face.edge_ids);
      directed.push_back(std::move(face));
    }
  }
  m.face_count = uint32_t(directed.size());
  m.euler_characteristic =
      int32_t(m.vertex_count) - int32_t(m.edge_count) + int32_t(m.face_count);

  // Orientable iff the faces can be flipped so the two traversals of every
  // edge run in opposite directions. 2-color the face-adjacency constraints.
  std::vector<int8_t> flip(directed.size(), -1);
  m.orientable = true;
  for (uint32_t seed = 0; seed < directed.size() && m.orientable; ++seed) {
    if (flip[seed] != -1) continue;
    flip[seed] = 0;
    std::vector<uint32_t> stack{seed};
    while (!stack.empty() && m.orientable) {
      const uint32_t f = stack.back();
      stack.pop_back();
      for (uint32_t eid : directed[f].edge_ids) {
        const auto& inc = at_edge[eid];
        // Same direction twice needs exactly one of the two faces flipped.
        const int8_t want_diff = (inc[0].second == inc[1].second) ? 1 : 0;
        const uint32_t a = inc[0].first, bf = inc[1].first;
        if (flip[a] == -1 && flip[bf] == -1) continue;  // handled from the known side
        const uint32_t known = (flip[a] != -1) ? a : bf;
        const uint32_t other = (known == a) ? bf : a;
        const int8_t need = int8_t(flip[known] ^ want_diff);
        if (flip[other] == -1) {
          flip[other] = need;
          stack.push_back(other);
        } else if (flip[other] != need) {
          m.orientable = false;
          break;
        }
      }
    }
  }
  return m;
}

int32_t encoded_from_homology(const ManifoldData& m) { return 2 - m.euler_characteristic; }

namespace {

// Shortest cycle of a multigraph whose GF(2) edge set lies outside the span
// of `boundaries` (packed over n_edges bits). Standard BFS-tree construction:
// for every root, fundamental cycles through non-tree edges; the shortest
// nontrivial cycle is realized at a root lying on it.
struct HomologyGraph {
  uint32_t n_vertices = 0;
  std::vector<std::pair<uint32_t, uint32_t>> edges;
  std::vector<std::vector<uint64_t>> boundaries;
};

uint32_t graph_systole(const HomologyGraph& hg) {
  const size_t ne = hg.edges.size();
  const size_t words = (ne + 63) / 64;

  // Echelon of the boundary span for membership tests.
  std::vector<std::vector<uint64_t>> rows;
  std::vector<size_t> pivots;
  auto reduce = [&](std::vector<uint64_t> v) {
    for (size_t i = 0; i < rows.size(); ++i)
      if (vec_bit(v, pivots[i]))
        for (size_t w = 0; w < words; ++w) v[w] ^= rows[i][w];
    return v;
  };
  for (const auto& b : hg.boundaries) {
    auto v = reduce(b);
    for (size_t j = 0; j < ne; ++j)
      if (vec_bit(v, j)) {
        rows.push_back(v);
        pivots.push_back(j);
        break;
      }
  }
  auto trivial = [&](const std::vector<uint64_t>& v) {
    auto r = reduce(v);
    for (uint64_t w : r)
      if (w) return false;
    return true;
  };

  std::vector<std::vector<std::pair<uint32_t, uint32_t>>> adj(hg.n_vertices);
  for (uint32_t ei = 0; ei < ne; ++ei) {
    auto [u, v] = hg.edges[ei];
    adj[u].push_back({v, ei});
    if (u != v) adj[v].push_back({u, ei});
  }

  uint32_t best = std::numeric_limits<uint32_t>::max();
  std::vector<uint32_t> dist(hg.n_vertices), parent_edge(hg.n_vertices);
  std::vector<std::vector<uint64_t>> path(hg.n_vertices);
  for (uint32_t root = 0; root < hg.n_vertices; ++root) {
    std::fill(dist.begin(), dist.end(), std::numeric_limits<uint32_t>::max());
    std::vector<uint32_t> queue{root};
    dist[root] = 0;
    parent_edge[root] = uint32_t(ne);
    path[root].assign(words, 0);
    for (size_t head = 0; head < queue.size(); ++head) {
      const uint32_t v = queue[head];
      for (auto [w, ei] : adj[v]) {
        if (dist[w] != std::numeric_limits<uint32_t>::max()) continue;
        dist[w] = dist[v] + 1;
        parent_edge[w] = ei;
        path[w] = path[v];
        path[w][ei >> 6] ^= 1ull << (ei & 63);
        queue.push_back(w);
      }
    }
    for (uint32_t ei = 0; ei < ne; ++ei) {
      auto [u, v] = hg.edges[ei];
      if (dist[u] == std::numeric_limits<uint32_t>::max() ||
          dist[v] == std::numeric_limits<uint32_t>::max())
        continue;
      if (parent_edge[u] == ei || parent_edge[v] == ei) continue;  // tree edge
      const uint32_t len = dist[u] + dist[v] + 1;
      if (len >= best) continue;
      std::vector<uint64_t> cyc(words, 0);
      for (size_t w = 0; w < words; ++w) cyc[w] = path[u][w] ^ path[v][w];
      cyc[ei >> 6] ^= 1ull << (ei & 63);
      if (!trivial(cyc)) best = len;
    }
  }
  return best;
}

}  // namespace

uint32_t homological_distance(const ColoredGraph& g) {
  ManifoldData m = build_manifold(g);
  const auto vc = edges_by_color_at_vertex(g);
  constexpr uint32_t inf = std::numeric_limits<uint32_t>::max();

  // face index (within its missing-color family) of each vertex / each edge.
  std::array<std::vector<uint32_t>, 3> face_of_vertex, face_of_edge;
  for (uint8_t c = 0; c < 3; ++c) {
    face_of_vertex[c].assign(g.n_vertices, 0);
    face_of_edge[c].assign(g.edges.size(), 0);
    for (uint32_t f = 0; f < m.faces[c].size(); ++f)
      for (uint32_t eid : m.faces[c][f]) {
        face_of_edge[c][eid] = f;
        face_of_vertex[c][g.edges[eid].u] = f;
        face_of_vertex[c][g.edges[eid].v] = f;
      }
  }

  uint32_t best = inf;
  for (uint8_t i = 0; i < 3; ++i) {
    const uint8_t j = (i + 1) % 3, kcol = (i + 2) % 3;
    const auto i_edges = g.color_edges(i);
    const size_t ne = i_edges.size();
    const size_t words = (ne + 63) / 64;
    std::vector<uint32_t> pos(g.edges.size(), 0);
    for (uint32_t t = 0; t < ne; ++t) pos[i_edges[t]] = t;

    // Shrunk lattice: i-faces joined by i-edges.
    HomologyGraph gi;
    gi.n_vertices = uint32_t(m.faces[i].size());
    for (uint32_t eid : i_edges)
      gi.edges.push_back({face_of_vertex[i][g.edges[eid].u], face_of_vertex[i][g.edges[eid].v]});
    // Its faces are the j- and k-faces, each bounded by its i-edges.
    for (uint8_t c : {j, kcol})
      for (const auto& face : m.faces[c]) {
        std::vector<uint64_t> vec(words, 0);
        for (uint32_t eid : face)
          if (g.edges[eid].color == i) vec[pos[eid] >> 6] ^= 1ull << (pos[eid] & 63);
        gi.boundaries.push_back(std::move(vec));
      }

    // Dual: j-faces and k-faces joined through the i-edges they share; its
    // faces sit on the i-faces, bounded by the i-edges at the face's corners.
    HomologyGraph gd;
    gd.n_vertices = uint32_t(m.faces[j].size() + m.faces[kcol].size());
    for (uint32_t eid : i_edges)
      gd.edges.push_back(
          {face_of_edge[j][eid], uint32_t(m.faces[j].size()) + face_of_edge[kcol][eid]});
    for (const auto& face : m.faces[i]) {
      std::vector<uint64_t> vec(words, 0);
      std::vector<char> seen_vertex(g.n_vertices, 0);
      for (uint32_t eid : face)
        for (uint32_t v : {g.edges[eid].u, g.edges[eid].v}) {
          if (seen_vertex[v]) continue;
          seen_vertex[v] = 1;
          const uint32_t ie = vc[v][i];
          vec[pos[ie] >> 6] ^= 1ull << (pos[ie] & 63);
        }
      gd.boundaries.push_back(std::move(vec));
    }

    const uint32_t sys = graph_systole(gi);
    const uint32_t sys_dual = graph_systole(gd);
    const uint32_t di = std::min(sys == inf ? inf : 2 * sys, sys_dual);
    best = std::min(best, di);
  }
  return best == inf ? 0 : best;
}

}  // namespace floq
