#include "floq/floquet.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <utility>

#include "floq/analysis.hpp"
#include "floq/engine.hpp"

namespace floq {

MeasurementSchedule honeycomb_schedule() {
  return {{{0, Pauli::X}, {1, Pauli::Y}, {2, Pauli::Z}}};
}

MeasurementSchedule css_schedule() {
  return {{{0, Pauli::X},
           {1, Pauli::Z},
           {2, Pauli::X},
           {0, Pauli::Z},
           {1, Pauli::X},
           {2, Pauli::Z}}};
}

PauliString edge_check(uint32_t n_qubits, const ColoredEdge& e, Pauli type) {
  PauliString p(n_qubits);
  p.set(e.u, type);
  p.set(e.v, type);
  return p;
}

DerivedRelations derive_detectors(const ErasureCircuit& c,
                                  const std::vector<PauliString>& end_paulis) {
  SymbolicRun run = run_symbolic(c);
  DerivedRelations out;
  for (uint32_t o = 0; o < c.n_outcomes(); ++o) {
    const auto& r = run.results[o];
    if (r.deterministic && !r.relation.empty()) out.detectors.push_back({r.relation, r.offset});
  }
  const uint32_t virtual_id = c.n_outcomes();
  for (const auto& p : end_paulis) {
    Tableau copy = run.tableau;
    SymbolicResult res = copy.measure_symbolic(p, virtual_id);
    if (!res.deterministic) {
      out.logicals.push_back(std::nullopt);
      continue;
    }
    IdSet rel = res.relation;
    if (!rel.empty() && rel.back() == virtual_id) rel.pop_back();
    out.logicals.push_back(LogicalObservable{std::move(rel), res.offset});
  }
  return out;
}

namespace {

// Records, per outcome id, which scheduled edge check produced it:
// (round index, edge index), or (-1, -1) for everything else.
using OutcomeSrc = std::vector<std::pair<int32_t, int32_t>>;

void note_src(OutcomeSrc& src, const ErasureCircuit& c, int32_t round, int32_t edge) {
  src.resize(c.n_outcomes(), {-1, -1});
  src.back() = {round, edge};
}

void append_em_round(ErasureCircuit& c, const ColoredGraph& g, uint8_t color, Pauli type,
                     int32_t round, OutcomeSrc& src) {
  for (uint32_t ei : g.color_edges(color)) {
    c.measure_pp(g.edges[ei].u, g.edges[ei].v, type);
    note_src(src, c, round, int32_t(ei));
  }
  c.tick();
  for (uint32_t q = 0; q < g.n_vertices; ++q) c.erasure_check_with_reset(q);
  c.tick();
}

void append_ancilla_round(ErasureCircuit& c, const ColoredGraph& g, uint8_t color, Pauli type,
                          int32_t round, OutcomeSrc& src) {
  const auto edges = g.color_edges(color);
  const uint32_t n = g.n_vertices;
  for (uint32_t j = 0; j < edges.size(); ++j) c.prep(n + j, Pauli::X);
  c.tick();
  for (uint32_t j = 0; j < edges.size(); ++j)
    c.controlled_pauli(n + j, g.edges[edges[j]].u, type);
  c.tick();
  for (uint32_t j = 0; j < edges.size(); ++j) {
    c.erasure_check_with_reset(g.edges[edges[j]].u);
    c.erasure_check_with_reset(n + j);
  }
  c.tick();
  for (uint32_t j = 0; j < edges.size(); ++j)
    c.controlled_pauli(n + j, g.edges[edges[j]].v, type);
  c.tick();
  for (uint32_t j = 0; j < edges.size(); ++j) {
    c.erasure_check_with_reset(g.edges[edges[j]].v);
    c.readout(n + j, Pauli::X);
    note_src(src, c, round, int32_t(edges[j]));
  }
  c.tick();
}

struct MemoryLayout {
  ErasureCircuit circuit;
  uint32_t first_noisy_op = 0;
  uint32_t end_noisy_op = 0;
  uint32_t final_outcome_base = 0;  // first outcome id of the closing data readout
  OutcomeSrc outcome_src;
};

MemoryLayout build_memory_circuit(const ColoredGraph& g, const MeasurementSchedule& s,
                                  Scheme scheme, uint32_t rounds, NoiseParams noise,
                                  Pauli data_basis) {
  const uint32_t n = g.n_vertices;
  const uint32_t n_total = scheme == Scheme::Em ? n : n + n / 2;
  ErasureCircuit c(n_total, noise);
  OutcomeSrc src;
  for (uint32_t q = 0; q < n; ++q) c.prep(q, data_basis);
  c.tick();
  auto append_round = [&](uint32_t r) {
    const auto& round = s.rounds[r % s.period()];
    if (scheme == Scheme::Em)
      append_em_round(c, g, round.color, round.type, int32_t(r), src);
    else
      append_ancilla_round(c, g, round.color, round.type, int32_t(r), src);
  };
  for (uint32_t r = 0; r < s.period(); ++r) append_round(r);  // noise-free warm-up
  const uint32_t first_noisy = uint32_t(c.ops().size());
  for (uint32_t r = 0; r < rounds; ++r) append_round(s.period() + r);
  const uint32_t end_noisy = uint32_t(c.ops().size());
  const uint32_t final_base = c.n_outcomes();
  for (uint32_t q = 0; q < n; ++q) c.readout(q, data_basis);
  c.tick();
  src.resize(c.n_outcomes(), {-1, -1});

  std::vector<uint8_t> noisy(c.ops().size(), 0);
  for (uint32_t i = first_noisy; i < end_noisy; ++i) noisy[i] = 1;
  return {instrument_noise(insert_erasure_locations(c), noisy), first_noisy, end_noisy,
          final_base, std::move(src)};
}

PauliString extend_to(const PauliString& p, uint32_t n_total) {
  PauliString out(n_total);
  for (uint32_t q = 0; q < p.n_qubits(); ++q) out.set(q, p.get(q));
  return out;
}

// Nonzero index subsets of the logical-class generators, cheapest classes
// first, so single generators are preferred over products.
std::vector<uint32_t> combo_order(size_t count) {
  std::vector<uint32_t> combos;
  for (uint32_t m = 1; m < (1u << count); ++m) combos.push_back(m);
  std::stable_sort(combos.begin(), combos.end(), [](uint32_t a, uint32_t b) {
    return __builtin_popcount(a) < __builtin_popcount(b);
  });
  return combos;
}

// The derived family is triangular — every relation ends with its own
// defining outcome id and those maxima are distinct — and it spans every
// noise-free-constant outcome parity of the circuit.
struct TriangularFamily {
  const std::vector<Detector>& dets;
  std::map<uint32_t, uint32_t> by_max;  // defining outcome id -> family index

  explicit TriangularFamily(const std::vector<Detector>& family) : dets(family) {
    for (uint32_t i = 0; i < family.size(); ++i)
      if (!by_max.emplace(family[i].outcomes.back(), i).second)
        throw std::logic_error("detector maxima are not distinct");
  }

  struct Reduction {
    bool constant = false;  // r is a combination of family members
    IdSet members;          // family indices used
    bool expected = false;  // noise-free parity of r
  };

  Reduction reduce(IdSet r) const {
    Reduction out;
    while (!r.empty()) {
      auto it = by_max.find(r.back());
      if (it == by_max.end()) return out;  // parity varies from shot to shot
      xor_into(r, dets[it->second].outcomes);
      xor_into(out.members, {it->second});
      out.expected ^= dets[it->second].expected;
    }
    out.constant = true;
    return out;
  }
};

// GF(2) echelon over outcome-id sets that also carries the noise-free parity
// of every stored combination. reduce() rewrites r modulo the rows (updating
// `parity`, which the caller seeds with r's own noise-free parity); the
// residue is empty exactly when r lies in the span.
struct ParityEchelon {
  std::map<uint32_t, std::pair<IdSet, bool>> rows;  // pivot id -> (set, parity)

  IdSet reduce(IdSet r, bool& parity) const {
    while (!r.empty()) {
      auto it = rows.find(r.back());
      if (it == rows.end()) break;
      xor_into(r, it->second.first);
      parity ^= it->second.second;
    }
    return r;
  }

  bool insert(IdSet r, bool parity) {
    r = reduce(std::move(r), parity);
    if (r.empty()) return false;
    const uint32_t pivot = r.back();
    rows.emplace(pivot, std::make_pair(std::move(r), parity));
    return true;
  }
};

// Proposes the local detector shapes a scheduled face can support. Each round
// that measures one of the face's two boundary colors contributes a
// measurement event for the operator "round type on the face"; two adjacent
// rounds covering both boundary colors contribute a combined event for the
// product operator. Grouping events by the operator they measure gives
// streams of repeated measurements, and the natural candidates are the first
// visit on its own (pinned by initialization when the operator commutes with
// everything scheduled before it), each pair of consecutive visits, and the
// last visit closed against the transversal data readout. Constancy is not
// assumed here — the caller verifies every proposal against the symbolically
// derived family and keeps only the survivors.
std::vector<IdSet> face_comparison_candidates(
    const ColoredGraph& g, const MeasurementSchedule& s, uint32_t total_rounds,
    const std::vector<std::pair<int32_t, int32_t>>& outcome_src, uint32_t final_outcome_base) {
  const uint32_t n = g.n_vertices;
  const uint32_t period = s.period();
  std::map<std::pair<int32_t, int32_t>, uint32_t> at;  // (round, edge) -> outcome id
  for (uint32_t id = 0; id < outcome_src.size(); ++id)
    if (outcome_src[id].first >= 0) at.emplace(outcome_src[id], id);
  const ManifoldData manifold = build_manifold(g);

  std::vector<IdSet> out;
  for (uint8_t c = 0; c < 3; ++c) {
    for (const auto& cycle : manifold.faces[c]) {
      std::array<std::vector<uint32_t>, 3> triples;  // face edges by color
      std::set<uint32_t> verts;
      for (uint32_t e : cycle) {
        triples[g.edges[e].color].push_back(e);
        verts.insert(g.edges[e].u);
        verts.insert(g.edges[e].v);
      }
      auto accumulate_round = [&](uint32_t r, PauliString& op, IdSet& ids) {
        const auto& rd = s.rounds[r % period];
        for (uint32_t e : triples[rd.color]) {
          op.mul(edge_check(n, g.edges[e], rd.type));
          xor_into(ids, {at.at({int32_t(r), int32_t(e)})});
        }
      };
      struct Event {
        std::string op_key;
        IdSet ids;
      };
      std::vector<Event> events;  // chronological
      for (uint32_t r = 0; r < total_rounds; ++r) {
        if (s.rounds[r % period].color == c) continue;  // spoke round, face untouched
        PauliString op(n);
        IdSet ids;
        accumulate_round(r, op, ids);
        op.set_phase(0);
        events.push_back({op.str(), std::move(ids)});
        if (r + 1 < total_rounds) {
          const auto& next = s.rounds[(r + 1) % period];
          if (next.color != c && next.color != s.rounds[r % period].color) {
            PauliString op2(n);
            IdSet ids2;
            accumulate_round(r, op2, ids2);
            accumulate_round(r + 1, op2, ids2);
            op2.set_phase(0);
            events.push_back({op2.str(), std::move(ids2)});
          }
        }
      }
      IdSet closing;  // the face's transversal readout bits
      for (uint32_t q : verts) xor_into(closing, {final_outcome_base + 2 * q + 1});
      std::map<std::string, std::vector<size_t>> streams;
      for (size_t i = 0; i < events.size(); ++i) streams[events[i].op_key].push_back(i);
      for (const auto& [key, stream] : streams) {
        out.push_back(events[stream.front()].ids);
        for (size_t k = 1; k < stream.size(); ++k) {
          IdSet cmp = events[stream[k - 1]].ids;
          xor_into(cmp, events[stream[k]].ids);
          out.push_back(std::move(cmp));
        }
        IdSet close = events[stream.back()].ids;
        xor_into(close, closing);
        out.push_back(std::move(close));
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const IdSet& a, const IdSet& b) {
    if (a.back() != b.back()) return a.back() < b.back();
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

CompiledMemory compile(const ColoredGraph& g, const MeasurementSchedule& s, Scheme scheme,
                       uint32_t rounds, NoiseParams noise, Pauli logical_sel) {
  require_valid(g);
  if (s.period() == 0) throw std::invalid_argument("schedule has no rounds");
  for (const auto& r : s.rounds) {
    if (r.color > 2) throw std::invalid_argument("schedule color out of range");
    if (r.type == Pauli::I) throw std::invalid_argument("schedule round type must be X, Y or Z");
  }
  if (rounds < 2 * s.period())
    throw std::invalid_argument("memory needs at least two full periods of noisy rounds");
  if (!noise.valid()) throw std::invalid_argument("noise rates must lie in [0, 1]");

  // A Floquet code has no static logical operators — every Pauli commuting
  // with all checks is itself a check product — so candidates come from the
  // instantaneous stabilizer group active when the data qubits are read out:
  // basis-pure representatives of that phase's logical classes. A valid
  // observable must have noise-free-constant outcome parity, i.e. its relation
  // must be a combination of the derived family (which spans every constant
  // parity). The family members used by the independent logical combinations
  // are then withdrawn from the detector list — basis exchange — so the
  // remaining detectors carry no logical information and the observable's
  // parity is not a function of them.
  const auto phases = steady_phase_groups(g, s);
  const auto& final_gens = phases[(rounds - 1) % s.period()];
  const auto classes = logical_basis(final_gens, g.n_vertices);
  if (classes.empty() || classes.size() > 10)
    throw std::logic_error("readout-phase logical class count is unusable");

  std::vector<Pauli> bases{logical_sel};
  for (Pauli b : {Pauli::Z, Pauli::X, Pauli::Y})
    if (b != logical_sel) bases.push_back(b);

  for (Pauli basis : bases) {
    std::vector<PauliString> candidates;
    for (uint32_t combo : combo_order(classes.size())) {
      PauliString cls(g.n_vertices);
      for (size_t j = 0; j < classes.size(); ++j)
        if (combo & (1u << j)) cls.mul(classes[j]);
      auto rep = pure_basis_representative(cls, final_gens, basis);
      if (!rep) continue;
      rep->set_phase(0);
      if (std::none_of(candidates.begin(), candidates.end(),
                       [&](const PauliString& c) { return c.bits_equal(*rep); }))
        candidates.push_back(std::move(*rep));
    }
    if (candidates.empty()) continue;

    MemoryLayout built = build_memory_circuit(g, s, scheme, rounds, noise, basis);
    std::vector<PauliString> ends;
    for (const auto& cand : candidates)
      ends.push_back(extend_to(cand, built.circuit.n_qubits()));
    const DerivedRelations derived = derive_detectors(built.circuit, ends);
    const TriangularFamily family(derived.detectors);

    std::optional<size_t> tracked_ci;
    IdSet tracked_outcomes;
    bool tracked_expected = false;
    std::vector<IdSet> echelon;   // independent logical combinations, by family index
    std::vector<uint32_t> drawn;  // family members exchanged out of the detector list
    for (size_t ci = 0; ci < candidates.size(); ++ci) {
      const auto& log = derived.logicals[ci];
      if (!log) continue;
      // The symbolic relation predicts the end value of the candidate from the
      // check record; the candidate's value also equals the XOR of its qubits'
      // closing readout bits. The XOR of the two predictions is the
      // initialization-versus-readout comparison the memory is scored on, and
      // its parity is constant in every noise-free run.
      IdSet obs = log->outcomes;
      for (uint32_t q = 0; q < g.n_vertices; ++q)
        if (candidates[ci].get(q) != Pauli::I)
          xor_into(obs, {built.final_outcome_base + 2 * q + 1});
      if (obs.empty()) continue;
      auto red = family.reduce(obs);
      if (!red.constant || red.expected != log->expected)
        throw std::logic_error("memory comparison parity is not a constant");
      IdSet lam = red.members;
      for (bool again = true; again;) {
        again = false;
        for (const auto& row : echelon)
          if (!lam.empty() && lam.back() == row.back()) {
            xor_into(lam, row);
            again = true;
          }
      }
      if (lam.empty()) continue;  // dependent on combinations already drawn
      for (auto& row : echelon)
        if (set_contains(row, lam.back())) xor_into(row, lam);
      drawn.push_back(lam.back());
      echelon.push_back(std::move(lam));
      if (!tracked_ci) {
        tracked_ci = ci;
        tracked_outcomes = std::move(obs);
        tracked_expected = red.expected;
      }
    }
    if (!tracked_ci) continue;

    std::sort(drawn.begin(), drawn.end());

    // The kept detectors are exactly the face-comparison candidates that the
    // derived family confirms as noise-free constants (and that add a new
    // GF(2) dimension). The raw family spans a little more — global seam
    // parities tied to the untracked cycle operators of the torus — but those
    // combinations run through the whole time extent, so a single fault in
    // the bulk flips them in addition to its two local comparisons, which
    // breaks the pairwise structure minimum-weight matching relies on. They
    // carry no information a matching decoder can use and are dropped; every
    // kept detector is still a verified noiseless constant.
    std::map<uint32_t, uint32_t> pool;  // defining outcome id -> family index, drawn excluded
    for (uint32_t i = 0; i < derived.detectors.size(); ++i)
      if (!set_contains(drawn, i)) pool.emplace(derived.detectors[i].outcomes.back(), i);
    auto in_pool_span = [&](IdSet r, bool& parity) {
      while (!r.empty()) {
        auto it = pool.find(r.back());
        if (it == pool.end()) return false;
        xor_into(r, derived.detectors[it->second].outcomes);
        parity ^= derived.detectors[it->second].expected;
      }
      return true;
    };

    std::vector<Detector> detectors;
    ParityEchelon span;
    for (IdSet& cand : face_comparison_candidates(g, s, s.period() + rounds, built.outcome_src,
                                                  built.final_outcome_base)) {
      bool parity = false;
      if (!in_pool_span(cand, parity)) continue;  // shot-dependent, or carries logical content
      if (!span.insert(cand, parity)) continue;   // dependent on comparisons already kept
      detectors.push_back({std::move(cand), parity});
    }

    CompiledMemory mem{std::move(built.circuit),
                       std::move(detectors),
                       LogicalObservable{std::move(tracked_outcomes), tracked_expected},
                       scheme,
                       g.n_vertices,
                       rounds,
                       s.period(),
                       basis,
                       ends[*tracked_ci],
                       built.first_noisy_op,
                       built.end_noisy_op};
    return mem;
  }
  throw std::logic_error("no basis-pure readout-phase logical closes into a constant parity");
}

}  // namespace floq
