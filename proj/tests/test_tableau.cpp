#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <vector>

#include "floq/pauli.hpp"
#include "floq/rng.hpp"
#include "floq/tableau.hpp"
#include "support/oracles.hpp"

using namespace floq;
using namespace floq::testing;

namespace {

PauliString random_hermitian_pauli(size_t n, Rng& rng, bool allow_identity = false) {
  for (;;) {
    PauliString p(n);
    for (size_t q = 0; q < n; ++q) p.set(q, static_cast<Pauli>(rng.next_below(4)));
    if (rng.next_below(2)) p.set_phase(2);
    if (allow_identity || !p.is_identity_bits()) return p;
  }
}

// Runs a random sequence of gates / Pauli ops / measurements / resets /
// trace-outs on both the tableau and the dense density-matrix oracle, checking
// agreement after every step.
void fuzz_against_density(uint64_t seed, size_t n, int steps) {
  Rng rng(seed);
  Tableau tab(n);
  DensityMatrix rho(n);
  REQUIRE(density_from_tableau(tab).distance_to(rho) < 1e-9);

  for (int step = 0; step < steps; ++step) {
    const uint32_t kind = rng.next_below(10);
    if (kind < 4) {  // single-qubit gate
      const auto g = static_cast<Gate1Q>(rng.next_below(6));
      const size_t q = rng.next_below(static_cast<uint32_t>(n));
      tab.apply_gate1(g, q);
      rho.apply_gate1(g, q);
    } else if (kind < 7 && n >= 2) {  // two-qubit gate
      const auto g = static_cast<Gate2Q>(rng.next_below(3));
      const size_t a = rng.next_below(static_cast<uint32_t>(n));
      size_t b = rng.next_below(static_cast<uint32_t>(n));
      while (b == a) b = rng.next_below(static_cast<uint32_t>(n));
      tab.apply_gate2(g, a, b);
      rho.apply_gate2(g, a, b);
    } else if (kind == 7) {  // Pauli product measurement
      const PauliString p = random_hermitian_pauli(n, rng);
      const double prob_plus = rho.prob_plus(p);
      const MeasureResult r = tab.measure(p, rng);
      if (r.deterministic) {
        CHECK(std::abs(prob_plus - (r.value ? 0.0 : 1.0)) < 1e-9);
      } else {
        CHECK(std::abs(prob_plus - 0.5) < 1e-9);
      }
      const double branch = rho.collapse(p, r.value);
      CHECK(branch > 1e-12);
    } else if (kind == 8) {  // reset in a random basis/sign
      const size_t q = rng.next_below(static_cast<uint32_t>(n));
      const Pauli basis = static_cast<Pauli>(1 + rng.next_below(3));
      const int sign = rng.next_below(2) ? 1 : -1;
      tab.reset_qubit(q, basis, sign);
      rho.trace_out_refill(q);
      // Collapse the maximally mixed qubit onto the target eigenstate:
      // measure basis at q and flip if needed, matching reset semantics.
      PauliString p(n);
      p.set(q, basis);
      const bool want_value = sign < 0;
      rho.collapse(p, want_value);
    } else {  // trace out (demote to maximally mixed)
      const size_t q = rng.next_below(static_cast<uint32_t>(n));
      tab.trace_out(q);
      rho.trace_out_refill(q);
    }
    tab.check_invariants();
    CHECK(density_from_tableau(tab).distance_to(rho) < 1e-8);
  }
}

}  // namespace

TEST_CASE("initial state is all zeros") {
  Tableau tab(3);
  DensityMatrix rho(3);
  CHECK(density_from_tableau(tab).distance_to(rho) < 1e-12);
  tab.check_invariants();
  CHECK(tab.stabilizers().size() == 3);
}

TEST_CASE("maximally mixed state has no stabilizer rows") {
  Tableau tab = Tableau::maximally_mixed(2);
  CHECK(tab.stabilizers().empty());
  DensityMatrix rho = DensityMatrix::maximally_mixed(2);
  CHECK(density_from_tableau(tab).distance_to(rho) < 1e-12);
  tab.check_invariants();
}

TEST_CASE("two-qubit conjugation tables match dense gate action") {
  Rng rng(4242);
  for (int g = 0; g < 3; ++g) {
    for (int rep = 0; rep < 20; ++rep) {
      Tableau tab(2);
      DensityMatrix rho(2);
      // Randomize the state first so the gate acts on nontrivial rows.
      for (int k = 0; k < 6; ++k) {
        const auto g1 = static_cast<Gate1Q>(rng.next_below(6));
        const size_t q = rng.next_below(2);
        tab.apply_gate1(g1, q);
        rho.apply_gate1(g1, q);
      }
      tab.apply_gate2(static_cast<Gate2Q>(g), 0, 1);
      rho.apply_gate2(static_cast<Gate2Q>(g), 0, 1);
      tab.apply_gate2(static_cast<Gate2Q>(g), 1, 0);
      rho.apply_gate2(static_cast<Gate2Q>(g), 1, 0);
      tab.check_invariants();
      CHECK(density_from_tableau(tab).distance_to(rho) < 1e-10);
    }
  }
}

TEST_CASE("deterministic measurement signs") {
  Tableau tab(2);
  tab.apply_gate1(Gate1Q::X, 0);  // |10>
  Rng rng(2);
  MeasureResult r = tab.measure(PauliString::from_string("ZI"), rng);
  CHECK(r.deterministic);
  CHECK(r.value == true);

  r = tab.measure(PauliString::from_string("IZ"), rng);
  CHECK(r.deterministic);
  CHECK(r.value == false);

  // -ZI has definite outcome "true" flipped: -Z|1> = +|1>.
  r = tab.measure(PauliString::from_string("-ZI"), rng);
  CHECK(r.deterministic);
  CHECK(r.value == false);
}

TEST_CASE("measuring identity and minus identity bits") {
  Tableau tab(1);
  Rng rng(3);
  MeasureResult r = tab.measure(PauliString::from_string("I"), rng);
  CHECK(r.deterministic);
  CHECK(r.value == false);
  r = tab.measure(PauliString::from_string("-I"), rng);
  CHECK(r.deterministic);
  CHECK(r.value == true);
}

TEST_CASE("random measurement on mixed qubit appends a stabilizer") {
  Tableau tab = Tableau::maximally_mixed(2);
  Rng rng(17);
  const MeasureResult r = tab.measure(PauliString::from_string("XX"), rng);
  CHECK(!r.deterministic);
  CHECK(tab.stabilizers().size() == 1);
  tab.check_invariants();
  // Now XX is determined; IZ measurement should still be random.
  const MeasureResult r2 = tab.measure(PauliString::from_string("XX"), rng);
  CHECK(r2.deterministic);
  CHECK(r2.value == r.value);
}

TEST_CASE("trace out one half of a Bell pair leaves no stabilizers") {
  Tableau tab(2);
  tab.apply_gate1(Gate1Q::H, 0);
  tab.apply_gate2(Gate2Q::CX, 0, 1);
  CHECK(tab.stabilizers().size() == 2);
  tab.trace_out(0);
  tab.check_invariants();
  // The partner must be maximally mixed: no surviving stabilizer rows at all.
  CHECK(tab.stabilizers().empty());
  DensityMatrix rho = DensityMatrix::maximally_mixed(2);
  CHECK(density_from_tableau(tab).distance_to(rho) < 1e-12);
}

TEST_CASE("reset of an entangled qubit mixes its partner") {
  Tableau tab(2);
  tab.apply_gate1(Gate1Q::H, 0);
  tab.apply_gate2(Gate2Q::CX, 0, 1);
  tab.reset_qubit(0);
  tab.check_invariants();
  CHECK(tab.stabilizers().size() == 1);
  CHECK(tab.has_single_qubit_stabilizer(0));
  CHECK(!tab.has_single_qubit_stabilizer(1));
  DensityMatrix rho = DensityMatrix::maximally_mixed(2);
  PauliString z0(2);
  z0.set(0, Pauli::Z);
  rho.collapse(z0, false);
  CHECK(density_from_tableau(tab).distance_to(rho) < 1e-12);
}

TEST_CASE("group sign lookup") {
  Tableau tab(2);
  tab.apply_gate1(Gate1Q::H, 0);
  tab.apply_gate2(Gate2Q::CX, 0, 1);  // stabilizers XX, ZZ
  auto s = tab.group_sign(PauliString::from_string("XX"));
  REQUIRE(s.has_value());
  CHECK(*s == 1);
  s = tab.group_sign(PauliString::from_string("-YY"));
  REQUIRE(s.has_value());
  CHECK(*s == 1);  // XX * ZZ = -YY
  s = tab.group_sign(PauliString::from_string("YY"));
  REQUIRE(s.has_value());
  CHECK(*s == -1);
  CHECK(!tab.group_sign(PauliString::from_string("XI")).has_value());
}

TEST_CASE("fuzz small systems against the density oracle") {
  fuzz_against_density(101, 1, 60);
  fuzz_against_density(202, 2, 80);
  fuzz_against_density(303, 3, 80);
  fuzz_against_density(404, 4, 80);
  fuzz_against_density(505, 4, 80);
}

TEST_CASE("symbolic measurement relations track concrete outcomes") {
  // Build a random circuit; record symbolic relations for deterministic
  // measurements. Then replay concretely many times: each relation must hold
  // (XOR of referenced outcomes equals the recorded offset).
  Rng build_rng(31337);
  const size_t n = 3;
  struct Op {
    int kind;  // 0 = gate1, 1 = gate2, 2 = measure
    Gate1Q g1{};
    Gate2Q g2{};
    size_t a{}, b{};
    PauliString p{0};
  };
  std::vector<Op> ops;
  for (int step = 0; step < 40; ++step) {
    Op op;
    const uint32_t kind = build_rng.next_below(3);
    op.kind = static_cast<int>(kind);
    if (kind == 0) {
      op.g1 = static_cast<Gate1Q>(build_rng.next_below(6));
      op.a = build_rng.next_below(n);
    } else if (kind == 1) {
      op.g2 = static_cast<Gate2Q>(build_rng.next_below(3));
      op.a = build_rng.next_below(n);
      op.b = build_rng.next_below(n);
      while (op.b == op.a) op.b = build_rng.next_below(n);
    } else {
      op.p = random_hermitian_pauli(n, build_rng);
    }
    ops.push_back(op);
  }

  // Symbolic pass.
  Tableau sym(n, /*track_symbols=*/true);
  std::vector<SymbolicResult> relations;
  uint32_t next_id = 0;
  for (const Op& op : ops) {
    if (op.kind == 0) {
      sym.apply_gate1(op.g1, op.a);
    } else if (op.kind == 1) {
      sym.apply_gate2(op.g2, op.a, op.b);
    } else {
      relations.push_back(sym.measure_symbolic(op.p, next_id++));
      sym.check_invariants();
    }
  }

  // Concrete replays.
  for (uint64_t seed = 1; seed <= 20; ++seed) {
    Rng rng(seed);
    Tableau tab(n);
    std::vector<bool> outcomes;
    size_t mi = 0;
    for (const Op& op : ops) {
      if (op.kind == 0) {
        tab.apply_gate1(op.g1, op.a);
      } else if (op.kind == 1) {
        tab.apply_gate2(op.g2, op.a, op.b);
      } else {
        const MeasureResult r = tab.measure(op.p, rng);
        CHECK(r.deterministic == relations[mi].deterministic);
        outcomes.push_back(r.value);
        ++mi;
      }
    }
    for (size_t k = 0; k < relations.size(); ++k) {
      const SymbolicResult& rel = relations[k];
      if (!rel.deterministic) continue;
      // rel.relation lists outcome ids whose XOR, plus offset, gives outcome k.
      // The last id is k itself by construction.
      bool x = rel.offset;
      for (uint32_t id : rel.relation) {
        if (id != k) x = x ^ outcomes[id];
      }
      CHECK(x == static_cast<bool>(outcomes[k]));
    }
  }
}

TEST_CASE("invariant checker rejects a corrupted pairing") {
  Tableau tab(2);
  tab.apply_gate1(Gate1Q::H, 0);
  tab.apply_gate2(Gate2Q::CX, 0, 1);
  tab.check_invariants();  // sanity: valid state passes
  // There's no public mutation that corrupts the tableau, which is the point;
  // just confirm a full random workout keeps invariants intact.
  Rng rng(8);
  for (int step = 0; step < 50; ++step) {
    tab.apply_gate1(static_cast<Gate1Q>(rng.next_below(6)), rng.next_below(2));
    tab.apply_gate2(static_cast<Gate2Q>(rng.next_below(3)), 0, 1);
    tab.check_invariants();
  }
}
