#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <vector>

#include "floq/circuit.hpp"
#include "floq/convert.hpp"
#include "floq/engine.hpp"
#include "floq/rng.hpp"
#include "floq/segments.hpp"
#include "support/erasure_oracle.hpp"

using namespace floq;
using namespace floq::testing;

namespace {

ErasureCircuit instrumented(const ErasureCircuit& c) {
  return instrument_noise(insert_erasure_locations(c));
}

// Worked two-qubit cycle: data wire checked mid-circuit, both wires read out.
ErasureCircuit cycle_circuit(NoiseParams noise) {
  ErasureCircuit c(2, noise);
  c.reset(0);
  c.prep(1);
  c.tick();
  c.controlled_pauli(0, 1, Pauli::X);
  c.tick();
  c.erasure_check_with_reset(0);
  c.tick();
  c.readout(0, Pauli::Z);
  c.readout(1, Pauli::Z);
  return instrumented(c);
}

// A qubit consumed by the final readout of its wire leaves the computation;
// its post-readout state is discarded before the comparison (the real erased
// readout leaves the wire mixed, the converted kept readout projects it; the
// difference is never observable). Every other tensor factor, and every
// outcome weight, must agree exactly.
void require_instrument_match(const ErasureCircuit& full) {
  const auto segs = extract_segments(full);
  const auto direct = discard_measured_wire_ends(full, exact_direct_distribution(full));
  const auto converted =
      discard_measured_wire_ends(full, exact_converted_distribution(full, segs));
  CHECK(joint_total(direct) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(joint_total(converted) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(joint_distance(direct, converted) < 1e-12);
}

void require_histogram_match(const std::map<std::vector<uint8_t>, size_t>& hist,
                             const std::map<std::vector<uint8_t>, double>& want, size_t n_shots) {
  for (const auto& [key, count] : hist) {
    INFO("observed an outcome string of probability zero, count ", count);
    CHECK(want.count(key) == 1);
  }
  for (const auto& [key, p] : want) {
    const auto it = hist.find(key);
    const double emp = it == hist.end() ? 0.0 : static_cast<double>(it->second) / n_shots;
    const double sd = std::sqrt(std::max(p * (1.0 - p), 1e-12) / n_shots);
    INFO("outcome-string probability off: want ", p, " got ", emp);
    CHECK(std::abs(emp - p) < 6.0 * sd + 2e-4);
  }
}

std::map<std::vector<uint8_t>, double> weights_of(const JointDistribution& d) {
  std::map<std::vector<uint8_t>, double> out;
  for (const auto& [key, entry] : d) out[key] = entry.weight;
  return out;
}

}  // namespace

TEST_CASE("direct and converted instruments agree exactly") {
  // The two dense-matrix evaluations of the same circuit — per-op erasure
  // semantics versus kept ops plus posterior-weighted slot depolarizations —
  // must produce the same joint distribution over outcome strings AND the
  // same conditional post-circuit state for every string.
  SUBCASE("controlled-Pauli with a mid-wire check-with-reset") {
    require_instrument_match(cycle_circuit({0.1, 0.01, 0.02}));
  }
  SUBCASE("two-qubit measurement, standalone check, one-qubit gate") {
    ErasureCircuit c(2, {0.12, 0.015, 0.04});
    c.prep(0, Pauli::X);
    c.prep(1);
    c.tick();
    c.measure_pp(0, 1, Pauli::Y);
    c.tick();
    c.erasure_check(0);
    c.gate1(Gate1Q::S, 1);
    c.tick();
    c.readout(0, Pauli::X);
    c.erasure_check_with_reset(1);
    require_instrument_match(instrumented(c));
  }
  SUBCASE("plain resets, a preparation boundary and an open wire end") {
    ErasureCircuit c(2, {0.15, 0.008, 0.03});
    c.reset(0);
    c.prep(1);
    c.tick();
    c.controlled_pauli(0, 1, Pauli::Z);
    c.tick();
    c.reset(0);
    c.tick();
    c.controlled_pauli(0, 1, Pauli::X);
    c.tick();
    c.prep(0, Pauli::Z, -1);
    c.tick();
    c.readout(0, Pauli::Z);
    require_instrument_match(instrumented(c));
  }
  SUBCASE("single wire through one-qubit gates") {
    ErasureCircuit c(1, {0.2, 0.02, 0.05});
    c.prep(0);
    c.tick();
    c.gate1(Gate1Q::H, 0);
    c.tick();
    c.gate1(Gate1Q::S, 0);
    c.tick();
    c.readout(0, Pauli::X);
    require_instrument_match(instrumented(c));
  }
  SUBCASE("a re-prepared wire restores full-state agreement with no discards") {
    // Mid-wire readout followed by a fresh preparation: the post-readout
    // discrepancy is overwritten, so even the raw instruments coincide.
    ErasureCircuit c(2, {0.1, 0.012, 0.03});
    c.prep(0);
    c.prep(1);
    c.tick();
    c.controlled_pauli(0, 1, Pauli::X);
    c.tick();
    c.readout(0, Pauli::Z);
    c.tick();
    c.prep(0, Pauli::X);
    c.tick();
    c.controlled_pauli(0, 1, Pauli::Z);
    auto full = instrumented(c);
    const auto segs = extract_segments(full);
    const auto direct = exact_direct_distribution(full);
    const auto converted = exact_converted_distribution(full, segs);
    CHECK(joint_total(direct) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(joint_distance(direct, converted) < 1e-12);
  }
  SUBCASE("bare preparation-to-readout gap reproduces the closed form") {
    const double e = 0.3;
    ErasureCircuit c(1, {e, 0.0, 0.0});
    c.prep(0);
    c.tick();
    c.readout(0, Pauli::Z);
    auto full = instrumented(c);
    require_instrument_match(full);

    const auto direct = exact_direct_distribution(full);
    // Outcomes are (check bit, meter bit). An erased qubit reads back a fair
    // coin, so the meter flips with probability e/2 overall.
    CHECK(direct.at({0, 0}).weight == doctest::Approx(1.0 - e).epsilon(1e-12));
    CHECK(direct.at({1, 0}).weight == doctest::Approx(e / 2).epsilon(1e-12));
    CHECK(direct.at({1, 1}).weight == doctest::Approx(e / 2).epsilon(1e-12));
    CHECK(direct.count({0, 1}) == 0);
  }
}

TEST_CASE("direct sampling matches the exact instrument") {
  auto full = cycle_circuit({0.1, 0.01, 0.02});
  const auto want = weights_of(exact_direct_distribution(full));

  Engine eng(full);
  const size_t n_shots = 150000;
  std::map<std::vector<uint8_t>, size_t> hist;
  for (size_t s = 0; s < n_shots; ++s) {
    Rng rng(2025, 0, s);
    eng.run_direct(rng);
    ++hist[eng.outcomes()];
  }
  eng.state().check_invariants();
  require_histogram_match(hist, want, n_shots);
}

TEST_CASE("converted sampling matches the exact conditional instrument") {
  auto full = cycle_circuit({0.1, 0.01, 0.02});
  const auto segs = extract_segments(full);
  const auto joint = exact_converted_distribution(full, segs);

  std::vector<uint32_t> check_ids;
  for (const auto& op : full.ops())
    if (op.has_check()) check_ids.push_back(static_cast<uint32_t>(op.check_outcome));

  // Condition on the all-clear pattern and on a positive mid-wire check.
  for (int which = 0; which < 2; ++which) {
    std::vector<uint8_t> pattern(full.n_outcomes(), 0);
    if (which == 1) pattern[check_ids[0]] = 1;

    // Conditional slice of the exact instrument.
    std::map<std::vector<uint8_t>, double> cond;
    double pz = 0.0;
    for (const auto& [key, entry] : joint) {
      bool match = true;
      for (uint32_t id : check_ids) match &= key[id] == pattern[id];
      if (!match) continue;
      cond[key] = entry.weight;
      pz += entry.weight;
    }
    REQUIRE(pz > 0.01);
    for (auto& [key, w] : cond) w /= pz;

    const auto conv = convert(full, segs, pattern);
    Engine eng(full);
    const size_t n_shots = 80000;
    std::map<std::vector<uint8_t>, size_t> hist;
    for (size_t s = 0; s < n_shots; ++s) {
      Rng rng(77, static_cast<uint64_t>(which) + 1, s);
      eng.run_converted(conv, pattern, rng);
      ++hist[eng.outcomes()];
    }
    eng.state().check_invariants();
    require_histogram_match(hist, cond, n_shots);
  }
}

TEST_CASE("forced erasures follow the per-op rules") {
  SUBCASE("an erased wire reads 1 on the check and a coin on the meter") {
    ErasureCircuit c(1, {1.0, 0.0, 0.0});
    c.prep(0);
    c.tick();
    c.readout(0, Pauli::Z);
    auto full = instrumented(c);
    Engine eng(full);
    size_t ones = 0;
    for (size_t s = 0; s < 4000; ++s) {
      Rng rng(5, 0, s);
      eng.run_direct(rng);
      CHECK(eng.outcomes()[0] == 1);  // check bit
      CHECK(eng.fired() == std::vector<uint8_t>{1});
      CHECK(eng.erased() == std::vector<uint8_t>{1});  // readout keeps the flag
      ones += eng.outcomes()[1];
    }
    CHECK(ones > 1800);
    CHECK(ones < 2200);
  }
  SUBCASE("repeated readouts of an erased wire give independent coins") {
    ErasureCircuit c(1, {1.0, 0.0, 0.0});
    c.prep(0);
    c.tick();
    c.readout(0, Pauli::Z);
    c.tick();
    c.readout(0, Pauli::Z);
    auto full = instrumented(c);
    // Erase only in the preparation-to-readout gap.
    full.mutable_locations()[1].rate = 0.0;
    Engine eng(full);
    size_t disagree = 0;
    for (size_t s = 0; s < 4000; ++s) {
      Rng rng(6, 0, s);
      eng.run_direct(rng);
      CHECK(eng.outcomes()[0] == 1);
      CHECK(eng.outcomes()[2] == 1);  // second check still reads erased
      disagree += eng.outcomes()[1] != eng.outcomes()[3];
    }
    // A collapsing readout would force agreement; fresh coins disagree half
    // the time.
    CHECK(disagree > 1800);
    CHECK(disagree < 2200);
  }
  SUBCASE("reset clears the flag but keeps the state mixed") {
    ErasureCircuit c(1, {1.0, 0.0, 0.0});
    c.prep(0);
    c.tick();
    c.reset(0);
    c.tick();
    c.readout(0, Pauli::Z);
    auto full = instrumented(c);
    full.mutable_locations()[1].rate = 0.0;
    Engine eng(full);
    size_t ones = 0;
    for (size_t s = 0; s < 4000; ++s) {
      Rng rng(7, 0, s);
      eng.run_direct(rng);
      CHECK(eng.outcomes()[0] == 0);  // flag was cleared before the readout
      CHECK(eng.erased() == std::vector<uint8_t>{0});
      ones += eng.outcomes()[1];
    }
    CHECK(ones > 1800);
    CHECK(ones < 2200);
  }
  SUBCASE("a fresh preparation fully revives an erased wire") {
    ErasureCircuit c(1, {1.0, 0.0, 0.0});
    c.prep(0);
    c.tick();
    c.prep(0, Pauli::X, -1);
    c.tick();
    c.readout(0, Pauli::X);
    auto full = instrumented(c);
    full.mutable_locations()[1].rate = 0.0;
    Engine eng(full);
    for (size_t s = 0; s < 50; ++s) {
      Rng rng(8, 0, s);
      eng.run_direct(rng);
      CHECK(eng.outcomes()[0] == 0);
      CHECK(eng.outcomes()[1] == 1);  // minus eigenstate reads bit 1
    }
  }
  SUBCASE("an erased participant depolarizes its two-qubit partner") {
    ErasureCircuit c(2, {1.0, 0.0, 0.0});
    c.prep(0);
    c.prep(1);
    c.tick();
    c.controlled_pauli(0, 1, Pauli::X);
    c.tick();
    c.readout(1, Pauli::Z);
    auto full = instrumented(c);
    for (auto& loc : full.mutable_locations()) loc.rate = 0.0;
    // Erase only the control in the gap before the gate.
    full.mutable_locations()[0].rate = 1.0;
    REQUIRE(full.locations()[0].qubit == 0);
    Engine eng(full);
    size_t ones = 0;
    for (size_t s = 0; s < 4000; ++s) {
      Rng rng(9, 0, s);
      eng.run_direct(rng);
      ones += eng.outcomes()[1];
    }
    // Without the erasure the target stays |0>; depolarized it reads a coin.
    CHECK(ones > 1800);
    CHECK(ones < 2200);
  }
  SUBCASE("a two-qubit measurement with no erasures is deterministic") {
    ErasureCircuit c(2, {0.0, 0.0, 0.0});
    c.prep(0);
    c.prep(1);
    c.tick();
    c.measure_pp(0, 1, Pauli::Z);
    auto full = instrumented(c);
    Engine eng(full);
    Rng rng(10, 0, 0);
    eng.run_direct(rng);
    CHECK(eng.outcomes()[0] == 0);
  }
}

TEST_CASE("sampling is reproducible per counter triple") {
  auto full = cycle_circuit({0.15, 0.02, 0.05});
  Engine eng(full);
  Rng a(123, 4, 567);
  eng.run_direct(a);
  const auto first = eng.outcomes();
  const auto fired = eng.fired();
  Rng b(123, 4, 567);
  eng.run_direct(b);
  CHECK(eng.outcomes() == first);
  CHECK(eng.fired() == fired);

  bool any_differ = false;
  for (size_t s = 0; s < 64 && !any_differ; ++s) {
    Rng r(123, 4, 1000 + s);
    eng.run_direct(r);
    any_differ = eng.outcomes() != first;
  }
  CHECK(any_differ);
}

TEST_CASE("converted runs reject mismatched inputs") {
  auto full = cycle_circuit({0.1, 0.01, 0.02});
  const auto segs = extract_segments(full);
  const auto conv = convert(full, segs, std::vector<uint8_t>(full.n_outcomes(), 0));
  Engine eng(full);
  Rng rng(1, 0, 0);
  CHECK_THROWS(eng.run_converted(conv, std::vector<uint8_t>(2, 0), rng));

  ErasureCircuit other(1, {0.0, 0.0, 0.0});
  other.prep(0);
  auto other_full = instrumented(other);
  const auto other_segs = extract_segments(other_full);
  const auto other_conv =
      convert(other_full, other_segs, std::vector<uint8_t>(other_full.n_outcomes(), 0));
  CHECK_THROWS(eng.run_converted(other_conv, std::vector<uint8_t>(full.n_outcomes(), 0), rng));
}

TEST_CASE("symbolic execution records measurement relations") {
  ErasureCircuit c(2, {0.0, 0.0, 0.0});
  c.prep(0);
  c.prep(1);
  c.tick();
  c.measure_pp(0, 1, Pauli::X);  // outcome 0: random
  c.tick();
  c.measure_pp(0, 1, Pauli::X);  // outcome 1: repeat of outcome 0
  c.tick();
  c.readout(0, Pauli::Z);  // check 2, meter 3: random
  c.readout(1, Pauli::Z);  // check 4, meter 5: equals meter 3
  const auto run = run_symbolic(c);
  REQUIRE(run.results.size() == 6);

  CHECK(!run.results[0].deterministic);
  CHECK(run.results[1].deterministic);
  CHECK(!run.results[1].offset);
  CHECK(run.results[1].relation == IdSet({0, 1}));

  CHECK(run.results[2].deterministic);  // erasure checks always read 0
  CHECK(run.results[2].relation.empty());
  CHECK(!run.results[3].deterministic);
  CHECK(run.results[5].deterministic);
  CHECK(!run.results[5].offset);
  CHECK(run.results[5].relation == IdSet({3, 5}));

  SUBCASE("a measurement fixed by the initial state relates only to itself") {
    ErasureCircuit d(1, {0.0, 0.0, 0.0});
    d.prep(0, Pauli::X, -1);
    d.tick();
    d.readout(0, Pauli::X);
    const auto r = run_symbolic(d);
    CHECK(r.results[1].deterministic);
    CHECK(r.results[1].offset);  // minus eigenstate reads bit 1
    CHECK(r.results[1].relation == IdSet({1}));
  }
}
