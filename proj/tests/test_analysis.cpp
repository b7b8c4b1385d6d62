#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>
#include <stdexcept>

#include "floq/analysis.hpp"
#include "floq/floquet.hpp"
#include "floq/graph.hpp"
#include "floq/pauli.hpp"

using namespace floq;

namespace {

PauliString ps(const std::string& text) { return PauliString::from_string(text); }

// The complete graph on four vertices with its unique proper 3-edge-coloring
// (each color class is one of the three perfect matchings).
ColoredGraph k4() {
  ColoredGraph g;
  g.n_vertices = 4;
  g.edges = {{0, 1, 0}, {2, 3, 0}, {0, 2, 1}, {1, 3, 1}, {0, 3, 2}, {1, 2, 2}};
  return g;
}

bool commutes_with_all(const PauliString& p, const std::vector<PauliString>& gens) {
  return std::all_of(gens.begin(), gens.end(),
                     [&](const PauliString& g) { return p.commutes_with(g); });
}

}  // namespace

TEST_CASE("independent generators, rank and span membership") {
  std::vector<PauliString> gens{ps("XX"), ps("ZZ"), ps("YY")};  // YY = i XX*ZZ, dependent
  CHECK(pauli_rank(gens) == 2);
  CHECK(independent_generators(gens).size() == 2);
  CHECK(in_span(ps("YY"), gens));
  CHECK(in_span(ps("-YY"), gens));  // phases are ignored
  CHECK(!in_span(ps("XZ"), gens));
  CHECK(!in_span(ps("IX"), gens));
  CHECK(pauli_rank({}) == 0);
}

TEST_CASE("stabilizer-group updates keep the commuting history") {
  SUBCASE("a commuting previous generator survives") {
    auto next = isg_step({ps("ZZ")}, {ps("XX")}, 2);
    CHECK(next.size() == 2);
    CHECK(in_span(ps("ZZ"), next));
    CHECK(in_span(ps("XX"), next));
  }
  SUBCASE("anticommuting generators survive only through their products") {
    auto next = isg_step({ps("ZI"), ps("IZ")}, {ps("XX")}, 2);
    CHECK(next.size() == 2);
    CHECK(in_span(ps("ZZ"), next));
    CHECK(!in_span(ps("ZI"), next));
  }
  SUBCASE("non-commuting checks are rejected") {
    CHECK_THROWS_AS(isg_step({}, {ps("XI"), ps("ZI")}, 2), std::invalid_argument);
  }
}

TEST_CASE("measurement schedules settle at two encoded qubits on tori") {
  for (TorusLayout layout : {TorusLayout::Standard, TorusLayout::Twisted}) {
    for (uint32_t d : {uint32_t(2), uint32_t(4)}) {
      if (layout == TorusLayout::Twisted && d == 2) continue;
      ColoredGraph g = build_honeycomb_torus(d, layout);
      CHECK(logical_count(g, honeycomb_schedule()) == 2);
      CHECK(logical_count(g, css_schedule()) == 2);
      IsgFlow flow = isg_flow(g, css_schedule());
      CHECK(flow.k == 2);
      CHECK(flow.k_per_round.back() == 2);
      CHECK(flow.k_per_round.front() == g.n_vertices / 2);  // first matching halves the count
    }
  }
}

TEST_CASE("logical basis of small stabilizer codes") {
  SUBCASE("repetition stabilizers on three qubits") {
    auto logicals = logical_basis({ps("ZZI"), ps("IZZ")}, 3);
    REQUIRE(logicals.size() == 2);
    for (const auto& l : logicals) {
      CHECK(commutes_with_all(l, {ps("ZZI"), ps("IZZ")}));
      CHECK(!in_span(l, {ps("ZZI"), ps("IZZ")}));
    }
    // One encoded qubit: the two class representatives must anticommute.
    CHECK(!logicals[0].commutes_with(logicals[1]));
  }
  SUBCASE("empty stabilizer group leaves all 2n generators") {
    CHECK(logical_basis({}, 3).size() == 6);
  }
}

TEST_CASE("pure-basis representatives inside a stabilizer coset") {
  std::vector<PauliString> stabs{ps("XXXX"), ps("ZZZZ")};
  SUBCASE("already pure") {
    auto rep = pure_basis_representative(ps("ZZII"), stabs, Pauli::Z);
    REQUIRE(rep.has_value());
    for (size_t q = 0; q < 4; ++q) CHECK((rep->get(q) == Pauli::I || rep->get(q) == Pauli::Z));
  }
  SUBCASE("purifiable by a stabilizer product") {
    auto rep = pure_basis_representative(ps("YYII"), stabs, Pauli::Y);
    REQUIRE(rep.has_value());
    for (size_t q = 0; q < 4; ++q) CHECK((rep->get(q) == Pauli::I || rep->get(q) == Pauli::Y));
  }
  SUBCASE("impossible coset") {
    CHECK(!pure_basis_representative(ps("XXII"), stabs, Pauli::Z).has_value());
    CHECK(!pure_basis_representative(ps("YYII"), stabs, Pauli::Z).has_value());
  }
}

TEST_CASE("gauge structure of the minimal torus schedule") {
  // Distinctive trait of these dynamical codes: no static logical operators
  // exist — everything commuting with every check is itself a check product —
  // so logical information is only accessible through the measurement flow.
  ColoredGraph g = build_honeycomb_torus(2, TorusLayout::Standard);
  for (const auto& schedule : {honeycomb_schedule(), css_schedule()}) {
    GaugeStructure gauge = gauge_structure(g, schedule);
    CHECK(gauge.logicals.empty());
    CHECK(!gauge.center.empty());
    for (const auto& c : gauge.center) {
      CHECK(commutes_with_all(c, gauge.checks));
      CHECK(in_span(c, gauge.checks));
    }
  }
  // The global single-type products stabilize every round, so they sit in
  // the center of both schedules' check groups.
  PauliString all_x(6), all_z(6);
  for (size_t q = 0; q < 6; ++q) {
    all_x.set(q, Pauli::X);
    all_z.set(q, Pauli::Z);
  }
  CHECK(in_span(all_x, gauge_structure(g, css_schedule()).center));
  CHECK(in_span(all_z, gauge_structure(g, css_schedule()).center));
}

TEST_CASE("phase groups of the settled schedule cycle") {
  ColoredGraph g = build_honeycomb_torus(2, TorusLayout::Standard);
  for (const auto& schedule : {honeycomb_schedule(), css_schedule()}) {
    auto phases = steady_phase_groups(g, schedule);
    REQUIRE(phases.size() == schedule.period());
    for (uint32_t r = 0; r < schedule.period(); ++r) {
      CHECK(phases[r].size() == g.n_vertices - 2);  // two encoded qubits
      // The round's own checks are in its instantaneous group.
      const auto& round = schedule.rounds[r];
      for (uint32_t ei : g.color_edges(round.color))
        CHECK(in_span(edge_check(g.n_vertices, g.edges[ei], round.type), phases[r]));
      // Each phase admits basis-pure logical representatives in some basis.
      auto classes = logical_basis(phases[r], g.n_vertices);
      CHECK(classes.size() == 4);
    }
  }
}

TEST_CASE("surface reconstruction from bicolored cycles") {
  SUBCASE("tori of both layouts") {
    struct Want {
      TorusLayout layout;
      uint32_t d, v, e, f;
    };
    for (auto w : {Want{TorusLayout::Standard, 2, 6, 9, 3}, Want{TorusLayout::Standard, 4, 24, 36, 12},
                   Want{TorusLayout::Twisted, 4, 18, 27, 9}}) {
      ColoredGraph g = build_honeycomb_torus(w.d, w.layout);
      ManifoldData m = build_manifold(g);
      CHECK(m.vertex_count == w.v);
      CHECK(m.edge_count == w.e);
      CHECK(m.face_count == w.f);
      CHECK(m.euler_characteristic == 0);
      CHECK(m.orientable);
      CHECK(m.surface_name() == "torus");
      CHECK(encoded_from_homology(m) == 2);
      // Every face of a hexagonal torus is a hexagon.
      for (const auto& family : m.faces)
        for (const auto& face : family) CHECK(face.size() == 6);
    }
  }
  SUBCASE("the complete graph on four vertices closes into a projective plane") {
    ManifoldData m = build_manifold(k4());
    CHECK(m.vertex_count == 4);
    CHECK(m.edge_count == 6);
    CHECK(m.face_count == 3);
    CHECK(m.euler_characteristic == 1);
    CHECK(!m.orientable);
    CHECK(m.surface_name() == "real projective plane");
    CHECK(encoded_from_homology(m) == 1);
  }
}

TEST_CASE("homological distances of the torus family") {
  CHECK(homological_distance(build_honeycomb_torus(2, TorusLayout::Standard)) == 2);
  CHECK(homological_distance(build_honeycomb_torus(4, TorusLayout::Standard)) == 4);
  CHECK(homological_distance(build_honeycomb_torus(4, TorusLayout::Twisted)) == 4);
  CHECK(homological_distance(build_honeycomb_torus(6, TorusLayout::Standard)) == 6);
  CHECK(homological_distance(build_honeycomb_torus(8, TorusLayout::Twisted)) == 8);
}

TEST_CASE("homological distance of the projective-plane code") {
  CHECK(homological_distance(k4()) == 2);
}
