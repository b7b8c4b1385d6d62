#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "floq/floquet.hpp"
#include "floq/graph.hpp"
#include "floq/pauli.hpp"

namespace floq {

// --- GF(2) symplectic span utilities (phases ignored throughout) ---

// Independent generating set of the group generated by `gens`, as reduced
// echelon rows over the 2n-bit symplectic representation.
std::vector<PauliString> independent_generators(const std::vector<PauliString>& gens);

uint32_t pauli_rank(const std::vector<PauliString>& gens);

// Is p (up to phase) a product of the given generators?
bool in_span(const PauliString& p, const std::vector<PauliString>& gens);

// One instantaneous-stabilizer-group update: the group generated by the
// round's checks together with every product of `prev` that commutes with all
// of them. Throws std::invalid_argument if the checks do not mutually
// commute.
std::vector<PauliString> isg_step(const std::vector<PauliString>& prev,
                                  const std::vector<PauliString>& checks, uint32_t n);

// Round-by-round instantaneous stabilizer groups of a schedule, starting from
// the trivial group.
struct IsgFlow {
  std::vector<uint32_t> k_per_round;  // n - rank after each round
  uint32_t k = 0;                     // value stabilized over the last period
  std::vector<PauliString> steady;    // generators after the last round
};
IsgFlow isg_flow(const ColoredGraph& g, const MeasurementSchedule& s, uint32_t periods = 4);

// Stabilized number of encoded qubits; throws std::logic_error if the flow
// has not settled after several periods.
uint32_t logical_count(const ColoredGraph& g, const MeasurementSchedule& s);

// Instantaneous stabilizer generators at each phase of the settled cycle;
// entry r is the group right after measuring a round of type s.rounds[r].
// Throws std::logic_error when the ranks keep changing.
std::vector<std::vector<PauliString>> steady_phase_groups(const ColoredGraph& g,
                                                          const MeasurementSchedule& s);

// Basis of N(S)/S for an abelian stabilizer span: 2k class representatives.
std::vector<PauliString> logical_basis(const std::vector<PauliString>& stabilizers, uint32_t n);

// Check span, its center (products commuting with every check — the
// stabilizer part) and 2k bare logical representatives (Paulis commuting with
// every check, modulo the center).
struct GaugeStructure {
  std::vector<PauliString> checks;
  std::vector<PauliString> center;
  std::vector<PauliString> logicals;
};
GaugeStructure gauge_structure(const ColoredGraph& g, const MeasurementSchedule& s);

// Representative of logical * <stabilizers> supported only on {I, basis}, or
// nullopt when the coset has none. Signs are tracked through the products.
std::optional<PauliString> pure_basis_representative(const PauliString& logical,
                                                     const std::vector<PauliString>& stabilizers,
                                                     Pauli basis);

// --- Surface reconstruction from the coloring ---

// Attaching a disk to every bicolored cycle turns a properly 3-edge-colored
// cubic graph into a closed surface whose faces are those cycles.
struct ManifoldData {
  uint32_t vertex_count = 0;
  uint32_t edge_count = 0;
  uint32_t face_count = 0;
  int32_t euler_characteristic = 0;
  bool orientable = false;
  // faces[c] lists the cycles avoiding color c; each face is its edge-index
  // sequence along one traversal direction.
  std::array<std::vector<std::vector<uint32_t>>, 3> faces;

  std::string surface_name() const;
};

ManifoldData build_manifold(const ColoredGraph& g);

// Encoded qubits predicted by homology: 2 - Euler characteristic (GF(2)
// first Betti number of the surface).
int32_t encoded_from_homology(const ManifoldData& m);

// Code distance via the three shrunk lattices. For color i, G_i contracts
// every i-face to a vertex and keeps the i-edges, and G_i* connects the j-
// and k-faces through the i-edges they share; cycles are homologically
// nontrivial when outside the span of the embedded graph's face boundaries.
// d = min over i of min(2 * systole(G_i), systole(G_i*)); 0 when every class
// is trivial (nothing encoded).
uint32_t homological_distance(const ColoredGraph& g);

}  // namespace floq
