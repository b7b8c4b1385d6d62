#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "floq/circuit.hpp"
#include "floq/convert.hpp"
#include "floq/floquet.hpp"
#include "floq/sorted_set.hpp"

namespace floq {

// --- Mechanism sensitivity -------------------------------------------------

// What one error mechanism does to the detectors and logical observables,
// split into its generator pieces: one piece per X / Z part of each qubit
// Pauli component and one per outcome flip. Piece entries are bit indices
// into [0, n_detectors) for detectors and [n_detectors, n_detectors +
// n_logicals) for logicals; the mechanism's full effect is the XOR of its
// pieces. Pieces are what the decoding graph decomposes mechanisms into.
struct MechanismEffect {
  std::vector<IdSet> pieces;
};

// Computes the effect of every mechanism by one backward frame-propagation
// sweep over the circuit: a Pauli inserted at a spacetime slot flips exactly
// the outcome bits whose measurement operators it anticommutes with after
// conjugation through the intervening operations. Deterministic; erasure
// checks, resets and Pauli gates are frame-transparent.
std::vector<MechanismEffect> mechanism_effects(const ErasureCircuit& c,
                                               const std::vector<Mechanism>& mechanisms,
                                               const std::vector<Detector>& detectors,
                                               const std::vector<LogicalObservable>& logicals);

// --- Decoding graph ---------------------------------------------------------

inline constexpr uint32_t kBoundaryVertex = 0xffffffffu;

struct DecodingEdge {
  uint32_t u = 0;
  uint32_t v = kBoundaryVertex;  // kBoundaryVertex: singleton edge to the boundary
  double probability = 0.0;      // merged firing probability of the mechanisms
  double weight = 0.0;           // log((1 - p) / p), capped
  uint64_t logical_mask = 0;     // bit l set: traversing the edge flips logical l
  std::vector<uint32_t> mechanisms;  // contributing mechanism indices
};

struct DecodingGraph {
  uint32_t n_detectors = 0;
  uint32_t n_logicals = 0;
  std::vector<DecodingEdge> edges;
  std::vector<std::vector<uint32_t>> adjacency;  // detector -> incident edge ids
};

// Edge weight log((1-p)/p). Probabilities at or below 1e-15 (including 0)
// clamp to 69, preserving order while avoiding infinities; p = 1/2 gives 0.
double edge_weight(double p);

// Builds the decoding graph: every mechanism piece with one or two detector
// bits becomes an edge (one-detector pieces connect to the virtual boundary),
// parallel pieces with equal endpoints and logical mask share an edge, and
// the edge probability is the XOR-merge p (+) p' = p(1-p') + p'(1-p) of its
// mechanisms' probabilities. A piece with three or more detector bits, or a
// mechanism whose only effect is an undetectable logical flip, raises
// std::runtime_error naming the mechanism. The structure depends only on the
// circuit; reweight() refreshes probabilities and weights in place after the
// mechanism set has been reweighted for an erasure-check pattern.
DecodingGraph build_graph(const MechanismSet& set, const std::vector<MechanismEffect>& effects,
                          uint32_t n_detectors, uint32_t n_logicals);
void reweight(DecodingGraph& g, const MechanismSet& set);

// --- Decoding ---------------------------------------------------------------

struct MatchingResult {
  std::vector<uint32_t> edges;  // selected edge ids (after XOR-cancellation)
  double weight = 0.0;          // total matching weight
  uint64_t logical_mask = 0;    // XOR of selected edges' logical masks
};

// Minimum-weight matching of the syndrome: builds the complete graph on
// triggered detectors (plus a boundary duplicate each) with shortest-path
// distances, runs exact blossom matching, and expands matches back to edge
// paths. k_nearest > 0 restricts each detector's candidate partners to its k
// nearest triggered detectors and decodes the resulting clusters
// independently; k_nearest = 0 is the exact all-pairs matching. Throws
// std::runtime_error when the syndrome cannot be matched (odd cluster with
// no boundary reachable).
MatchingResult decode(const DecodingGraph& g, const IdSet& syndrome, uint32_t k_nearest = 16);

// One JSON object per line: a header, then every edge.
std::string dump_graph_jsonl(const DecodingGraph& g);

// --- Exact matcher (exposed for direct testing) -----------------------------

// Minimum-weight perfect matching on the complete graph with symmetric dense
// weight matrix w (n x n, n even); returns the partner of each vertex.
// Exact blossom algorithm, O(n^3).
std::vector<int32_t> min_weight_perfect_matching(const std::vector<std::vector<double>>& w);

}  // namespace floq
