#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace floq {

// One edge of a 3-edge-colored cubic graph.
struct ColoredEdge {
  uint32_t u = 0;
  uint32_t v = 0;
  uint8_t color = 0;  // 0, 1 or 2

  friend bool operator==(const ColoredEdge& a, const ColoredEdge& b) {
    return a.u == b.u && a.v == b.v && a.color == b.color;
  }
};

// Connected 3-regular graph with a proper 3-edge-coloring: every vertex has
// degree exactly three and touches one edge of each color, so each color
// class is a perfect matching. Qubits live on vertices; two-qubit checks
// live on edges.
struct ColoredGraph {
  uint32_t n_vertices = 0;
  std::vector<ColoredEdge> edges;

  // Indices into `edges` of the given color, in edge order.
  std::vector<uint32_t> color_edges(uint8_t color) const;
};

// Structural diagnostics; empty result means the graph satisfies all
// invariants (3-regular, properly 3-edge-colored, connected, no self-loops).
std::vector<std::string> validate(const ColoredGraph& g);

// Throws std::invalid_argument listing the first diagnostic if invalid.
void require_valid(const ColoredGraph& g);

// Text form: header line "n <vertices>", then one "e <u> <v> <color>" line
// per edge.
std::string format_graph(const ColoredGraph& g);
ColoredGraph parse_graph(const std::string& text);

// Hexagonal-lattice tori. Standard uses the rhombic quotient with
// 6*(d/2)^2 vertices; Twisted uses the qubit-optimal square quotient with
// 18*(d/4)^2 vertices (25% fewer than Standard at equal distance, d a
// multiple of 4). d = 2 yields the minimal 6-vertex torus in both layouts.
enum class TorusLayout { Standard, Twisted };

ColoredGraph build_honeycomb_torus(uint32_t d, TorusLayout layout);

}  // namespace floq
