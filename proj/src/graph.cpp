#include "floq/graph.hpp"

#include <array>
#include <cstdlib>
#include <map>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace floq {

std::vector<uint32_t> ColoredGraph::color_edges(uint8_t color) const {
  std::vector<uint32_t> out;
  for (uint32_t i = 0; i < edges.size(); ++i)
    if (edges[i].color == color) out.push_back(i);
  return out;
}

std::vector<std::string> validate(const ColoredGraph& g) {
  std::vector<std::string> diags;
  if (g.n_vertices == 0) {
    diags.push_back("graph has no vertices");
    return diags;
  }
  for (uint32_t i = 0; i < g.edges.size(); ++i) {
    const auto& e = g.edges[i];
    if (e.u >= g.n_vertices || e.v >= g.n_vertices)
      diags.push_back("edge " + std::to_string(i) + " references a vertex out of range");
    if (e.u == e.v) diags.push_back("edge " + std::to_string(i) + " is a self-loop");
    if (e.color > 2) diags.push_back("edge " + std::to_string(i) + " has color outside 0..2");
  }
  if (!diags.empty()) return diags;

  // Exactly one edge of each color per vertex (implies 3-regularity and a
  // proper coloring whose classes are perfect matchings).
  std::vector<std::array<int, 3>> seen(g.n_vertices, {0, 0, 0});
  for (const auto& e : g.edges) {
    ++seen[e.u][e.color];
    ++seen[e.v][e.color];
  }
  for (uint32_t v = 0; v < g.n_vertices; ++v)
    for (int c = 0; c < 3; ++c)
      if (seen[v][c] != 1)
        diags.push_back("vertex " + std::to_string(v) + " touches " +
                        std::to_string(seen[v][c]) + " edges of color " + std::to_string(c) +
                        " (want exactly 1)");
  if (!diags.empty()) return diags;

  std::vector<std::vector<uint32_t>> adj(g.n_vertices);
  for (const auto& e : g.edges) {
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  std::vector<char> reach(g.n_vertices, 0);
  std::vector<uint32_t> stack{0};
  reach[0] = 1;
  while (!stack.empty()) {
    uint32_t v = stack.back();
    stack.pop_back();
    for (uint32_t w : adj[v])
      if (!reach[w]) {
        reach[w] = 1;
        stack.push_back(w);
      }
  }
  for (uint32_t v = 0; v < g.n_vertices; ++v)
    if (!reach[v]) {
      diags.push_back("graph is not connected");
      break;
    }
  return diags;
}

void require_valid(const ColoredGraph& g) {
  auto diags = validate(g);
  if (!diags.empty()) throw std::invalid_argument("invalid colored graph: " + diags.front());
}

std::string format_graph(const ColoredGraph& g) {
  std::ostringstream out;
  out << "n " << g.n_vertices << "\n";
  for (const auto& e : g.edges)
    out << "e " << e.u << " " << e.v << " " << unsigned(e.color) << "\n";
  return out.str();
}

ColoredGraph parse_graph(const std::string& text) {
  ColoredGraph g;
  std::istringstream in(text);
  std::string line;
  bool have_header = false;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;  // blank line
    if (tag == "n") {
      long long n = -1;
      if (have_header || !(ls >> n) || n <= 0)
        throw std::invalid_argument("graph line " + std::to_string(line_no) +
                                    ": malformed vertex-count header");
      g.n_vertices = uint32_t(n);
      have_header = true;
    } else if (tag == "e") {
      long long u = -1, v = -1, c = -1;
      if (!have_header || !(ls >> u >> v >> c) || u < 0 || v < 0 || c < 0 || c > 2)
        throw std::invalid_argument("graph line " + std::to_string(line_no) +
                                    ": malformed edge record");
      g.edges.push_back({uint32_t(u), uint32_t(v), uint8_t(c)});
    } else {
      throw std::invalid_argument("graph line " + std::to_string(line_no) +
                                  ": unknown record '" + tag + "'");
    }
  }
  if (!have_header) throw std::invalid_argument("graph text has no vertex-count header");
  return g;
}

namespace {

long long floor_div(long long a, long long b) {
  long long q = a / b, r = a % b;
  return (r != 0 && ((r < 0) != (b < 0))) ? q - 1 : q;
}

// Enumerates unit cells of the hexagonal lattice modulo the rank-2 lattice
// spanned by `u` and `v`, assigning ids by breadth-first discovery from the
// origin. Each cell holds two vertices (sublattices 0 and 1).
struct TorusCells {
  std::array<long long, 2> u, v;
  long long det;
  std::map<std::pair<long long, long long>, uint32_t> ids;
  std::vector<std::pair<long long, long long>> coords;

  TorusCells(std::array<long long, 2> u_, std::array<long long, 2> v_) : u(u_), v(v_) {
    det = u[0] * v[1] - u[1] * v[0];
    if (det == 0) throw std::invalid_argument("torus basis is degenerate");
    std::vector<std::pair<long long, long long>> frontier{canonical(0, 0)};
    ids[frontier[0]] = 0;
    coords.push_back(frontier[0]);
    while (!frontier.empty()) {
      auto [x, y] = frontier.back();
      frontier.pop_back();
      for (auto [dx, dy] : {std::pair{1LL, 0LL}, {-1LL, 0LL}, {0LL, 1LL}, {0LL, -1LL}}) {
        auto c = canonical(x + dx, y + dy);
        if (ids.emplace(c, uint32_t(coords.size())).second) {
          coords.push_back(c);
          frontier.push_back(c);
        }
      }
    }
    if (coords.size() != size_t(std::llabs(det)))
      throw std::logic_error("torus cell enumeration does not match the quotient size");
  }

  // Unique coset representative: subtract the floor of the fractional
  // lattice coordinates so both end up in [0, 1).
  std::pair<long long, long long> canonical(long long x, long long y) const {
    long long a = floor_div(x * v[1] - y * v[0], det);
    long long b = floor_div(y * u[0] - x * u[1], det);
    return {x - a * u[0] - b * v[0], y - a * u[1] - b * v[1]};
  }

  uint32_t cell(long long x, long long y) const { return ids.at(canonical(x, y)); }
  uint32_t vertex(long long x, long long y, int sub) const { return cell(x, y) * 2 + sub; }
};

}  // namespace

ColoredGraph build_honeycomb_torus(uint32_t d, TorusLayout layout) {
  if (d < 2 || d % 2 != 0)
    throw std::invalid_argument("honeycomb torus distance must be a positive even number");
  std::array<long long, 2> u, v;
  if (layout == TorusLayout::Standard || d == 2) {
    long long m = d / 2;
    u = {2 * m, -m};
    v = {-m, 2 * m};
  } else {
    if (d % 4 != 0)
      throw std::invalid_argument(
          "twisted honeycomb torus layout requires d = 2 or a multiple of 4");
    long long m = d / 4;
    u = {3 * m, 0};
    v = {0, 3 * m};
  }
  TorusCells cells(u, v);

  // Every hexagonal face H(x, y) carries the lattice-invariant color
  // (x + 2y) mod 3; each cell contributes three edges, colored by the face
  // pair they separate.
  auto face_color = [](long long x, long long y, long long shift) {
    return uint8_t(((x + 2 * y + shift) % 3 + 3) % 3);
  };
  ColoredGraph g;
  g.n_vertices = uint32_t(cells.coords.size() * 2);
  for (uint32_t i = 0; i < cells.coords.size(); ++i) {
    auto [x, y] = cells.coords[i];
    g.edges.push_back({i * 2 + 0, i * 2 + 1, face_color(x, y, 2)});
    g.edges.push_back({i * 2 + 1, cells.vertex(x + 1, y, 0), face_color(x, y, 1)});
    g.edges.push_back({i * 2 + 1, cells.vertex(x, y + 1, 0), face_color(x, y, 0)});
  }
  require_valid(g);
  return g;
}

}  // namespace floq
