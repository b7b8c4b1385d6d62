#include <algorithm>
#include <cmath>
#include <cstdint>
#include <json.hpp>
#include <limits>
#include <map>
#include <numeric>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "floq/decoder.hpp"

namespace floq {

double edge_weight(double p) {
  if (p < 1e-15) return 69.0;
  if (p > 0.5) p = 0.5;
  return std::log((1.0 - p) / p);
}

DecodingGraph build_graph(const MechanismSet& set, const std::vector<MechanismEffect>& effects,
                          uint32_t n_detectors, uint32_t n_logicals) {
  if (set.mechanisms.size() != effects.size())
    throw std::invalid_argument("one effect per mechanism is required");
  if (n_logicals > 64) throw std::invalid_argument("at most 64 logical observables supported");
  DecodingGraph g;
  g.n_detectors = n_detectors;
  g.n_logicals = n_logicals;
  std::map<std::tuple<uint32_t, uint32_t, uint64_t>, uint32_t> edge_ids;
  for (uint32_t mi = 0; mi < uint32_t(effects.size()); ++mi) {
    // Group the mechanism's pieces by their detector part; pieces with equal
    // detector sets fire together, so pairs of them cancel and only the XOR
    // of their logical bits remains.
    std::map<IdSet, std::pair<uint32_t, uint64_t>> groups;  // dets -> (count, logical)
    for (const IdSet& piece : effects[mi].pieces) {
      IdSet dets;
      uint64_t logical = 0;
      for (uint32_t bit : piece) {
        if (bit < n_detectors)
          dets.push_back(bit);
        else
          logical ^= 1ull << (bit - n_detectors);
      }
      auto& slot = groups[std::move(dets)];
      slot.first ^= 1u;
      slot.second ^= logical;
    }
    std::vector<std::pair<IdSet, uint64_t>> parts;  // surviving (dets, logical)
    uint64_t dangling = 0;  // logical flips left with no detector signature
    for (auto& [dets, slot] : groups) {
      const bool odd = slot.first != 0;
      if (odd && !dets.empty())
        parts.push_back({dets, slot.second});
      else
        dangling ^= slot.second;
    }
    if (dangling != 0) {
      if (parts.empty())
        throw std::runtime_error("mechanism " + std::to_string(mi) +
                                 " flips a logical observable without touching any detector");
      parts.front().second ^= dangling;
    }
    for (const auto& [dets, logical] : parts) {
      if (dets.size() > 2)
        throw std::runtime_error("mechanism " + std::to_string(mi) +
                                 " has an undecomposable piece touching " +
                                 std::to_string(dets.size()) + " detectors");
      const uint32_t u = dets.front();
      const uint32_t v = dets.size() == 2 ? dets.back() : kBoundaryVertex;
      auto [it, fresh] = edge_ids.try_emplace({u, v, logical}, uint32_t(g.edges.size()));
      if (fresh) {
        DecodingEdge e;
        e.u = u;
        e.v = v;
        e.logical_mask = logical;
        g.edges.push_back(std::move(e));
      }
      g.edges[it->second].mechanisms.push_back(mi);
    }
  }
  g.adjacency.assign(n_detectors, {});
  for (uint32_t ei = 0; ei < uint32_t(g.edges.size()); ++ei) {
    g.adjacency[g.edges[ei].u].push_back(ei);
    if (g.edges[ei].v != kBoundaryVertex) g.adjacency[g.edges[ei].v].push_back(ei);
  }
  reweight(g, set);
  return g;
}

void reweight(DecodingGraph& g, const MechanismSet& set) {
  for (DecodingEdge& e : g.edges) {
    double p = 0.0;
    for (uint32_t mi : e.mechanisms) {
      const double q = set.mechanisms[mi].probability;
      p = p + q - 2.0 * p * q;
    }
    e.probability = p;
    e.weight = edge_weight(p);
  }
}

namespace {

struct SourceSearch {
  std::unordered_map<uint32_t, double> dist;      // settled detectors
  std::unordered_map<uint32_t, uint32_t> parent;  // detector -> incoming edge id
  double boundary_dist = 0.0;
  uint32_t boundary_edge = 0;
  bool boundary_settled = false;
  std::vector<uint32_t> found;  // other triggered detectors, in settle order
};

// Dijkstra from src. Stops once k_targets triggered partners and the boundary
// are settled; k_targets = 0 exhausts the component. stop_at (when not
// kBoundaryVertex) ends the search as soon as that detector settles.
// Determinism: queue entries order by (distance, vertex, incoming edge id).
SourceSearch dijkstra_from(const DecodingGraph& g, uint32_t src,
                           const std::vector<uint8_t>& is_triggered, uint32_t k_targets,
                           uint32_t stop_at = kBoundaryVertex) {
  SourceSearch s;
  using Entry = std::tuple<double, uint32_t, uint32_t>;  // (dist, vertex, via edge)
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> pq;
  pq.push({0.0, src, 0});
  uint32_t found_targets = 0;
  while (!pq.empty()) {
    const auto [d, v, via] = pq.top();
    pq.pop();
    if (v == kBoundaryVertex) {
      if (s.boundary_settled) continue;
      s.boundary_settled = true;
      s.boundary_dist = d;
      s.boundary_edge = via;
    } else {
      if (s.dist.count(v)) continue;
      s.dist.emplace(v, d);
      if (v != src) {
        s.parent.emplace(v, via);
        if (v == stop_at) break;
        if (is_triggered[v]) {
          s.found.push_back(v);
          ++found_targets;
        }
      }
      for (uint32_t ei : g.adjacency[v]) {
        const DecodingEdge& e = g.edges[ei];
        const uint32_t to = e.u == v ? e.v : e.u;
        if (to != kBoundaryVertex && s.dist.count(to)) continue;
        pq.push({d + e.weight, to, ei});
      }
    }
    if (k_targets > 0 && found_targets >= k_targets && s.boundary_settled) break;
  }
  return s;
}

// Appends the stored shortest path from search's source to `target` (which
// must be settled) onto the edge-parity map.
void xor_path(const DecodingGraph& g, const SourceSearch& search, uint32_t src, uint32_t target,
              std::map<uint32_t, uint8_t>& parity) {
  uint32_t at = target;
  while (at != src) {
    const uint32_t ei = search.parent.at(at);
    parity[ei] ^= 1;
    const DecodingEdge& e = g.edges[ei];
    at = e.u == at ? e.v : e.u;
  }
}

}  // namespace

MatchingResult decode(const DecodingGraph& g, const IdSet& syndrome, uint32_t k_nearest) {
  for (uint32_t s : syndrome)
    if (s >= g.n_detectors) throw std::invalid_argument("syndrome names an unknown detector");
  MatchingResult result;
  if (syndrome.empty()) return result;

  const uint32_t t_all = uint32_t(syndrome.size());
  std::vector<uint8_t> is_triggered(g.n_detectors, 0);
  std::unordered_map<uint32_t, uint32_t> tindex;
  for (uint32_t i = 0; i < t_all; ++i) {
    is_triggered[syndrome[i]] = 1;
    tindex.emplace(syndrome[i], i);
  }
  std::vector<SourceSearch> searches(t_all);
  for (uint32_t i = 0; i < t_all; ++i)
    searches[i] = dijkstra_from(g, syndrome[i], is_triggered, k_nearest);

  // Candidate pair distances, symmetrized; union-find clusters over them.
  std::map<std::pair<uint32_t, uint32_t>, double> pair_dist;
  std::vector<uint32_t> dsu(t_all);
  std::iota(dsu.begin(), dsu.end(), 0);
  auto root = [&](uint32_t x) {
    while (dsu[x] != x) x = dsu[x] = dsu[dsu[x]];
    return x;
  };
  for (uint32_t i = 0; i < t_all; ++i)
    for (uint32_t v : searches[i].found) {
      const uint32_t j = tindex.at(v);
      const auto key = std::minmax(i, j);
      const double d = searches[i].dist.at(v);
      auto [it, fresh] = pair_dist.try_emplace({key.first, key.second}, d);
      if (!fresh) it->second = std::min(it->second, d);
      dsu[root(i)] = root(j);
    }

  std::map<uint32_t, std::vector<uint32_t>> clusters;
  if (k_nearest == 0) {
    auto& all = clusters[0];
    all.resize(t_all);
    std::iota(all.begin(), all.end(), 0);
  } else {
    for (uint32_t i = 0; i < t_all; ++i) clusters[root(i)].push_back(i);
  }

  std::map<uint32_t, uint8_t> parity;  // edge id -> selection parity
  for (const auto& [rep, members] : clusters) {
    const uint32_t t = uint32_t(members.size());
    // Surrogate cost for pairs the truncated search did not price: larger
    // than any feasible alternative inside the cluster, so it is only chosen
    // when unavoidable, in which case the selection is re-resolved exactly.
    double finite_max = 0.0;
    for (uint32_t a = 0; a < t; ++a) {
      if (searches[members[a]].boundary_settled)
        finite_max = std::max(finite_max, searches[members[a]].boundary_dist);
      for (uint32_t b = a + 1; b < t; ++b) {
        const auto key = std::minmax(members[a], members[b]);
        auto it = pair_dist.find({key.first, key.second});
        if (it != pair_dist.end()) finite_max = std::max(finite_max, it->second);
      }
    }
    const double surrogate = 2.0 * finite_max + 71.0;

    // Vertices 0..t-1: triggered detectors; t..2t-1: their boundary stand-ins
    // (a detector may only use its own; stand-ins pair freely at zero cost).
    std::vector<std::vector<double>> w(2 * t, std::vector<double>(2 * t, 0.0));
    for (uint32_t a = 0; a < t; ++a) {
      for (uint32_t b = 0; b < t; ++b) {
        if (a == b) continue;
        const auto key = std::minmax(members[a], members[b]);
        auto it = pair_dist.find({key.first, key.second});
        w[a][b] = it != pair_dist.end() ? it->second : surrogate;
        w[t + a][t + b] = 0.0;
      }
      const auto& sa = searches[members[a]];
      for (uint32_t b = 0; b < t; ++b)
        w[a][t + b] = w[t + b][a] =
            (a == b && sa.boundary_settled) ? sa.boundary_dist : surrogate;
    }
    const std::vector<int32_t> partner = min_weight_perfect_matching(w);

    for (uint32_t a = 0; a < t; ++a) {
      const int32_t p = partner[a];
      if (p < int32_t(a)) continue;  // handled from the other side (or a stand-in pair)
      const uint32_t mi = members[a];
      const uint32_t det_a = syndrome[mi];
      if (p < int32_t(t)) {
        // Detector-to-detector match: take the stored path, re-searching
        // exactly when the truncated search never priced this pair.
        const uint32_t mj = members[p];
        const uint32_t det_b = syndrome[mj];
        const SourceSearch* search = nullptr;
        uint32_t from = det_a, to = det_b;
        if (searches[mi].dist.count(det_b)) {
          search = &searches[mi];
        } else if (searches[mj].dist.count(det_a)) {
          search = &searches[mj];
          std::swap(from, to);
        }
        SourceSearch fresh;
        if (!search) {
          fresh = dijkstra_from(g, det_a, is_triggered, 0, det_b);
          if (!fresh.dist.count(det_b))
            throw std::runtime_error("syndrome cannot be matched: detectors are disconnected");
          search = &fresh;
        }
        result.weight += search->dist.at(to);
        xor_path(g, *search, from, to, parity);
      } else {
        // Boundary match (own stand-in or, when forced, another detector's).
        const SourceSearch* search = &searches[mi];
        SourceSearch fresh;
        if (!search->boundary_settled) {
          fresh = dijkstra_from(g, det_a, is_triggered, 0);
          search = &fresh;
          if (!search->boundary_settled)
            throw std::runtime_error("syndrome cannot be matched: no boundary reachable");
        }
        result.weight += search->boundary_dist;
        const DecodingEdge& be = g.edges[search->boundary_edge];
        parity[search->boundary_edge] ^= 1;
        if (be.u != det_a) xor_path(g, *search, det_a, be.u, parity);
      }
    }
  }

  for (const auto& [ei, odd] : parity)
    if (odd) {
      result.edges.push_back(ei);
      result.logical_mask ^= g.edges[ei].logical_mask;
    }
  return result;
}

std::string dump_graph_jsonl(const DecodingGraph& g) {
  std::ostringstream out;
  const nlohmann::json header{{"type", "decoding-graph"},
                              {"detectors", g.n_detectors},
                              {"logicals", g.n_logicals},
                              {"edges", g.edges.size()}};
  out << header.dump() << '\n';
  for (const DecodingEdge& e : g.edges) {
    nlohmann::json j{{"u", e.u},
                     {"p", e.probability},
                     {"w", e.weight},
                     {"logical", e.logical_mask}};
    if (e.v == kBoundaryVertex)
      j["v"] = nullptr;
    else
      j["v"] = e.v;
    out << j.dump() << '\n';
  }
  return out.str();
}

}  // namespace floq
