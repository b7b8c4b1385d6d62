#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <stdexcept>
#include <vector>

#include "floq/decoder.hpp"

namespace floq {

namespace {

// Maximum-weight perfect matching on a dense graph, primal-dual blossom
// algorithm, O(n^3). Vertices are 1..n; blossom nodes occupy n+1..2n. Every
// pair carries an edge (strictly positive weight marks it usable); between
// contracted nodes the stored edge remembers the best real endpoint pair.
// Duals (lab) keep every edge's slack nonnegative; zero-slack edges form the
// equality subgraph searched for augmenting paths.
class MaxWeightMatcher {
 public:
  explicit MaxWeightMatcher(const std::vector<std::vector<double>>& weights)
      : n_(int(weights.size())), n_x_(n_) {
    const int m = 2 * n_ + 1;
    g_.assign(m, std::vector<Edge>(m));
    lab_.assign(m, 0.0);
    match_.assign(m, 0);
    slack_.assign(m, 0);
    st_.assign(m, 0);
    pa_.assign(m, 0);
    s_.assign(m, -1);
    vis_.assign(m, 0);
    flower_.assign(m, {});
    flower_from_.assign(m, std::vector<int>(n_ + 1, 0));
    for (int u = 1; u <= n_; ++u)
      for (int v = 1; v <= n_; ++v) g_[u][v] = Edge{u, v, weights[u - 1][v - 1]};
    double w_max = 0.0;
    for (int u = 1; u <= n_; ++u)
      for (int v = 1; v <= n_; ++v) w_max = std::max(w_max, g_[u][v].w);
    for (int u = 1; u <= n_; ++u) {
      st_[u] = u;
      lab_[u] = w_max;
      flower_from_[u][u] = u;
    }
    while (expand_free_pair()) {
    }
  }

  // 0-based partner of 0-based vertex u.
  int partner(int u) const { return match_[u + 1] - 1; }

 private:
  static constexpr double kEps = 1e-9;
  struct Edge {
    int u = 0, v = 0;
    double w = 0.0;
  };

  double delta(const Edge& e) const { return lab_[e.u] + lab_[e.v] - 2.0 * g_[e.u][e.v].w; }

  void update_slack(int u, int x) {
    if (!slack_[x] || delta(g_[u][x]) < delta(g_[slack_[x]][x])) slack_[x] = u;
  }

  void set_slack(int x) {
    slack_[x] = 0;
    for (int u = 1; u <= n_; ++u)
      if (g_[u][x].w > 0.0 && st_[u] != x && s_[st_[u]] == 0) update_slack(u, x);
  }

  void queue_push(int x) {
    if (x <= n_) {
      queue_.push_back(x);
    } else {
      for (int i : flower_[x]) queue_push(i);
    }
  }

  void set_st(int x, int b) {
    st_[x] = b;
    if (x > n_)
      for (int i : flower_[x]) set_st(i, b);
  }

  // Position of xr inside blossom b's cycle, rotated to even parity so the
  // alternating structure is preserved when rematching along the cycle.
  int get_pr(int b, int xr) {
    int pr = int(std::find(flower_[b].begin(), flower_[b].end(), xr) - flower_[b].begin());
    if (pr % 2 == 1) {
      std::reverse(flower_[b].begin() + 1, flower_[b].end());
      return int(flower_[b].size()) - pr;
    }
    return pr;
  }

  void set_match(int u, int v) {
    match_[u] = g_[u][v].v;
    if (u <= n_) return;
    const Edge e = g_[u][v];
    const int xr = flower_from_[u][e.u];
    const int pr = get_pr(u, xr);
    for (int i = 0; i < pr; ++i) set_match(flower_[u][i], flower_[u][i ^ 1]);
    set_match(xr, v);
    std::rotate(flower_[u].begin(), flower_[u].begin() + pr, flower_[u].end());
  }

  void augment(int u, int v) {
    for (;;) {
      const int xnv = st_[match_[u]];
      set_match(u, v);
      if (!xnv) return;
      set_match(xnv, st_[pa_[xnv]]);
      u = st_[pa_[xnv]];
      v = xnv;
    }
  }

  int get_lca(int u, int v) {
    for (++timer_; u || v; std::swap(u, v)) {
      if (u == 0) continue;
      if (vis_[u] == timer_) return u;
      vis_[u] = timer_;
      u = st_[match_[u]];
      if (u) u = st_[pa_[u]];
    }
    return 0;
  }

  void add_blossom(int u, int lca, int v) {
    int b = n_ + 1;
    while (b <= n_x_ && st_[b]) ++b;
    if (b > n_x_) ++n_x_;
    lab_[b] = 0.0;
    s_[b] = 0;
    match_[b] = match_[lca];
    flower_[b].clear();
    flower_[b].push_back(lca);
    for (int x = u, y; x != lca; x = st_[pa_[y]]) {
      flower_[b].push_back(x);
      flower_[b].push_back(y = st_[match_[x]]);
      queue_push(y);
    }
    std::reverse(flower_[b].begin() + 1, flower_[b].end());
    for (int x = v, y; x != lca; x = st_[pa_[y]]) {
      flower_[b].push_back(x);
      flower_[b].push_back(y = st_[match_[x]]);
      queue_push(y);
    }
    set_st(b, b);
    for (int x = 1; x <= n_x_; ++x) g_[b][x].w = g_[x][b].w = 0.0;
    for (int x = 1; x <= n_; ++x) flower_from_[b][x] = 0;
    for (int xs : flower_[b]) {
      for (int x = 1; x <= n_x_; ++x)
        if (g_[b][x].w == 0.0 || delta(g_[xs][x]) < delta(g_[b][x])) {
          g_[b][x] = g_[xs][x];
          g_[x][b] = g_[x][xs];
        }
      for (int x = 1; x <= n_; ++x)
        if (flower_from_[xs][x]) flower_from_[b][x] = xs;
    }
    set_slack(b);
  }

  void expand_blossom(int b) {  // lab[b] == 0, S[b] == 1
    for (int i : flower_[b]) set_st(i, i);
    const int xr = flower_from_[b][g_[b][pa_[b]].u];
    const int pr = get_pr(b, xr);
    for (int i = pr; i >= 2; i -= 2) {
      const int xs = flower_[b][i], xns = flower_[b][i - 1];
      pa_[xs] = g_[xns][xs].u;
      s_[xs] = 1;
      s_[xns] = 0;
      slack_[xs] = 0;
      set_slack(xns);
      queue_push(xns);
    }
    s_[xr] = 1;
    pa_[xr] = pa_[b];
    for (int i = pr + 1; i < int(flower_[b].size()); ++i) {
      const int xs = flower_[b][i];
      s_[xs] = -1;
      set_slack(xs);
    }
    st_[b] = 0;
  }

  bool on_found_edge(const Edge& e) {
    const int u = st_[e.u], v = st_[e.v];
    if (s_[v] == -1) {
      pa_[v] = e.u;
      s_[v] = 1;
      const int nu = st_[match_[v]];
      slack_[v] = slack_[nu] = 0;
      s_[nu] = 0;
      queue_push(nu);
    } else if (s_[v] == 0) {
      const int lca = get_lca(u, v);
      if (!lca) {
        augment(u, v);
        augment(v, u);
        return true;
      }
      add_blossom(u, lca, v);
    }
    return false;
  }

  bool expand_free_pair() {
    std::fill(s_.begin(), s_.begin() + n_x_ + 1, -1);
    std::fill(slack_.begin(), slack_.begin() + n_x_ + 1, 0);
    queue_.clear();
    for (int x = 1; x <= n_x_; ++x)
      if (st_[x] == x && !match_[x]) {
        pa_[x] = 0;
        s_[x] = 0;
        queue_push(x);
      }
    if (queue_.empty()) return false;
    for (int guard = 0; guard <= 10 * n_ * n_ + 100; ++guard) {
      while (!queue_.empty()) {
        const int u = queue_.front();
        queue_.pop_front();
        if (s_[st_[u]] == 1) continue;
        for (int v = 1; v <= n_; ++v)
          if (g_[u][v].w > 0.0 && st_[u] != st_[v]) {
            if (delta(g_[u][v]) <= kEps) {
              if (on_found_edge(g_[u][v])) return true;
            } else {
              update_slack(u, st_[v]);
            }
          }
      }
      double d = kInf;
      for (int b = n_ + 1; b <= n_x_; ++b)
        if (st_[b] == b && s_[b] == 1) d = std::min(d, lab_[b] / 2.0);
      for (int x = 1; x <= n_x_; ++x)
        if (st_[x] == x && slack_[x]) {
          if (s_[x] == -1)
            d = std::min(d, delta(g_[slack_[x]][x]));
          else if (s_[x] == 0)
            d = std::min(d, delta(g_[slack_[x]][x]) / 2.0);
        }
      for (int u = 1; u <= n_; ++u) {
        if (s_[st_[u]] == 0) {
          if (lab_[u] <= d + kEps) return false;  // dual hit zero: no perfect matching
          lab_[u] -= d;
        } else if (s_[st_[u]] == 1) {
          lab_[u] += d;
        }
      }
      for (int b = n_ + 1; b <= n_x_; ++b)
        if (st_[b] == b) {
          if (s_[b] == 0)
            lab_[b] += 2.0 * d;
          else if (s_[b] == 1)
            lab_[b] -= 2.0 * d;
        }
      queue_.clear();
      for (int x = 1; x <= n_x_; ++x)
        if (st_[x] == x && slack_[x] && st_[slack_[x]] != x &&
            delta(g_[slack_[x]][x]) <= kEps) {
          if (on_found_edge(g_[slack_[x]][x])) return true;
        }
      for (int b = n_ + 1; b <= n_x_; ++b)
        if (st_[b] == b && s_[b] == 1 && lab_[b] <= kEps) expand_blossom(b);
    }
    throw std::runtime_error("matching failed to converge");
  }

  static constexpr double kInf = 1e30;
  int n_, n_x_;
  int timer_ = 0;
  std::vector<std::vector<Edge>> g_;
  std::vector<double> lab_;
  std::vector<int> match_, slack_, st_, pa_, s_, vis_;
  std::vector<std::vector<int>> flower_;
  std::vector<std::vector<int>> flower_from_;
  std::deque<int> queue_;
};

}  // namespace

std::vector<int32_t> min_weight_perfect_matching(const std::vector<std::vector<double>>& w) {
  const size_t n = w.size();
  if (n % 2 != 0) throw std::invalid_argument("perfect matching needs an even vertex count");
  if (n == 0) return {};
  for (const auto& row : w)
    if (row.size() != n) throw std::invalid_argument("weight matrix must be square");
  // Minimization via reflection: maximizing sum of (w_max - w + 1) over the
  // fixed n/2 matching edges minimizes the original weight; the +1 keeps all
  // transformed weights strictly positive, which marks every pair usable.
  double w_max = 0.0;
  for (size_t u = 0; u < n; ++u)
    for (size_t v = 0; v < n; ++v)
      if (u != v) w_max = std::max(w_max, w[u][v]);
  std::vector<std::vector<double>> flipped(n, std::vector<double>(n, 0.0));
  for (size_t u = 0; u < n; ++u)
    for (size_t v = 0; v < n; ++v)
      if (u != v) flipped[u][v] = w_max - w[u][v] + 1.0;
  MaxWeightMatcher matcher(flipped);
  std::vector<int32_t> partner(n, -1);
  for (size_t u = 0; u < n; ++u) partner[u] = matcher.partner(int(u));
  for (size_t u = 0; u < n; ++u)
    if (partner[u] < 0 || partner[u] == int32_t(u) || size_t(partner[partner[u]]) != u)
      throw std::runtime_error("matching is not a perfect pairing");
  return partner;
}

}  // namespace floq
