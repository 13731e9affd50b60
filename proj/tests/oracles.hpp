#pragma once

// Straight-line reference implementations on nested std::vector, written
// entry by entry from the model's definitions. Nothing here calls into the
// library, so agreement with it is an independent check.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace oracle {

using Vec = std::vector<double>;
using Mat = std::vector<Vec>;
using Mask = std::vector<std::vector<bool>>;

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

inline Mat zeros(std::size_t r, std::size_t c) { return Mat(r, Vec(c, 0.0)); }

// y = W x for W [out × in].
inline Vec matvec(const Mat& w, const Vec& x) {
  Vec y(w.size(), 0.0);
  for (std::size_t o = 0; o < w.size(); ++o)
    for (std::size_t i = 0; i < x.size(); ++i) y[o] += w[o][i] * x[i];
  return y;
}

inline Vec cat(std::initializer_list<Vec> parts) {
  Vec out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

inline Vec softmax(const Vec& v) {
  double mx = v[0];
  for (double x : v) mx = std::max(mx, x);
  Vec out(v.size());
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += out[i] = std::exp(v[i] - mx);
  for (double& x : out) x /= s;
  return out;
}

// output(i,j) = exp(s(i,j)) / Σ_{j': M(i,j')} exp(s(i,j')) on the support, 0 elsewhere.
inline Mat masked_softmax(const Mat& s, const Mask& m) {
  const std::size_t n = s.size();
  Mat out = zeros(n, s[0].size());
  for (std::size_t i = 0; i < n; ++i) {
    double denom = 0.0;
    for (std::size_t j = 0; j < s[i].size(); ++j)
      if (m[i][j]) denom += std::exp(s[i][j]);
    for (std::size_t j = 0; j < s[i].size(); ++j)
      if (m[i][j]) out[i][j] = std::exp(s[i][j]) / denom;
  }
  return out;
}

// M(i,j) = 1 iff (i,j) or (j,i) is an edge, or i == j.
inline Mask mask_from_edges(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  Mask m(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = true;
  for (auto [a, b] : edges) m[a][b] = m[b][a] = true;
  return m;
}

// ω_i(j) = exp(h_jᵀh_i/√d) / Σ_{j' ∈ Γ(i) ∪ {i}} exp(h_j'ᵀh_i/√d).
inline Vec influence(const Mat& h, const Mask& m, std::size_t i) {
  const double inv = 1.0 / std::sqrt(static_cast<double>(h[0].size()));
  Vec e(h.size(), 0.0);
  double denom = 0.0;
  for (std::size_t j = 0; j < h.size(); ++j) {
    if (!m[i][j]) continue;
    double dot = 0.0;
    for (std::size_t d = 0; d < h[0].size(); ++d) dot += h[j][d] * h[i][d];
    e[j] = std::exp(dot * inv);
    denom += e[j];
  }
  for (double& x : e) x /= denom;
  return e;
}

// z_i = Σ_j ω_i(j) h_j, node by node.
inline Mat diffuse(const Mat& h, const Mask& m) {
  Mat z = zeros(h.size(), h[0].size());
  for (std::size_t i = 0; i < h.size(); ++i) {
    const Vec w = influence(h, m, i);
    for (std::size_t j = 0; j < h.size(); ++j)
      for (std::size_t d = 0; d < h[0].size(); ++d) z[i][d] += w[j] * h[j][d];
  }
  return z;
}

// Â(i,j) = [A+I](i,j) / √(d̃_i d̃_j) with d̃ the row sums of A+I.
inline Mat normalized_adjacency(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  Mat a = zeros(n, n);
  for (auto [x, y] : edges) a[x][y] = a[y][x] = 1.0;
  for (std::size_t i = 0; i < n; ++i) a[i][i] = 1.0;
  Vec deg(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) deg[i] += a[i][j];
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i][j] /= std::sqrt(deg[i] * deg[j]);
  return a;
}

// Σ_j Â(i,j) X(j,:) for every i.
inline Mat propagate(const Mat& adj, const Mat& x) {
  Mat out = zeros(x.size(), x[0].size());
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j)
      for (std::size_t d = 0; d < x[0].size(); ++d) out[i][d] += adj[i][j] * x[j][d];
  return out;
}

struct GduFull {
  Mat w_f, w_e, w_u, w_g, w_r;
};

struct GduSimplified {
  Mat w_u, w_u_res, w_g, w_f, w_e;
};

struct Gates {
  Vec f, e, g, r;
};

inline Gates gates_full(const GduFull& p, const Vec& z, const Vec& h, const Vec& x) {
  Gates out;
  const Vec xzh = cat({x, z, h});
  const Vec f_pre = matvec(p.w_f, xzh), e_pre = matvec(p.w_e, xzh);
  const std::size_t d = z.size();
  out.f.resize(d);
  out.e.resize(d);
  Vec zt(d), ht(d);
  for (std::size_t k = 0; k < d; ++k) {
    out.f[k] = sigmoid(f_pre[k]);
    out.e[k] = sigmoid(e_pre[k]);
    zt[k] = out.f[k] * z[k];
    ht[k] = out.e[k] * h[k];
  }
  const Vec all5 = cat({x, z, h, zt, ht});
  const Vec g_pre = matvec(p.w_g, all5), r_pre = matvec(p.w_r, all5);
  out.g.resize(d);
  out.r.resize(d);
  for (std::size_t k = 0; k < d; ++k) {
    out.g[k] = sigmoid(g_pre[k]);
    out.r[k] = sigmoid(r_pre[k]);
  }
  return out;
}

inline Vec gdu_full(const GduFull& p, const Vec& z, const Vec& h, const Vec& x) {
  const std::size_t d = z.size();
  const Gates gt = gates_full(p, z, h, x);
  Vec zt(d), ht(d);
  for (std::size_t k = 0; k < d; ++k) {
    zt[k] = gt.f[k] * z[k];
    ht[k] = gt.e[k] * h[k];
  }
  const Vec u1 = matvec(p.w_u, cat({x, zt, ht}));
  const Vec u2 = matvec(p.w_u, cat({x, z, ht}));
  const Vec u3 = matvec(p.w_u, cat({x, zt, h}));
  const Vec u4 = matvec(p.w_u, cat({x, z, h}));
  Vec out(d);
  for (std::size_t k = 0; k < d; ++k) {
    const double g = gt.g[k], r = gt.r[k];
    out[k] = g * r * std::tanh(u1[k]) + (1 - g) * r * std::tanh(u2[k]) + g * (1 - r) * std::tanh(u3[k]) +
             (1 - g) * (1 - r) * std::tanh(u4[k]);
  }
  return out;
}

inline Gates gates_simplified(const GduSimplified& p, const Vec& z, const Vec& h, const Vec& x) {
  Gates out;
  const Vec xzh = cat({x, z, h});
  const Vec f_pre = matvec(p.w_f, xzh), e_pre = matvec(p.w_e, xzh);
  const std::size_t d = z.size();
  out.f.resize(d);
  out.e.resize(d);
  Vec zt(d), ht(d);
  for (std::size_t k = 0; k < d; ++k) {
    out.f[k] = sigmoid(f_pre[k]);
    out.e[k] = sigmoid(e_pre[k]);
    zt[k] = out.f[k] * z[k];
    ht[k] = out.e[k] * h[k];
  }
  const Vec g_pre = matvec(p.w_g, cat({zt, ht}));
  out.g.resize(d);
  for (std::size_t k = 0; k < d; ++k) out.g[k] = sigmoid(g_pre[k]);
  return out;
}

inline Vec gdu_simplified(const GduSimplified& p, const Vec& z, const Vec& h, const Vec& x) {
  const std::size_t d = z.size();
  const Gates gt = gates_simplified(p, z, h, x);
  Vec zt(d), ht(d);
  for (std::size_t k = 0; k < d; ++k) {
    zt[k] = gt.f[k] * z[k];
    ht[k] = gt.e[k] * h[k];
  }
  const Vec adjusted = matvec(p.w_u, cat({zt, ht}));
  const Vec raw = matvec(p.w_u, cat({z, h}));
  const Vec res = matvec(p.w_u_res, x);
  Vec out(d);
  for (std::size_t k = 0; k < d; ++k)
    out[k] = std::tanh(gt.g[k] * adjusted[k] + (1 - gt.g[k]) * raw[k] + res[k]);
  return out;
}

enum class Residual { naive, raw, graph_naive, graph_raw };

// DifNet without dropout, following the per-node update equations.
struct DifNet {
  Mat w_emb, w_x, w_fc;
  std::vector<GduFull> full;
  std::vector<GduSimplified> simplified;  // used when full is empty
  Residual residual = Residual::graph_raw;
};

inline Mat difnet_forward(const DifNet& net, const Mat& x, const Mask& mask, const Mat& adj) {
  const std::size_t n = x.size();
  Mat x_emb(n), h(n);
  for (std::size_t i = 0; i < n; ++i) {
    x_emb[i] = matvec(net.w_emb, x[i]);
    h[i] = matvec(net.w_x, x_emb[i]);
  }
  const std::size_t layers = net.full.empty() ? net.simplified.size() : net.full.size();
  for (std::size_t k = 0; k < layers; ++k) {
    Mat res;
    switch (net.residual) {
      case Residual::naive: res = h; break;
      case Residual::raw: res = x_emb; break;
      case Residual::graph_naive: res = propagate(adj, h); break;
      case Residual::graph_raw: res = propagate(adj, x_emb); break;
    }
    const Mat z = diffuse(h, mask);
    Mat next(n);
    for (std::size_t i = 0; i < n; ++i) {
      next[i] = net.full.empty() ? gdu_simplified(net.simplified[k], z[i], h[i], res[i])
                                 : gdu_full(net.full[k], z[i], h[i], res[i]);
    }
    h = std::move(next);
  }
  Mat y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = softmax(matvec(net.w_fc, h[i]));
  return y;
}

// Bias-free GCN: ReLU(Â H Wᵀ) per hidden layer, softmax on the last.
inline Mat gcn_forward(const std::vector<Mat>& weights, const Mat& x, const Mat& adj) {
  Mat h = x;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    const Mat agg = propagate(adj, h);
    Mat next(h.size());
    for (std::size_t i = 0; i < h.size(); ++i) {
      next[i] = matvec(weights[k], agg[i]);
      if (k + 1 < weights.size()) {
        for (double& v : next[i]) v = std::max(v, 0.0);
      } else {
        next[i] = softmax(next[i]);
      }
    }
    h = std::move(next);
  }
  return h;
}

// Σ_{i ∈ rows} Σ_d −y(i,d)·log(max(p(i,d), 1e-12)).
inline double cross_entropy(const Mat& p, const Mat& y, const std::vector<std::size_t>& rows) {
  double loss = 0.0;
  for (std::size_t i : rows)
    for (std::size_t d = 0; d < p[i].size(); ++d) loss -= y[i][d] * std::log(std::max(p[i][d], 1e-12));
  return loss;
}

}  // namespace oracle
