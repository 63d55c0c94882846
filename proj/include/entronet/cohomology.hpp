#pragma once

#include "entronet/groupnet.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <unordered_set>
#include <vector>

namespace entronet {

inline constexpr int kMaxSolverGroupOrder = 64;

namespace detail {

using i64 = long long;
using i128 = __int128;

inline i64 mulm(i64 a, i64 b, i64 m) { return static_cast<i64>(static_cast<i128>(a) * b % m); }

inline i64 inv_unit(i64 a, i64 m) {
  i64 g = m, x = 0, x1 = 1, r = mod_norm(a, m);
  while (r) {
    i64 q = g / r;
    std::tie(g, r) = std::make_pair(r, g - q * r);
    std::tie(x, x1) = std::make_pair(x1, x - q * x1);
  }
  if (g != 1) throw std::logic_error("inv_unit: not a unit");
  return mod_norm(x, m);
}

// Arithmetic in Z/p^K.
struct LocalRing {
  i64 p = 2;
  int K = 1;
  i64 mod = 2;

  LocalRing(i64 p_, int K_) : p(p_), K(K_), mod(1) {
    for (int i = 0; i < K; ++i) mod *= p;
  }
  int val(i64 x) const {
    x = mod_norm(x, mod);
    if (x == 0) return K;
    int v = 0;
    while (x % p == 0) { x /= p; ++v; }
    return v;
  }
  i64 pw(int e) const {
    i64 r = 1;
    for (int i = 0; i < e && i < K; ++i) r *= p;
    return e >= K ? 0 : r;
  }
  // x = p^v * unit; returns the unit part modulo p^K
  i64 unit_part(i64 x, int v) const {
    x = mod_norm(x, mod);
    for (int i = 0; i < v; ++i) x /= p;
    return x;
  }
};

using Mat = std::vector<std::vector<i64>>;

inline Mat identity_mat(std::size_t n) {
  Mat m(n, std::vector<i64>(n, 0));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

// P * M * Q = diag(p^{d_0}, p^{d_1}, ...), unit entries normalized away.
struct SNF {
  std::vector<int> diag;  // exponents along the diagonal, length min(rows, cols); K means zero
  Mat Q, Qinv, P, Pinv;
};

inline SNF smith(const LocalRing& R, Mat M, std::size_t rows, std::size_t cols, bool track_cols, bool track_rows) {
  SNF out;
  const i64 m = R.mod;
  if (track_cols) { out.Q = identity_mat(cols); out.Qinv = identity_mat(cols); }
  if (track_rows) { out.P = identity_mat(rows); out.Pinv = identity_mat(rows); }
  auto row_axpy = [&](Mat& A, std::size_t dst, std::size_t src, i64 f) {  // row dst -= f * row src
    if (f == 0) return;
    for (std::size_t j = 0; j < A[dst].size(); ++j)
      if (A[src][j]) A[dst][j] = mod_norm(A[dst][j] - mulm(f, A[src][j], m), m);
  };
  auto col_axpy = [&](Mat& A, std::size_t dst, std::size_t src, i64 f) {  // col dst -= f * col src
    if (f == 0) return;
    for (auto& row : A)
      if (row[src]) row[dst] = mod_norm(row[dst] - mulm(f, row[src], m), m);
  };
  std::size_t n = std::min(rows, cols);
  for (std::size_t r = 0; r < n; ++r) {
    int best = R.K;
    std::size_t bi = r, bj = r;
    for (std::size_t i = r; i < rows && best > 0; ++i)
      for (std::size_t j = r; j < cols; ++j) {
        if (M[i][j] == 0) continue;
        int v = R.val(M[i][j]);
        if (v < best) { best = v; bi = i; bj = j; if (v == 0) break; }
      }
    if (best == R.K) {
      for (std::size_t k = r; k < n; ++k) out.diag.push_back(R.K);
      break;
    }
    if (bi != r) {
      std::swap(M[bi], M[r]);
      if (track_rows) {
        std::swap(out.P[bi], out.P[r]);
        for (auto& row : out.Pinv) std::swap(row[bi], row[r]);
      }
    }
    if (bj != r) {
      for (auto& row : M) std::swap(row[bj], row[r]);
      if (track_cols) {
        for (auto& row : out.Q) std::swap(row[bj], row[r]);
        std::swap(out.Qinv[bj], out.Qinv[r]);
      }
    }
    i64 u = R.unit_part(M[r][r], best);
    i64 uinv = inv_unit(u, m);
    // scale column r by uinv so the pivot is p^best
    for (auto& row : M) row[r] = mulm(row[r], uinv, m);
    if (track_cols) {
      for (auto& row : out.Q) row[r] = mulm(row[r], uinv, m);
      for (auto& x : out.Qinv[r]) x = mulm(x, u, m);
    }
    for (std::size_t i = r + 1; i < rows; ++i) {
      if (M[i][r] == 0) continue;
      i64 f = R.unit_part(M[i][r], best);
      row_axpy(M, i, r, f);
      if (track_rows) {
        row_axpy(out.P, i, r, f);
        for (auto& row : out.Pinv) row[r] = mod_norm(row[r] + mulm(f, row[i], m), m);
      }
    }
    for (std::size_t j = r + 1; j < cols; ++j) {
      if (M[r][j] == 0) continue;
      i64 f = R.unit_part(M[r][j], best);
      col_axpy(M, j, r, f);
      if (track_cols) {
        col_axpy(out.Q, j, r, f);
        for (std::size_t k = 0; k < cols; ++k)
          if (out.Qinv[j][k]) out.Qinv[r][k] = mod_norm(out.Qinv[r][k] + mulm(f, out.Qinv[j][k], m), m);
      }
    }
    out.diag.push_back(best);
  }
  return out;
}

// Streaming row echelon over Z/p^K; keeps one row per pivot column.
struct EchelonBasis {
  const LocalRing& R;
  std::size_t cols;
  std::vector<std::vector<i64>> rows;
  std::vector<int> pivot_row;  // column -> row index or -1

  EchelonBasis(const LocalRing& r, std::size_t c) : R(r), cols(c), pivot_row(c, -1) {}

  void insert(std::vector<i64> v) {
    for (std::size_t c = 0; c < cols; ++c) {
      if (v[c] == 0) continue;
      int pr = pivot_row[c];
      if (pr < 0) {
        pivot_row[c] = static_cast<int>(rows.size());
        rows.push_back(std::move(v));
        return;
      }
      int vp = R.val(rows[pr][c]);
      int vn = R.val(v[c]);
      if (vn < vp) std::swap(v, rows[pr]), std::swap(vp, vn);
      // now val(v[c]) >= val(pivot)
      i64 f = mulm(R.unit_part(v[c], vp), inv_unit(R.unit_part(rows[pr][c], vp), R.mod), R.mod);
      const auto& prow = rows[pr];
      for (std::size_t j = c; j < cols; ++j)
        if (prow[j]) v[j] = mod_norm(v[j] - mulm(f, prow[j], R.mod), R.mod);
    }
  }
};

inline i64 ipow(i64 p, int e) {
  i64 r = 1;
  for (int i = 0; i < e; ++i) r *= p;
  return r;
}

}  // namespace detail

struct SolverError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Normalized cells of degree d: tuples of non-identity elements.
inline std::vector<std::vector<int>> normalized_cells(int n, int d) {
  std::vector<std::vector<int>> out;
  if (d == 0) return {{}};
  if (n < 2) return out;
  std::vector<int> cur(d, 1);
  while (true) {
    out.push_back(cur);
    int k = d - 1;
    while (k >= 0 && cur[k] == n - 1) { cur[k] = 1; --k; }
    if (k < 0) break;
    ++cur[k];
  }
  return out;
}

class HSolver {
 public:
  HSolver(const GModule& U, int degree) : U_(U), degree_(degree) {
    if (degree != 1 && degree != 2) throw SolverError("degree must be 1 or 2");
    if (U.group().order() > kMaxSolverGroupOrder)
      throw SolverError("group order exceeds the solver bound of " + std::to_string(kMaxSolverGroupOrder));
    cells_ = normalized_cells(U.group().order(), degree);
    std::map<long long, bool> primes;
    for (long long m : U.moduli())
      for (const auto& [p, e] : factor_integer(BigInt(m))) primes[p.convert_to<long long>()] = true;
    for (const auto& [p, _] : primes) solve_prime(p);
    assemble();
  }

  int degree() const { return degree_; }
  const std::vector<long long>& invariants() const { return invariants_; }  // d_1 | d_2 | ..., all > 1
  long long order() const {
    long long r = 1;
    for (long long d : invariants_) r *= d;
    return r;
  }
  const std::vector<Cochain1>& reps1() const { return reps1_; }
  const std::vector<Cochain2>& reps2() const { return reps2_; }

  // Coordinates of the class of a normalized cocycle in the elementary-divisor basis, per prime.
  std::vector<long long> class_coordinates(const std::vector<Elem>& cell_values) const {
    std::vector<long long> out;
    for (const auto& P : primes_) {
      auto x = project(P, cell_values);
      auto y = apply_rows(P.R, P.Qinv, x);
      std::vector<detail::i64> t(P.s.size());
      for (std::size_t j = 0; j < P.s.size(); ++j) {
        detail::i64 sc = P.R.pw(P.R.K - P.s[j]);
        if (P.s[j] == 0) { t[j] = 0; continue; }
        if (y[j] % sc != 0) throw CocycleError("cochain is not a cocycle");
        t[j] = y[j] / sc;
      }
      auto cls = apply_rows(P.R, P.P2, t);
      for (std::size_t r = 0; r < P.e.size(); ++r) {
        if (P.e[r] == 0) continue;
        out.push_back(mod_norm(cls[r], P.R.pw(P.e[r]) == 0 ? P.R.mod : P.R.pw(P.e[r])));
      }
    }
    return out;
  }

  std::vector<long long> class_of(const Cochain2& c) const { return class_coordinates(cell_values(c)); }
  std::vector<long long> class_of(const Cochain1& f) const { return class_coordinates(cell_values(f)); }

  bool is_coboundary(const Cochain2& c) const {
    require_cocycle2(U_, c);
    for (long long x : class_of(c))
      if (x != 0) return false;
    return true;
  }
  bool is_coboundary(const Cochain1& f) const {
    if (!verify_cocycle1(U_, f)) throw CocycleError("1-cocycle identity fails");
    for (long long x : class_of(f))
      if (x != 0) return false;
    return true;
  }

  std::vector<Elem> cell_values(const Cochain2& c) const {
    std::vector<Elem> v;
    for (const auto& cell : cells_) v.push_back(c(cell[0], cell[1]));
    return v;
  }
  std::vector<Elem> cell_values(const Cochain1& f) const {
    std::vector<Elem> v;
    for (const auto& cell : cells_) v.push_back(f(cell[0]));
    return v;
  }

 private:
  using i64 = detail::i64;

  struct PrimeData {
    i64 p;
    detail::LocalRing R;
    std::vector<int> a;       // exponent of p in each module factor
    std::vector<i64> q;       // m_i / p^{a_i}
    std::vector<int> s;       // kernel exponents
    detail::Mat Q, Qinv;      // column transforms of the cocycle matrix
    std::vector<int> e;       // exponents of the elementary divisors of H_p
    detail::Mat P2, P2inv;    // row transforms of the presentation
    std::vector<std::vector<i64>> gens;  // representative vectors (lifted coordinates), one per e_r > 0
    std::vector<int> gen_e;
  };

  static std::vector<i64> apply_rows(const detail::LocalRing& R, const detail::Mat& A, const std::vector<i64>& x) {
    std::vector<i64> y(A.size(), 0);
    for (std::size_t i = 0; i < A.size(); ++i) {
      detail::i128 s = 0;
      for (std::size_t j = 0; j < x.size(); ++j)
        if (A[i][j] && x[j]) s = (s + static_cast<detail::i128>(A[i][j]) * x[j]) % R.mod;
      y[i] = mod_norm(static_cast<i64>(s), R.mod);
    }
    return y;
  }

  // Lifted p-primary coordinates of the cell values, embedded in Z/p^K.
  std::vector<i64> project(const PrimeData& P, const std::vector<Elem>& vals) const {
    std::size_t k = U_.rank();
    std::vector<i64> x(vals.size() * k, 0);
    for (std::size_t c = 0; c < vals.size(); ++c)
      for (std::size_t i = 0; i < k; ++i) {
        if (P.a[i] == 0) continue;
        i64 pa = detail::ipow(P.p, P.a[i]);
        i64 qinv = detail::inv_unit(P.q[i] % pa, pa);
        x[c * k + i] = detail::mulm(mod_norm(vals[c][i], pa), qinv, pa);
      }
    return x;
  }

  // Matrix of the p-part of the action, indexed [i][j], valid modulo p^{a_i}.
  detail::Mat local_action(const PrimeData& P, int g) const {
    std::size_t k = U_.rank();
    const Matrix& A = U_.action()[g];
    detail::Mat B(k, std::vector<i64>(k, 0));
    for (std::size_t i = 0; i < k; ++i) {
      if (P.a[i] == 0) continue;
      for (std::size_t j = 0; j < k; ++j) {
        if (P.a[j] == 0) continue;
        long long m = U_.moduli()[i];
        i64 v = static_cast<i64>(static_cast<detail::i128>(A[i][j]) * P.q[j] % m);
        if (v % P.q[i] != 0) throw std::logic_error("action does not preserve primary parts");
        B[i][j] = mod_norm(v / P.q[i], P.R.mod);
      }
    }
    return B;
  }

  void solve_prime(i64 p) {
    const Group& G = U_.group();
    const std::size_t k = U_.rank();
    const int n = G.order();
    std::vector<int> a(k, 0);
    std::vector<i64> q(k, 1);
    int K = 0;
    for (std::size_t i = 0; i < k; ++i) {
      long long m = U_.moduli()[i];
      while (m % p == 0) { m /= p; ++a[i]; }
      q[i] = m;
      K = std::max(K, a[i]);
    }
    PrimeData P{p, detail::LocalRing(p, K), a, q, {}, {}, {}, {}, {}, {}, {}, {}};
    const auto& R = P.R;
    std::vector<detail::Mat> act(n);
    for (int g = 0; g < n; ++g) act[g] = local_action(P, g);

    std::map<std::vector<int>, std::size_t> cell_index;
    for (std::size_t c = 0; c < cells_.size(); ++c) cell_index[cells_[c]] = c;
    const std::size_t N = cells_.size() * k;
    auto col = [&](const std::vector<int>& cell, std::size_t j) -> long long {
      for (int x : cell)
        if (x == 0) return -1;
      return static_cast<long long>(cell_index.at(cell) * k + j);
    };

    // cocycle condition rows, scaled by p^{K - a_i}
    detail::EchelonBasis ech(R, N);
    auto push_condition = [&](const std::vector<std::tuple<std::vector<int>, int, int>>& terms) {
      // each term: cell, sign, acting element (0 for none)
      for (std::size_t i = 0; i < k; ++i) {
        if (a[i] == 0) continue;
        std::vector<i64> row(N, 0);
        bool any = false;
        i64 scale = R.pw(K - a[i]);
        for (const auto& [cell, sign, g] : terms) {
          for (std::size_t j = 0; j < k; ++j) {
            long long cidx = col(cell, j);
            if (cidx < 0) continue;
            i64 coef = (g == 0) ? (i == j ? 1 : 0) : act[g][i][j];
            if (coef == 0) continue;
            i64 v = detail::mulm(mod_norm(sign * coef, R.mod), scale, R.mod);
            row[cidx] = mod_norm(row[cidx] + v, R.mod);
            any = any || v != 0;
          }
        }
        if (any) ech.insert(std::move(row));
      }
    };
    if (degree_ == 1) {
      for (int s = 1; s < n; ++s)
        for (int t = 1; t < n; ++t)
          push_condition({{{t}, +1, s}, {{G.mul(s, t)}, -1, 0}, {{s}, +1, 0}});
    } else {
      for (int s = 1; s < n; ++s)
        for (int t = 1; t < n; ++t)
          for (int g = 1; g < n; ++g)
            push_condition({{{t, g}, +1, s},
                            {{G.mul(s, t), g}, -1, 0},
                            {{s, G.mul(t, g)}, +1, 0},
                            {{s, t}, -1, 0}});
    }
    detail::Mat D = ech.rows;
    std::size_t rows = D.size();
    detail::SNF z;
    if (rows == 0) {
      z.Q = detail::identity_mat(N);
      z.Qinv = detail::identity_mat(N);
    } else {
      z = detail::smith(R, D, rows, N, true, false);
    }
    P.s.assign(N, K);
    for (std::size_t j = 0; j < z.diag.size(); ++j) P.s[j] = z.diag[j];
      // column j of Q scaled by p^{K-s_j} generates a Z/p^{s_j} summand of the cocycles
    P.Q = z.Q;
    P.Qinv = z.Qinv;

    // boundaries and coordinate relations, in t-coordinates
    std::vector<std::vector<i64>> gens;
    auto to_t = [&](const std::vector<i64>& x) {
      auto y = apply_rows(R, P.Qinv, x);
      std::vector<i64> t(N, 0);
      for (std::size_t j = 0; j < N; ++j) {
        if (P.s[j] == 0) continue;
        i64 sc = R.pw(K - P.s[j]);
        if (sc != 0 && y[j] % sc != 0) throw std::logic_error("boundary is not in the cocycle module");
        t[j] = sc == 0 ? 0 : y[j] / sc;
      }
      return t;
    };
    for (std::size_t c = 0; c < cells_.size(); ++c)
      for (std::size_t i = 0; i < k; ++i) {
        std::vector<i64> x(N, 0);
        x[c * k + i] = R.pw(a[i]);
        gens.push_back(to_t(x));
      }
    // coboundaries of basis cochains of degree d-1
    if (degree_ == 1) {
      for (std::size_t j = 0; j < k; ++j) {
        if (a[j] == 0) continue;
        std::vector<i64> x(N, 0);
        for (int s = 1; s < n; ++s)
          for (std::size_t i = 0; i < k; ++i) {
            i64 v = act[s][i][j] - (i == j ? 1 : 0);
            x[cell_index.at({s}) * k + i] = mod_norm(v, R.mod);
          }
        gens.push_back(to_t(x));
      }
    } else {
      for (int b = 1; b < n; ++b)
        for (std::size_t j = 0; j < k; ++j) {
          if (a[j] == 0) continue;
          std::vector<i64> x(N, 0);
          // (d e_{b,j})(s,t) = s e(t) - e(st) + e(s)
          for (int s = 1; s < n; ++s)
            for (int t = 1; t < n; ++t) {
              std::size_t base = cell_index.at({s, t}) * k;
              for (std::size_t i = 0; i < k; ++i) {
                i64 v = 0;
                if (t == b) v += act[s][i][j];
                if (G.mul(s, t) == b && i == j) v -= 1;
                if (s == b && i == j) v += 1;
                x[base + i] = mod_norm(x[base + i] + v, R.mod);
              }
            }
          gens.push_back(to_t(x));
        }
    }
    // presentation: rows = t-coordinates, columns = generators then p^{s_j} e_j
    std::size_t cols = gens.size() + N;
    detail::Mat M(N, std::vector<i64>(cols, 0));
    for (std::size_t c = 0; c < gens.size(); ++c)
      for (std::size_t j = 0; j < N; ++j) M[j][c] = gens[c][j];
    for (std::size_t j = 0; j < N; ++j) M[j][gens.size() + j] = R.pw(P.s[j]);
    auto pres = detail::smith(R, M, N, cols, false, true);
    P.e.assign(N, 0);
    for (std::size_t r = 0; r < N; ++r) P.e[r] = r < pres.diag.size() ? pres.diag[r] : K;
    P.P2 = pres.P;
    P.P2inv = pres.Pinv;
    for (std::size_t r = 0; r < N; ++r) {
      if (P.e[r] == 0) continue;
      std::vector<i64> t(N);
      for (std::size_t j = 0; j < N; ++j) t[j] = P.P2inv[j][r];
      // x = sum_j t_j p^{K-s_j} Q e_j
      std::vector<i64> y(N, 0);
      for (std::size_t j = 0; j < N; ++j) y[j] = detail::mulm(t[j], R.pw(K - P.s[j]), R.mod);
      if (K == 0) continue;
      std::vector<i64> x = apply_rows(R, P.Q, y);
      P.gens.push_back(x);
      P.gen_e.push_back(P.e[r]);
    }
    primes_.push_back(std::move(P));
  }

  // Lifted p-coordinates -> module elements per cell.
  std::vector<Elem> embed(const PrimeData& P, const std::vector<i64>& x) const {
    std::size_t k = U_.rank();
    std::vector<Elem> out(cells_.size(), U_.zero());
    for (std::size_t c = 0; c < cells_.size(); ++c)
      for (std::size_t i = 0; i < k; ++i) {
        if (P.a[i] == 0) continue;
        long long m = U_.moduli()[i];
        i64 pa = detail::ipow(P.p, P.a[i]);
        i64 v = mod_norm(x[c * k + i], pa);
        out[c][i] = static_cast<long long>(static_cast<detail::i128>(v) * P.q[i] % m);
      }
    return out;
  }

  void assemble() {
    // per prime, elementary divisors sorted descending
    std::vector<std::vector<std::pair<int, std::vector<Elem>>>> per;
    std::size_t width = 0;
    for (const auto& P : primes_) {
      std::vector<std::pair<int, std::vector<Elem>>> list;
      for (std::size_t r = 0; r < P.gens.size(); ++r) list.push_back({P.gen_e[r], embed(P, P.gens[r])});
      std::stable_sort(list.begin(), list.end(), [](const auto& x, const auto& y) { return x.first > y.first; });
      width = std::max(width, list.size());
      per.push_back(std::move(list));
    }
    std::vector<long long> inv;
    std::vector<std::vector<Elem>> reps;
    for (std::size_t r = 0; r < width; ++r) {
      long long d = 1;
      std::vector<Elem> v(cells_.size(), U_.zero());
      for (std::size_t pi = 0; pi < per.size(); ++pi) {
        if (r >= per[pi].size()) continue;
        for (int t = 0; t < per[pi][r].first; ++t) d *= primes_[pi].p;
        for (std::size_t c = 0; c < cells_.size(); ++c) v[c] = U_.add(v[c], per[pi][r].second[c]);
      }
      inv.push_back(d);
      reps.push_back(std::move(v));
    }
    std::reverse(inv.begin(), inv.end());
    std::reverse(reps.begin(), reps.end());
    invariants_ = inv;
    for (const auto& v : reps) {
      if (degree_ == 1) {
        Cochain1 f = zero_cochain1(U_);
        for (std::size_t c = 0; c < cells_.size(); ++c) f.values[cells_[c][0]] = v[c];
        reps1_.push_back(f);
      } else {
        Cochain2 f = zero_cochain2(U_);
        for (std::size_t c = 0; c < cells_.size(); ++c) f.at(cells_[c][0], cells_[c][1]) = v[c];
        reps2_.push_back(f);
      }
    }
  }

  GModule U_;
  int degree_;
  std::vector<std::vector<int>> cells_;
  std::vector<PrimeData> primes_;
  std::vector<long long> invariants_;
  std::vector<Cochain1> reps1_;
  std::vector<Cochain2> reps2_;
};

// Invariant factors from the sizes of the p^j-torsion subgroups of a finite abelian group.
inline std::vector<long long> invariants_from_torsion(const std::map<long long, std::vector<long long>>& torsion) {
  // torsion[p][j] = |H[p^j]| for j = 0, 1, 2, ...
  std::vector<std::vector<int>> exps;
  std::vector<long long> ps;
  for (const auto& [p, sizes] : torsion) {
    std::vector<int> count_ge;  // count_ge[j-1] = number of factors with exponent >= j
    for (std::size_t j = 1; j < sizes.size(); ++j) {
      long long ratio = sizes[j] / sizes[j - 1];
      int c = 0;
      while (ratio > 1) { ratio /= p; ++c; }
      count_ge.push_back(c);
    }
    std::vector<int> e;
    int total = count_ge.empty() ? 0 : count_ge[0];
    for (int f = 0; f < total; ++f) {
      int ex = 0;
      for (std::size_t j = 0; j < count_ge.size(); ++j)
        if (count_ge[j] > f) ex = static_cast<int>(j) + 1;
      e.push_back(ex);
    }
    exps.push_back(e);
    ps.push_back(p);
  }
  std::size_t width = 0;
  for (const auto& e : exps) width = std::max(width, e.size());
  std::vector<long long> out;
  for (std::size_t r = 0; r < width; ++r) {
    long long d = 1;
    for (std::size_t i = 0; i < exps.size(); ++i)
      if (r < exps[i].size())
        for (int t = 0; t < exps[i][r]; ++t) d *= ps[i];
    out.push_back(d);
  }
  std::reverse(out.begin(), out.end());
  return out;
}

struct EnumerationResult {
  long long cocycles = 0;
  long long coboundaries = 0;
  std::vector<long long> invariants;
  long long order() const { return coboundaries ? cocycles / coboundaries : 0; }
};

// Exhaustive count over normalized cochains; only for tiny search spaces.
class Enumerator {
 public:
  Enumerator(const GModule& U, int degree, long long limit = (1LL << 20)) : U_(U), degree_(degree) {
    int n = U.group().order();
    cells_ = normalized_cells(n, degree);
    long long space = 1;
    for (std::size_t c = 0; c < cells_.size(); ++c) {
      if (space > limit / U.size()) throw SolverError("search space too large for enumeration");
      space *= U.size();
    }
    space_ = space;
    build();
  }

  const EnumerationResult& result() const { return res_; }
  bool in_boundaries(const std::vector<Elem>& v) const { return B_.count(encode(v)) > 0; }
  bool in_boundaries(const Cochain2& c) const { return in_boundaries(values(c)); }
  bool in_boundaries(const Cochain1& f) const { return in_boundaries(values(f)); }

  std::vector<Elem> values(const Cochain2& c) const {
    std::vector<Elem> v;
    for (const auto& cell : cells_) v.push_back(c(cell[0], cell[1]));
    return v;
  }
  std::vector<Elem> values(const Cochain1& f) const {
    std::vector<Elem> v;
    for (const auto& cell : cells_) v.push_back(f(cell[0]));
    return v;
  }

 private:
  long long encode(const std::vector<Elem>& v) const {
    long long r = 0;
    for (const auto& e : v) r = r * U_.size() + U_.index(e);
    return r;
  }

  Cochain2 as2(long long code) const {
    Cochain2 c = zero_cochain2(U_);
    for (std::size_t i = cells_.size(); i-- > 0;) {
      c.at(cells_[i][0], cells_[i][1]) = U_.element(code % U_.size());
      code /= U_.size();
    }
    return c;
  }
  Cochain1 as1(long long code) const {
    Cochain1 f = zero_cochain1(U_);
    for (std::size_t i = cells_.size(); i-- > 0;) {
      f.values[cells_[i][0]] = U_.element(code % U_.size());
      code /= U_.size();
    }
    return f;
  }

  void build() {
    const Group& G = U_.group();
    int n = G.order();
    std::vector<long long> Z;
    for (long long code = 0; code < space_; ++code) {
      bool ok = degree_ == 1 ? verify_cocycle1(U_, as1(code)) : verify_cocycle2(U_, as2(code));
      if (ok) Z.push_back(code);
    }
    if (degree_ == 1) {
      for (long long i = 0; i < U_.size(); ++i) B_.insert(encode(values(coboundary1(U_, U_.element(i)))));
    } else {
      auto cells1 = normalized_cells(n, 1);
      long long sp = 1;
      for (std::size_t c = 0; c < cells1.size(); ++c) sp *= U_.size();
      for (long long code = 0; code < sp; ++code) {
        Cochain1 b = zero_cochain1(U_);
        long long x = code;
        for (std::size_t i = cells1.size(); i-- > 0;) {
          b.values[cells1[i][0]] = U_.element(x % U_.size());
          x /= U_.size();
        }
        B_.insert(encode(values(coboundary2(U_, b))));
      }
    }
    res_.cocycles = static_cast<long long>(Z.size());
    res_.coboundaries = static_cast<long long>(B_.size());
    long long h = res_.order();
    std::map<long long, std::vector<long long>> torsion;
    for (const auto& [p, e] : factor_integer(BigInt(h))) {
      long long pp = p.convert_to<long long>();
      std::vector<long long> sizes{1};
      long long pj = 1;
      for (long long j = 1; j <= e; ++j) {
        pj *= pp;
        long long cnt = 0;
        for (long long code : Z) {
          std::vector<Elem> v = degree_ == 1 ? values(as1(code)) : values(as2(code));
          for (auto& x : v) x = U_.times(pj, x);
          if (B_.count(encode(v))) ++cnt;
        }
        sizes.push_back(cnt / res_.coboundaries);
      }
      torsion[pp] = sizes;
    }
    res_.invariants = h == 1 ? std::vector<long long>{} : invariants_from_torsion(torsion);
  }

  GModule U_;
  int degree_;
  std::vector<std::vector<int>> cells_;
  long long space_ = 1;
  std::unordered_set<long long> B_;
  EnumerationResult res_;
};

struct CrossCheck {
  bool orders_match = false;
  bool invariants_match = false;
  bool reps_are_cocycles = false;
  bool reps_have_orders = false;
  bool reps_generate = false;
  bool ok() const { return orders_match && invariants_match && reps_are_cocycles && reps_have_orders && reps_generate; }
};

// Solver against exhaustive enumeration: order, invariants, and the coset structure of the representatives.
inline CrossCheck cross_check(const GModule& U, int degree) {
  HSolver S(U, degree);
  Enumerator E(U, degree);
  CrossCheck r;
  r.orders_match = S.order() == E.result().order();
  r.invariants_match = S.invariants() == E.result().invariants;
  const auto& inv = S.invariants();
  std::size_t nreps = degree == 1 ? S.reps1().size() : S.reps2().size();
  r.reps_are_cocycles = true;
  r.reps_have_orders = nreps == inv.size();
  auto rep_values = [&](std::size_t i, long long k) {
    std::vector<Elem> v = degree == 1 ? E.values(S.reps1()[i]) : E.values(S.reps2()[i]);
    for (auto& x : v) x = U.times(k, x);
    return v;
  };
  for (std::size_t i = 0; i < nreps; ++i) {
    bool cyc = degree == 1 ? verify_cocycle1(U, S.reps1()[i]) : verify_cocycle2(U, S.reps2()[i]);
    r.reps_are_cocycles = r.reps_are_cocycles && cyc;
    if (!r.reps_have_orders) continue;
    long long d = inv[i];
    if (!E.in_boundaries(rep_values(i, d))) r.reps_have_orders = false;
    for (const auto& [p, e] : factor_integer(BigInt(d)))
      if (E.in_boundaries(rep_values(i, d / p.convert_to<long long>()))) r.reps_have_orders = false;
  }
  // distinct combinations give distinct classes
  r.reps_generate = r.reps_have_orders;
  if (r.reps_generate) {
    long long total = S.order();
    std::vector<long long> k(inv.size(), 0);
    for (long long code = 1; code < total; ++code) {
      long long x = code;
      for (std::size_t i = 0; i < inv.size(); ++i) { k[i] = x % inv[i]; x /= inv[i]; }
      std::vector<Elem> v = rep_values(0, 0);
      for (std::size_t i = 0; i < inv.size(); ++i) {
        auto w = rep_values(i, k[i]);
        for (std::size_t c = 0; c < v.size(); ++c) v[c] = U.add(v[c], w[c]);
      }
      if (E.in_boundaries(v)) { r.reps_generate = false; break; }
    }
  }
  return r;
}

}  // namespace entronet
