#include "mae/matrix.hpp"

namespace mae {

namespace {
// Cheapest nonzero pivot in column c among rows >= r0: constants first, then fewest terms.
int choose_pivot(const Mat& a, int r0, int c) {
  int best = -1;
  size_t cost = ~size_t(0);
  for (int r = r0; r < int(a.size()); ++r) {
    const Expr& e = a[r][c];
    if (e.zero()) continue;
    size_t k = e.is_const() ? 0 : e.num().size() + e.den().size();
    if (k < cost) {
      cost = k;
      best = r;
    }
  }
  return best;
}

// Reduced row echelon form in place; returns pivot columns.
std::vector<int> rref(Mat& a) {
  std::vector<int> piv;
  int rows = int(a.size());
  if (!rows) return piv;
  int cols = int(a[0].size());
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int p = choose_pivot(a, r, c);
    if (p < 0) continue;
    std::swap(a[r], a[p]);
    Expr inv = a[r][c].inv();
    for (int j = c; j < cols; ++j)
      if (!a[r][j].zero()) a[r][j] = a[r][j] * inv;
    for (int i = 0; i < rows; ++i) {
      if (i == r || a[i][c].zero()) continue;
      Expr f = a[i][c];
      for (int j = c; j < cols; ++j)
        if (!a[r][j].zero()) a[i][j] = a[i][j] - f * a[r][j];
    }
    piv.push_back(c);
    ++r;
  }
  return piv;
}
}  // namespace

Mat identity(int n) {
  Mat m(n, Row(n, Expr(0)));
  for (int i = 0; i < n; ++i) m[i][i] = Expr(1);
  return m;
}

Mat matmul(const Mat& a, const Mat& b) {
  int n = int(a.size()), k = int(b.size()), m = k ? int(b[0].size()) : 0;
  Mat c(n, Row(m, Expr(0)));
  for (int i = 0; i < n; ++i)
    for (int l = 0; l < k; ++l) {
      if (a[i][l].zero()) continue;
      for (int j = 0; j < m; ++j)
        if (!b[l][j].zero()) c[i][j] += a[i][l] * b[l][j];
    }
  return c;
}

Mat inverse(const Mat& a) {
  int n = int(a.size());
  Mat aug(n, Row(2 * n, Expr(0)));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) aug[i][j] = a[i][j];
    aug[i][n + i] = Expr(1);
  }
  auto piv = rref(aug);
  if (int(piv.size()) < n || piv[n - 1] != n - 1) throw std::domain_error("singular matrix");
  Mat inv(n, Row(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) inv[i][j] = aug[i][n + j];
  return inv;
}

Expr det(Mat a) {
  int n = int(a.size());
  Expr d(1);
  for (int c = 0; c < n; ++c) {
    int p = choose_pivot(a, c, c);
    if (p < 0) return Expr(0);
    if (p != c) {
      std::swap(a[p], a[c]);
      d = -d;
    }
    d = d * a[c][c];
    Expr inv = a[c][c].inv();
    for (int i = c + 1; i < n; ++i) {
      if (a[i][c].zero()) continue;
      Expr f = a[i][c] * inv;
      for (int j = c; j < n; ++j)
        if (!a[c][j].zero()) a[i][j] = a[i][j] - f * a[c][j];
    }
  }
  return d;
}

int rank(Mat a) { return int(rref(a).size()); }

std::vector<Row> nullspace(Mat a) {
  std::vector<Row> out;
  if (a.empty()) return out;
  int cols = int(a[0].size());
  auto piv = rref(a);
  std::vector<int> is_piv(cols, -1);
  for (size_t r = 0; r < piv.size(); ++r) is_piv[piv[r]] = int(r);
  for (int f = 0; f < cols; ++f) {
    if (is_piv[f] >= 0) continue;
    Row v(cols, Expr(0));
    v[f] = Expr(1);
    for (size_t r = 0; r < piv.size(); ++r) v[piv[r]] = -a[r][f];
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace mae
