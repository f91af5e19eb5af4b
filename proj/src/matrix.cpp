#include "weilmix/matrix.hpp"

#include <stdexcept>

namespace weilmix {

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = FieldElement{1};
  return m;
}

Vec Matrix::column(std::size_t j) const {
  Vec out(rows);
  for (std::size_t i = 0; i < rows; ++i) out[i] = (*this)(i, j);
  return out;
}

Vec Matrix::row(std::size_t i) const {
  return Vec(data.begin() + static_cast<std::ptrdiff_t>(i * cols),
             data.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols));
}

std::size_t MatrixHash::operator()(const Matrix& m) const noexcept {
  std::size_t h = 0xcbf29ce484222325ull;
  for (auto e : m.data) {
    h ^= e.index + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  }
  return h;
}

Matrix mul(const Field& F, const Matrix& a, const Matrix& b) {
  if (a.cols != b.rows) throw std::invalid_argument("mul: dimension mismatch");
  Matrix out(a.rows, b.cols);
  for (std::size_t i = 0; i < a.rows; ++i) {
    for (std::size_t k = 0; k < a.cols; ++k) {
      const FieldElement aik = a(i, k);
      if (aik.index == 0) continue;
      for (std::size_t j = 0; j < b.cols; ++j) {
        const FieldElement bkj = b(k, j);
        if (bkj.index == 0) continue;
        out(i, j) = F.add(out(i, j), F.mul(aik, bkj));
      }
    }
  }
  return out;
}

Matrix add(const Field& F, const Matrix& a, const Matrix& b) {
  if (a.rows != b.rows || a.cols != b.cols) throw std::invalid_argument("add: dimension mismatch");
  Matrix out(a.rows, a.cols);
  for (std::size_t i = 0; i < a.data.size(); ++i) out.data[i] = F.add(a.data[i], b.data[i]);
  return out;
}

Matrix sub(const Field& F, const Matrix& a, const Matrix& b) {
  if (a.rows != b.rows || a.cols != b.cols) throw std::invalid_argument("sub: dimension mismatch");
  Matrix out(a.rows, a.cols);
  for (std::size_t i = 0; i < a.data.size(); ++i) out.data[i] = F.sub(a.data[i], b.data[i]);
  return out;
}

Matrix transpose(const Matrix& a) {
  Matrix out(a.cols, a.rows);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t j = 0; j < a.cols; ++j) out(j, i) = a(i, j);
  return out;
}

Matrix map_entries(const Matrix& a, const std::function<FieldElement(FieldElement)>& f) {
  Matrix out = a;
  for (auto& e : out.data) e = f(e);
  return out;
}

Vec apply(const Field& F, const Matrix& a, std::span<const FieldElement> x) {
  if (x.size() != a.cols) throw std::invalid_argument("apply: dimension mismatch");
  Vec out(a.rows);
  for (std::size_t i = 0; i < a.rows; ++i) {
    FieldElement acc = F.zero();
    for (std::size_t j = 0; j < a.cols; ++j) acc = F.add(acc, F.mul(a(i, j), x[j]));
    out[i] = acc;
  }
  return out;
}

namespace {

// Reduced row echelon form in place; returns pivot columns.
std::vector<std::size_t> rref(const Field& F, Matrix& a, std::size_t ncols) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < ncols && r < a.rows; ++c) {
    std::size_t piv = r;
    while (piv < a.rows && a(piv, c).index == 0) ++piv;
    if (piv == a.rows) continue;
    if (piv != r)
      for (std::size_t j = 0; j < a.cols; ++j) std::swap(a(piv, j), a(r, j));
    const FieldElement s = F.inv(a(r, c));
    for (std::size_t j = 0; j < a.cols; ++j) a(r, j) = F.mul(a(r, j), s);
    for (std::size_t i = 0; i < a.rows; ++i) {
      if (i == r || a(i, c).index == 0) continue;
      const FieldElement f = a(i, c);
      for (std::size_t j = 0; j < a.cols; ++j) a(i, j) = F.sub(a(i, j), F.mul(f, a(r, j)));
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

}  // namespace

std::size_t rank(const Field& F, Matrix a) { return rref(F, a, a.cols).size(); }

std::optional<Matrix> inverse(const Field& F, const Matrix& a) {
  if (a.rows != a.cols) throw std::invalid_argument("inverse: not square");
  const std::size_t n = a.rows;
  Matrix aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
    aug(i, n + i) = F.one();
  }
  const auto piv = rref(F, aug, n);
  if (piv.size() != n) return std::nullopt;
  Matrix out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) = aug(i, n + j);
  return out;
}

Matrix power(const Field& F, const Matrix& a, std::uint64_t e) {
  Matrix result = Matrix::identity(a.rows);
  Matrix base = a;
  while (e) {
    if (e & 1) result = mul(F, result, base);
    base = mul(F, base, base);
    e >>= 1;
  }
  return result;
}

std::vector<Vec> kernel_basis(const Field& F, const Matrix& a) {
  Matrix r = a;
  const auto pivots = rref(F, r, r.cols);
  std::vector<bool> is_pivot(a.cols, false);
  for (auto c : pivots) is_pivot[c] = true;
  std::vector<Vec> basis;
  for (std::size_t free = 0; free < a.cols; ++free) {
    if (is_pivot[free]) continue;
    Vec v(a.cols, F.zero());
    v[free] = F.one();
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = F.neg(r(i, free));
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<AffineSolution> solve(const Field& F, const Matrix& a, std::span<const FieldElement> b) {
  if (b.size() != a.rows) throw std::invalid_argument("solve: dimension mismatch");
  Matrix aug(a.rows, a.cols + 1);
  for (std::size_t i = 0; i < a.rows; ++i) {
    for (std::size_t j = 0; j < a.cols; ++j) aug(i, j) = a(i, j);
    aug(i, a.cols) = b[i];
  }
  const auto pivots = rref(F, aug, a.cols);
  for (std::size_t i = pivots.size(); i < a.rows; ++i)
    if (aug(i, a.cols).index != 0) return std::nullopt;
  AffineSolution sol;
  sol.particular.assign(a.cols, F.zero());
  for (std::size_t i = 0; i < pivots.size(); ++i) sol.particular[pivots[i]] = aug(i, a.cols);
  sol.kernel = kernel_basis(F, a);
  return sol;
}

FieldElement dot(const Field& F, std::span<const FieldElement> x, std::span<const FieldElement> y) {
  FieldElement acc = F.zero();
  for (std::size_t i = 0; i < x.size(); ++i) acc = F.add(acc, F.mul(x[i], y[i]));
  return acc;
}

bool is_zero(std::span<const FieldElement> x) {
  for (auto e : x)
    if (e.index != 0) return false;
  return true;
}

}  // namespace weilmix
