#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "weilmix/ffield.hpp"

namespace weilmix {

using Vec = std::vector<FieldElement>;

/// Dense row-major matrix of field elements. Arithmetic takes the field explicitly.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<FieldElement> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c) {}

  static Matrix identity(std::size_t n);

  FieldElement& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  FieldElement operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

  Vec column(std::size_t j) const;
  Vec row(std::size_t i) const;

  friend bool operator==(const Matrix&, const Matrix&) = default;
};

struct MatrixHash {
  std::size_t operator()(const Matrix& m) const noexcept;
};

Matrix mul(const Field& F, const Matrix& a, const Matrix& b);
Matrix add(const Field& F, const Matrix& a, const Matrix& b);
Matrix sub(const Field& F, const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& a);
Matrix map_entries(const Matrix& a, const std::function<FieldElement(FieldElement)>& f);
Vec apply(const Field& F, const Matrix& a, std::span<const FieldElement> x);

std::size_t rank(const Field& F, Matrix a);
std::optional<Matrix> inverse(const Field& F, const Matrix& a);
Matrix power(const Field& F, const Matrix& a, std::uint64_t e);

/// Basis of {x : a x = 0}.
std::vector<Vec> kernel_basis(const Field& F, const Matrix& a);

struct AffineSolution {
  Vec particular;
  std::vector<Vec> kernel;
};

/// All solutions of a x = b, or nullopt when inconsistent.
std::optional<AffineSolution> solve(const Field& F, const Matrix& a, std::span<const FieldElement> b);

FieldElement dot(const Field& F, std::span<const FieldElement> x, std::span<const FieldElement> y);
bool is_zero(std::span<const FieldElement> x);

}  // namespace weilmix
