#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace sparse_moments {

/// Dense row-major matrix. Small sizes only ((2k+1) x (2k+1) at most).
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> data() const noexcept { return data_; }

  std::vector<double> operator*(std::span<const double> x) const;
  Matrix transposed() const;

  double frobenius_norm() const;
  /// Largest |a_ij - a_ji|; 0 for exactly symmetric matrices.
  double asymmetry() const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

double norm2(std::span<const double> x);
double dot(std::span<const double> x, std::span<const double> y);

}  // namespace sparse_moments
