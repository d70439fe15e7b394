#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace toba {

/// Dense row-major matrix of doubles.
///
/// All products below compute each output row from the matching input row
/// only, accumulating in a fixed index order. Appending rows to an operand
/// therefore never changes the values of the existing output rows, which the
/// augmentation code relies on.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  [[nodiscard]] std::size_t rows() const { return rows_; }
  [[nodiscard]] std::size_t cols() const { return cols_; }
  [[nodiscard]] std::size_t size() const { return data_.size(); }
  [[nodiscard]] bool empty() const { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  [[nodiscard]] std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }

  std::span<double> values() { return data_; }
  [[nodiscard]] std::span<const double> values() const { return data_; }

  void fill(double v);

  /// Returns a copy with `other`'s rows appended below this matrix's rows.
  [[nodiscard]] Matrix vstack(const Matrix& other) const;
  /// Returns the first `n` rows.
  [[nodiscard]] Matrix top_rows(std::size_t n) const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// a * b. Zero entries of `a` are skipped, which makes sparse bag-of-words
/// features cheap.
Matrix matmul(const Matrix& a, const Matrix& b);
/// transpose(a) * b, accumulated over rows of a in ascending order.
Matrix matmul_at_b(const Matrix& a, const Matrix& b);
/// a * transpose(b).
Matrix matmul_a_bt(const Matrix& a, const Matrix& b);

/// Row-wise softmax with max subtraction.
Matrix softmax_rows(const Matrix& logits);

double max_abs_diff(const Matrix& a, const Matrix& b);

}  // namespace toba
