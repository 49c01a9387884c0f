#pragma once

#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace mqg {

// Dense row-major matrix of doubles. The numeric substrate for every layer;
// all shapes are validated at operation boundaries and violations throw
// std::invalid_argument with both shapes in the message.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols, fill) {}
  Matrix(int rows, int cols, std::vector<double> data);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix zeros(int rows, int cols) { return Matrix(rows, cols, 0.0); }
  static Matrix ones(int rows, int cols) { return Matrix(rows, cols, 1.0); }
  static Matrix row_vector(const std::vector<double>& values);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  size_t size() const { return data_.size(); }
  bool same_shape(const Matrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

  double& at(int r, int c) { return data_[static_cast<size_t>(r) * cols_ + c]; }
  double at(int r, int c) const { return data_[static_cast<size_t>(r) * cols_ + c]; }
  double& operator()(int r, int c) { return at(r, c); }
  double operator()(int r, int c) const { return at(r, c); }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  double* row_ptr(int r) { return data_.data() + static_cast<size_t>(r) * cols_; }
  const double* row_ptr(int r) const { return data_.data() + static_cast<size_t>(r) * cols_; }

  std::vector<double> row(int r) const;
  void set_row(int r, const std::vector<double>& values);
  Matrix rows_slice(int begin, int end) const;  // [begin, end)

  void fill(double v) { std::fill(data_.begin(), data_.end(), v); }
  bool all_finite() const;

  Matrix& operator+=(const Matrix& other);
  Matrix& operator-=(const Matrix& other);
  Matrix& operator*=(double s);

  std::string shape_str() const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

// Boolean attention mask; allow(r, c) == true means query r may attend to key c.
class Mask {
 public:
  Mask() = default;
  Mask(int rows, int cols, bool allow_all = true)
      : rows_(rows), cols_(cols), allow_(static_cast<size_t>(rows) * cols, allow_all ? 1 : 0) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool allow(int r, int c) const { return allow_[static_cast<size_t>(r) * cols_ + c] != 0; }
  void set(int r, int c, bool allowed) {
    allow_[static_cast<size_t>(r) * cols_ + c] = allowed ? 1 : 0;
  }

  // Broadcast a per-key mask over all query rows.
  static Mask from_key_mask(int query_rows, const std::vector<uint8_t>& key_allowed);

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<uint8_t> allow_;
};

// Position i may attend to positions <= i only.
Mask causal_mask(int length);

Matrix matmul(const Matrix& a, const Matrix& b);
// a^T * b and a * b^T without materializing the transpose.
Matrix matmul_tn(const Matrix& a, const Matrix& b);
Matrix matmul_nt(const Matrix& a, const Matrix& b);

Matrix transpose(const Matrix& a);
Matrix add(const Matrix& a, const Matrix& b);
Matrix sub(const Matrix& a, const Matrix& b);
Matrix hadamard(const Matrix& a, const Matrix& b);
Matrix scale(const Matrix& a, double s);

// Adds a length-cols row vector to every row.
Matrix add_row_broadcast(const Matrix& a, const Matrix& row);
// Column sums collected into a 1 x cols row vector.
Matrix sum_rows(const Matrix& a);

double max_abs(const Matrix& a);
double max_abs_diff(const Matrix& a, const Matrix& b);

}  // namespace mqg
