#include "mqg/matrix.h"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace mqg {

namespace {

using EigenRowMajor =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapType = Eigen::Map<EigenRowMajor>;
using ConstMapType = Eigen::Map<const EigenRowMajor>;

[[noreturn]] void shape_error(const std::string& op, const Matrix& a, const Matrix& b) {
  std::ostringstream oss;
  oss << op << ": shape mismatch " << a.shape_str() << " vs " << b.shape_str();
  throw std::invalid_argument(oss.str());
}

}  // namespace

Matrix::Matrix(int rows, int cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != static_cast<size_t>(rows) * cols) {
    throw std::invalid_argument("Matrix: data length " + std::to_string(data_.size()) +
                                " does not match shape " + shape_str());
  }
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = static_cast<int>(rows.size());
  cols_ = rows_ > 0 ? static_cast<int>(rows.begin()->size()) : 0;
  data_.reserve(static_cast<size_t>(rows_) * cols_);
  for (const auto& r : rows) {
    if (static_cast<int>(r.size()) != cols_) {
      throw std::invalid_argument("Matrix: ragged initializer list");
    }
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::row_vector(const std::vector<double>& values) {
  return Matrix(1, static_cast<int>(values.size()), values);
}

std::vector<double> Matrix::row(int r) const {
  return std::vector<double>(row_ptr(r), row_ptr(r) + cols_);
}

void Matrix::set_row(int r, const std::vector<double>& values) {
  if (static_cast<int>(values.size()) != cols_) {
    throw std::invalid_argument("set_row: length " + std::to_string(values.size()) +
                                " != cols " + std::to_string(cols_));
  }
  std::copy(values.begin(), values.end(), row_ptr(r));
}

Matrix Matrix::rows_slice(int begin, int end) const {
  if (begin < 0 || end > rows_ || begin > end) {
    throw std::invalid_argument("rows_slice: bad range [" + std::to_string(begin) + ", " +
                                std::to_string(end) + ") for " + shape_str());
  }
  Matrix out(end - begin, cols_);
  std::copy(row_ptr(begin), row_ptr(begin) + static_cast<size_t>(end - begin) * cols_,
            out.data());
  return out;
}

bool Matrix::all_finite() const {
  for (double v : data_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

Matrix& Matrix::operator+=(const Matrix& other) {
  if (!same_shape(other)) shape_error("operator+=", *this, other);
  for (size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& other) {
  if (!same_shape(other)) shape_error("operator-=", *this, other);
  for (size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

Matrix& Matrix::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

std::string Matrix::shape_str() const {
  return "(" + std::to_string(rows_) + "x" + std::to_string(cols_) + ")";
}

Mask Mask::from_key_mask(int query_rows, const std::vector<uint8_t>& key_allowed) {
  Mask m(query_rows, static_cast<int>(key_allowed.size()), true);
  for (int r = 0; r < query_rows; ++r) {
    for (int c = 0; c < m.cols(); ++c) {
      if (!key_allowed[c]) m.set(r, c, false);
    }
  }
  return m;
}

Mask causal_mask(int length) {
  if (length < 1) throw std::invalid_argument("causal_mask: length must be >= 1");
  Mask m(length, length, false);
  for (int r = 0; r < length; ++r) {
    for (int c = 0; c <= r; ++c) m.set(r, c, true);
  }
  return m;
}

// Eigen backs the three GEMM kernels; everything else is plain loops.
Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) shape_error("matmul", a, b);
  Matrix out(a.rows(), b.cols());
  ConstMapType am(a.data(), a.rows(), a.cols());
  ConstMapType bm(b.data(), b.rows(), b.cols());
  MapType om(out.data(), out.rows(), out.cols());
  om.noalias() = am * bm;
  return out;
}

Matrix matmul_tn(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) shape_error("matmul_tn", a, b);
  Matrix out(a.cols(), b.cols());
  ConstMapType am(a.data(), a.rows(), a.cols());
  ConstMapType bm(b.data(), b.rows(), b.cols());
  MapType om(out.data(), out.rows(), out.cols());
  om.noalias() = am.transpose() * bm;
  return out;
}

Matrix matmul_nt(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) shape_error("matmul_nt", a, b);
  Matrix out(a.rows(), b.rows());
  ConstMapType am(a.data(), a.rows(), a.cols());
  ConstMapType bm(b.data(), b.rows(), b.cols());
  MapType om(out.data(), out.rows(), out.cols());
  om.noalias() = am * bm.transpose();
  return out;
}

Matrix transpose(const Matrix& a) {
  Matrix out(a.cols(), a.rows());
  for (int r = 0; r < a.rows(); ++r) {
    for (int c = 0; c < a.cols(); ++c) out(c, r) = a(r, c);
  }
  return out;
}

Matrix add(const Matrix& a, const Matrix& b) {
  Matrix out = a;
  out += b;
  return out;
}

Matrix sub(const Matrix& a, const Matrix& b) {
  Matrix out = a;
  out -= b;
  return out;
}

Matrix hadamard(const Matrix& a, const Matrix& b) {
  if (!a.same_shape(b)) shape_error("hadamard", a, b);
  Matrix out = a;
  for (int r = 0; r < a.rows(); ++r) {
    for (int c = 0; c < a.cols(); ++c) out(r, c) *= b(r, c);
  }
  return out;
}

Matrix scale(const Matrix& a, double s) {
  Matrix out = a;
  out *= s;
  return out;
}

Matrix add_row_broadcast(const Matrix& a, const Matrix& row) {
  if (row.rows() != 1 || row.cols() != a.cols()) shape_error("add_row_broadcast", a, row);
  Matrix out = a;
  for (int r = 0; r < a.rows(); ++r) {
    double* dst = out.row_ptr(r);
    const double* src = row.data();
    for (int c = 0; c < a.cols(); ++c) dst[c] += src[c];
  }
  return out;
}

Matrix sum_rows(const Matrix& a) {
  Matrix out(1, a.cols());
  for (int r = 0; r < a.rows(); ++r) {
    const double* src = a.row_ptr(r);
    for (int c = 0; c < a.cols(); ++c) out(0, c) += src[c];
  }
  return out;
}

double max_abs(const Matrix& a) {
  double m = 0.0;
  for (int r = 0; r < a.rows(); ++r) {
    for (int c = 0; c < a.cols(); ++c) m = std::max(m, std::abs(a(r, c)));
  }
  return m;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  if (!a.same_shape(b)) shape_error("max_abs_diff", a, b);
  double m = 0.0;
  for (int r = 0; r < a.rows(); ++r) {
    for (int c = 0; c < a.cols(); ++c) m = std::max(m, std::abs(a(r, c) - b(r, c)));
  }
  return m;
}

}  // namespace mqg
