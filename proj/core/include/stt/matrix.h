// core/include/stt/matrix.h

// Copyright 2026  The STT Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef STT_MATRIX_H_
#define STT_MATRIX_H_

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "stt/error.h"

namespace stt {

// Dense row-major matrix of doubles. All loss and gradient paths run in
// 64-bit precision.
class RealMatrix {
 public:
  RealMatrix() = default;
  RealMatrix(int rows, int cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols, fill) {
    STT_CHECK(rows >= 0 && cols >= 0, "matrix dims must be nonnegative");
  }
  RealMatrix(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = static_cast<int>(rows.size());
    cols_ = rows_ == 0 ? 0 : static_cast<int>(rows.begin()->size());
    data_.reserve(static_cast<size_t>(rows_) * cols_);
    for (const auto& r : rows) {
      STT_CHECK(static_cast<int>(r.size()) == cols_, "ragged initializer");
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator()(int r, int c) { return data_[static_cast<size_t>(r) * cols_ + c]; }
  double operator()(int r, int c) const { return data_[static_cast<size_t>(r) * cols_ + c]; }

  std::span<double> row(int r) { return {data_.data() + static_cast<size_t>(r) * cols_, static_cast<size_t>(cols_)}; }
  std::span<const double> row(int r) const {
    return {data_.data() + static_cast<size_t>(r) * cols_, static_cast<size_t>(cols_)};
  }

  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  bool same_shape(const RealMatrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

// Borrowed 2-D view into a flat parameter buffer.
struct MatView {
  double* data = nullptr;
  int rows = 0;
  int cols = 0;
  double& operator()(int r, int c) const { return data[static_cast<size_t>(r) * cols + c]; }
  std::span<double> row(int r) const { return {data + static_cast<size_t>(r) * cols, static_cast<size_t>(cols)}; }
  std::span<double> flat() const { return {data, static_cast<size_t>(rows) * cols}; }
};

struct ConstMatView {
  const double* data = nullptr;
  int rows = 0;
  int cols = 0;
  ConstMatView() = default;
  ConstMatView(const double* d, int r, int c) : data(d), rows(r), cols(c) {}
  ConstMatView(const MatView& v) : data(v.data), rows(v.rows), cols(v.cols) {}  // NOLINT
  ConstMatView(const RealMatrix& m) : data(m.data().data()), rows(m.rows()), cols(m.cols()) {}  // NOLINT
  double operator()(int r, int c) const { return data[static_cast<size_t>(r) * cols + c]; }
  std::span<const double> row(int r) const {
    return {data + static_cast<size_t>(r) * cols, static_cast<size_t>(cols)};
  }
};

// y = A x
inline void matvec(ConstMatView a, std::span<const double> x, std::span<double> y) {
  for (int r = 0; r < a.rows; ++r) {
    const double* arow = a.data + static_cast<size_t>(r) * a.cols;
    double acc = 0.0;
    for (int c = 0; c < a.cols; ++c) acc += arow[c] * x[c];
    y[r] = acc;
  }
}

// y += A x
inline void matvec_acc(ConstMatView a, std::span<const double> x, std::span<double> y) {
  for (int r = 0; r < a.rows; ++r) {
    const double* arow = a.data + static_cast<size_t>(r) * a.cols;
    double acc = 0.0;
    for (int c = 0; c < a.cols; ++c) acc += arow[c] * x[c];
    y[r] += acc;
  }
}

// y += A^T x
inline void matvec_transpose_acc(ConstMatView a, std::span<const double> x, std::span<double> y) {
  for (int r = 0; r < a.rows; ++r) {
    const double* arow = a.data + static_cast<size_t>(r) * a.cols;
    const double xr = x[r];
    if (xr == 0.0) continue;
    for (int c = 0; c < a.cols; ++c) y[c] += arow[c] * xr;
  }
}

// A += u v^T
inline void outer_acc(MatView a, std::span<const double> u, std::span<const double> v) {
  for (int r = 0; r < a.rows; ++r) {
    double* arow = a.data + static_cast<size_t>(r) * a.cols;
    const double ur = u[r];
    if (ur == 0.0) continue;
    for (int c = 0; c < a.cols; ++c) arow[c] += ur * v[c];
  }
}

inline void axpy(double s, std::span<const double> x, std::span<double> y) {
  for (size_t i = 0; i < x.size(); ++i) y[i] += s * x[i];
}

}  // namespace stt

#endif  // STT_MATRIX_H_
