#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace dirgamma {

/// Dense row-major n×p matrix; rows are observations, columns coordinates.
class DataMatrix {
 public:
  DataMatrix() = default;
  DataMatrix(std::size_t rows, std::size_t cols);
  /// Takes ownership of `values` laid out row-major; size must be rows·cols.
  DataMatrix(std::size_t rows, std::size_t cols, std::vector<double> values);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return rows_ == 0; }

  double& operator()(std::size_t r, std::size_t c) noexcept { return values_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const noexcept {
    return values_[r * cols_ + c];
  }

  std::span<double> row(std::size_t r) noexcept { return {values_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const noexcept {
    return {values_.data() + r * cols_, cols_};
  }

  std::vector<double> column(std::size_t c) const;
  std::span<const double> values() const noexcept { return values_; }

  bool operator==(const DataMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

}  // namespace dirgamma
