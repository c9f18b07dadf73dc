#pragma once

#include "twist/types.hpp"

#include <array>

namespace twist {

/// Square complex matrix with nonzeros only on offsets -2..2.
///
/// Collective-spin operators up to quadratic order live in this band in the
/// Dicke basis: J_x, J_y, J_z are tridiagonal and J_k J_l is pentadiagonal.
class BandMatrix {
 public:
  static constexpr int kHalfWidth = 2;

  BandMatrix() = default;
  explicit BandMatrix(int dim);

  int dim() const { return dim_; }

  /// Entry (row, row + offset); zero outside the matrix.
  Complex at(int row, int offset) const;
  Complex& ref(int row, int offset);
  /// Storage of one diagonal, indexed by row; entries whose column falls
  /// outside the matrix are zero.
  const Complex* diagonal(int offset) const { return diag_[offset + kHalfWidth].data(); }

  BandMatrix& operator+=(const BandMatrix& other);
  BandMatrix operator*(Complex scale) const;
  BandMatrix operator+(const BandMatrix& other) const;

  /// Product of two matrices whose combined bandwidth stays within the band.
  /// Throws std::invalid_argument if the product would overflow it.
  BandMatrix multiply(const BandMatrix& other) const;

  CMatrix to_dense() const;
  BandMatrix adjoint() const;

 private:
  int dim_ = 0;
  // diag_[offset + 2][row]
  std::array<std::vector<Complex>, 2 * kHalfWidth + 1> diag_;
};

}  // namespace twist
