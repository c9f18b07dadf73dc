#include "twist/band_matrix.hpp"

#include <stdexcept>

namespace twist {

BandMatrix::BandMatrix(int dim) : dim_(dim) {
  for (auto& d : diag_) d.assign(static_cast<std::size_t>(dim), Complex{});
}

Complex BandMatrix::at(int row, int offset) const {
  const int col = row + offset;
  if (offset < -kHalfWidth || offset > kHalfWidth || row < 0 || row >= dim_ ||
      col < 0 || col >= dim_)
    return {};
  return diag_[offset + kHalfWidth][row];
}

Complex& BandMatrix::ref(int row, int offset) {
  const int col = row + offset;
  if (offset < -kHalfWidth || offset > kHalfWidth || row < 0 || row >= dim_ ||
      col < 0 || col >= dim_)
    throw std::out_of_range("BandMatrix::ref outside band");
  return diag_[offset + kHalfWidth][row];
}

BandMatrix& BandMatrix::operator+=(const BandMatrix& other) {
  if (other.dim_ != dim_) throw std::invalid_argument("BandMatrix dimension mismatch");
  for (std::size_t d = 0; d < diag_.size(); ++d)
    for (int i = 0; i < dim_; ++i) diag_[d][i] += other.diag_[d][i];
  return *this;
}

BandMatrix BandMatrix::operator*(Complex scale) const {
  BandMatrix out = *this;
  for (auto& d : out.diag_)
    for (auto& x : d) x *= scale;
  return out;
}

BandMatrix BandMatrix::operator+(const BandMatrix& other) const {
  BandMatrix out = *this;
  out += other;
  return out;
}

BandMatrix BandMatrix::multiply(const BandMatrix& other) const {
  if (other.dim_ != dim_) throw std::invalid_argument("BandMatrix dimension mismatch");
  BandMatrix out(dim_);
  for (int i = 0; i < dim_; ++i) {
    for (int a = -kHalfWidth; a <= kHalfWidth; ++a) {
      const Complex left = at(i, a);
      if (left == Complex{}) continue;
      const int k = i + a;
      for (int b = -kHalfWidth; b <= kHalfWidth; ++b) {
        const Complex right = other.at(k, b);
        if (right == Complex{}) continue;
        const int off = a + b;
        if (off < -kHalfWidth || off > kHalfWidth)
          throw std::invalid_argument("BandMatrix product exceeds bandwidth");
        out.diag_[off + kHalfWidth][i] += left * right;
      }
    }
  }
  return out;
}

CMatrix BandMatrix::to_dense() const {
  CMatrix m = CMatrix::Zero(dim_, dim_);
  for (int i = 0; i < dim_; ++i)
    for (int off = -kHalfWidth; off <= kHalfWidth; ++off) {
      const int col = i + off;
      if (col >= 0 && col < dim_) m(i, col) = diag_[off + kHalfWidth][i];
    }
  return m;
}

BandMatrix BandMatrix::adjoint() const {
  BandMatrix out(dim_);
  for (int i = 0; i < dim_; ++i)
    for (int off = -kHalfWidth; off <= kHalfWidth; ++off) {
      const int col = i + off;
      if (col >= 0 && col < dim_) out.diag_[-off + kHalfWidth][col] = std::conj(at(i, off));
    }
  return out;
}

}  // namespace twist
