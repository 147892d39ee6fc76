#include "dlcfar/random.hpp"

#include <cmath>

namespace dlcfar {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t substream_seed(std::uint64_t master, std::uint64_t phase, std::uint64_t index) {
  return splitmix64(splitmix64(splitmix64(master) ^ phase) + index);
}

Complex RngStream::complex_normal() {
  static const double kScale = 1.0 / std::sqrt(2.0);
  const double re = normal_(engine_);
  const double im = normal_(engine_);
  return {kScale * re, kScale * im};
}

CVector RngStream::complex_normal(Eigen::Index n) {
  CVector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = complex_normal();
  return v;
}

CMatrix RngStream::complex_normal(Eigen::Index rows, Eigen::Index cols) {
  CMatrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = complex_normal();
  return m;
}

}  // namespace dlcfar
