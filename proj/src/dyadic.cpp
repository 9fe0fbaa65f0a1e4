#include "walshlab/dyadic.hpp"

namespace walshlab {

int walsh_value(std::uint64_t n, DyadicPoint u) {
  const int resolution = u.resolution();
  if ((n >> resolution) != 0) {
    throw std::out_of_range("frequency " + std::to_string(n) + " out of range for resolution " +
                            std::to_string(resolution));
  }
  return walsh_sign_reversed(n, bit_reverse(u.code(), resolution));
}

int rademacher(int k, DyadicPoint u) {
  if (k < 0 || k >= u.resolution()) {
    throw std::out_of_range("Rademacher index " + std::to_string(k) + " out of range");
  }
  return u.coordinate(k) ? -1 : 1;
}

}  // namespace walshlab
