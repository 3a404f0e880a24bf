#include "bitalign/format.hpp"

#include <cmath>
#include <cstdio>

namespace bitalign {

double round_half_up(double x, int decimals) {
  double scale = 1.0;
  for (int i = 0; i < decimals; ++i) scale *= 10.0;
  return std::floor(x * scale + 0.5) / scale;
}

std::string format_fixed(double x, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, round_half_up(x, decimals));
  return buf;
}

}  // namespace bitalign
