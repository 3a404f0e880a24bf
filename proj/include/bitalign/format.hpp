#ifndef BITALIGN_FORMAT_HPP
#define BITALIGN_FORMAT_HPP

#include <string>

namespace bitalign {

/// Half-up rounding for display values (x >= 0).
double round_half_up(double x, int decimals);

/// Fixed-point display string, half-up rounded.
std::string format_fixed(double x, int decimals);

}  // namespace bitalign

#endif
