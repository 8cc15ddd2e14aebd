#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace hampack {

using BigInt = boost::multiprecision::cpp_int;

/// Natural log of a non-negative big integer; -inf for zero.
double log_of(const BigInt& value);

}  // namespace hampack
