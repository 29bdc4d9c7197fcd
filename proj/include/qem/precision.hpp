// Distributed under the MIT License.
// See LICENSE.txt for details.

#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/mpfr.hpp>
#include <string>

namespace qem {

/// Arbitrary-precision real number.  The working precision is set globally
/// through PrecisionContext; freshly constructed values pick it up.
using Real = boost::multiprecision::number<
    boost::multiprecision::mpfr_float_backend<0>,
    boost::multiprecision::et_off>;

/// Arbitrary-precision integer, used for exact multiplicity counting.
using BigInt = boost::multiprecision::cpp_int;

/// Minimum number of decimal digits the library supports.
inline constexpr unsigned minimum_digits = 16;

/// Sets the global working precision (in decimal digits) on construction and
/// restores the previous precision on destruction.  Precisions below
/// `minimum_digits` raise InvalidPrecision.
class PrecisionContext {
 public:
  explicit PrecisionContext(unsigned digits);
  ~PrecisionContext();

  PrecisionContext(const PrecisionContext&) = delete;
  PrecisionContext& operator=(const PrecisionContext&) = delete;

  /// The number of decimal digits currently in effect.
  static unsigned current_digits();

 private:
  unsigned saved_digits_;
};

/// The circle constant at the current working precision.
Real pi_value();

/// Formats `x` in scientific notation with the given number of significant
/// digits (defaults to the current working precision).
std::string format_real(const Real& x, unsigned digits = 0);

/// Converts an exact integer to a Real at the current working precision.
Real to_real(const BigInt& n);

/// n! as an exact integer.  Raises IndexOutOfRange for negative n.
BigInt factorial(long n);

/// (2n+1)!! = 1*3*5*...*(2n+1) as an exact integer.
BigInt double_factorial_odd(long n);

/// Binomial coefficient C(n, k) as an exact integer; zero outside range.
BigInt binomial(long n, long k);

}  // namespace qem
