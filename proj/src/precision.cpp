// Distributed under the MIT License.
// See LICENSE.txt for details.

#include "qem/precision.hpp"

#include <boost/math/constants/constants.hpp>
#include <iomanip>
#include <sstream>

#include "qem/errors.hpp"

namespace qem {

PrecisionContext::PrecisionContext(unsigned digits)
    : saved_digits_(Real::default_precision()) {
  if (digits < minimum_digits) {
    throw InvalidPrecision("working precision must be at least " +
                           std::to_string(minimum_digits) +
                           " digits, got " + std::to_string(digits));
  }
  Real::default_precision(digits);
}

PrecisionContext::~PrecisionContext() {
  Real::default_precision(saved_digits_);
}

unsigned PrecisionContext::current_digits() {
  return Real::default_precision();
}

Real pi_value() {
  return boost::math::constants::pi<Real>();
}

std::string format_real(const Real& x, unsigned digits) {
  if (digits == 0) {
    digits = PrecisionContext::current_digits();
  }
  std::ostringstream out;
  out << std::scientific << std::setprecision(static_cast<int>(digits)) << x;
  return out.str();
}

Real to_real(const BigInt& n) {
  return Real(n.str());
}

BigInt factorial(long n) {
  if (n < 0) {
    throw IndexOutOfRange("factorial of negative argument " +
                          std::to_string(n));
  }
  BigInt result = 1;
  for (long k = 2; k <= n; ++k) {
    result *= k;
  }
  return result;
}

BigInt double_factorial_odd(long n) {
  if (n < 0) {
    throw IndexOutOfRange("odd double factorial of negative argument " +
                          std::to_string(n));
  }
  BigInt result = 1;
  for (long k = 1; k <= 2 * n + 1; k += 2) {
    result *= k;
  }
  return result;
}

BigInt binomial(long n, long k) {
  if (k < 0 || k > n) {
    return 0;
  }
  BigInt result = 1;
  for (long j = 0; j < k; ++j) {
    result *= (n - j);
    result /= (j + 1);
  }
  return result;
}

}  // namespace qem
