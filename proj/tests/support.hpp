// Distributed under the MIT License.
// See LICENSE.txt for details.

#pragma once

#include <catch2/catch_amalgamated.hpp>

#include <string>

#include "qem/precision.hpp"

namespace test_support {

/// Absolute-difference check with a readable failure message; tolerances are
/// decimal strings so they survive any working precision.
inline void check_near(const qem::Real& actual, const qem::Real& expected,
                       const char* tolerance) {
  const qem::Real gap = abs(actual - expected);
  INFO("actual   = " << qem::format_real(actual, 40));
  INFO("expected = " << qem::format_real(expected, 40));
  INFO("gap      = " << qem::format_real(gap, 10));
  CHECK(gap <= qem::Real(tolerance));
}

inline void check_near(const qem::Real& actual, const char* expected,
                       const char* tolerance) {
  check_near(actual, qem::Real(expected), tolerance);
}

/// Relative-difference check for quantities far from zero.
inline void check_close(const qem::Real& actual, const qem::Real& expected,
                        const char* tolerance) {
  const qem::Real scale = abs(expected) > 1 ? abs(expected) : qem::Real(1);
  const qem::Real gap = abs(actual - expected) / scale;
  INFO("actual   = " << qem::format_real(actual, 40));
  INFO("expected = " << qem::format_real(expected, 40));
  INFO("relative = " << qem::format_real(gap, 10));
  CHECK(gap <= qem::Real(tolerance));
}

inline void check_close(const qem::Real& actual, const char* expected,
                        const char* tolerance) {
  check_close(actual, qem::Real(expected), tolerance);
}

}  // namespace test_support
