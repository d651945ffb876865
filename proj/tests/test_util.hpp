#pragma once

#include <doctest.h>

#include "qbs/errors.hpp"

namespace qbs::test {

// Runs `fn`, returning the code of the qbs::Error it throws.
template <typename Fn>
ErrorCode code_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected qbs::Error");
  return ErrorCode::invalid_argument;
}

}  // namespace qbs::test
