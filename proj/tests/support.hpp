#pragma once

#include <optional>

#include <doctest.h>

#include "chemostab/error.hpp"

// Kind of the chemostab::Error thrown by f, or nullopt if nothing was thrown.
template <class F>
std::optional<chemostab::ErrorKind> thrown_kind(F&& f) {
  try {
    f();
  } catch (const chemostab::Error& e) {
    return e.kind();
  }
  return std::nullopt;
}

#define CHECK_ERROR(expr, expected_kind) \
  CHECK(thrown_kind([&] { (void)(expr); }) == std::optional(expected_kind))
