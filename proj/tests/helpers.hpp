#pragma once

#include <doctest.h>

#include "dlf/error.hpp"
#include "fixtures.hpp"

#define CHECK_ERROR_KIND(statement, expected_kind)                   \
  do {                                                               \
    bool thrown_ = false;                                            \
    try {                                                            \
      statement;                                                     \
    } catch (const dlf::Error& e_) {                                 \
      thrown_ = true;                                                \
      CHECK_MESSAGE(e_.kind() == (expected_kind), e_.what());        \
    }                                                                \
    CHECK_MESSAGE(thrown_, "expected " #expected_kind);              \
  } while (0)
