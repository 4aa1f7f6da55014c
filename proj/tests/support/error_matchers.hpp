#pragma once

#include <gtest/gtest.h>

#include "cesscm/error.hpp"

#define EXPECT_CESSCM_ERROR(statement, expected_kind)                             \
  do {                                                                            \
    try {                                                                         \
      statement;                                                                  \
      ADD_FAILURE() << "expected " << cesscm::to_string(expected_kind);           \
    } catch (const cesscm::Error& e) {                                            \
      EXPECT_EQ(e.kind(), expected_kind) << e.what();                             \
    }                                                                             \
  } while (0)
