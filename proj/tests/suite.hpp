#pragma once

#include <gtest/gtest.h>

#include <string>

#include "adscurv/pipeline.hpp"

// Runs one registered property check on a few seeds.
inline void expect_property(const std::string& name, std::initializer_list<std::uint64_t> seeds = {1, 2}) {
  for (const auto& check : adscurv::property_suite()) {
    if (check.name != name) continue;
    for (auto seed : seeds) {
      adscurv::Report r = check.run(seed);
      EXPECT_TRUE(r.pass) << name << " seed " << seed << ": " << r.to_json().dump();
    }
    return;
  }
  ADD_FAILURE() << "no property check named " << name;
}
