#pragma once

// Self-check suite over every module; used by the `validate` command.

#include <string>
#include <vector>

namespace bulkq {

struct PropertyResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

std::vector<PropertyResult> run_validation_suite();

}  // namespace bulkq
