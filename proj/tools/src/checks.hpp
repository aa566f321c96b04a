#pragma once

#include <functional>
#include <string>
#include <vector>

namespace afgas::cli {

// quick trims problem sizes so the whole table fits in a few minutes; full
// uses the acceptance sizes.
enum class Scale { quick, full };

struct CheckResult {
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct Criterion {
  int id = 0;
  std::string name;
  std::function<CheckResult(Scale, int threads)> run;
};

const std::vector<Criterion>& criteria();
const Criterion& criterion(int id);

/// Times the run; an exception counts as a failure with its message as detail.
CheckResult run_criterion(const Criterion& c, Scale scale, int threads);

}  // namespace afgas::cli
