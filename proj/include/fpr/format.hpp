#pragma once

#include <string>

namespace fpr {

/// Shortest decimal text that parses back to the same double.
std::string shortest(double v);

}  // namespace fpr
