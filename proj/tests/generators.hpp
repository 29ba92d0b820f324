#pragma once

#include "herz/random.hpp"

namespace herz::testing {

using herz::random_problem;
using herz::random_rational;

}  // namespace herz::testing
