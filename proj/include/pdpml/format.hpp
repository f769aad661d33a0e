#pragma once

#include <string>

namespace pdpml {

/// Shortest decimal that round-trips to the same double; locale independent.
std::string format_double(double x);

}  // namespace pdpml
