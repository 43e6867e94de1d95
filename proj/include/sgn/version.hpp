#pragma once

#include <string>

#ifndef SGN_VERSION
#define SGN_VERSION "0.1.0"
#endif

namespace sgn
{

inline std::string version_string() { return SGN_VERSION; }

} // namespace sgn
