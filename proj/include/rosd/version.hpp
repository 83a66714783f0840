#pragma once

namespace rosd {

inline constexpr const char* kVersion = "0.1.0";

}
