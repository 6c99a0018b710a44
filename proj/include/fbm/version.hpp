#pragma once

namespace fbm {

inline constexpr const char* version = "1.0.0";

}
