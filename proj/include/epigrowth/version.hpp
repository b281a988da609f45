#pragma once

namespace epigrowth
{

inline constexpr const char* version = "1.0.0";

} // namespace epigrowth
