#pragma once

namespace scaladj {

inline constexpr const char* kToolkitVersion = "0.1.0";
inline constexpr int kRunRecordSchemaVersion = 1;

}  // namespace scaladj
