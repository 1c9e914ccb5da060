#pragma once

#include <string>

namespace risim {

enum class Scheme { SSK, SM };
enum class DetectorKind { Greedy, ML };

std::string to_string(Scheme s);
std::string to_string(DetectorKind d);
Scheme scheme_from_string(const std::string& s);
DetectorKind detector_from_string(const std::string& s);

}  // namespace risim
