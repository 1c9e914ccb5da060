#include "risim/common.hpp"

#include <stdexcept>

namespace risim {

std::string to_string(Scheme s) { return s == Scheme::SSK ? "ssk" : "sm"; }

std::string to_string(DetectorKind d) {
  return d == DetectorKind::Greedy ? "greedy" : "ml";
}

Scheme scheme_from_string(const std::string& s) {
  if (s == "ssk") return Scheme::SSK;
  if (s == "sm") return Scheme::SM;
  throw std::invalid_argument("unknown scheme: " + s);
}

DetectorKind detector_from_string(const std::string& s) {
  if (s == "greedy") return DetectorKind::Greedy;
  if (s == "ml") return DetectorKind::ML;
  throw std::invalid_argument("unknown detector: " + s);
}

}  // namespace risim
