#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "isac/detector.hpp"
#include "isac/rdm.hpp"

namespace isac::experiments {

// Text form: "# key=value" metadata lines (kind, origin, stride, ts, rows,
// cols), then "k,l,re,im" with one line per cell in row-major order.
std::string format_rdm(const Rdm& rdm);
Rdm parse_rdm(const std::string& text);

void write_rdm(const Rdm& rdm, const std::filesystem::path& path);
Rdm read_rdm(const std::filesystem::path& path);

std::string format_detections(const std::vector<detector::Detection>& dets);

}  // namespace isac::experiments
