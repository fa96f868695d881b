#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "dirgamma/inference.hpp"
#include "dirgamma/matrix.hpp"
#include "dirgamma/model_testing.hpp"
#include "dirgamma/moments.hpp"
#include "dirgamma/study.hpp"

namespace dirgamma {

using Json = nlohmann::ordered_json;

/// Comma-separated text with header x1,...,xp and finite positive values.
/// Throws ParseError carrying the 1-based line number.
DataMatrix parse_csv(std::string_view text);
/// Same layout, values printed with 17 significant digits.
std::string format_csv(const DataMatrix& data);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

DataMatrix read_csv(const std::filesystem::path& path);
void write_csv(const std::filesystem::path& path, const DataMatrix& data);

/// Git blob object id: SHA-1 of "blob <size>\0" followed by the content.
std::string git_blob_sha1(std::string_view content);

Json to_json(const FitResult& fit);
Json to_json(const IntervalSet& set);
Json to_json(const KSReport& report);
Json to_json(const MomentReport& report);
Json to_json(const SimStudySummary& summary);
Json to_json(const std::vector<QQPoint>& qq);

/// Header "prob,observed,simulated".
std::string qq_csv(const std::vector<QQPoint>& qq);
/// Header "x1,x2,density".
std::string contour_csv(const std::vector<ContourPoint>& grid);

}  // namespace dirgamma
