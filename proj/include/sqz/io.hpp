#pragma once

#include <json.hpp>

#include <filesystem>
#include <string>

#include "sqz/construct.hpp"
#include "sqz/domain.hpp"
#include "sqz/metrics.hpp"
#include "sqz/smooth.hpp"

namespace sqz {

using json = nlohmann::ordered_json;

inline constexpr int kFormatVersion = 1;

json domain_to_json(const ReinhardtDomain& d);
ReinhardtDomain domain_from_json(const json& j);

json point_to_json(const PointC2& p);
json bound_to_json(const Bound& b);
json certificate_to_json(const ConstructionCertificate& c);
std::string certificate_csv(const ConstructionCertificate& c);
json levi_to_json(const LeviReport& r, const SmoothDomain& s);

std::string dump(const json& j);
void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

}  // namespace sqz
