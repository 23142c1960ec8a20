#pragma once

// File formats: SystemSpec JSON, polynomial JSON, interval JSON and DOT,
// reduction and scan reports (JSON, CSV), scan configs, and the JSON-lines
// polynomial cache. Every JSON schema carries a top-level "format": 1.

#include <cstddef>
#include <filesystem>
#include <functional>
#include <string>

#include <json.hpp>

#include "bruhat.hpp"
#include "coxeter.hpp"
#include "extension.hpp"
#include "harness.hpp"
#include "klpoly.hpp"
#include "laurent.hpp"

namespace parakl {

using Json = nlohmann::ordered_json;

inline constexpr int kFormatVersion = 1;

CoxeterSystem system_from_json(const Json& spec);
Json system_to_json(const CoxeterSystem& sys);
// 16 hex digits; FNV-1a over the canonical spec without the display name.
std::string system_fingerprint(const CoxeterSystem& sys);

Json poly_to_json(const LaurentPoly& p);
LaurentPoly poly_from_json(const Json& j);

Json interval_to_json(const CoxeterSystem& sys, const IntervalPoset& p);
std::string interval_to_dot(const CoxeterSystem& sys, const IntervalPoset& p);

Json extension_to_json(const ExtendedSystem& ext);
Json reduction_to_json(const ExtendedSystem& ext, const ReductionReport& rep);

// Systems given as {"path": "..."} resolve relative to `base_dir`.
ScanConfig scan_config_from_json(const Json& j, const std::filesystem::path& base_dir);
Json scan_report_to_json(const ScanConfig& cfg, const ScanReport& rep);
std::string scan_report_to_csv(const ScanConfig& cfg, const ScanReport& rep);

using WarningSink = std::function<void(const std::string&)>;

struct CacheLoadStats {
  std::size_t loaded = 0;
  std::size_t skipped = 0;     // malformed or inconsistent lines
  std::size_t mismatched = 0;  // lines for another system
};

// Missing or unreadable files warn and load nothing.
CacheLoadStats load_cache(KLEngine& engine, const std::filesystem::path& path,
                          const WarningSink& warn);
// Appends every table row not already in the file; returns rows written.
std::size_t store_cache(KLEngine& engine, const std::filesystem::path& path,
                        const WarningSink& warn);

} // namespace parakl
