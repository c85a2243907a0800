#pragma once

// Institution-type vocabulary and the national/local operating split.

#include <algorithm>
#include <array>
#include <cctype>
#include <string>
#include <string_view>

namespace creditnet {

inline constexpr std::array<std::string_view, 7> kInstitutionTypes = {
    "state-owned",      "policy",  "nationwide-joint-stock", "urban-commercial",
    "rural-cooperative", "foreign", "trust-finance"};

// State-owned, policy and nationwide joint-stock institutions operate
// nationally; every other label counts as local. Matching ignores case and
// treats spaces and underscores as hyphens.
inline bool is_nationally_operated(std::string_view lender_type) {
  std::string s(lender_type);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) {
    return c == ' ' || c == '_' ? '-' : static_cast<char>(std::tolower(c));
  });
  return s.find("state-owned") != std::string::npos || s.find("policy") != std::string::npos ||
         s.find("joint-stock") != std::string::npos;
}

}  // namespace creditnet
