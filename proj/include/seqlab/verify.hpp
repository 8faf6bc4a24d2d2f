#ifndef SEQLAB_VERIFY_HPP
#define SEQLAB_VERIFY_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace seqlab {

// Registry of finitely checkable claims, each bound to an executable check
// with exact expected values. Checks compare exact rationals except where a
// claim is explicitly a floating tolerance check (the zeta values).

struct Claim {
  std::string id;           // C1..C11, unique
  std::string description;  // what is being checked
  std::string statement;    // the mathematical statement, spelled out
  nlohmann::json defaults;  // default parameters; overridable within guards
};

struct VerificationReport {
  std::string claim_id;
  bool pass = false;
  nlohmann::json computed;   // exact rationals as strings
  nlohmann::json expected;
  nlohmann::json witnesses;  // failing indices/values, or key exhibits
  std::int64_t elapsed_millis = 0;
};

nlohmann::json to_json(const VerificationReport& report);

std::vector<Claim> list_claims();

/// Runs one claim. Throws ClaimError on an unknown id or invalid override;
/// a failing claim is reported, never thrown.
VerificationReport run_claim(
    const std::string& id,
    const nlohmann::json& overrides = nlohmann::json::object());

/// Runs every claim with defaults, reports ordered by claim id. Claims are
/// independent and pure, so the parallel path returns reports identical to
/// the sequential one up to elapsed_millis.
std::vector<VerificationReport> run_all(bool parallel = false);

}  // namespace seqlab

#endif  // SEQLAB_VERIFY_HPP
