#pragma once

#include "bilap/delaunay.hpp"
#include "bilap/ledger.hpp"
#include "bilap/rational.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace bilap {

enum class CheckStatus { Pass, Fail, Documented };
const char* to_string(CheckStatus s);

struct Check {
    std::string suite;
    std::string name;
    CheckStatus status = CheckStatus::Pass;
    std::string detail;
};

struct VerifyConfig {
    std::string suite = "all";
    std::optional<int> n;
    std::optional<Rational> s;
    int sigma = 0;  // 0 selects the build convention
    CMode c_mode = CMode::Measured;
    std::uint64_t seed = 42;
    std::string fixture_dir;  // empty selects the build-time fixture directory
};

struct VerifyReport {
    std::vector<Check> checks;
    Ledger ledger;

    bool ok() const;
    int exit_code() const { return ok() ? 0 : 1; }
    nlohmann::ordered_json results_json() const;
};

// git describe of the source tree at configure time.
const char* build_id();

const std::vector<std::string>& verify_suites();

struct KnownDiscrepancy {
    std::string symbol;
    std::string reason;
};

// Ledger symbols whose non-MATCH verdict is expected. Any other non-MATCH
// entry fails verification, and so does a registered one that matches again.
const std::vector<KnownDiscrepancy>& documented_discrepancies();

// Every module ledger concatenated.
Ledger full_ledger(int sigma);

// Throws UsageError for an unknown suite name.
VerifyReport run_verify(const VerifyConfig& cfg);

}  // namespace bilap
