#pragma once

#include <json.hpp>

#include <string>
#include <vector>

namespace bilap {

enum class Verdict { Match, SignConvention, Mismatch };

const char* to_string(Verdict v);

struct LedgerEntry {
    std::string symbol;
    std::string location;
    std::string printed;
    std::string oracle;
    Verdict verdict = Verdict::Match;
    std::string note;
};

using Ledger = std::vector<LedgerEntry>;

nlohmann::ordered_json to_json(const LedgerEntry& e);
nlohmann::ordered_json to_json(const Ledger& ledger);
std::string ledger_csv(const Ledger& ledger);

// Quotes a CSV field when it contains a comma, quote or newline.
std::string csv_field(const std::string& s);

}  // namespace bilap
