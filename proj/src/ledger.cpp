#include "bilap/ledger.hpp"

#include <sstream>

namespace bilap {

const char* to_string(Verdict v)
{
    switch (v) {
    case Verdict::Match: return "MATCH";
    case Verdict::SignConvention: return "SIGN_CONVENTION";
    case Verdict::Mismatch: return "MISMATCH";
    }
    return "?";
}

nlohmann::ordered_json to_json(const LedgerEntry& e)
{
    nlohmann::ordered_json j;
    j["symbol"] = e.symbol;
    j["location"] = e.location;
    j["printed"] = e.printed;
    j["oracle"] = e.oracle;
    j["verdict"] = to_string(e.verdict);
    j["note"] = e.note;
    return j;
}

nlohmann::ordered_json to_json(const Ledger& ledger)
{
    auto arr = nlohmann::ordered_json::array();
    for (const auto& e : ledger) arr.push_back(to_json(e));
    return arr;
}

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string ledger_csv(const Ledger& ledger)
{
    std::ostringstream os;
    os << "symbol,location,printed,oracle,verdict,note\n";
    for (const auto& e : ledger)
        os << csv_field(e.symbol) << ',' << csv_field(e.location) << ',' << csv_field(e.printed) << ','
           << csv_field(e.oracle) << ',' << to_string(e.verdict) << ',' << csv_field(e.note) << '\n';
    return os.str();
}

}  // namespace bilap
