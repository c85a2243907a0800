#pragma once

// Loan ledger ingestion: parsing, the five preprocessing rules, and
// per-period slicing.

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "creditnet/csv.hpp"
#include "creditnet/error.hpp"

namespace creditnet {

struct LoanRecord {
  int period = 0;
  std::string lender_id;
  std::string lender_name;
  std::string lender_type;
  std::string borrower_id;
  std::string borrower_name;
  std::string borrower_industry;
  std::optional<double> amount;
  std::string currency;
  bool special_treatment = false;

  friend bool operator==(const LoanRecord&, const LoanRecord&) = default;
};

inline constexpr std::array<std::string_view, 10> kLedgerColumns = {
    "period",        "lender_id",         "lender_name", "lender_type", "borrower_id",
    "borrower_name", "borrower_industry", "amount",      "currency",    "special_treatment"};

// Preprocessing rules, numbered as in the ledger documentation.
enum class Rule : int {
  NoCreditHistory = 1,
  MissingParty = 2,
  MissingAmount = 3,
  SpecialTreatment = 4,
  NameRegularization = 5,
};

inline std::string_view rule_name(Rule r) {
  switch (r) {
    case Rule::NoCreditHistory: return "no_credit_history";
    case Rule::MissingParty: return "missing_party";
    case Rule::MissingAmount: return "missing_amount";
    case Rule::SpecialTreatment: return "special_treatment";
    case Rule::NameRegularization: return "name_regularization";
  }
  return "unknown";
}

struct ExclusionReport {
  std::map<Rule, std::size_t> removed;  // every removal rule has an entry
  std::size_t retained = 0;
  std::size_t renamed = 0;  // records whose lender name or id was canonicalized

  std::size_t total_removed() const {
    std::size_t n = 0;
    for (const auto& [rule, count] : removed) n += count;
    return n;
  }

  friend bool operator==(const ExclusionReport&, const ExclusionReport&) = default;
};

// raw lender name -> canonical lender name
using AliasTable = std::map<std::string, std::string>;

// Order in which the four removal rules run. Rule 1 runs last so that a
// borrower whose every record was invalid counts as having no credit history.
using RuleOrder = std::array<Rule, 4>;
inline constexpr RuleOrder kDefaultRuleOrder = {Rule::MissingParty, Rule::MissingAmount,
                                                Rule::SpecialTreatment, Rule::NoCreditHistory};

namespace detail {

inline bool parse_bool(std::string_view s, bool& out) {
  std::string lower(s);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "true" || lower == "1" || lower == "yes" || lower == "y") {
    out = true;
    return true;
  }
  if (lower == "false" || lower == "0" || lower == "no" || lower == "n" || lower.empty()) {
    out = false;
    return true;
  }
  return false;
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
  s = csv::trim(s);
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc{} && ptr == end;
}

}  // namespace detail

inline std::vector<LoanRecord> parse_loans(std::istream& in) {
  std::string line;
  std::size_t row = 1;
  if (!csv::read_line(in, line)) throw ParseError(row, "<header>", "empty input");
  auto header = csv::split(line);
  if (!header || header->size() != kLedgerColumns.size()) {
    throw ParseError(row, "<header>", "expected " + std::to_string(kLedgerColumns.size()) + " columns");
  }
  for (std::size_t c = 0; c < kLedgerColumns.size(); ++c) {
    if (csv::trim((*header)[c]) != kLedgerColumns[c]) {
      throw ParseError(row, std::string(kLedgerColumns[c]),
                       "header mismatch, found '" + (*header)[c] + "'");
    }
  }

  std::vector<LoanRecord> out;
  while (csv::read_line(in, line)) {
    ++row;
    if (csv::trim(line).empty()) continue;
    auto fields = csv::split(line);
    if (!fields) throw ParseError(row, "<row>", "unterminated quoted field");
    if (fields->size() != kLedgerColumns.size()) {
      throw ParseError(row, "<row>",
                       "expected " + std::to_string(kLedgerColumns.size()) + " fields, found " +
                           std::to_string(fields->size()));
    }
    const auto& f = *fields;
    LoanRecord r;
    if (!detail::parse_number(f[0], r.period)) throw ParseError(row, "period", "not an integer: '" + f[0] + "'");
    r.lender_id = std::string(csv::trim(f[1]));
    r.lender_name = std::string(csv::trim(f[2]));
    r.lender_type = std::string(csv::trim(f[3]));
    r.borrower_id = std::string(csv::trim(f[4]));
    r.borrower_name = std::string(csv::trim(f[5]));
    r.borrower_industry = std::string(csv::trim(f[6]));
    if (!csv::trim(f[7]).empty()) {
      double amount = 0;
      if (!detail::parse_number(f[7], amount) || !std::isfinite(amount)) {
        throw ParseError(row, "amount", "not a number: '" + f[7] + "'");
      }
      if (amount < 0) throw ParseError(row, "amount", "negative amount");
      r.amount = amount;
    }
    r.currency = std::string(csv::trim(f[8]));
    if (!detail::parse_bool(csv::trim(f[9]), r.special_treatment)) {
      throw ParseError(row, "special_treatment", "not a boolean: '" + f[9] + "'");
    }
    out.push_back(std::move(r));
  }
  return out;
}

inline void write_ledger(std::ostream& out, const std::vector<LoanRecord>& records) {
  csv::Writer w(out);
  w.row({kLedgerColumns.begin(), kLedgerColumns.end()});
  for (const auto& r : records) {
    w.row({std::to_string(r.period), r.lender_id, r.lender_name, r.lender_type, r.borrower_id,
           r.borrower_name, r.borrower_industry, r.amount ? csv::format_double(*r.amount) : "",
           r.currency, r.special_treatment ? "true" : "false"});
  }
}

// Two columns with header row: raw_name, canonical_name.
inline AliasTable parse_aliases(std::istream& in) {
  std::string line;
  std::size_t row = 1;
  if (!csv::read_line(in, line)) return {};
  auto header = csv::split(line);
  if (!header || header->size() != 2 || csv::trim((*header)[0]) != "raw_name" ||
      csv::trim((*header)[1]) != "canonical_name") {
    throw ParseError(row, "<header>", "expected 'raw_name,canonical_name'");
  }
  AliasTable table;
  while (csv::read_line(in, line)) {
    ++row;
    if (csv::trim(line).empty()) continue;
    auto f = csv::split(line);
    if (!f || f->size() != 2) throw ParseError(row, "<row>", "expected 2 fields");
    table[std::string(csv::trim((*f)[0]))] = std::string(csv::trim((*f)[1]));
  }
  return table;
}

struct PreprocessResult {
  std::vector<LoanRecord> records;
  ExclusionReport report;
};

// Applies the removal rules in `order`, then canonicalizes lender names
// through `aliases`. Records whose canonical lender name coincides are given
// the lexicographically smallest lender_id of that name group.
//
// Rule 1 (no credit history) removes every record of a borrower that has no
// surviving record with a positive amount, plus any surviving zero-amount
// record. A record is counted under the first rule in `order` that removes it.
inline PreprocessResult preprocess(std::vector<LoanRecord> records, const AliasTable& aliases = {},
                                   const RuleOrder& order = kDefaultRuleOrder) {
  PreprocessResult result;
  auto& report = result.report;
  for (Rule r : {Rule::NoCreditHistory, Rule::MissingParty, Rule::MissingAmount, Rule::SpecialTreatment}) {
    report.removed[r] = 0;
  }

  auto remove_if = [&](Rule rule, auto pred) {
    const auto before = records.size();
    records.erase(std::remove_if(records.begin(), records.end(), pred), records.end());
    report.removed[rule] += before - records.size();
  };

  for (Rule rule : order) {
    switch (rule) {
      case Rule::MissingParty:
        remove_if(rule, [](const LoanRecord& r) { return r.lender_id.empty() || r.borrower_id.empty(); });
        break;
      case Rule::MissingAmount:
        remove_if(rule, [](const LoanRecord& r) { return !r.amount.has_value(); });
        break;
      case Rule::SpecialTreatment: {
        // A flagged firm loses all of its records, flagged or not.
        std::set<std::string> flagged;
        for (const auto& r : records) {
          if (r.special_treatment) flagged.insert(r.borrower_id);
        }
        remove_if(rule, [&](const LoanRecord& r) { return flagged.contains(r.borrower_id); });
        break;
      }
      case Rule::NoCreditHistory: {
        std::set<std::string> with_credit;
        for (const auto& r : records) {
          if (r.amount && *r.amount > 0) with_credit.insert(r.borrower_id);
        }
        remove_if(rule, [&](const LoanRecord& r) {
          return !with_credit.contains(r.borrower_id) || (r.amount && *r.amount <= 0);
        });
        break;
      }
      case Rule::NameRegularization:
        throw InvalidArgument("name regularization is not a removal rule");
    }
  }

  std::map<std::string, std::string> smallest_id;  // canonical name -> id
  // Alias chains are followed to their end, so a second pass renames nothing.
  auto canonical = [&](const std::string& name) {
    std::string cur = name;
    for (std::size_t hops = 0; hops <= aliases.size(); ++hops) {
      auto it = aliases.find(cur);
      if (it == aliases.end() || it->second == cur) return cur;
      cur = it->second;
    }
    throw InvalidArgument("alias table has a cycle through '" + name + "'");
  };
  for (const auto& r : records) {
    const auto name = canonical(r.lender_name);
    auto [it, inserted] = smallest_id.try_emplace(name, r.lender_id);
    if (!inserted && r.lender_id < it->second) it->second = r.lender_id;
  }
  for (auto& r : records) {
    auto name = canonical(r.lender_name);
    const auto& id = smallest_id.at(name);
    if (name != r.lender_name || id != r.lender_id) {
      ++report.renamed;
      r.lender_name = std::move(name);
      r.lender_id = id;
    }
  }

  report.retained = records.size();
  result.records = std::move(records);
  return result;
}

// Returns the single currency label used by `records` (empty when there are
// no records). Mixed currencies cannot be analyzed together.
inline std::string require_single_currency(const std::vector<LoanRecord>& records) {
  std::set<std::string> seen;
  for (const auto& r : records) seen.insert(r.currency);
  if (seen.size() > 1) {
    std::string list;
    for (const auto& c : seen) list += (list.empty() ? "" : ", ") + c;
    throw InvalidArgument("mixed currencies in one analysis run: " + list);
  }
  return seen.empty() ? std::string{} : *seen.begin();
}

inline std::vector<LoanRecord> restrict_window(std::vector<LoanRecord> records, int first, int last) {
  records.erase(std::remove_if(records.begin(), records.end(),
                               [&](const LoanRecord& r) { return r.period < first || r.period > last; }),
                records.end());
  return records;
}

inline std::map<int, std::vector<LoanRecord>> slice_periods(const std::vector<LoanRecord>& records) {
  std::map<int, std::vector<LoanRecord>> slices;
  for (const auto& r : records) slices[r.period].push_back(r);
  return slices;
}

}  // namespace creditnet
