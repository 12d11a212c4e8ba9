#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <regex>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <nlohmann/json.hpp>

#include "vulntriage/cvss.hpp"
#include "vulntriage/errors.hpp"

namespace vulntriage {

// Loading of vulnerability populations (NVD-style feeds), attack-volume
// records and exploited-vulnerability lists, plus the software-category
// classification used to stratify the case-control evaluation.

enum class Category { IE = 0, Plugin = 1, Prod = 2, Windows = 3 };
inline constexpr std::array<Category, 4> kAllCategories = {
    Category::IE, Category::Plugin, Category::Prod, Category::Windows};

constexpr std::string_view to_string(Category c) {
  switch (c) {
    case Category::IE: return "IE";
    case Category::Plugin: return "PLUGIN";
    case Category::Prod: return "PROD";
    case Category::Windows: return "WINDOWS";
  }
  return "?";
}

inline Category category_from_string(std::string_view text) {
  if (text == "IE") return Category::IE;
  if (text == "PLUGIN") return Category::Plugin;
  if (text == "PROD") return Category::Prod;
  if (text == "WINDOWS") return Category::Windows;
  throw InvalidConfig("unknown software category: " + std::string(text));
}

/// One CVE entry of the vulnerability population.
struct VulnRecord {
  std::string cve_id;
  CvssVector vector;
  double cvss_score = 0.0;      // from the feed when present, else computed
  bool score_from_feed = false;  // provenance for audit output
  std::vector<std::string> software;  // lowercase product identifiers
  int year = 0;                  // disclosure year
  Category category = Category::Prod;
};

/// Per-CVE attack count observed in the wild over the observation window.
/// A count of zero means "signature observed, no recorded volume"; such
/// records are excluded from attack-potential computation.
struct AttackRecord {
  std::string cve_id;
  std::uint64_t attack_count = 0;
};

inline bool is_cve_id(std::string_view text) {
  static const std::regex grammar(R"(CVE-\d{4}-\d{4,})");
  return std::regex_match(text.begin(), text.end(), grammar);
}

/// Year component of a CVE identifier. Pre: is_cve_id(cve_id).
inline int cve_year(std::string_view cve_id) {
  return std::stoi(std::string(cve_id.substr(4, 4)));
}

// --- software categories --------------------------------------------------------

/// Ordered pattern list mapping software names onto the four categories.
/// First matching rule wins; a terminal catch-all maps anything unmatched to
/// PROD, so classification is total. Rule order is semantically significant.
class CategoryRules {
public:
  struct Rule {
    std::string pattern;
    std::regex regex;
    Category category;
  };

  CategoryRules() = default;

  void add(std::string pattern, Category category) {
    std::regex re;
    try {
      re.assign(pattern, std::regex::ECMAScript | std::regex::icase);
    } catch (const std::regex_error& e) {
      throw InvalidConfig("bad category pattern \"" + pattern + "\": " + e.what());
    }
    rules_.push_back(Rule{std::move(pattern), std::move(re), category});
  }

  /// Category of the first rule matched by any of the names; PROD otherwise.
  Category classify(std::span<const std::string> names) const {
    for (const Rule& rule : rules_) {
      for (const std::string& name : names) {
        if (std::regex_search(name, rule.regex)) return rule.category;
      }
    }
    return Category::Prod;
  }

  const std::vector<Rule>& rules() const { return rules_; }

  /// Built-in default rules. The categories come from the evaluation design;
  /// the patterns are a best-effort reconstruction and are meant to be
  /// edited as data (see load()).
  static CategoryRules defaults() {
    CategoryRules rules;
    rules.add("internet_explorer|^ie$", Category::IE);
    rules.add("^windows", Category::Windows);
    rules.add("jre|jdk|java|flash_player|acrobat|reader|quicktime|silverlight|shockwave",
              Category::Plugin);
    rules.add(".*", Category::Prod);
    return rules;
  }

  /// Loads rules from a plain config file: one "pattern<TAB>CATEGORY" per
  /// line, '#' comments and blank lines ignored.
  static CategoryRules load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open category rules file: " + path.string());
    CategoryRules rules;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty() || line[0] == '#') continue;
      const std::size_t tab = line.find('\t');
      if (tab == std::string::npos) {
        throw RowError(line_no, "category rule line " + std::to_string(line_no) +
                                    " has no <TAB> separator");
      }
      rules.add(line.substr(0, tab), category_from_string(line.substr(tab + 1)));
    }
    if (rules.rules_.empty()) {
      throw InvalidConfig("category rules file is empty: " + path.string());
    }
    return rules;
  }
};

inline Category classify_software(std::span<const std::string> names,
                                  const CategoryRules& rules) {
  return rules.classify(names);
}

// --- loaders ----------------------------------------------------------------------

/// Load statistics for an NVD-style feed; entries without a parseable CVSS v2
/// vector are skipped, not fatal.
struct NvdLoadReport {
  std::size_t entries = 0;
  std::size_t loaded = 0;
  std::size_t skipped = 0;
  std::vector<std::string> warnings;
};

/// Loads a simplified NVD-style feed: a JSON array of objects
///   {"id": string, "published": optional ISO-8601 date,
///    "cvss2_vector": string, "cvss2_score": optional number,
///    "products": [string]}.
/// The disclosure year is taken from the published date when present, else
/// from the CVE identifier. Records carry the feed score when present and a
/// computed base score otherwise.
inline std::vector<VulnRecord> load_nvd(const std::filesystem::path& path,
                                        const CategoryRules& rules,
                                        NvdLoadReport* report = nullptr) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open NVD feed: " + path.string());

  nlohmann::json feed;
  try {
    in >> feed;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(0, "NVD feed is not valid JSON: " + std::string(e.what()));
  }
  if (!feed.is_array()) throw SchemaError(0, "NVD feed must be a JSON array");

  NvdLoadReport local;
  NvdLoadReport& rep = report ? *report : local;
  rep = NvdLoadReport{};

  std::vector<VulnRecord> records;
  records.reserve(feed.size());
  for (std::size_t i = 0; i < feed.size(); ++i) {
    const nlohmann::json& entry = feed[i];
    ++rep.entries;
    if (!entry.is_object() || !entry.contains("id") || !entry["id"].is_string()) {
      throw SchemaError(i, "feed entry " + std::to_string(i) + " lacks a string \"id\"");
    }
    VulnRecord rec;
    rec.cve_id = entry["id"].get<std::string>();
    if (!is_cve_id(rec.cve_id)) {
      throw SchemaError(i, "feed entry " + std::to_string(i) + " has a malformed CVE id \"" +
                               rec.cve_id + "\"");
    }

    if (!entry.contains("cvss2_vector") || !entry["cvss2_vector"].is_string()) {
      ++rep.skipped;
      rep.warnings.push_back(rec.cve_id + ": no CVSS v2 vector, skipped");
      continue;
    }
    try {
      rec.vector = parse_vector(entry["cvss2_vector"].get<std::string>());
    } catch (const VectorError& e) {
      ++rep.skipped;
      rep.warnings.push_back(rec.cve_id + ": " + e.what() + ", skipped");
      continue;
    }

    if (entry.contains("cvss2_score") && entry["cvss2_score"].is_number()) {
      rec.cvss_score = entry["cvss2_score"].get<double>();
      rec.score_from_feed = true;
    } else {
      rec.cvss_score = base_score(rec.vector);
      rec.score_from_feed = false;
    }

    if (entry.contains("products")) {
      if (!entry["products"].is_array()) {
        throw SchemaError(i, "feed entry " + std::to_string(i) + ": \"products\" must be an array");
      }
      for (const auto& p : entry["products"]) {
        if (!p.is_string()) {
          throw SchemaError(i, "feed entry " + std::to_string(i) + ": product names must be strings");
        }
        rec.software.push_back(p.get<std::string>());
      }
    }

    if (entry.contains("published") && entry["published"].is_string()) {
      const std::string published = entry["published"].get<std::string>();
      if (published.size() < 4 || !std::isdigit(static_cast<unsigned char>(published[0]))) {
        throw SchemaError(i, "feed entry " + std::to_string(i) + ": bad published date \"" +
                                 published + "\"");
      }
      rec.year = std::stoi(published.substr(0, 4));
    } else {
      rec.year = cve_year(rec.cve_id);
    }

    rec.category = rules.classify(rec.software);
    records.push_back(std::move(rec));
    ++rep.loaded;
  }
  return records;
}

/// Loads attack records from a CSV "cve_id,attack_count" with header.
/// Duplicate cve_id rows are summed; output keeps first-appearance order.
inline std::vector<AttackRecord> load_attacks(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open attacks file: " + path.string());

  std::string line;
  if (!std::getline(in, line)) throw RowError(1, "attacks file is empty (expected header)");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "cve_id,attack_count") {
    throw RowError(1, "attacks file must start with header \"cve_id,attack_count\", got \"" +
                          line + "\"");
  }

  std::vector<AttackRecord> records;
  std::unordered_map<std::string, std::size_t> index;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::size_t comma = line.find(',');
    if (comma == std::string::npos) {
      throw RowError(line_no, "line " + std::to_string(line_no) + ": expected \"cve_id,count\"");
    }
    std::string cve = line.substr(0, comma);
    const std::string count_text = line.substr(comma + 1);
    if (!is_cve_id(cve)) {
      throw RowError(line_no, "line " + std::to_string(line_no) + ": bad CVE id \"" + cve + "\"");
    }
    std::uint64_t count = 0;
    try {
      std::size_t consumed = 0;
      const long long parsed = std::stoll(count_text, &consumed);
      if (consumed != count_text.size() || parsed < 0) throw std::invalid_argument(count_text);
      count = static_cast<std::uint64_t>(parsed);
    } catch (const std::exception&) {
      throw RowError(line_no, "line " + std::to_string(line_no) + ": bad attack count \"" +
                                  count_text + "\"");
    }

    auto [it, inserted] = index.emplace(std::move(cve), records.size());
    if (inserted) {
      records.push_back(AttackRecord{it->first, count});
    } else {
      records[it->second].attack_count += count;
    }
  }
  return records;
}

/// Loads a newline-delimited list of CVE ids into a deduplicated set.
inline std::unordered_set<std::string> load_exploited_set(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open exploited-set file: " + path.string());
  std::unordered_set<std::string> ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!is_cve_id(line)) {
      throw RowError(line_no, "line " + std::to_string(line_no) + ": not a CVE id: \"" + line + "\"");
    }
    ids.insert(line);
  }
  return ids;
}

/// Merged per-CVE attack totals with zero-count records dropped (they mark
/// "signature seen, no volume" and carry no attack-potential information).
inline std::unordered_map<std::string, std::uint64_t> attack_totals(
    std::span<const AttackRecord> attacks) {
  std::unordered_map<std::string, std::uint64_t> totals;
  for (const AttackRecord& a : attacks) {
    if (a.attack_count == 0) continue;
    totals[a.cve_id] += a.attack_count;
  }
  return totals;
}

}  // namespace vulntriage
