#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <string>
#include <string_view>

#include "vulntriage/errors.hpp"

namespace vulntriage {

// CVSS v2 base vectors and the three-level Impact / Access Complexity
// categories derived from them. Everything here is a pure function over
// immutable values.

enum class AccessVector { Local, AdjacentNetwork, Network };
enum class AccessComplexity { High, Medium, Low };
enum class Authentication { Multiple, Single, None };
enum class ImpactValue { None, Partial, Complete };

/// Ordinal severity level, ordered LOW < MEDIUM < HIGH.
enum class Level { Low = 0, Medium = 1, High = 2 };

constexpr std::string_view to_string(Level level) {
  switch (level) {
    case Level::Low: return "LOW";
    case Level::Medium: return "MEDIUM";
    case Level::High: return "HIGH";
  }
  return "?";
}

inline Level level_from_string(std::string_view text) {
  if (text == "LOW" || text == "L") return Level::Low;
  if (text == "MEDIUM" || text == "M") return Level::Medium;
  if (text == "HIGH" || text == "H") return Level::High;
  throw InvalidConfig("unknown level: " + std::string(text));
}

constexpr std::size_t level_index(Level level) {
  return static_cast<std::size_t>(level);
}

/// A parsed CVSS v2 base vector. Every field holds exactly one enumerated
/// value; there is no "unknown" state after a successful parse.
struct CvssVector {
  AccessVector access_vector = AccessVector::Local;
  AccessComplexity access_complexity = AccessComplexity::High;
  Authentication authentication = Authentication::Multiple;
  ImpactValue conf_impact = ImpactValue::None;
  ImpactValue integ_impact = ImpactValue::None;
  ImpactValue avail_impact = ImpactValue::None;

  friend bool operator==(const CvssVector&, const CvssVector&) = default;
};

namespace detail {

constexpr char access_vector_letter(AccessVector v) {
  switch (v) {
    case AccessVector::Local: return 'L';
    case AccessVector::AdjacentNetwork: return 'A';
    case AccessVector::Network: return 'N';
  }
  return '?';
}

constexpr char access_complexity_letter(AccessComplexity v) {
  switch (v) {
    case AccessComplexity::High: return 'H';
    case AccessComplexity::Medium: return 'M';
    case AccessComplexity::Low: return 'L';
  }
  return '?';
}

constexpr char authentication_letter(Authentication v) {
  switch (v) {
    case Authentication::Multiple: return 'M';
    case Authentication::Single: return 'S';
    case Authentication::None: return 'N';
  }
  return '?';
}

constexpr char impact_letter(ImpactValue v) {
  switch (v) {
    case ImpactValue::None: return 'N';
    case ImpactValue::Partial: return 'P';
    case ImpactValue::Complete: return 'C';
  }
  return '?';
}

}  // namespace detail

/// Canonical text form: uppercase keys, single-letter values, slash
/// separated, no parentheses. format_vector and parse_vector round-trip.
inline std::string format_vector(const CvssVector& v) {
  std::string out;
  out.reserve(26);
  out += "AV:";
  out += detail::access_vector_letter(v.access_vector);
  out += "/AC:";
  out += detail::access_complexity_letter(v.access_complexity);
  out += "/Au:";
  out += detail::authentication_letter(v.authentication);
  out += "/C:";
  out += detail::impact_letter(v.conf_impact);
  out += "/I:";
  out += detail::impact_letter(v.integ_impact);
  out += "/A:";
  out += detail::impact_letter(v.avail_impact);
  return out;
}

/// Parses a CVSS v2 base vector such as "AV:N/AC:M/Au:N/C:C/I:C/A:C".
/// Keys and values are matched case-insensitively, surrounding parentheses
/// are tolerated and metric order is not enforced. All six base metrics must
/// appear exactly once. Temporal/environmental metrics are rejected as
/// UnknownValue rather than silently ignored.
inline CvssVector parse_vector(std::string_view text) {
  using Kind = VectorError::Kind;

  // trim whitespace and one layer of parentheses
  auto is_space = [](char ch) { return std::isspace(static_cast<unsigned char>(ch)) != 0; };
  while (!text.empty() && is_space(text.front())) text.remove_prefix(1);
  while (!text.empty() && is_space(text.back())) text.remove_suffix(1);
  if (text.size() >= 2 && text.front() == '(' && text.back() == ')') {
    text = text.substr(1, text.size() - 2);
  }
  if (text.empty()) {
    throw VectorError(Kind::MalformedSyntax, "", "empty CVSS vector");
  }

  CvssVector vec;
  bool seen[6] = {false, false, false, false, false, false};
  static constexpr std::string_view metric_names[6] = {"AV", "AC", "AU", "C", "I", "A"};

  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t slash = std::min(text.find('/', pos), text.size());
    std::string_view token = text.substr(pos, slash - pos);
    pos = slash + 1;

    const std::size_t colon = token.find(':');
    if (token.empty() || colon == std::string_view::npos || colon == 0 ||
        colon + 1 >= token.size()) {
      throw VectorError(Kind::MalformedSyntax, std::string(token),
                        "malformed CVSS metric token: \"" + std::string(token) + "\"");
    }

    std::string key(token.substr(0, colon));
    std::string value(token.substr(colon + 1));
    auto upper = [](std::string& s) {
      std::transform(s.begin(), s.end(), s.begin(),
                     [](unsigned char ch) { return static_cast<char>(std::toupper(ch)); });
    };
    upper(key);
    upper(value);

    int metric = -1;
    for (int i = 0; i < 6; ++i) {
      if (key == metric_names[i]) {
        metric = i;
        break;
      }
    }
    if (metric < 0) {
      throw VectorError(Kind::UnknownValue, key,
                        "unsupported CVSS metric \"" + key + "\" (only base metrics are accepted)");
    }
    if (seen[metric]) {
      throw VectorError(Kind::DuplicateMetric, key, "duplicate CVSS metric " + key);
    }
    seen[metric] = true;

    auto bad_value = [&]() -> VectorError {
      return VectorError(Kind::UnknownValue, value,
                         "unknown value \"" + value + "\" for CVSS metric " + key);
    };
    if (value.size() != 1) throw bad_value();
    const char letter = value[0];

    switch (metric) {
      case 0:  // AV
        if (letter == 'L') vec.access_vector = AccessVector::Local;
        else if (letter == 'A') vec.access_vector = AccessVector::AdjacentNetwork;
        else if (letter == 'N') vec.access_vector = AccessVector::Network;
        else throw bad_value();
        break;
      case 1:  // AC
        if (letter == 'H') vec.access_complexity = AccessComplexity::High;
        else if (letter == 'M') vec.access_complexity = AccessComplexity::Medium;
        else if (letter == 'L') vec.access_complexity = AccessComplexity::Low;
        else throw bad_value();
        break;
      case 2:  // Au
        if (letter == 'M') vec.authentication = Authentication::Multiple;
        else if (letter == 'S') vec.authentication = Authentication::Single;
        else if (letter == 'N') vec.authentication = Authentication::None;
        else throw bad_value();
        break;
      default: {  // C, I, A
        ImpactValue impact;
        if (letter == 'N') impact = ImpactValue::None;
        else if (letter == 'P') impact = ImpactValue::Partial;
        else if (letter == 'C') impact = ImpactValue::Complete;
        else throw bad_value();
        if (metric == 3) vec.conf_impact = impact;
        else if (metric == 4) vec.integ_impact = impact;
        else vec.avail_impact = impact;
        break;
      }
    }
    if (slash == text.size()) break;
  }

  for (int i = 0; i < 6; ++i) {
    if (!seen[i]) {
      throw VectorError(Kind::MissingMetric, std::string(metric_names[i]),
                        "missing CVSS base metric " + std::string(metric_names[i]));
    }
  }
  return vec;
}

// --- CVSS v2 base equation ---------------------------------------------------

namespace detail {

constexpr double impact_weight(ImpactValue v) {
  switch (v) {
    case ImpactValue::None: return 0.0;
    case ImpactValue::Partial: return 0.275;
    case ImpactValue::Complete: return 0.660;
  }
  return 0.0;
}

constexpr double access_vector_weight(AccessVector v) {
  switch (v) {
    case AccessVector::Local: return 0.395;
    case AccessVector::AdjacentNetwork: return 0.646;
    case AccessVector::Network: return 1.0;
  }
  return 0.0;
}

constexpr double access_complexity_weight(AccessComplexity v) {
  switch (v) {
    case AccessComplexity::High: return 0.35;
    case AccessComplexity::Medium: return 0.61;
    case AccessComplexity::Low: return 0.71;
  }
  return 0.0;
}

constexpr double authentication_weight(Authentication v) {
  switch (v) {
    case Authentication::Multiple: return 0.45;
    case Authentication::Single: return 0.56;
    case Authentication::None: return 0.704;
  }
  return 0.0;
}

inline double raw_impact(const CvssVector& v) {
  const double c = impact_weight(v.conf_impact);
  const double i = impact_weight(v.integ_impact);
  const double a = impact_weight(v.avail_impact);
  return 10.41 * (1.0 - (1.0 - c) * (1.0 - i) * (1.0 - a));
}

}  // namespace detail

/// CVSS v2 impact subscore in [0, 10]. The all-Complete case evaluates to
/// 10.0008 and is clamped to the guide's tabulated 10.0.
inline double impact_subscore(const CvssVector& v) {
  return std::min(detail::raw_impact(v), 10.0);
}

/// CVSS v2 base score, rounded to one decimal as the v2 equation specifies.
/// Used as a fallback when a feed carries no precomputed score.
inline double base_score(const CvssVector& v) {
  const double impact = detail::raw_impact(v);
  const double exploitability = 20.0 * detail::access_vector_weight(v.access_vector) *
                                detail::access_complexity_weight(v.access_complexity) *
                                detail::authentication_weight(v.authentication);
  const double f_impact = impact == 0.0 ? 0.0 : 1.176;
  const double raw = (0.6 * impact + 0.4 * exploitability - 1.5) * f_impact;
  return std::round(raw * 10.0) / 10.0;
}

/// Buckets the impact subscore into the three-level Impact category:
/// HIGH at subscore >= 8, MEDIUM in [4, 8), LOW below 4. The thresholds put
/// <C,C,C> in HIGH, <P,P,P> in MEDIUM and <N,N,P> in LOW.
inline Level impact_level(const CvssVector& v) {
  const double subscore = impact_subscore(v);
  if (subscore >= 8.0) return Level::High;
  if (subscore >= 4.0) return Level::Medium;
  return Level::Low;
}

/// Access Complexity maps directly onto the three-level category.
constexpr Level complexity_level(const CvssVector& v) {
  switch (v.access_complexity) {
    case AccessComplexity::High: return Level::High;
    case AccessComplexity::Medium: return Level::Medium;
    case AccessComplexity::Low: return Level::Low;
  }
  return Level::Low;
}

// --- Impact / Complexity ordinal score tables ---------------------------------

/// Ordinal scores assigned to the three Impact and Access Complexity levels,
/// feeding the estimated-attack-potential formula. All scores are strictly
/// positive (the formula takes a base-10 log of the impact score).
///
/// Two presets ship. They differ only in the MEDIUM impact score (6 vs 7):
///   - "table2-literal":    Impact H/M/L = 10/6/3
///   - "table4-consistent": Impact H/M/L = 10/7/3 (default; reproduces the
///     bundled worked-example fixture)
/// Both use Complexity L/M/H = 10/7/2.
struct ScoreTable {
  std::string name;
  std::array<double, 3> impact_scores{};      // indexed by level_index()
  std::array<double, 3> complexity_scores{};  // indexed by level_index()

  double impact_score(Level level) const { return impact_scores[level_index(level)]; }
  double complexity_score(Level level) const { return complexity_scores[level_index(level)]; }

  void validate() const {
    for (double s : impact_scores) {
      if (!(s > 0.0)) throw InvalidConfig("impact scores must be strictly positive");
    }
    for (double s : complexity_scores) {
      if (!(s > 0.0)) throw InvalidConfig("complexity scores must be strictly positive");
    }
  }

  static const ScoreTable& table2_literal() {
    static const ScoreTable table{"table2-literal", {3.0, 6.0, 10.0}, {10.0, 7.0, 2.0}};
    return table;
  }

  static const ScoreTable& table4_consistent() {
    static const ScoreTable table{"table4-consistent", {3.0, 7.0, 10.0}, {10.0, 7.0, 2.0}};
    return table;
  }

  static const ScoreTable& preset(std::string_view name) {
    if (name == "table2-literal") return table2_literal();
    if (name == "table4-consistent") return table4_consistent();
    throw InvalidConfig("unknown score-table preset: " + std::string(name) +
                        " (expected table2-literal or table4-consistent)");
  }
};

}  // namespace vulntriage
