#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <span>
#include <string>
#include <utility>

#include "vulntriage/cvss.hpp"
#include "vulntriage/errors.hpp"

namespace vulntriage {

// Attack potential: the observed measure pA = log10 of the attack count, and
// its estimate E[pA] = log10(impact score) * complexity score computed from
// the CVSS vector alone.

// --- display helpers ----------------------------------------------------------

/// Truncates toward zero to one decimal. Display truncates rather than
/// rounds; full precision is kept internally.
inline double truncate_decimal(double value) {
  return std::floor(value * 10.0) / 10.0;
}

/// One-decimal truncated rendering, e.g. 5.1769 -> "5.1".
inline std::string display_fixed(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", truncate_decimal(value));
  return buf;
}

/// Truncated rendering that drops a trailing ".0": 8.45 -> "8.4", 7.0 -> "7".
inline std::string display_compact(double value) {
  const double truncated = truncate_decimal(value);
  if (truncated == std::floor(truncated)) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.0f", truncated);
    return buf;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", truncated);
  return buf;
}

/// Full-precision rendering for machine-readable companion columns.
inline std::string display_full(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

// --- observed attack potential ------------------------------------------------

/// Observed attack potential of one vulnerability: log10 of the number of
/// attacks recorded in the wild. Defined only for at least one attack.
struct PaMeasure {
  double value = 0.0;
  std::uint64_t attack_count = 0;

  std::string display() const { return display_fixed(value); }
};

/// Throws ZeroAttacks for a zero count: such a vulnerability is unexploited
/// and has no measure, not a measure of negative infinity.
inline PaMeasure observed_pa(std::uint64_t attack_count) {
  if (attack_count == 0) throw ZeroAttacks();
  return PaMeasure{std::log10(static_cast<double>(attack_count)), attack_count};
}

// --- estimated attack potential -----------------------------------------------

/// Estimated attack potential computed from the CVSS vector alone:
/// log10(impact score) * complexity score under a given score table.
/// Ranges over (0, 10] with the maximum at (HIGH impact, LOW complexity).
struct EpaEstimate {
  double value = 0.0;
  Level impact = Level::Low;
  Level complexity = Level::Low;
  std::string score_table;

  std::string display() const { return display_compact(value); }
};

inline EpaEstimate estimated_pa(Level impact, Level complexity, const ScoreTable& table) {
  table.validate();
  const double value = std::log10(table.impact_score(impact)) * table.complexity_score(complexity);
  return EpaEstimate{value, impact, complexity, table.name};
}

/// Discrete level of a potential value (applied identically to pA and E[pA]):
/// HIGH above 5, MEDIUM in (3, 5], LOW in [0, 3].
inline Level discretize(double value) {
  if (value < 0.0) throw NegativeValue("attack-potential values are non-negative");
  if (value > 5.0) return Level::High;
  if (value > 3.0) return Level::Medium;
  return Level::Low;
}

// --- agreement between estimate and observation --------------------------------

enum class EstimateAgreement { Match, OverEstimate, UnderEstimate };

constexpr EstimateAgreement agreement(Level pa_level, Level epa_level) {
  if (epa_level == pa_level) return EstimateAgreement::Match;
  return epa_level > pa_level ? EstimateAgreement::OverEstimate
                              : EstimateAgreement::UnderEstimate;
}

constexpr std::string_view to_string(EstimateAgreement a) {
  switch (a) {
    case EstimateAgreement::Match: return "match";
    case EstimateAgreement::OverEstimate: return "E[pA]>pA";
    case EstimateAgreement::UnderEstimate: return "E[pA]<pA";
  }
  return "?";
}

// --- confusion matrix -----------------------------------------------------------

/// 3x3 contingency of discrete pA (rows) against discrete E[pA] (columns),
/// in HIGH, MEDIUM, LOW display order, with marginal sums and the
/// under-estimation rate (records whose estimate level sits strictly below
/// the observed level).
struct ConfusionMatrix {
  // counts[level_index(pa)][level_index(epa)]
  std::array<std::array<std::uint64_t, 3>, 3> counts{};

  std::uint64_t at(Level pa, Level epa) const {
    return counts[level_index(pa)][level_index(epa)];
  }
  std::uint64_t row_sum(Level pa) const {
    const auto& row = counts[level_index(pa)];
    return row[0] + row[1] + row[2];
  }
  std::uint64_t col_sum(Level epa) const {
    const std::size_t j = level_index(epa);
    return counts[0][j] + counts[1][j] + counts[2][j];
  }
  std::uint64_t total() const {
    return row_sum(Level::Low) + row_sum(Level::Medium) + row_sum(Level::High);
  }
  std::uint64_t under_estimates() const {
    std::uint64_t n = 0;
    for (std::size_t pa = 0; pa < 3; ++pa) {
      for (std::size_t epa = 0; epa < pa; ++epa) n += counts[pa][epa];
    }
    return n;
  }
  /// Fraction of records with E[pA] level strictly below pA level; 0 when empty.
  double under_estimation_rate() const {
    const std::uint64_t n = total();
    return n == 0 ? 0.0 : static_cast<double>(under_estimates()) / static_cast<double>(n);
  }
};

inline ConfusionMatrix confusion_matrix(std::span<const std::pair<Level, Level>> records) {
  ConfusionMatrix m;
  for (const auto& [pa_level, epa_level] : records) {
    ++m.counts[level_index(pa_level)][level_index(epa_level)];
  }
  return m;
}

}  // namespace vulntriage
