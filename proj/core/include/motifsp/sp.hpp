#pragma once

#include <array>
#include <iosfwd>
#include <span>
#include <string>

#include "motifsp/census.hpp"
#include "motifsp/nullmodel.hpp"

namespace motifsp {

/// Significance profile: z-scores L2-normalized within the size-3 group
/// {P3, TRI} and the size-4 group {P4 .. K4}. Each group has norm 0 or 1.
struct SignificanceProfile {
  std::array<double, kNumPatterns> s{};

  double operator[](PatternId p) const noexcept { return s[index_of(p)]; }
  friend bool operator==(const SignificanceProfile&, const SignificanceProfile&) = default;
};

/// Per-group normalization; an all-zero group stays all zero.
SignificanceProfile normalize(const ZScores& z);
SignificanceProfile normalize(std::span<const double, kNumPatterns> z);

/// Mean absolute coordinate difference.
double sp_distance(const SignificanceProfile& a, const SignificanceProfile& b);
double sp_distance(std::span<const double, kNumPatterns> a, std::span<const double, kNumPatterns> b);

inline constexpr double kZeroSignTolerance = 1e-12;

/// Threshold correctness: every coordinate within 2*theta of the truth and
/// of the same strict sign, except that a truth with |t| <= 1e-12 imposes no
/// sign constraint. Throws std::invalid_argument for theta outside (0, 0.5].
bool is_correct(std::span<const double, kNumPatterns> pred, const SignificanceProfile& truth, double theta);
bool is_correct(const SignificanceProfile& pred, const SignificanceProfile& truth, double theta);

/// Empty when entries lie in [-1,1] and group norms are 0 or 1 within tol.
std::string validate_profile(const SignificanceProfile& sp, double tol = 1e-9);

/// Squared L2 norms of the size-3 and size-4 groups.
std::array<double, 2> group_norms2(std::span<const double, kNumPatterns> s);

/// Shortest decimal form that parses back to the same double.
std::string format_real(double x);

/// "v0,v1,...,v7" in PatternId order.
std::string to_csv_row(std::span<const double, kNumPatterns> v);
/// "[v0,v1,...,v7]".
std::string to_json_array(std::span<const double, kNumPatterns> v);

}  // namespace motifsp
