#include "motifsp/sp.hpp"

#include <cmath>
#include <charconv>
#include <stdexcept>

namespace motifsp {

namespace {

void normalize_group(std::span<const double, kNumPatterns> z, std::array<double, kNumPatterns>& out,
                     std::size_t begin, std::size_t end) {
  // scale by the max magnitude first so that capped entries cannot overflow
  double peak = 0.0;
  for (std::size_t i = begin; i < end; ++i) peak = std::max(peak, std::abs(z[i]));
  if (peak == 0.0) {
    for (std::size_t i = begin; i < end; ++i) out[i] = 0.0;
    return;
  }
  double ss = 0.0;
  for (std::size_t i = begin; i < end; ++i) ss += (z[i] / peak) * (z[i] / peak);
  const double norm = std::sqrt(ss);
  for (std::size_t i = begin; i < end; ++i) out[i] = (z[i] / peak) / norm;
}

}  // namespace

SignificanceProfile normalize(std::span<const double, kNumPatterns> z) {
  for (double v : z)
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite z-score");
  SignificanceProfile sp;
  normalize_group(z, sp.s, kSize3Begin, kSize3End);
  normalize_group(z, sp.s, kSize4Begin, kSize4End);
  return sp;
}

SignificanceProfile normalize(const ZScores& z) { return normalize(std::span<const double, kNumPatterns>(z.z)); }

double sp_distance(std::span<const double, kNumPatterns> a, std::span<const double, kNumPatterns> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < kNumPatterns; ++i) acc += std::abs(a[i] - b[i]);
  return acc / static_cast<double>(kNumPatterns);
}

double sp_distance(const SignificanceProfile& a, const SignificanceProfile& b) {
  return sp_distance(std::span<const double, kNumPatterns>(a.s), std::span<const double, kNumPatterns>(b.s));
}

bool is_correct(std::span<const double, kNumPatterns> pred, const SignificanceProfile& truth, double theta) {
  if (!(theta > 0.0 && theta <= 0.5)) throw std::invalid_argument("theta must lie in (0, 0.5]");
  const double bound = 2.0 * theta;
  for (std::size_t i = 0; i < kNumPatterns; ++i) {
    const double t = truth.s[i], p = pred[i];
    if (!(std::abs(p - t) <= bound)) return false;
    if (std::abs(t) <= kZeroSignTolerance) continue;
    if (t > 0.0 ? !(p > 0.0) : !(p < 0.0)) return false;
  }
  return true;
}

bool is_correct(const SignificanceProfile& pred, const SignificanceProfile& truth, double theta) {
  return is_correct(std::span<const double, kNumPatterns>(pred.s), truth, theta);
}

std::array<double, 2> group_norms2(std::span<const double, kNumPatterns> s) {
  std::array<double, 2> n{0.0, 0.0};
  for (std::size_t i = kSize3Begin; i < kSize3End; ++i) n[0] += s[i] * s[i];
  for (std::size_t i = kSize4Begin; i < kSize4End; ++i) n[1] += s[i] * s[i];
  return n;
}

std::string validate_profile(const SignificanceProfile& sp, double tol) {
  for (std::size_t i = 0; i < kNumPatterns; ++i) {
    if (!std::isfinite(sp.s[i])) return "non-finite entry at " + std::string(kPatternNames[i]);
    if (sp.s[i] < -1.0 - tol || sp.s[i] > 1.0 + tol)
      return "entry outside [-1,1] at " + std::string(kPatternNames[i]);
  }
  auto norms = group_norms2(sp.s);
  const char* names[] = {"size-3", "size-4"};
  for (int g = 0; g < 2; ++g)
    if (std::abs(norms[g]) > tol && std::abs(norms[g] - 1.0) > tol)
      return std::string(names[g]) + " group norm " + format_real(std::sqrt(norms[g])) + " is neither 0 nor 1";
  return {};
}

std::string format_real(double x) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string to_csv_row(std::span<const double, kNumPatterns> v) {
  std::string out;
  for (std::size_t i = 0; i < kNumPatterns; ++i) {
    if (i) out += ',';
    out += format_real(v[i]);
  }
  return out;
}

std::string to_json_array(std::span<const double, kNumPatterns> v) { return "[" + to_csv_row(v) + "]"; }

}  // namespace motifsp
