#pragma once

#include <algorithm>
#include <optional>
#include <random>
#include <vector>

#include "herz/exponents.hpp"

namespace herz {

inline ExtRat random_rational(std::mt19937_64& rng, std::int64_t lo_num, std::int64_t hi_num, std::int64_t den) {
  std::uniform_int_distribution<std::int64_t> d(lo_num, hi_num);
  return ExtRat(d(rng), den);
}

/// Random tuple satisfying the standing assumptions, or nullopt when the draw
/// falls outside them. About a third of the draws put q exactly on one of the
/// two critical levels.
inline std::optional<ProblemParams> random_problem(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> nd(1, 5);
  const int n = nd(rng);
  const std::int64_t den = std::uniform_int_distribution<std::int64_t>(1, 6)(rng);
  const ExtRat gmin = -ExtRat(std::min(2, n));
  const ExtRat gamma = random_rational(rng, -2 * den, 3 * den, den);
  if (!(gamma > gmin)) return std::nullopt;
  const ExtRat amin = max(ExtRat(1), ExtRat(1) + gamma / ExtRat(n));
  const ExtRat alpha = amin + random_rational(rng, 1, 4 * den, den);
  const ExtRat s_lo = gamma / (alpha - ExtRat(1));
  const ExtRat s = s_lo + random_rational(rng, 0, 3 * den, den);
  ExtRat q;
  const int mode = std::uniform_int_distribution<int>(0, 5)(rng);
  const ExtRat q_c_inv = (ExtRat(2) + gamma) / (ExtRat(n) * (alpha - ExtRat(1)));
  const ExtRat Q_c_inv = (ExtRat(n) + gamma) / (ExtRat(n) * alpha);
  if (mode <= 1) {
    const ExtRat v = mode == 0 ? q_c_inv : Q_c_inv;
    const ExtRat inv_q = v - s / ExtRat(n);
    if (!(inv_q >= ExtRat(0))) return std::nullopt;
    q = inv_q.is_zero() ? ExtRat::infinity() : inv_q.reciprocal();
  } else if (mode == 2) {
    q = ExtRat::infinity();
  } else {
    q = alpha + random_rational(rng, 0, 8 * den, den);
  }
  const int rm = std::uniform_int_distribution<int>(0, 4)(rng);
  const ExtRat r = rm == 0 ? ExtRat::infinity() : (rm == 1 ? alpha : random_rational(rng, 1, 12, 3));
  try {
    return ProblemParams::make(n, alpha, gamma, HerzIndex::make(s, q, r));
  } catch (const ParameterError&) {
    return std::nullopt;
  } catch (const ArithmeticError&) {
    return std::nullopt;
  }
}

/// Positive coefficients log-uniform in [2^-8, 2^8], a few of them zero.
inline std::vector<double> random_coefficients(std::mt19937_64& rng, int count, double zero_fraction = 0.15) {
  std::uniform_real_distribution<double> e(-8.0, 8.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> c(count);
  for (auto& x : c) x = u(rng) < zero_fraction ? 0.0 : std::exp2(e(rng));
  return c;
}

}  // namespace herz
