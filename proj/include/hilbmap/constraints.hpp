#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hilbmap/hermitian.hpp"
#include "hilbmap/sphere.hpp"

// Half-space constraints  sum_i |sigma_i|^2_H < M sum_j |s_j|^2_H  satisfied by
// every Gram matrix in the image of the Hilbert map, with
//   M = sup_p sum_i |sigma_i(p)|^2 / sum_j |s_j(p)|^2.
namespace hilbmap {

class UnboundedRatio : public std::runtime_error {
 public:
  UnboundedRatio(const Point& zero, int den_order, int num_order)
      : std::runtime_error("unbounded ratio: denominator family vanishes to order " +
                           std::to_string(den_order) + " at " + zero.describe() +
                           " but the numerator only to order " + std::to_string(num_order)),
        zero(zero) {}

  Point zero;
};

// Q with Q_ab = sum_i c_ia conj(c_ib), so pairing(H, Q) = sum_i |sigma_i|^2_H.
HermitianForm family_form(const SectionFamily& family);

struct RatioSup {
  double bound = 0.0;
  Point maximizer = Point::infinity();
};

// Global supremum of the frame-independent ratio over CP^1: 128 x 64 scan in
// (x, theta), both poles, limits at the denominator's zeros, then cyclic
// golden-section refinement. Throws UnboundedRatio when the numerator does not
// vanish to at least the denominator's order at each of its common zeros.
RatioSup ratio_sup(const SectionFamily& num, const SectionFamily& den);

// The pointwise ratio itself (NaN where the denominator vanishes).
double pointwise_ratio(const SectionFamily& num, const SectionFamily& den, double x, double theta);

struct HalfSpaceConstraint {
  HermitianForm q_num;
  HermitianForm q_den;
  double bound = 0.0;
  Point maximizer = Point::infinity();
  std::optional<SectionFamily> num;
  std::optional<SectionFamily> den;

  // Unit normal N / |N|, N = M Q_den - Q_num: inside means pairing(H, N) > 0.
  HermitianForm canonical_normal() const;
};

HalfSpaceConstraint make_constraint(const SectionFamily& num, const SectionFamily& den);

enum class Membership { strict_inside, boundary, outside };
std::string to_string(Membership m);

struct MembershipResult {
  Membership verdict = Membership::boundary;
  double lhs = 0.0;     // pairing(H, Q_num)
  double rhs = 0.0;     // M pairing(H, Q_den)
  double margin = 0.0;  // (rhs - lhs) / max(|lhs|, |rhs|)
};

MembershipResult check_membership(const HermitianForm& h, const HalfSpaceConstraint& c,
                                  double rel_tol = 1e-9);

// Linearly independent family with the same pointwise sum of squares.
SectionFamily prune_family(const SectionFamily& family, double rel_tol = 1e-10);

struct PrunedPair {
  SectionFamily num;
  SectionFamily den;
};
PrunedPair prune_families(const SectionFamily& num, const SectionFamily& den);

struct Reduction {
  HalfSpaceConstraint constraint;  // built from the pruned families
  bool num_in_span = false;
  // Eigenvalues of the numerator form relative to the denominator on span(den),
  // ascending; empty when num is not inside span(den).
  std::vector<double> lambdas;
  // den basis diagonalizing the relative form (rows), when num_in_span.
  std::optional<SectionFamily> diagonal_den;
  // Unitary recombination of den: only the first member is nonzero at the maximizer.
  SectionFamily aligned_den;
  // den minimally generates, so the constraint follows from M = max lambda.
  bool redundant = false;
};

Reduction reduce_constraint(const SectionFamily& num, const SectionFamily& den);

// Seeded random family pairs (den generic, num random or inside span(den)),
// reduced and deduplicated by canonical normal.
std::vector<HalfSpaceConstraint> sample_outer_polytope(const PolarizedModel& model, int count,
                                                       std::uint64_t seed);

}  // namespace hilbmap
