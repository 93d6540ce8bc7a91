/*
 * Copyright 2026 The rewa-sketch Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

// Monoid algebra: carrier, combine, identity and the scalar similarity phi.
//
//   Boolean   {0,1}          combine = OR         e = 0     phi = AND
//   Natural   uint64         combine = sat. add   e = 0     phi = min
//   Real      finite double  combine = +          e = 0.0   phi = a * b
//   Tropical  [0,D] u {+inf} combine = min        e = +inf  phi = -(min(a,D) + min(b,D))
//   Product   M1 x M2        component-wise       (e1, e2)  phi = l1 * phi1 + l2 * phi2
//
// Every combine above is associative and commutative, so bucket folds do not
// depend on processing order.

#include <cstdint>
#include <limits>
#include <memory>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace rewa {

enum class MonoidKind : std::uint8_t { kBoolean = 0, kNatural = 1, kReal = 2, kTropical = 3, kProduct = 4 };

[[nodiscard]] std::string_view to_string(MonoidKind kind) noexcept;

inline constexpr double kTropicalInfinity = std::numeric_limits<double>::infinity();
inline constexpr std::uint64_t kNaturalSaturation = std::numeric_limits<std::uint64_t>::max();

namespace scalar {

[[nodiscard]] constexpr std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) noexcept {
  const std::uint64_t s = a + b;
  return s < a ? kNaturalSaturation : s;
}

[[nodiscard]] constexpr double tropical_phi(double a, double b, double diameter) noexcept {
  const double ca = a < diameter ? a : diameter;
  const double cb = b < diameter ? b : diameter;
  return -(ca + cb);
}

}  // namespace scalar

class MonoidElement {
 public:
  [[nodiscard]] static MonoidElement boolean(bool bit) { return MonoidElement(Storage{bit}); }
  [[nodiscard]] static MonoidElement natural(std::uint64_t count) { return MonoidElement(Storage{count}); }
  // Throws InvalidArgument for NaN or infinities.
  [[nodiscard]] static MonoidElement real(double value);
  // Accepts [0, +inf]; throws InvalidArgument for negatives and NaN.
  [[nodiscard]] static MonoidElement tropical(double distance);
  [[nodiscard]] static MonoidElement pair(MonoidElement first, MonoidElement second);

  [[nodiscard]] MonoidKind kind() const noexcept { return static_cast<MonoidKind>(value_.index()); }

  // Accessors throw TypeError when the element has another carrier.
  [[nodiscard]] bool boolean_value() const;
  [[nodiscard]] std::uint64_t natural_value() const;
  [[nodiscard]] double real_value() const;
  [[nodiscard]] double tropical_value() const;
  [[nodiscard]] const MonoidElement& first() const;
  [[nodiscard]] const MonoidElement& second() const;

  // Exact equality; Real and Tropical payloads compare by value.
  friend bool operator==(const MonoidElement& a, const MonoidElement& b);

 private:
  struct RealValue {
    double v;
  };
  struct TropicalValue {
    double v;
  };
  using PairValue = std::shared_ptr<const std::pair<MonoidElement, MonoidElement>>;
  using Storage = std::variant<bool, std::uint64_t, RealValue, TropicalValue, PairValue>;

  explicit MonoidElement(Storage s) : value_(std::move(s)) {}

  Storage value_;
};

class MonoidSpec {
 public:
  [[nodiscard]] static MonoidSpec boolean();
  // clip_bound is the L_max of clipped count witnesses; reporting metadata for the algebra.
  [[nodiscard]] static MonoidSpec natural(std::uint64_t clip_bound = kNaturalSaturation);
  [[nodiscard]] static MonoidSpec real();
  // diameter D must be finite and positive.
  [[nodiscard]] static MonoidSpec tropical(double diameter);

  friend MonoidSpec product_monoid(const MonoidSpec& first, const MonoidSpec& second, double weight1,
                                   double weight2);

  [[nodiscard]] MonoidKind kind() const noexcept { return kind_; }
  [[nodiscard]] std::uint64_t clip_bound() const noexcept { return clip_bound_; }
  [[nodiscard]] double diameter() const noexcept { return diameter_; }
  [[nodiscard]] double weight1() const noexcept { return weight1_; }
  [[nodiscard]] double weight2() const noexcept { return weight2_; }
  // Children of a product spec; throws TypeError otherwise.
  [[nodiscard]] const MonoidSpec& first() const;
  [[nodiscard]] const MonoidSpec& second() const;

  // Reference sample-complexity constant C_M (8 / 16 / 32 / 64; products take the
  // larger child constant). Reported, never used to gate correctness.
  [[nodiscard]] double reference_constant() const noexcept;

  // True when `e` belongs to this spec's carrier (recursively for products).
  [[nodiscard]] bool carries(const MonoidElement& e) const noexcept;

  [[nodiscard]] MonoidElement identity() const;
  // Throws TypeError on carrier mismatch.
  [[nodiscard]] MonoidElement combine(const MonoidElement& a, const MonoidElement& b) const;
  [[nodiscard]] double phi(const MonoidElement& a, const MonoidElement& b) const;

  // Leaf (non-product) specs in depth-first order, with the product of weights on
  // the path to each leaf.
  [[nodiscard]] std::vector<std::pair<const MonoidSpec*, double>> leaves() const;

  friend bool operator==(const MonoidSpec& a, const MonoidSpec& b);

 private:
  explicit MonoidSpec(MonoidKind kind) : kind_(kind) {}
  void require(const MonoidElement& e) const;

  MonoidKind kind_;
  std::uint64_t clip_bound_ = kNaturalSaturation;
  double diameter_ = 0.0;
  double weight1_ = 0.0;
  double weight2_ = 0.0;
  std::shared_ptr<const MonoidSpec> first_;
  std::shared_ptr<const MonoidSpec> second_;
};

// Throws InvalidArgument for negative or non-finite weights, or both zero.
[[nodiscard]] MonoidSpec product_monoid(const MonoidSpec& first, const MonoidSpec& second, double weight1,
                                        double weight2);

}  // namespace rewa
