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

#include "rewa/monoid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rewa/errors.hpp"

namespace rewa {

std::string_view to_string(MonoidKind kind) noexcept {
  switch (kind) {
    case MonoidKind::kBoolean:
      return "boolean";
    case MonoidKind::kNatural:
      return "natural";
    case MonoidKind::kReal:
      return "real";
    case MonoidKind::kTropical:
      return "tropical";
    case MonoidKind::kProduct:
      return "product";
  }
  return "unknown";
}

MonoidElement MonoidElement::real(double value) {
  if (!std::isfinite(value)) throw InvalidArgument("real monoid elements must be finite");
  return MonoidElement(Storage{RealValue{value}});
}

MonoidElement MonoidElement::tropical(double distance) {
  if (std::isnan(distance) || distance < 0.0) {
    throw InvalidArgument("tropical elements must lie in [0, +inf]");
  }
  return MonoidElement(Storage{TropicalValue{distance}});
}

MonoidElement MonoidElement::pair(MonoidElement first, MonoidElement second) {
  return MonoidElement(
      Storage{std::make_shared<const std::pair<MonoidElement, MonoidElement>>(std::move(first), std::move(second))});
}

namespace {

[[noreturn]] void carrier_error(MonoidKind want, MonoidKind got) {
  throw TypeError("expected " + std::string(to_string(want)) + " element, got " + std::string(to_string(got)));
}

}  // namespace

bool MonoidElement::boolean_value() const {
  if (const auto* b = std::get_if<bool>(&value_)) return *b;
  carrier_error(MonoidKind::kBoolean, kind());
}

std::uint64_t MonoidElement::natural_value() const {
  if (const auto* n = std::get_if<std::uint64_t>(&value_)) return *n;
  carrier_error(MonoidKind::kNatural, kind());
}

double MonoidElement::real_value() const {
  if (const auto* r = std::get_if<RealValue>(&value_)) return r->v;
  carrier_error(MonoidKind::kReal, kind());
}

double MonoidElement::tropical_value() const {
  if (const auto* t = std::get_if<TropicalValue>(&value_)) return t->v;
  carrier_error(MonoidKind::kTropical, kind());
}

const MonoidElement& MonoidElement::first() const {
  if (const auto* p = std::get_if<PairValue>(&value_)) return (*p)->first;
  carrier_error(MonoidKind::kProduct, kind());
}

const MonoidElement& MonoidElement::second() const {
  if (const auto* p = std::get_if<PairValue>(&value_)) return (*p)->second;
  carrier_error(MonoidKind::kProduct, kind());
}

bool operator==(const MonoidElement& a, const MonoidElement& b) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case MonoidKind::kBoolean:
      return a.boolean_value() == b.boolean_value();
    case MonoidKind::kNatural:
      return a.natural_value() == b.natural_value();
    case MonoidKind::kReal:
      return a.real_value() == b.real_value();
    case MonoidKind::kTropical:
      return a.tropical_value() == b.tropical_value();
    case MonoidKind::kProduct:
      return a.first() == b.first() && a.second() == b.second();
  }
  return false;
}

MonoidSpec MonoidSpec::boolean() { return MonoidSpec(MonoidKind::kBoolean); }

MonoidSpec MonoidSpec::natural(std::uint64_t clip_bound) {
  if (clip_bound == 0) throw InvalidArgument("natural clip bound must be positive");
  MonoidSpec s(MonoidKind::kNatural);
  s.clip_bound_ = clip_bound;
  return s;
}

MonoidSpec MonoidSpec::real() { return MonoidSpec(MonoidKind::kReal); }

MonoidSpec MonoidSpec::tropical(double diameter) {
  if (!std::isfinite(diameter) || diameter <= 0.0) {
    throw InvalidArgument("tropical diameter bound must be finite and positive");
  }
  MonoidSpec s(MonoidKind::kTropical);
  s.diameter_ = diameter;
  return s;
}

MonoidSpec product_monoid(const MonoidSpec& first, const MonoidSpec& second, double weight1, double weight2) {
  if (!std::isfinite(weight1) || !std::isfinite(weight2) || weight1 < 0.0 || weight2 < 0.0) {
    throw InvalidArgument("product weights must be finite and non-negative");
  }
  if (weight1 + weight2 <= 0.0) throw InvalidArgument("product weights must not both be zero");
  MonoidSpec s(MonoidKind::kProduct);
  s.weight1_ = weight1;
  s.weight2_ = weight2;
  s.first_ = std::make_shared<const MonoidSpec>(first);
  s.second_ = std::make_shared<const MonoidSpec>(second);
  return s;
}

const MonoidSpec& MonoidSpec::first() const {
  if (kind_ != MonoidKind::kProduct) throw TypeError("first() on a non-product monoid");
  return *first_;
}

const MonoidSpec& MonoidSpec::second() const {
  if (kind_ != MonoidKind::kProduct) throw TypeError("second() on a non-product monoid");
  return *second_;
}

double MonoidSpec::reference_constant() const noexcept {
  switch (kind_) {
    case MonoidKind::kBoolean:
      return 8.0;
    case MonoidKind::kNatural:
      return 16.0;
    case MonoidKind::kReal:
      return 32.0;
    case MonoidKind::kTropical:
      return 64.0;
    case MonoidKind::kProduct:
      return std::max(first_->reference_constant(), second_->reference_constant());
  }
  return 0.0;
}

bool MonoidSpec::carries(const MonoidElement& e) const noexcept {
  if (e.kind() != kind_) return false;
  if (kind_ == MonoidKind::kProduct) return first_->carries(e.first()) && second_->carries(e.second());
  return true;
}

void MonoidSpec::require(const MonoidElement& e) const {
  if (!carries(e)) {
    throw TypeError("element of kind " + std::string(to_string(e.kind())) + " is not in the " +
                    std::string(to_string(kind_)) + " carrier");
  }
}

MonoidElement MonoidSpec::identity() const {
  switch (kind_) {
    case MonoidKind::kBoolean:
      return MonoidElement::boolean(false);
    case MonoidKind::kNatural:
      return MonoidElement::natural(0);
    case MonoidKind::kReal:
      return MonoidElement::real(0.0);
    case MonoidKind::kTropical:
      return MonoidElement::tropical(kTropicalInfinity);
    case MonoidKind::kProduct:
      return MonoidElement::pair(first_->identity(), second_->identity());
  }
  throw TypeError("unknown monoid kind");
}

MonoidElement MonoidSpec::combine(const MonoidElement& a, const MonoidElement& b) const {
  require(a);
  require(b);
  switch (kind_) {
    case MonoidKind::kBoolean:
      return MonoidElement::boolean(a.boolean_value() || b.boolean_value());
    case MonoidKind::kNatural:
      return MonoidElement::natural(scalar::saturating_add(a.natural_value(), b.natural_value()));
    case MonoidKind::kReal:
      return MonoidElement::real(a.real_value() + b.real_value());
    case MonoidKind::kTropical:
      return MonoidElement::tropical(std::min(a.tropical_value(), b.tropical_value()));
    case MonoidKind::kProduct:
      return MonoidElement::pair(first_->combine(a.first(), b.first()), second_->combine(a.second(), b.second()));
  }
  throw TypeError("unknown monoid kind");
}

double MonoidSpec::phi(const MonoidElement& a, const MonoidElement& b) const {
  require(a);
  require(b);
  switch (kind_) {
    case MonoidKind::kBoolean:
      return (a.boolean_value() && b.boolean_value()) ? 1.0 : 0.0;
    case MonoidKind::kNatural:
      return static_cast<double>(std::min(a.natural_value(), b.natural_value()));
    case MonoidKind::kReal:
      return a.real_value() * b.real_value();
    case MonoidKind::kTropical:
      return scalar::tropical_phi(a.tropical_value(), b.tropical_value(), diameter_);
    case MonoidKind::kProduct:
      return weight1_ * first_->phi(a.first(), b.first()) + weight2_ * second_->phi(a.second(), b.second());
  }
  throw TypeError("unknown monoid kind");
}

std::vector<std::pair<const MonoidSpec*, double>> MonoidSpec::leaves() const {
  std::vector<std::pair<const MonoidSpec*, double>> out;
  if (kind_ != MonoidKind::kProduct) {
    out.emplace_back(this, 1.0);
    return out;
  }
  for (auto [leaf, w] : first_->leaves()) out.emplace_back(leaf, w * weight1_);
  for (auto [leaf, w] : second_->leaves()) out.emplace_back(leaf, w * weight2_);
  return out;
}

bool operator==(const MonoidSpec& a, const MonoidSpec& b) {
  if (a.kind_ != b.kind_) return false;
  switch (a.kind_) {
    case MonoidKind::kBoolean:
    case MonoidKind::kReal:
      return true;
    case MonoidKind::kNatural:
      return a.clip_bound_ == b.clip_bound_;
    case MonoidKind::kTropical:
      return a.diameter_ == b.diameter_;
    case MonoidKind::kProduct:
      return a.weight1_ == b.weight1_ && a.weight2_ == b.weight2_ && *a.first_ == *b.first_ &&
             *a.second_ == *b.second_;
  }
  return false;
}

}  // namespace rewa
