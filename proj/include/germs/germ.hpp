#pragma once

#include <string>

#include "germs/plmap.hpp"
#include "germs/rational.hpp"

namespace germs {

// Germ at +inf of a finite-breakpoint PL homeomorphism, held as its affine
// tail x -> a*x + b. Two PL maps agree on some ray [n, +inf) exactly when
// their tails coincide, so equality here is equality in the germ group.
class Germ {
 public:
  Germ() = default;  // identity
  Germ(Rational slope, Rational offset);

  static Germ identity() { return Germ(); }

  const Rational& slope() const { return a_; }
  const Rational& offset() const { return b_; }
  bool is_identity() const { return a_ == 1 && b_.is_zero(); }

  Rational operator()(const Rational& x) const { return a_ * x + b_; }

  friend bool operator==(const Germ&, const Germ&) = default;

 private:
  Rational a_{1};
  Rational b_{0};
};

enum class OrderSign { LT, EQ, GT };

Germ germ_of(const PLMap& f);
Germ germ_mul(const Germ& u, const Germ& v);
Germ germ_inv(const Germ& u);

// The germ eventually lies strictly above the diagonal.
bool in_positive_cone(const Germ& u);

// u < v iff u^-1 v is in the positive cone. Total and left-invariant.
OrderSign germ_compare(const Germ& u, const Germ& v);

std::string to_string(OrderSign s);
std::string to_string(const Germ& g);

}  // namespace germs
