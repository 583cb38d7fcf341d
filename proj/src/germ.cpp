#include "germs/germ.hpp"

namespace germs {

Germ::Germ(Rational slope, Rational offset) : a_(std::move(slope)), b_(std::move(offset)) {
  if (a_.sign() <= 0) throw InvalidHomeomorphism("germ slope must be positive");
}

Germ germ_of(const PLMap& f) {
  AffineTail tail = affine_tail(f);
  return Germ(tail.slope, tail.offset);
}

Germ germ_mul(const Germ& u, const Germ& v) {
  return Germ(u.slope() * v.slope(), u.slope() * v.offset() + u.offset());
}

Germ germ_inv(const Germ& u) {
  Rational inv = Rational(1) / u.slope();
  return Germ(inv, -u.offset() * inv);
}

bool in_positive_cone(const Germ& u) {
  if (u.slope() != 1) return u.slope() > Rational(1);
  return u.offset().sign() > 0;
}

OrderSign germ_compare(const Germ& u, const Germ& v) {
  Germ w = germ_mul(germ_inv(u), v);
  if (w.is_identity()) return OrderSign::EQ;
  return in_positive_cone(w) ? OrderSign::LT : OrderSign::GT;
}

std::string to_string(OrderSign s) {
  switch (s) {
    case OrderSign::LT: return "LT";
    case OrderSign::EQ: return "EQ";
    case OrderSign::GT: return "GT";
  }
  return "?";
}

std::string to_string(const Germ& g) { return "(" + g.slope().str() + ", " + g.offset().str() + ")"; }

}  // namespace germs
