#pragma once

#include <stdexcept>

namespace genmm {

/// Extended real value: finite, +inf, or -inf. Sentinels are explicit so
/// that infinities never enter floating-point arithmetic.
class ExtendedScalar {
 public:
  static ExtendedScalar finite(double v) { return ExtendedScalar(Kind::Finite, v); }
  static ExtendedScalar pos_inf() { return ExtendedScalar(Kind::PosInf, 0.0); }
  static ExtendedScalar neg_inf() { return ExtendedScalar(Kind::NegInf, 0.0); }

  bool is_finite() const { return kind_ == Kind::Finite; }
  bool is_pos_inf() const { return kind_ == Kind::PosInf; }
  bool is_neg_inf() const { return kind_ == Kind::NegInf; }

  /// Finite value; throws if this is a sentinel.
  double value() const {
    if (kind_ != Kind::Finite) throw std::logic_error("ExtendedScalar: not finite");
    return value_;
  }

  /// value() if finite, fallback otherwise.
  double value_or(double fallback) const { return kind_ == Kind::Finite ? value_ : fallback; }

 private:
  enum class Kind { Finite, PosInf, NegInf };
  ExtendedScalar(Kind k, double v) : kind_(k), value_(v) {}
  Kind kind_;
  double value_;
};

struct InvalidStateError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace genmm
