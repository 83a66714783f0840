#pragma once

#include "rosd/errors.hpp"

namespace rosd {

constexpr double kMaxRawScore = 5.0;

/// Raw review score on the 0..5 star scale. Fractional values are legal
/// (real-world exports use 0.5 steps; generated scores are continuous).
class Score {
  public:
    explicit Score(double v) : value_(v) {
        if (!(v >= 0.0 && v <= kMaxRawScore))
            throw IntegrityError("score out of range [0,5]: " + std::to_string(v));
    }
    double value() const { return value_; }

  private:
    double value_;
};

/// Dimensionless score in [0,1] (trust, honesty, reliability, normalized raw
/// scores all live here).
class UnitScore {
  public:
    explicit UnitScore(double v) : value_(v) {
        if (!(v >= 0.0 && v <= 1.0))
            throw IntegrityError("unit score out of range [0,1]: " + std::to_string(v));
    }
    double value() const { return value_; }

  private:
    double value_;
};

/// Maps the raw 0..5 scale onto [0,1]. Monotone, endpoints 0 -> 0 and 5 -> 1.
inline UnitScore normalize_score(Score s) {
    return UnitScore(s.value() / kMaxRawScore);
}

}  // namespace rosd
