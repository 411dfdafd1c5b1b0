#pragma once

#include <string>

#include "homchar/rational.hpp"

namespace homchar::detail {

/// Joins "coeff*body" terms as "a - b + c"; unit coefficients are elided.
class SignedTermJoiner {
 public:
  void add(const Rational& coeff, const std::string& body) {
    if (coeff.is_zero()) return;
    bool negative = coeff.sign() < 0;
    Rational mag = coeff.abs();
    std::string term;
    if (body.empty()) {
      term = mag.to_string();
    } else if (mag.is_one()) {
      term = body;
    } else {
      term = mag.to_string() + "*" + body;
    }
    add_raw(negative, term);
  }

  void add_raw(bool negative, const std::string& term) {
    if (out_.empty()) {
      out_ = negative ? "-" + term : term;
    } else {
      out_ += negative ? " - " : " + ";
      out_ += term;
    }
  }

  bool empty() const { return out_.empty(); }
  std::string str() const { return out_.empty() ? "0" : out_; }

 private:
  std::string out_;
};

}  // namespace homchar::detail
