#pragma once

#include <string>

#include <Eigen/Core>
#include <boost/multiprecision/cpp_int.hpp>

namespace kavg {

// Arbitrary-precision rational. Expression templates are disabled so the
// type behaves like a plain value inside Eigen containers.
using Rational = boost::multiprecision::number<boost::multiprecision::cpp_rational_backend,
                                               boost::multiprecision::et_off>;
using BigInt = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>,
                                             boost::multiprecision::et_off>;

/// Formats as "p/q" in lowest terms; integers keep the "/1".
inline std::string to_fraction_string(const Rational& r) {
  return boost::multiprecision::numerator(r).str() + "/" +
         boost::multiprecision::denominator(r).str();
}

inline double to_double(double x) { return x; }
inline double to_double(const Rational& x) { return x.convert_to<double>(); }

}  // namespace kavg

namespace Eigen {

template <>
struct NumTraits<kavg::Rational> : GenericNumTraits<kavg::Rational> {
  using Real = kavg::Rational;
  using NonInteger = kavg::Rational;
  using Nested = kavg::Rational;
  using Literal = kavg::Rational;

  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 10,
    AddCost = 100,
    MulCost = 100
  };

  static inline Real epsilon() { return Real(0); }
  static inline Real dummy_precision() { return Real(0); }
  static inline int digits10() { return 0; }
};

}  // namespace Eigen
