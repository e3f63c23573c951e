#pragma once

#include <stdexcept>
#include <string>

namespace adscurv {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define ADSCURV_ERROR(Name)                                   \
  class Name : public Error {                                 \
   public:                                                    \
    explicit Name(const std::string& what) : Error(what) {}   \
  };

ADSCURV_ERROR(DegenerateTriangle)
ADSCURV_ERROR(ChartMiss)
ADSCURV_ERROR(NotTangent)
ADSCURV_ERROR(CoincidentPoints)
ADSCURV_ERROR(OutOfRange)
ADSCURV_ERROR(NonSpacelikeSegment)
ADSCURV_ERROR(DisconnectedMesh)
ADSCURV_ERROR(NotUniformlyBounded)
ADSCURV_ERROR(NotHyperbolic)
ADSCURV_ERROR(BallTooLarge)
ADSCURV_ERROR(BallInsufficient)
ADSCURV_ERROR(EpsilonTooLarge)
ADSCURV_ERROR(ApexOutsideCylinder)
ADSCURV_ERROR(RhoTooLarge)
ADSCURV_ERROR(DegenerateMetric)
ADSCURV_ERROR(BadLambda)
ADSCURV_ERROR(InputError)

#undef ADSCURV_ERROR

// Carries the index of the first triangle that fails its inequalities.
class BadTriangle : public Error {
 public:
  BadTriangle(int index, const std::string& what)
      : Error(what), index_(index) {}
  int index() const { return index_; }

 private:
  int index_;
};

}  // namespace adscurv
