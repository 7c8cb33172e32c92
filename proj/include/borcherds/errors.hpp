#pragma once

#include <stdexcept>
#include <string>

namespace borcherds {

#define BORCHERDS_ERROR(Name)                  \
  class Name : public std::runtime_error {     \
   public:                                     \
    using std::runtime_error::runtime_error;   \
  };

BORCHERDS_ERROR(IntegrityError)
BORCHERDS_ERROR(BudgetExceeded)
BORCHERDS_ERROR(StabilizationFailure)
BORCHERDS_ERROR(NonCancellation)
BORCHERDS_ERROR(ParityMismatch)
BORCHERDS_ERROR(InvalidDiscriminant)
BORCHERDS_ERROR(CapInsufficient)
BORCHERDS_ERROR(IllConditioned)
BORCHERDS_ERROR(NoSample)
BORCHERDS_ERROR(UnsupportedRank)
BORCHERDS_ERROR(VerificationFailure)

#undef BORCHERDS_ERROR

}  // namespace borcherds
