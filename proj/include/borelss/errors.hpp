#pragma once

#include <stdexcept>
#include <string>

namespace borelss {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

#define BORELSS_ERROR(Name)                \
  struct Name : Error {                    \
    using Error::Error;                    \
  }

BORELSS_ERROR(ImNotInKer);
BORELSS_ERROR(ParseError);
BORELSS_ERROR(InvalidPresentation);
BORELSS_ERROR(CapTooLow);
BORELSS_ERROR(NotFiniteDimensional);
BORELSS_ERROR(NotADerivation);
BORELSS_ERROR(DSquareNonzero);
BORELSS_ERROR(WindowExhausted);
BORELSS_ERROR(UnknownCase);
BORELSS_ERROR(SkeletonInapplicable);
BORELSS_ERROR(ConstraintViolation);
BORELSS_ERROR(ConfigError);

#undef BORELSS_ERROR

}  // namespace borelss
