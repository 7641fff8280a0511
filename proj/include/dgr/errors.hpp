#pragma once

#include <stdexcept>
#include <string>

namespace dgr {

/// Base of every error the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define DGR_DEFINE_ERROR(Name)           \
  class Name : public Error {            \
   public:                               \
    using Error::Error;                  \
  }

DGR_DEFINE_ERROR(FormatError);
DGR_DEFINE_ERROR(IoError);
DGR_DEFINE_ERROR(InvalidArgument);
DGR_DEFINE_ERROR(EmptyPatternError);
DGR_DEFINE_ERROR(WrongPhaseError);
DGR_DEFINE_ERROR(DimensionMismatchError);
DGR_DEFINE_ERROR(SingleClassError);
DGR_DEFINE_ERROR(EmptyResultError);
DGR_DEFINE_ERROR(DegenerateSplitError);
DGR_DEFINE_ERROR(EmptyTestSetError);
DGR_DEFINE_ERROR(VersionMismatchError);
DGR_DEFINE_ERROR(ChecksumError);
DGR_DEFINE_ERROR(UnsupportedLetterError);
DGR_DEFINE_ERROR(OutOfBoundsError);

#undef DGR_DEFINE_ERROR

}  // namespace dgr
