#pragma once

#include <stdexcept>
#include <string>

namespace freqsr {

// Base of every error the library raises. CLI maps these to exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define FREQSR_DEFINE_ERROR(Name)                 \
  class Name : public Error {                     \
   public:                                        \
    explicit Name(const std::string& what)        \
        : Error(std::string(#Name ": ") + what) {} \
  };

// JPEG codec
FREQSR_DEFINE_ERROR(UnsupportedMarker)
FREQSR_DEFINE_ERROR(MalformedBitstream)
FREQSR_DEFINE_ERROR(UnsupportedSubsampling)

// Frequency-domain and spatial ops
FREQSR_DEFINE_ERROR(CropTooLarge)
FREQSR_DEFINE_ERROR(DimensionMismatch)
FREQSR_DEFINE_ERROR(MissingChroma)
FREQSR_DEFINE_ERROR(TooSmall)

// Network
FREQSR_DEFINE_ERROR(ShapeMismatch)
FREQSR_DEFINE_ERROR(EmptyDataset)

// Containers and arguments
FREQSR_DEFINE_ERROR(FormatError)
FREQSR_DEFINE_ERROR(InvalidArgument)

#undef FREQSR_DEFINE_ERROR

}  // namespace freqsr
