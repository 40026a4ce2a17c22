#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace iirsim {

/// Base of every error raised by the library. The message always starts
/// with the error's name, e.g. "DisconnectedTopology: ...", so callers that
/// only see text can still tell errors apart.
class Error : public std::runtime_error {
public:
  Error(std::string_view name, const std::string& detail)
      : std::runtime_error(std::string(name) + ": " + detail), name_(name) {}

  const std::string& name() const noexcept { return name_; }

private:
  std::string name_;
};

#define IIRSIM_DEFINE_ERROR(Type)                                              \
  class Type : public Error {                                                  \
  public:                                                                      \
    explicit Type(const std::string& detail) : Error(#Type, detail) {}         \
  }

IIRSIM_DEFINE_ERROR(DisconnectedTopology);
IIRSIM_DEFINE_ERROR(NoRoute);
IIRSIM_DEFINE_ERROR(StaleReading);
IIRSIM_DEFINE_ERROR(EmptySnapshot);
IIRSIM_DEFINE_ERROR(EmptyTrainingSet);
IIRSIM_DEFINE_ERROR(UntrainedModel);
IIRSIM_DEFINE_ERROR(InvalidScenario);
IIRSIM_DEFINE_ERROR(UnknownKey);
IIRSIM_DEFINE_ERROR(MalformedLine);
IIRSIM_DEFINE_ERROR(InvalidValue);
IIRSIM_DEFINE_ERROR(IoError);

#undef IIRSIM_DEFINE_ERROR

}  // namespace iirsim
