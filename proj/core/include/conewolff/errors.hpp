#pragma once

#include <stdexcept>
#include <string>

namespace conewolff {

// Every failure mode of the library derives from Error and carries a stable kind
// string, so reports and the CLI can name the failure without RTTI tricks.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define CONEWOLFF_ERROR(Name)                                               \
  class Name : public Error {                                               \
   public:                                                                  \
    explicit Name(const std::string& what) : Error(#Name, what) {}          \
  }

CONEWOLFF_ERROR(DomainError);
CONEWOLFF_ERROR(DegenerateCurvature);
CONEWOLFF_ERROR(TypeExceedsNMax);
CONEWOLFF_ERROR(B3TooSmall);
CONEWOLFF_ERROR(OutsideCone);
CONEWOLFF_ERROR(NotConverged);
CONEWOLFF_ERROR(SingularJacobian);
CONEWOLFF_ERROR(NotCircular);
CONEWOLFF_ERROR(EmptyFamily);
CONEWOLFF_ERROR(QuadratureFailure);
CONEWOLFF_ERROR(GridTooLarge);
CONEWOLFF_ERROR(DegenerateExpansion);
CONEWOLFF_ERROR(DivByZeroGamma2);
CONEWOLFF_ERROR(ScheduleEmpty);
CONEWOLFF_ERROR(PlateUnresolved);
CONEWOLFF_ERROR(WraparoundRisk);
CONEWOLFF_ERROR(ConfigError);

#undef CONEWOLFF_ERROR

}  // namespace conewolff
