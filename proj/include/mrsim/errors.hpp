#pragma once
//---------------------------------------------------------------------------
#include <stdexcept>
#include <string>
//---------------------------------------------------------------------------
namespace mrsim {
//---------------------------------------------------------------------------
/// Broad failure classes. The CLI maps each one to its own exit code.
enum class ErrorCategory { Validation, Parse, Provisioning, Protocol, Run, Io };
//---------------------------------------------------------------------------
class Error : public std::runtime_error {
   public:
   Error(ErrorCategory category, const std::string& what) : std::runtime_error(what), category_(category) {}
   ErrorCategory category() const { return category_; }

   private:
   ErrorCategory category_;
};
//---------------------------------------------------------------------------
/// Bad argument or violated precondition
class ValidationError : public Error {
   public:
   explicit ValidationError(const std::string& what) : Error(ErrorCategory::Validation, what) {}
};
//---------------------------------------------------------------------------
/// Message sent to an unknown entity
class RegistrationError : public Error {
   public:
   explicit RegistrationError(const std::string& what) : Error(ErrorCategory::Protocol, what) {}
};
//---------------------------------------------------------------------------
/// Entity interaction that breaks the lifecycle or message contract
class ProtocolError : public Error {
   public:
   explicit ProtocolError(const std::string& what) : Error(ErrorCategory::Protocol, what) {}
};
//---------------------------------------------------------------------------
class SchedulingError : public Error {
   public:
   explicit SchedulingError(const std::string& what) : Error(ErrorCategory::Run, what) {}
};
//---------------------------------------------------------------------------
class MetricError : public Error {
   public:
   explicit MetricError(const std::string& what) : Error(ErrorCategory::Run, what) {}
};
//---------------------------------------------------------------------------
class IoError : public Error {
   public:
   explicit IoError(const std::string& what) : Error(ErrorCategory::Io, what) {}
};
//---------------------------------------------------------------------------
}
//---------------------------------------------------------------------------
