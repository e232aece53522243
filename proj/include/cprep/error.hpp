#pragma once

#include <stdexcept>
#include <string>

namespace cprep {

enum class ErrorCode {
    MalformedLine,
    BadLangCode,
    BadScore,
    EmptySegmentation,
    EmptySentence,
    TooLongForExact,
    InvalidParams,
    BadMagic,
    TruncatedFile,
    ShapeMismatch,
    MissingTensor,
    KTooLarge,
    SameLanguage,
    AlreadyTagged,
    EmptyFile,
    IoError,
    LengthMismatch,
    ConfigInvalid,
    BadReport,
    BadVocab,
    IdentifierUnavailable,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

    ErrorCode code() const { return code_; }

  private:
    ErrorCode code_;
};

}  // namespace cprep
