#include "cprep/error.hpp"

namespace cprep {

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::MalformedLine: return "MalformedLine";
        case ErrorCode::BadLangCode: return "BadLangCode";
        case ErrorCode::BadScore: return "BadScore";
        case ErrorCode::EmptySegmentation: return "EmptySegmentation";
        case ErrorCode::EmptySentence: return "EmptySentence";
        case ErrorCode::TooLongForExact: return "TooLongForExact";
        case ErrorCode::InvalidParams: return "InvalidParams";
        case ErrorCode::BadMagic: return "BadMagic";
        case ErrorCode::TruncatedFile: return "TruncatedFile";
        case ErrorCode::ShapeMismatch: return "ShapeMismatch";
        case ErrorCode::MissingTensor: return "MissingTensor";
        case ErrorCode::KTooLarge: return "KTooLarge";
        case ErrorCode::SameLanguage: return "SameLanguage";
        case ErrorCode::AlreadyTagged: return "AlreadyTagged";
        case ErrorCode::EmptyFile: return "EmptyFile";
        case ErrorCode::IoError: return "IoError";
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::ConfigInvalid: return "ConfigInvalid";
        case ErrorCode::BadReport: return "BadReport";
        case ErrorCode::BadVocab: return "BadVocab";
        case ErrorCode::IdentifierUnavailable: return "IdentifierUnavailable";
    }
    return "Unknown";
}

}  // namespace cprep
