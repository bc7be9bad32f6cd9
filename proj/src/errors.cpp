#include "mwb/errors.hpp"

namespace mwb {

namespace {

std::string summarize(const std::vector<ValidationIssue>& issues) {
    std::string message;
    for (const auto& issue : issues) {
        if (issue.severity != Severity::Error) {
            continue;
        }
        message += message.empty() ? "" : "; ";
        message += std::string(to_string(issue.code)) + ": " + issue.message;
    }
    return message.empty() ? "integrity violation" : message;
}

std::vector<std::string> subjects_of(const std::vector<ValidationIssue>& issues) {
    std::vector<std::string> out;
    for (const auto& issue : issues) {
        if (issue.severity != Severity::Error) {
            continue;
        }
        for (const auto& id : issue.subjects) {
            out.push_back(id.str());
        }
    }
    return out;
}

}  // namespace

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::IntegrityError: return "IntegrityError";
        case ErrorCode::UnknownFragment: return "UnknownFragment";
        case ErrorCode::UnknownPhase: return "UnknownPhase";
        case ErrorCode::EmptySelection: return "EmptySelection";
        case ErrorCode::UnknownTarget: return "UnknownTarget";
        case ErrorCode::KindMismatch: return "KindMismatch";
        case ErrorCode::DuplicateId: return "DuplicateId";
        case ErrorCode::NotFound: return "NotFound";
        case ErrorCode::StorageError: return "StorageError";
        case ErrorCode::VersionMismatch: return "VersionMismatch";
    }
    return "Error";
}

Error::Error(ErrorCode code, const std::string& message, std::vector<std::string> subjects)
    : std::runtime_error(message), code_(code), subjects_(std::move(subjects)) {}

IntegrityError::IntegrityError(std::vector<ValidationIssue> issues)
    : Error(ErrorCode::IntegrityError, summarize(issues), subjects_of(issues)),
      issues_(std::move(issues)) {}

}  // namespace mwb
