#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mwb/metamodel.hpp"

namespace mwb {

enum class ErrorCode {
    ParseError,
    IntegrityError,
    UnknownFragment,
    UnknownPhase,
    EmptySelection,
    UnknownTarget,
    KindMismatch,
    DuplicateId,
    NotFound,
    StorageError,
    VersionMismatch,
};

std::string_view to_string(ErrorCode code);

/// Base error for every failure the workbench raises. `subjects` carries
/// the offending ids so callers can report them without parsing messages.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message, std::vector<std::string> subjects = {});

    ErrorCode code() const noexcept { return code_; }
    const std::vector<std::string>& subjects() const noexcept { return subjects_; }

private:
    ErrorCode code_;
    std::vector<std::string> subjects_;
};

/// Raised when a document or method violates referential or kind
/// constraints. Carries every issue found, not only the first.
class IntegrityError : public Error {
public:
    explicit IntegrityError(std::vector<ValidationIssue> issues);

    const std::vector<ValidationIssue>& issues() const noexcept { return issues_; }

private:
    std::vector<ValidationIssue> issues_;
};

}  // namespace mwb
