#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace riskyish {

// Error classes map 1:1 onto CLI exit codes and HTTP status codes.
enum class ErrorKind {
    usage,              // exit 1
    validation,         // exit 2, HTTP 400
    io,                 // exit 3, HTTP 500
    insufficient_data,  // exit 4, HTTP 409
    not_found,          // exit 2, HTTP 404
};

const char* to_string(ErrorKind kind);

struct ValidationIssue {
    std::string path;     // e.g. "dimensions[3].anchors"
    std::string message;  // e.g. "anchor count 4 != 5"

    bool operator==(const ValidationIssue&) const = default;
};

using ValidationReport = std::vector<ValidationIssue>;

std::string format_report(const ValidationReport& report);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message, std::string detail = {})
        : std::runtime_error(message), kind_(kind), detail_(std::move(detail)) {}

    Error(ErrorKind kind, const std::string& message, ValidationReport report)
        : std::runtime_error(message), kind_(kind), detail_(format_report(report)),
          report_(std::move(report)) {}

    ErrorKind kind() const noexcept { return kind_; }
    const std::string& detail() const noexcept { return detail_; }
    const ValidationReport& report() const noexcept { return report_; }

private:
    ErrorKind kind_;
    std::string detail_;
    ValidationReport report_;
};

} // namespace riskyish
