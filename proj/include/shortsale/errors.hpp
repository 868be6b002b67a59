#pragma once

#include <stdexcept>
#include <string>

namespace shortsale {

/// Argument outside its admissible domain (x <= 0, alpha <= 0, bad config, ...).
struct InvalidArgument : std::invalid_argument {
    explicit InvalidArgument(const std::string& what) : std::invalid_argument(what) {}
};

/// Parameter combination for which a formula degenerates (lambda + r - mu ~ 0).
struct SingularParameter : std::domain_error {
    explicit SingularParameter(const std::string& what) : std::domain_error(what) {}
};

/// Iterative routine failed to converge; indicates parameter pathology.
struct ConvergenceFailure : std::runtime_error {
    explicit ConvergenceFailure(const std::string& what) : std::runtime_error(what) {}
};

} // namespace shortsale
