#pragma once

#include <stdexcept>
#include <string>

namespace cms {

// Input fails structural validation (bad spec file, inconsistent pieces, out-of-range argument).
class validation_error : public std::invalid_argument {
public:
    explicit validation_error(const std::string& what) : std::invalid_argument(what) {}
};

// API called outside its contract (e.g. infinite parameter where a finite one is required).
class misuse_error : public std::logic_error {
public:
    explicit misuse_error(const std::string& what) : std::logic_error(what) {}
};

// Iteration failed to reach its tolerance within budget.
class convergence_error : public std::runtime_error {
public:
    explicit convergence_error(const std::string& what) : std::runtime_error(what) {}
};

// Recurrence generation detected loss of orthogonality / nonpositive beta.
class ill_conditioned_error : public std::runtime_error {
public:
    ill_conditioned_error(const std::string& what, int degree)
        : std::runtime_error(what), degree(degree) {}
    int degree;
};

// Two independent evaluation paths of the same quantity disagree beyond tolerance.
class consistency_error : public std::runtime_error {
public:
    explicit consistency_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace cms
