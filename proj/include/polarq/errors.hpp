#pragma once

#include <stdexcept>
#include <string>

namespace polarq {

// Invalid inputs, broken preconditions, violated lemma hypotheses,
// budget overruns, unresolvable decodes. Maps to CLI exit code 4.
class ModelError : public std::runtime_error {
public:
    explicit ModelError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed text in one of the on-disk formats. Maps to CLI exit code 2.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Filesystem trouble. Maps to CLI exit code 3.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace polarq
