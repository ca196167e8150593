#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace immunet {

/// A referenced node id does not exist.
class LookupError : public std::out_of_range
{
public:
    using std::out_of_range::out_of_range;
};

/// Operation invoked on a node in the wrong lifecycle state.
class StateError : public std::logic_error
{
public:
    using std::logic_error::logic_error;
};

/// No detector is available to head a response (recognition failed).
class NoDetectorError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Scenario text could not be parsed. The message carries line/column.
class ParseError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Scenario parsed but violates one or more invariants.
class ValidationError : public std::runtime_error
{
public:
    explicit ValidationError( std::vector<std::string> violations );

    const std::vector<std::string>&
    violations() const noexcept
    {
        return m_violations;
    }

private:
    std::vector<std::string> m_violations;
};

}  // namespace immunet
