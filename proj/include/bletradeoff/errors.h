#ifndef BLETRADEOFF_ERRORS_H
#define BLETRADEOFF_ERRORS_H

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

namespace bletradeoff
{

/// One violated invariant: the offending field and a human-readable bound.
struct Issue
{
    std::string field;
    std::string message;
};

/// Raised when a configuration or set of model inputs violates one or more invariants.
/// Every violation found is carried, not just the first.
class ValidationError : public std::runtime_error
{
  public:
    explicit ValidationError(std::vector<Issue> issues);
    ValidationError(std::string field, std::string message);

    const std::vector<Issue>& Issues() const noexcept
    {
        return m_issues;
    }

  private:
    std::vector<Issue> m_issues;
};

/// Power iteration did not settle within the iteration cap.
class ConvergenceError : public std::runtime_error
{
  public:
    ConvergenceError(const std::string& what, std::array<double, 3> lastIterate, long iterations)
        : std::runtime_error(what),
          m_lastIterate(lastIterate),
          m_iterations(iterations)
    {
    }

    std::array<double, 3> LastIterate() const noexcept
    {
        return m_lastIterate;
    }

    long Iterations() const noexcept
    {
        return m_iterations;
    }

  private:
    std::array<double, 3> m_lastIterate;
    long m_iterations;
};

/// Two independent evaluations of the same quantity disagreed.
class ConsistencyError : public std::logic_error
{
  public:
    using std::logic_error::logic_error;
};

} // namespace bletradeoff

#endif
