#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sgn
{

enum class ErrorKind
{
    contract,          // length mismatch, bad argument
    mode,              // operation undefined for the grid mode
    positivity,        // nonpositive depth
    threshold,         // energy at or above the a-priori threshold
    solver,            // linear solve residual too large
    boundary,          // far-field contamination in line mode
    depth_collapse,    // positivity lost even after step halving
    config,            // contradictory or malformed configuration
    range,             // request outside recorded data
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error
{
  public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind)
    {
    }

    ErrorKind kind() const noexcept { return kind_; }

  private:
    ErrorKind kind_;
};

inline std::string_view to_string(ErrorKind kind)
{
    switch (kind)
    {
    case ErrorKind::contract: return "contract violation";
    case ErrorKind::mode: return "mode error";
    case ErrorKind::positivity: return "positivity error";
    case ErrorKind::threshold: return "threshold exceeded";
    case ErrorKind::solver: return "solver failure";
    case ErrorKind::boundary: return "boundary contamination";
    case ErrorKind::depth_collapse: return "depth collapse";
    case ErrorKind::config: return "config error";
    case ErrorKind::range: return "range error";
    }
    return "error";
}

} // namespace sgn
