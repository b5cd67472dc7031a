#pragma once

#include <stdexcept>
#include <string>

namespace dtx
{

// malformed input, violated precondition or failed validation
class invalid_input : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

// the call would exceed a configured size or time budget
class budget_exceeded : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

// a solver gave no usable verdict
class solver_unknown : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

inline void require( bool cond, const std::string& msg )
{
  if ( !cond )
    throw invalid_input( msg );
}

} // namespace dtx
