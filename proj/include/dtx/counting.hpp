#pragma once

#include <vector>

#include "diagram.hpp"
#include "numeric.hpp"
#include "partial_instance.hpp"

namespace dtx
{

inline void require_dimension( const decision_diagram& d, const partial_instance& y )
{
  require( y.size() == d.dimension(), "instance has dimension " + std::to_string( y.size() ) + ", diagram has " +
                                          std::to_string( d.dimension() ) );
}

// leaf reached by a total instance
inline uint32_t reached_leaf( const decision_diagram& d, const partial_instance& x )
{
  require_dimension( d, x );
  auto u = d.root();
  while ( !d[u].is_leaf() )
  {
    auto const f = static_cast<uint32_t>( d[u].feature );
    require( x.defined( f ), "evaluation needs a total instance" );
    u = d[u].child( x.bit( f ) );
  }
  return u;
}

inline bool evaluate( const decision_diagram& d, const partial_instance& x ) { return d[reached_leaf( d, x )].label; }

// evaluation on the bit pattern of a mask, bit i is feature i
inline bool evaluate_bits( const decision_diagram& d, uint64_t bits )
{
  auto u = d.root();
  while ( !d[u].is_leaf() )
    u = d[u].child( ( bits >> d[u].feature ) & 1 );
  return d[u].label;
}

/*! \brief Number of completions of y on which d outputs 1. */
inline natural count_positive_completions( const decision_diagram& d, const partial_instance& y )
{
  require_dimension( d, y );
  auto const free = y.undefined_count();
  // c[u] = Pr[d_u = 1] * 2^free, integral because paths never repeat a feature
  std::vector<natural> c( d.size() );
  for ( auto u : d.bottom_up() )
  {
    auto const& nd = d[u];
    if ( nd.is_leaf() )
      c[u] = nd.label ? pow2( free ) : natural( 0 );
    else if ( y.defined( nd.feature ) )
      c[u] = c[nd.child( y.bit( nd.feature ) )];
    else
      c[u] = ( c[nd.lo] + c[nd.hi] ) >> 1;
  }
  return c[d.root()];
}

inline dyadic positive_prob( const decision_diagram& d, const partial_instance& y )
{
  return { count_positive_completions( d, y ), y.undefined_count() };
}

// Pr[d(z) = cls | z completes y]
inline dyadic class_prob( const decision_diagram& d, const partial_instance& y, bool cls )
{
  auto p = positive_prob( d, y );
  if ( !cls )
    p.count = pow2( p.exp ) - p.count;
  return p;
}

// leaves reachable by some completion of y
inline std::vector<bool> reachable_under( const decision_diagram& d, const partial_instance& y )
{
  std::vector<bool> seen( d.size(), false );
  std::vector<uint32_t> stack{ d.root() };
  seen[d.root()] = true;
  while ( !stack.empty() )
  {
    auto const u = stack.back();
    stack.pop_back();
    auto const& nd = d[u];
    if ( nd.is_leaf() )
      continue;
    auto visit = [&]( uint32_t c ) {
      if ( !seen[c] )
      {
        seen[c] = true;
        stack.push_back( c );
      }
    };
    if ( y.defined( nd.feature ) )
      visit( nd.child( y.bit( nd.feature ) ) );
    else
    {
      visit( nd.lo );
      visit( nd.hi );
    }
  }
  return seen;
}

/*! \brief True iff every completion of y gets the class of x (y must be subsumed by x). */
inline bool check_sufficient_reason( const decision_diagram& d, const partial_instance& y, const partial_instance& x )
{
  require_dimension( d, y );
  require_dimension( d, x );
  require( x.is_total(), "x must be total" );
  require( y.subsumed_by( x ), "y must be subsumed by x" );
  bool const cls = evaluate( d, x );
  auto const seen = reachable_under( d, y );
  for ( uint32_t u = 0; u < d.size(); ++u )
    if ( seen[u] && d[u].is_leaf() && d[u].label != cls )
      return false;
  return true;
}

// y is a delta-sufficient reason for x
inline bool is_delta_sr( const decision_diagram& d, const partial_instance& y, const partial_instance& x,
                         const threshold& delta )
{
  require( y.subsumed_by( x ), "y must be subsumed by x" );
  return delta.met_by( class_prob( d, y, evaluate( d, x ) ) );
}

} // namespace dtx
