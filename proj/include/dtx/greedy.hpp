#pragma once

#include "counting.hpp"
#include "oracle.hpp"
#include "transform.hpp"

namespace dtx
{

/*! \brief Subset-minimal sufficient reason for x.
 *
 * Starting from x, blanks the first defined feature whose removal keeps a
 * sufficient reason, then rescans from feature 1; stops when a full scan
 * removes nothing.
 */
inline partial_instance minimal_sr( const decision_diagram& d, const partial_instance& x )
{
  require_dimension( d, x );
  require( x.is_total(), "x must be total" );
  auto y = x;
  bool reduced = true;
  while ( reduced && y.undefined_count() < y.size() )
  {
    reduced = false;
    for ( uint32_t i = 0; i < y.size(); ++i )
    {
      if ( !y.defined( i ) )
        continue;
      auto const candidate = y.without( i );
      if ( check_sufficient_reason( d, candidate, x ) )
      {
        y = candidate;
        reduced = true;
        break;
      }
    }
  }
  return y;
}

/*! \brief Exhaustive monotonicity test over all 2^n inputs. */
inline bool is_monotone_bruteforce( const decision_diagram& d, const oracle_budget& budget = {} )
{
  auto const n = d.dimension();
  if ( n > budget.max_dimension )
    throw budget_exceeded( "monotonicity check: dimension too large" );
  for ( uint64_t z = 0; z < ( uint64_t( 1 ) << n ); ++z )
  {
    if ( !evaluate_bits( d, z ) )
      continue;
    for ( uint32_t i = 0; i < n; ++i )
      if ( !( ( z >> i ) & 1 ) && !evaluate_bits( d, z | ( uint64_t( 1 ) << i ) ) )
        return false;
  }
  return true;
}

/*! \brief Subset-minimal delta-SR for a monotone model.
 *
 * Same scan as minimal_sr with the test
 * count_positive(y') >= delta * 2^(undefined in y').  A negative x is
 * explained on the complement.  On a non-monotone model the result is a
 * delta-SR but need not be minimal.
 */
inline partial_instance monotone_minimal_delta_sr( const decision_diagram& m, const partial_instance& x,
                                                   const threshold& delta )
{
  require_dimension( m, x );
  require( x.is_total(), "x must be total" );
  if ( !evaluate( m, x ) )
    return monotone_minimal_delta_sr( complement( m ), x, delta );
  auto y = x;
  bool reduced = true;
  while ( reduced && y.undefined_count() < y.size() )
  {
    reduced = false;
    for ( uint32_t i = 0; i < y.size(); ++i )
    {
      if ( !y.defined( i ) )
        continue;
      auto const candidate = y.without( i );
      if ( delta.met_by( positive_prob( m, candidate ) ) )
      {
        y = candidate;
        reduced = true;
        break;
      }
    }
  }
  return y;
}

} // namespace dtx
