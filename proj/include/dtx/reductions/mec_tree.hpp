#pragma once

#include <algorithm>
#include <set>

#include "../diagram.hpp"
#include "weighted_cnf.hpp"

namespace dtx
{

struct mec_tree
{
  decision_diagram tree;
  partial_instance y;     // sigma on the formula variables, selectors undefined
  weighted_cnf padded;    // phi plus the tautology padding
  uint64_t slots = 0;     // mass rounded up to a power of two
};

/*! \brief Tree for one clause over variables 0..n-1; tautologies become a true leaf. */
inline uint32_t clause_subtree( diagram_builder& b, const std::vector<int>& lits )
{
  std::vector<int> uniq;
  std::set<int> seen;
  for ( auto l : lits )
  {
    if ( seen.count( -l ) )
      return b.leaf( true );
    if ( seen.insert( l ).second )
      uniq.push_back( l );
  }
  uint32_t cur = b.leaf( false );
  for ( auto it = uniq.rbegin(); it != uniq.rend(); ++it )
  {
    auto const v = static_cast<uint32_t>( std::abs( *it ) - 1 );
    auto const hit = b.leaf( true );
    cur = *it > 0 ? b.inner( v, cur, hit ) : b.inner( v, hit, cur );
  }
  return cur;
}

/*! \brief Tree whose positive probability under y_mu is E(phi, mu) / slots.
 *
 * A perfect selector tree over fresh features n..n+slots-2 has one leaf per
 * unit of clause mass; each leaf holds the tree of its clause.  Mass is
 * padded to a power of two with a tautology.
 */
inline mec_tree mec_to_checksubsr( const weighted_cnf& phi, const partial_instance& sigma, uint64_t max_mass = 4096 )
{
  require( phi.num_vars >= 1, "formula needs at least one variable" );
  require( sigma.size() == phi.num_vars, "sigma dimension mismatch" );
  auto const m = phi.mass();
  require( m >= 1, "formula has no clauses" );
  if ( m > max_mass )
    throw budget_exceeded( "clause mass " + std::to_string( m ) + " exceeds " + std::to_string( max_mass ) );
  uint64_t slots = 1;
  while ( slots < m )
    slots *= 2;

  mec_tree out;
  out.slots = slots;
  out.padded = phi;
  if ( slots > m )
    out.padded.clauses.push_back( { { 1, -1 }, slots - m } );

  auto const n = phi.num_vars;
  auto const dim = n + static_cast<uint32_t>( slots ) - 1;
  diagram_builder b( dim );

  std::vector<uint32_t> level;
  for ( auto const& c : out.padded.clauses )
    for ( uint64_t r = 0; r < c.mult; ++r )
      level.push_back( clause_subtree( b, c.lits ) );
  // heap numbering: internal node t in 1..slots-1 tests feature n + t - 1
  for ( uint64_t width = slots / 2; width >= 1; width /= 2 )
  {
    std::vector<uint32_t> up;
    for ( uint64_t j = 0; j < width; ++j )
      up.push_back( b.inner( n + static_cast<uint32_t>( width + j ) - 1, level[2 * j], level[2 * j + 1] ) );
    level = std::move( up );
  }
  out.tree = b.build( level[0] );
  out.y = partial_instance( dim );
  for ( uint32_t i = 0; i < n; ++i )
    out.y.set( i, sigma[i] );
  return out;
}

} // namespace dtx
