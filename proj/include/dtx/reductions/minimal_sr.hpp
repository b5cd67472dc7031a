#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "../counting.hpp"
#include "../transform.hpp"

namespace dtx
{

enum class leaf_origin : uint8_t
{
  none,       // inner node
  natural,    // copy of a leaf of the input tree
  artificial  // added by the doubling
};

struct doubled_tree
{
  decision_diagram tree;
  std::vector<leaf_origin> origin;     // per node of tree
  std::vector<uint32_t> prime_of;      // feature i -> i', or keep when i is defined in y
  partial_instance y_star;             // y extended with undefined primes
};

/*! \brief Doubles every node on a feature i undefined in y.
 *
 * Such a node becomes (i, (i', R(lo), false), (i', true, R(hi))) where the
 * two new leaves are artificial.  Primes take features n.. in increasing
 * order of i.  Dimension 2n - |S| with S the defined features of y.
 */
inline doubled_tree doubling_transform( const decision_diagram& t, const partial_instance& y )
{
  require_dimension( t, y );
  require( t.is_tree(), "doubling needs a tree" );
  auto const n = t.dimension();
  doubled_tree out;
  out.prime_of.assign( n, diagram_builder::keep );
  uint32_t next = n;
  for ( uint32_t i = 0; i < n; ++i )
    if ( !y.defined( i ) )
      out.prime_of[i] = next++;
  auto const dim = next;

  diagram_builder b( dim );
  std::vector<leaf_origin> tag;
  auto leaf = [&]( bool label, leaf_origin o ) {
    auto const id = b.leaf( label );
    tag.resize( id + 1, leaf_origin::none );
    tag[id] = o;
    return id;
  };
  std::vector<uint32_t> map( t.size() );
  for ( auto u : t.bottom_up() )
  {
    auto const& nd = t[u];
    if ( nd.is_leaf() )
      map[u] = leaf( nd.label, leaf_origin::natural );
    else if ( y.defined( nd.feature ) )
      map[u] = b.inner( nd.feature, map[nd.lo], map[nd.hi] );
    else
    {
      auto const p = out.prime_of[nd.feature];
      auto const left = b.inner( p, map[nd.lo], leaf( false, leaf_origin::artificial ) );
      auto const right = b.inner( p, leaf( true, leaf_origin::artificial ), map[nd.hi] );
      map[u] = b.inner( nd.feature, left, right );
    }
  }
  std::vector<uint32_t> renum;
  out.tree = b.build( map[t.root()], &renum );
  out.origin.assign( out.tree.size(), leaf_origin::none );
  for ( uint32_t old = 0; old < tag.size(); ++old )
    if ( tag[old] != leaf_origin::none && renum[old] != diagram_builder::keep )
      out.origin[renum[old]] = tag[old];
  out.y_star = partial_instance( dim );
  for ( uint32_t i = 0; i < n; ++i )
    if ( y.defined( i ) )
      out.y_star.set( i, y[i] );
  return out;
}

/*! \brief Tree of "at least two of m features are 1" over features first..first+m-1, O(m^2) nodes. */
inline decision_diagram atleast2_tree( uint32_t m, uint32_t dimension, uint32_t first = 0 )
{
  require( first + m <= dimension, "atleast2_tree: features out of range" );
  diagram_builder b( dimension );
  // any(j): some of the first j features is 1
  auto any = [&]( uint32_t j ) {
    uint32_t cur = b.leaf( false );
    for ( uint32_t i = 0; i < j; ++i )
      cur = b.inner( first + i, cur, b.leaf( true ) );
    return cur;
  };
  uint32_t cur = b.leaf( false );
  for ( uint32_t j = 1; j < m; ++j )
    cur = b.inner( first + j, cur, any( j ) );
  return b.build( cur );
}

inline decision_diagram atleast2_tree( uint32_t m ) { return atleast2_tree( m, m, 0 ); }

/*! \brief Common number u of leading undefined features on every path, if Pr[T = 1 | y] > 1/2.
 *
 * Strongly balanced: along every root-to-leaf path the features undefined
 * in y come first and number exactly u.
 */
inline std::optional<uint32_t> check_strongly_balanced( const decision_diagram& t, const partial_instance& y )
{
  require_dimension( t, y );
  require( t.is_tree(), "expected a tree" );
  auto const p = positive_prob( t, y );
  if ( p.count * 2 <= pow2( p.exp ) )
    return std::nullopt;
  std::optional<uint32_t> common;
  bool ok = true;
  auto walk = [&]( auto&& self, uint32_t u, uint32_t undef, bool seen_defined ) -> void {
    if ( !ok )
      return;
    auto const& nd = t[u];
    if ( nd.is_leaf() )
    {
      if ( !common )
        common = undef;
      else if ( *common != undef )
        ok = false;
      return;
    }
    if ( y.defined( nd.feature ) )
    {
      self( self, nd.lo, undef, true );
      self( self, nd.hi, undef, true );
    }
    else if ( seen_defined )
      ok = false;
    else
    {
      self( self, nd.lo, undef + 1, false );
      self( self, nd.hi, undef + 1, false );
    }
  };
  walk( walk, t.root(), 0, false );
  if ( !ok )
    return std::nullopt;
  return common;
}

struct tstar_minimal
{
  decision_diagram tree;
  partial_instance x;       // x°
  partial_instance y_star;  // y on S, everything else undefined
  dyadic delta;             // Pr[(T' and T_1) = 1 | y_star]
  uint32_t m = 0;           // number of b features
  uint32_t u = 0;
  doubled_tree doubled;
};

/*! \brief T° = T_y0 or (T' and T_1) for a strongly balanced pair (T, y).
 *
 * Features: those of the doubled tree T', then b_1..b_m with
 * m = max(2u + 2n, 2(2n - |S|), 9).  T_1 is "at least two b_j are 1" and
 * T_y0 accepts the completions of y0 = y on S with every b_j = 0.
 * x° is y on S, 0 on i and 1 on i' for i outside S, 0 on every b_j.
 */
inline tstar_minimal assemble_tstar_minimal( const decision_diagram& t, const partial_instance& y )
{
  auto const u = check_strongly_balanced( t, y );
  require( u.has_value(), "(T, y) is not strongly balanced" );
  auto const n = t.dimension();
  tstar_minimal out;
  out.u = *u;
  out.doubled = doubling_transform( t, y );
  auto const l = out.doubled.tree.dimension();
  out.m = std::max( { 2 * out.u + 2 * n, 2 * l, 9u } );
  auto const dim = l + out.m;

  auto const t1 = atleast2_tree( out.m, dim, l );
  auto const inter = and_disjoint( widen( out.doubled.tree, dim ), t1 );

  partial_instance y0( dim );
  std::vector<uint32_t> order;
  for ( uint32_t j = 0; j < out.m; ++j )
  {
    y0.set( l + j, false );
    order.push_back( l + j );
  }
  for ( auto i : y.defined_positions() )
  {
    y0.set( i, y[i] );
    order.push_back( i );
  }
  out.tree = or_graft( cube_tree( y0, order ), inter );

  out.y_star = partial_instance( dim );
  out.x = partial_instance( dim, value::zero );
  for ( uint32_t i = 0; i < n; ++i )
  {
    if ( y.defined( i ) )
    {
      out.y_star.set( i, y[i] );
      out.x.set( i, y[i] );
    }
    else
      out.x.set( out.doubled.prime_of[i], true );
  }
  out.delta = positive_prob( inter, out.y_star );
  return out;
}

} // namespace dtx
