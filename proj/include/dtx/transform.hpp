#pragma once

#include <algorithm>
#include <vector>

#include "counting.hpp"
#include "diagram.hpp"
#include "partial_instance.hpp"

namespace dtx
{

/*! \brief Replaces every node on a feature defined in y by its child along y. */
inline decision_diagram restrict_all( const decision_diagram& d, const partial_instance& y )
{
  require_dimension( d, y );
  diagram_builder b( d.dimension() );
  std::vector<uint32_t> map( d.size() );
  for ( auto u : d.bottom_up() )
  {
    auto const& nd = d[u];
    if ( nd.is_leaf() )
      map[u] = b.leaf( nd.label );
    else if ( y.defined( nd.feature ) )
      map[u] = map[nd.child( y.bit( nd.feature ) )];
    else
      map[u] = b.inner( nd.feature, map[nd.lo], map[nd.hi] );
  }
  return b.build( map[d.root()] );
}

inline decision_diagram restrict( const decision_diagram& d, uint32_t feature, bool v )
{
  require( feature < d.dimension(), "feature out of range" );
  partial_instance y( d.dimension() );
  y.set( feature, v );
  return restrict_all( d, y );
}

inline decision_diagram complement( const decision_diagram& d )
{
  auto nodes = d.nodes();
  for ( auto& nd : nodes )
    if ( nd.is_leaf() )
      nd.label = !nd.label;
  return decision_diagram( d.dimension(), std::move( nodes ), d.root() );
}

// same diagram over a larger feature space
inline decision_diagram widen( const decision_diagram& d, uint32_t dimension )
{
  require( dimension >= d.dimension(), "cannot shrink dimension" );
  return decision_diagram( dimension, d.nodes(), d.root() );
}

// copy of the sub-diagram rooted at u
inline decision_diagram subdiagram( const decision_diagram& d, uint32_t u )
{
  diagram_builder b( d.dimension() );
  std::vector<uint32_t> map( d.size(), diagram_builder::keep );
  for ( auto v : d.bottom_up() )
  {
    auto const& nd = d[v];
    map[v] = nd.is_leaf() ? b.leaf( nd.label ) : b.inner( nd.feature, map[nd.lo], map[nd.hi] );
  }
  return b.build( map[u] );
}

inline bool features_disjoint( const decision_diagram& a, const decision_diagram& b )
{
  auto const fa = a.used_features(), fb = b.used_features();
  for ( auto f = fa.find_first(); f != feature_set::npos; f = fa.find_next( f ) )
    if ( f < fb.size() && fb.test( f ) )
      return false;
  return true;
}

/*! \brief Conjunction over disjoint features: a copy of d2 replaces each true leaf of d1. */
inline decision_diagram and_disjoint( const decision_diagram& d1, const decision_diagram& d2 )
{
  require( features_disjoint( d1, d2 ), "and_disjoint needs feature-disjoint operands" );
  diagram_builder b( std::max( d1.dimension(), d2.dimension() ) );
  auto const root = b.import( d1, 0, [&]( uint32_t, bool label ) {
    return label ? b.import( d2 ) : diagram_builder::keep;
  } );
  return b.build( root );
}

/*! \brief Disjunction; d1 must be a tree.
 *
 * Each false leaf of d1 is replaced by d2 restricted to the assignment of
 * that leaf's path, which keeps the result free when features are shared.
 */
inline decision_diagram or_graft( const decision_diagram& d1, const decision_diagram& d2 )
{
  require( d1.is_tree(), "or_graft needs a tree as first operand" );
  auto const dim = std::max( d1.dimension(), d2.dimension() );
  auto const wide2 = widen( d2, dim );
  diagram_builder b( dim );
  partial_instance path( dim );

  auto rec = [&]( auto&& self, uint32_t u ) -> uint32_t {
    auto const& nd = d1[u];
    if ( nd.is_leaf() )
      return nd.label ? b.leaf( true ) : b.import( restrict_all( wide2, path ) );
    path.set( nd.feature, false );
    auto const lo = self( self, nd.lo );
    path.set( nd.feature, true );
    auto const hi = self( self, nd.hi );
    path.set( nd.feature, value::undef );
    return b.inner( nd.feature, lo, hi );
  };
  return b.build( rec( rec, d1.root() ) );
}

// accepts exactly the completions of y
inline decision_diagram cube_tree( const partial_instance& y, const std::vector<uint32_t>& order = {} )
{
  auto const feats = order.empty() ? y.defined_positions() : order;
  diagram_builder b( y.size() );
  uint32_t cur = b.leaf( true );
  for ( auto it = feats.rbegin(); it != feats.rend(); ++it )
  {
    require( y.defined( *it ), "cube order lists an undefined feature" );
    auto const off = b.leaf( false );
    cur = y.bit( *it ) ? b.inner( *it, off, cur ) : b.inner( *it, cur, off );
  }
  return b.build( cur );
}

/*! \brief Feature sets of a tree: below each node and outside its subtree. */
struct tree_features
{
  std::vector<feature_set> down;
  std::vector<feature_set> up;
  std::vector<uint32_t> parent;
};

inline tree_features compute_tree_features( const decision_diagram& t )
{
  require( t.is_tree(), "expected a tree" );
  tree_features tf;
  tf.down = t.features_below();
  tf.up.assign( t.size(), feature_set( t.dimension() ) );
  tf.parent.assign( t.size(), diagram_builder::keep );
  auto const& order = t.bottom_up();
  for ( auto it = order.rbegin(); it != order.rend(); ++it )
  {
    auto const& nd = t[*it];
    if ( nd.is_leaf() )
      continue;
    tf.parent[nd.lo] = tf.parent[nd.hi] = *it;
    auto base = tf.up[*it];
    base.set( nd.feature );
    tf.up[nd.lo] = base | tf.down[nd.hi];
    tf.up[nd.hi] = base | tf.down[nd.lo];
  }
  return tf;
}

/*! \brief Largest number of features shared between a subtree and the rest of the tree. */
inline uint32_t split_number( const decision_diagram& t )
{
  auto const tf = compute_tree_features( t );
  size_t best = 0;
  for ( uint32_t u = 0; u < t.size(); ++u )
    best = std::max( best, ( tf.down[u] & tf.up[u] ).count() );
  return static_cast<uint32_t>( best );
}

} // namespace dtx
