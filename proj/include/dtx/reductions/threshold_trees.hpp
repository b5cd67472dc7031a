#pragma once

#include "../counting.hpp"
#include "../transform.hpp"

namespace dtx
{

struct tc_tree
{
  decision_diagram tree;
  natural c;         // floor(delta * 2^n)
  partial_instance x_dagger;
};

/*! \brief Chain tree accepting a c / 2^n fraction of inputs, c = floor(delta 2^n).
 *
 * Node i (feature i, root n-1) has its 0-edge to node i-1 and its 1-edge to
 * a leaf labelled by bit i of c; node 0's 0-edge goes to false.
 * x_dagger[i] = 1 - bit i of c.
 */
inline tc_tree gen_tc( uint32_t n, const threshold& delta )
{
  require( n >= 1, "T_c needs n >= 1" );
  require( !delta.is_one(), "T_c needs delta < 1" );
  tc_tree out;
  out.c = delta.floor_scaled( n );
  out.x_dagger = partial_instance( n );
  diagram_builder b( n );
  uint32_t cur = b.leaf( false );
  for ( uint32_t i = 0; i < n; ++i )
  {
    bool const alpha = boost::multiprecision::bit_test( out.c, i );
    cur = b.inner( i, cur, b.leaf( alpha ) );
    out.x_dagger.set( i, !alpha );
  }
  out.tree = b.build( cur );
  return out;
}

struct fdelta_tree
{
  decision_diagram tree; // features 0..n-1 from T, n..n+d-1 from T_delta
  uint32_t d = 0;        // dimension of T_delta
  dyadic delta_prime;    // Pr[T_delta = 1]
  partial_instance x_dagger;
};

/*! \brief T_delta of dimension 2n+3+ceil(log 1/delta) with each true leaf replaced by a copy of T. */
inline fdelta_tree gen_fdelta( const decision_diagram& t, const threshold& delta )
{
  auto const n = t.dimension();
  fdelta_tree out;
  out.d = 2 * n + 3 + delta.ceil_log2_inverse();
  auto const tc = gen_tc( out.d, delta );
  out.delta_prime = { tc.c, out.d };
  out.x_dagger = tc.x_dagger;
  diagram_builder b( n + out.d );
  auto const shifted = b.build( b.import( tc.tree, n ) );
  out.tree = and_disjoint( shifted, widen( t, n + out.d ) );
  return out;
}

struct tstar_tree
{
  decision_diagram tree;
  partial_instance x_star;
  uint32_t chain = 0;    // number of r-nodes
  fdelta_tree fdelta;
};

/*! \brief Chain r_1..r_l whose 0-edges lead down to a true leaf and whose 1-edges lead to copies of F_delta.
 *
 * l = n + k + 1 + ceil(log 1/delta'), delta' = Pr[T_delta = 1].  Features:
 * T first, then T_delta, then r_1..r_l.  x_star is x on T, x_dagger on
 * T_delta and 0 on the chain.
 */
inline tstar_tree gen_tstar( const decision_diagram& t, const partial_instance& x, uint32_t k, const threshold& delta )
{
  require_dimension( t, x );
  require( x.is_total(), "x must be total" );
  tstar_tree out;
  out.fdelta = gen_fdelta( t, delta );
  auto const n = t.dimension();
  auto const d = out.fdelta.d;
  out.chain = n + k + 1 + threshold::from( out.fdelta.delta_prime ).ceil_log2_inverse();
  auto const dim = n + d + out.chain;
  diagram_builder b( dim );
  uint32_t cur = b.leaf( true );
  for ( uint32_t i = out.chain; i-- > 0; )
    cur = b.inner( n + d + i, cur, b.import( out.fdelta.tree ) );
  out.tree = b.build( cur );
  out.x_star = partial_instance( dim, value::zero );
  for ( uint32_t i = 0; i < n; ++i )
    out.x_star.set( i, x[i] );
  for ( uint32_t i = 0; i < d; ++i )
    out.x_star.set( n + i, out.fdelta.x_dagger[i] );
  return out;
}

} // namespace dtx
