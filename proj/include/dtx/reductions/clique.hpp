#pragma once

#include <vector>

#include "weighted_cnf.hpp"

namespace dtx
{

struct mec_instance
{
  weighted_cnf phi;
  partial_instance sigma;
  uint32_t k = 0;                     // odd clique size after preprocessing
  std::vector<uint32_t> vertex_of;    // variable index -> vertex of the (padded) input graph
  bool trivial_no = false;            // preprocessing removed every vertex
};

/*! \brief Weighted 2-CNF whose all-ones assignment has a strictly better proper subset iff g has a k-clique.
 *
 * Even k gets a universal vertex and k + 1.  Vertices of degree below
 * k - 1 are removed until none remain.  Per kept vertex x: (not x) with
 * multiplicity (k-1)/2 + deg(x) - (k-1), and (x or not y) for each
 * neighbour y.  Per non-adjacent pair: (x or y) with multiplicity 4e.
 */
inline mec_instance clique_to_mec( const graph& g0, uint32_t k )
{
  require( k >= 3, "clique size must be at least 3" );
  graph g = g0;
  if ( k % 2 == 0 )
  {
    graph h( g.n + 1 );
    for ( uint32_t u = 0; u < g.n; ++u )
    {
      h.add_edge( u, g.n );
      for ( uint32_t v = u + 1; v < g.n; ++v )
        if ( g.adj[u][v] )
          h.add_edge( u, v );
    }
    g = std::move( h );
    ++k;
  }
  require( k % 2 == 1, "k must be odd after preprocessing" );

  std::vector<bool> alive( g.n, true );
  for ( bool changed = true; changed; )
  {
    changed = false;
    for ( uint32_t v = 0; v < g.n; ++v )
    {
      if ( !alive[v] )
        continue;
      uint32_t d = 0;
      for ( uint32_t w = 0; w < g.n; ++w )
        d += alive[w] && g.adj[v][w];
      if ( d < k - 1 )
      {
        alive[v] = false;
        changed = true;
      }
    }
  }

  mec_instance out;
  out.k = k;
  for ( uint32_t v = 0; v < g.n; ++v )
    if ( alive[v] )
      out.vertex_of.push_back( v );
  auto const n = static_cast<uint32_t>( out.vertex_of.size() );
  out.phi.num_vars = n;
  out.sigma = partial_instance( n, value::one );
  if ( n == 0 )
  {
    out.trivial_no = true;
    return out;
  }

  auto adj = [&]( uint32_t a, uint32_t b ) { return static_cast<bool>( g.adj[out.vertex_of[a]][out.vertex_of[b]] ); };
  uint64_t e = 0;
  std::vector<uint64_t> deg( n, 0 );
  for ( uint32_t a = 0; a < n; ++a )
    for ( uint32_t b = 0; b < n; ++b )
      if ( adj( a, b ) )
        ++deg[a];
  for ( auto d : deg )
    e += d;
  e /= 2;

  for ( uint32_t a = 0; a < n; ++a )
  {
    int const x = static_cast<int>( a + 1 );
    out.phi.clauses.push_back( { { -x }, ( k - 1 ) / 2 + deg[a] - ( k - 1 ) } );
    for ( uint32_t b = 0; b < n; ++b )
      if ( adj( a, b ) )
        out.phi.clauses.push_back( { { x, -static_cast<int>( b + 1 ) }, 1 } );
  }
  for ( uint32_t a = 0; a < n; ++a )
    for ( uint32_t b = a + 1; b < n; ++b )
      if ( !adj( a, b ) )
        out.phi.clauses.push_back( { { static_cast<int>( a + 1 ), static_cast<int>( b + 1 ) }, 4 * e } );
  return out;
}

// brute-force clique test for small graphs
inline bool has_clique( const graph& g, uint32_t k )
{
  require( g.n < 32, "has_clique: graph too large" );
  if ( k == 0 )
    return true;
  for ( uint32_t m = 0; m < ( 1u << g.n ); ++m )
  {
    if ( static_cast<uint32_t>( __builtin_popcount( m ) ) != k )
      continue;
    bool ok = true;
    for ( uint32_t u = 0; u < g.n && ok; ++u )
      for ( uint32_t v = u + 1; v < g.n && ok; ++v )
        if ( ( m >> u & 1 ) && ( m >> v & 1 ) && !g.adj[u][v] )
          ok = false;
    if ( ok )
      return true;
  }
  return false;
}

} // namespace dtx
