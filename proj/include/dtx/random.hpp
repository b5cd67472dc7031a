#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "diagram.hpp"
#include "partial_instance.hpp"

namespace dtx
{

/*! \brief Seeded generator; modulo reduction keeps streams identical across standard libraries. */
class rng
{
public:
  explicit rng( uint64_t seed ) : gen_( seed ) {}

  uint64_t bits() { return gen_(); }
  uint32_t below( uint32_t n ) { return static_cast<uint32_t>( gen_() % n ); }
  uint32_t between( uint32_t lo, uint32_t hi ) { return lo + below( hi - lo + 1 ); }
  bool coin() { return gen_() & 1; }
  bool chance( uint32_t num, uint32_t den ) { return below( den ) < num; }

  template<class T>
  void shuffle( std::vector<T>& v )
  {
    for ( size_t i = v.size(); i > 1; --i )
      std::swap( v[i - 1], v[below( static_cast<uint32_t>( i ) )] );
  }

private:
  std::mt19937_64 gen_;
};

/*! \brief Random tree over n features with exactly min(leaves, reachable) leaves. */
inline decision_diagram random_tree( uint32_t n, uint32_t leaves, rng& r )
{
  diagram_builder b( n );
  std::vector<bool> used( n, false );
  auto grow = [&]( auto&& self, uint32_t budget, uint32_t depth ) -> uint32_t {
    if ( budget <= 1 || depth == n )
      return b.leaf( r.coin() );
    std::vector<uint32_t> avail;
    for ( uint32_t i = 0; i < n; ++i )
      if ( !used[i] )
        avail.push_back( i );
    auto const f = avail[r.below( static_cast<uint32_t>( avail.size() ) )];
    auto const left = r.between( 1, budget - 1 );
    used[f] = true;
    auto const lo = self( self, left, depth + 1 );
    auto const hi = self( self, budget - left, depth + 1 );
    used[f] = false;
    return b.inner( f, lo, hi );
  };
  return b.build( grow( grow, std::max<uint32_t>( leaves, 1 ), 0 ) );
}

/*! \brief Random free diagram with sharing: each node picks children that avoid its feature. */
inline decision_diagram random_free_bdd( uint32_t n, uint32_t inner_nodes, rng& r )
{
  diagram_builder b( n );
  std::vector<uint32_t> pool{ b.leaf( false ), b.leaf( true ) };
  std::vector<std::vector<bool>> below{ std::vector<bool>( n, false ), std::vector<bool>( n, false ) };
  for ( uint32_t k = 0; k < inner_nodes; ++k )
  {
    auto const f = r.below( n );
    std::vector<uint32_t> ok;
    for ( uint32_t i = 0; i < pool.size(); ++i )
      if ( !below[i][f] )
        ok.push_back( i );
    auto const a = ok[r.below( static_cast<uint32_t>( ok.size() ) )];
    auto c = ok[r.below( static_cast<uint32_t>( ok.size() ) )];
    if ( c == a && ok.size() > 1 )
      c = ok[( std::find( ok.begin(), ok.end(), a ) - ok.begin() + 1 ) % ok.size()];
    std::vector<bool> fs( n );
    for ( uint32_t i = 0; i < n; ++i )
      fs[i] = below[a][i] || below[c][i];
    fs[f] = true;
    pool.push_back( b.inner( f, pool[a], pool[c] ) );
    below.push_back( std::move( fs ) );
  }
  return b.build( pool.back() );
}

/*! \brief Tree for a truth table (bit z of tt is the value on z), splitting on random relevant features. */
inline decision_diagram tree_from_truth_table( uint32_t n, const std::vector<bool>& tt, rng& r )
{
  require( tt.size() == ( size_t( 1 ) << n ), "truth table size mismatch" );
  diagram_builder b( n );
  // cube: fixed mask and values; enumerate its members lazily
  auto rec = [&]( auto&& self, uint64_t mask, uint64_t vals ) -> uint32_t {
    std::vector<uint32_t> free;
    for ( uint32_t i = 0; i < n; ++i )
      if ( !( ( mask >> i ) & 1 ) )
        free.push_back( i );
    auto const members = uint64_t( 1 ) << free.size();
    bool const first = tt[vals];
    std::vector<bool> relevant( n, false );
    bool constant = true;
    for ( uint64_t m = 0; m < members; ++m )
    {
      uint64_t z = vals;
      for ( size_t j = 0; j < free.size(); ++j )
        if ( ( m >> j ) & 1 )
          z |= uint64_t( 1 ) << free[j];
      if ( tt[z] != first )
        constant = false;
      for ( auto i : free )
        if ( !( ( z >> i ) & 1 ) && tt[z] != tt[z | ( uint64_t( 1 ) << i )] )
          relevant[i] = true;
    }
    if ( constant )
      return b.leaf( first );
    std::vector<uint32_t> cand;
    for ( auto i : free )
      if ( relevant[i] )
        cand.push_back( i );
    auto const f = cand[r.below( static_cast<uint32_t>( cand.size() ) )];
    auto const bit = uint64_t( 1 ) << f;
    auto const lo = self( self, mask | bit, vals );
    auto const hi = self( self, mask | bit, vals | bit );
    return b.inner( f, lo, hi );
  };
  return b.build( rec( rec, 0, 0 ) );
}

/*! \brief Tree of a random monotone DNF over n <= 16 features. */
inline decision_diagram random_monotone_tree( uint32_t n, rng& r )
{
  auto const terms = r.between( 1, 4 );
  std::vector<uint64_t> dnf;
  for ( uint32_t t = 0; t < terms; ++t )
  {
    uint64_t m = 0;
    auto const width = r.between( 1, std::min<uint32_t>( n, 4 ) );
    for ( uint32_t k = 0; k < width; ++k )
      m |= uint64_t( 1 ) << r.below( n );
    dnf.push_back( m );
  }
  std::vector<bool> tt( size_t( 1 ) << n );
  for ( uint64_t z = 0; z < tt.size(); ++z )
    for ( auto m : dnf )
      if ( ( z & m ) == m )
        tt[z] = true;
  return tree_from_truth_table( n, tt, r );
}

inline partial_instance random_total( uint32_t n, rng& r )
{
  partial_instance x( n );
  for ( uint32_t i = 0; i < n; ++i )
    x.set( i, r.coin() );
  return x;
}

// blanks each position of x with probability num/den
inline partial_instance random_blanking( const partial_instance& x, uint32_t num, uint32_t den, rng& r )
{
  auto y = x;
  for ( uint32_t i = 0; i < x.size(); ++i )
    if ( r.chance( num, den ) )
      y.set( i, value::undef );
  return y;
}

} // namespace dtx
