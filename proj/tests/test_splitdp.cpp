#include <catch_amalgamated.hpp>

#include <dtx/oracle.hpp>
#include <dtx/random.hpp>
#include <dtx/splitdp.hpp>
#include <dtx/tree_io.hpp>

#include "support/trees.hpp"

using namespace dtx;

namespace
{

partial_instance pi( const char* s ) { return partial_instance::parse( s ); }

// random tree with split number at most c
decision_diagram bounded_split_tree( uint32_t n, uint32_t c, rng& r )
{
  while ( true )
  {
    auto t = random_tree( n, r.between( 1, 40 ), r );
    if ( split_number( t ) <= c )
      return t;
  }
}

// max Pr[T_u = 1] over y restricted to J plus at most b features of New(u)
rational brute_cell( const decision_diagram& t, const partial_instance& y, uint32_t u, const std::vector<uint32_t>& j,
                     const std::vector<uint32_t>& fresh, uint32_t b )
{
  auto const sub = subdiagram( t, u );
  rational best = -1;
  for ( uint64_t m = 0; m < ( uint64_t( 1 ) << fresh.size() ); ++m )
  {
    if ( static_cast<uint32_t>( __builtin_popcountll( m ) ) > b )
      continue;
    partial_instance z( y.size() );
    for ( auto f : j )
      z.set( f, y[f] );
    for ( size_t i = 0; i < fresh.size(); ++i )
      if ( m >> i & 1 )
        z.set( fresh[i], y[fresh[i]] );
    best = std::max( best, positive_prob( sub, z ).value() );
  }
  return best;
}

} // namespace

TEST_CASE( "feature sets", "[splitdp]" )
{
  auto const t = test::chain3();
  split_dp dp( t, pi( "111" ), 3 );
  for ( uint32_t u = 0; u < t.size(); ++u )
  {
    CHECK( dp.int_features( u ).empty() );
    CHECK( dp.sync_features( u ).empty() );
    if ( t[u].is_leaf() )
      CHECK( dp.new_features( u ).empty() );
  }
  CHECK( dp.new_features( t.root() ) == std::vector<uint32_t>{ 0, 1, 2 } );

  rng r( 51 );
  for ( int it = 0; it < 200; ++it )
  {
    auto const n = r.between( 1, 10 );
    auto const tt = random_tree( n, r.between( 1, 40 ), r );
    auto const y = random_blanking( random_total( n, r ), 1, 4, r );
    split_dp d( tt, y, n );
    for ( uint32_t u = 0; u < tt.size(); ++u )
    {
      CHECK( d.int_features( u ).size() <= split_number( tt ) );
      CHECK( d.sync_features( u ).size() <= split_number( tt ) );
      if ( tt[u].is_leaf() )
      {
        CHECK( d.new_features( u ).empty() );
        CHECK( d.int_features( u ).empty() );
        continue;
      }
      // New(u) = New(lo) + New(hi) + Sync(u) + the label when it is new
      std::vector<uint32_t> parts = d.new_features( tt[u].lo );
      for ( auto f : d.new_features( tt[u].hi ) )
        parts.push_back( f );
      for ( auto f : d.sync_features( u ) )
        parts.push_back( f );
      auto const& fresh = d.new_features( u );
      auto const label = static_cast<uint32_t>( tt[u].feature );
      if ( std::find( fresh.begin(), fresh.end(), label ) != fresh.end() )
        parts.push_back( label );
      std::sort( parts.begin(), parts.end() );
      CHECK( std::adjacent_find( parts.begin(), parts.end() ) == parts.end() );
      CHECK( parts == fresh );
    }
  }
}

TEST_CASE( "decision answers on the chain tree", "[splitdp]" )
{
  auto const t = test::chain3();
  auto const y = pi( "111" );
  auto const a = dp_check_minimum( t, y, threshold( 3, 4 ), 1 );
  REQUIRE( a.yes );
  CHECK( a.witness->str() == "1**" );
  CHECK( a.best.value() == rational( 3, 4 ) );
  CHECK_FALSE( dp_check_minimum( t, y, threshold( 1, 1 ), 1 ).yes );
  auto const full = dp_check_minimum( t, y, threshold( 1, 1 ), 3 );
  REQUIRE( full.yes );
  CHECK( full.witness->defined_count() <= 3 );
  CHECK( positive_prob( t, *full.witness ).value() == 1 );

  CHECK( dp_minimum_sr( t, y, threshold( 3, 4 ) ).defined_count() == 1 );
  CHECK( dp_minimum_sr( t, y, threshold( 1, 1 ) ).str() == "1*1" );
  CHECK( dp_minimum_sr( test::full3(), y, threshold( 5, 8 ) ).str() == "***" );
  CHECK( dp_minimum_sr( test::full3(), y, threshold( 3, 4 ) ).str() == "111" );
}

TEST_CASE( "split bound is enforced", "[splitdp]" )
{
  splitdp_options o;
  o.max_split = 1;
  CHECK_THROWS_AS( dp_check_minimum( test::full3(), pi( "111" ), threshold( 1, 2 ), 1, o ), budget_exceeded );
  CHECK_NOTHROW( dp_check_minimum( test::chain3(), pi( "111" ), threshold( 1, 2 ), 1, o ) );
}

TEST_CASE( "table cells equal brute-force maxima", "[splitdp]" )
{
  rng r( 52 );
  int checked = 0;
  for ( int it = 0; it < 120; ++it )
  {
    auto const n = r.between( 1, 9 );
    auto const t = bounded_split_tree( n, 3, r );
    auto const y = random_blanking( random_total( n, r ), 1, 4, r );
    auto const k = r.between( 0, n );
    split_dp dp( t, y, k );
    auto const u = r.below( t.size() );
    auto const& inter = dp.int_features( u );
    auto const& fresh = dp.new_features( u );
    for ( uint64_t jm = 0; jm < ( uint64_t( 1 ) << inter.size() ); ++jm )
    {
      std::vector<uint32_t> j;
      for ( size_t i = 0; i < inter.size(); ++i )
        if ( jm >> i & 1 )
          j.push_back( inter[i] );
      for ( uint32_t s = 0; s <= dp.budget(); ++s )
      {
        auto const c = dp.cell( u, s, j );
        if ( j.size() > s )
        {
          CHECK_FALSE( c.has_value() );
          continue;
        }
        REQUIRE( c.has_value() );
        CAPTURE( write_diagram( t ), y.str(), u, s, jm );
        CHECK( c->value() == brute_cell( t, y, u, j, fresh, s - static_cast<uint32_t>( j.size() ) ) );
        ++checked;
      }
    }
  }
  CHECK( checked >= 100 );
}

TEST_CASE( "dp agrees with the oracle", "[splitdp]" )
{
  rng r( 53 );
  std::vector<threshold> const deltas{ { 1, 4 }, { 1, 2 }, { 5, 8 }, { 3, 4 }, { 1, 1 } };
  for ( int it = 0; it < 150; ++it )
  {
    auto const n = r.between( 1, 12 );
    auto const t = bounded_split_tree( n, 2, r );
    auto const x = random_total( n, r );
    for ( auto const& delta : deltas )
    {
      auto const y = dp_minimum_sr( t, x, delta );
      auto const o = oracle_minimum_sr( t, x, delta );
      CAPTURE( write_diagram( t ), x.str(), delta.str(), y.str(), o.str() );
      CHECK( y.subsumed_by( x ) );
      CHECK( is_delta_sr( t, y, x, delta ) );
      CHECK( y.defined_count() == o.defined_count() );
    }
    // best(b) is non-decreasing and witnesses attain it
    split_dp dp( t, x, n );
    for ( uint32_t b = 0; b <= n; ++b )
    {
      auto const w = dp.witness( b );
      CHECK( w.defined_count() <= b );
      CHECK( positive_prob( t, w ) == dp.best( b ) );
      if ( b > 0 )
        CHECK( dp.best( b ) >= dp.best( b - 1 ) );
    }
  }
}
