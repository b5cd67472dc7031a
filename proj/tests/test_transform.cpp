#include <catch_amalgamated.hpp>

#include <dtx/counting.hpp>
#include <dtx/random.hpp>
#include <dtx/transform.hpp>
#include <dtx/tree_io.hpp>

#include "support/trees.hpp"

using namespace dtx;

namespace
{

decision_diagram single( uint32_t n, uint32_t f )
{
  diagram_builder b( n );
  return b.build( b.inner( f, b.leaf( false ), b.leaf( true ) ) );
}

// random tree over features [first, first + width) of an n-dimensional space
decision_diagram random_tree_on( uint32_t n, uint32_t first, uint32_t width, rng& r )
{
  auto const t = random_tree( width, r.between( 1, 12 ), r );
  diagram_builder b( n );
  return b.build( b.import( t, first ) );
}

} // namespace

TEST_CASE( "restrict", "[transform]" )
{
  auto const t = test::chain3();
  auto const r0 = restrict( t, 0, false );
  CHECK( r0.size() == 1 );
  CHECK( r0[r0.root()].label == false );
  auto const once = restrict( t, 1, true );
  CHECK( write_diagram( restrict( once, 1, true ) ) == write_diagram( once ) );
  diagram_builder b( 3 );
  auto const leaf = b.build( b.leaf( true ) );
  CHECK( write_diagram( restrict( leaf, 2, false ) ) == write_diagram( leaf ) );

  rng g( 2 );
  for ( int it = 0; it < 200; ++it )
  {
    auto const n = g.between( 1, 8 );
    auto const d = it % 2 ? random_tree( n, g.between( 1, 30 ), g ) : random_free_bdd( n, g.between( 1, 20 ), g );
    auto const f = g.below( n );
    bool const v = g.coin();
    auto const rd = restrict( d, f, v );
    CHECK( !rd.used_features().test( f ) );
    for ( uint64_t z = 0; z < ( uint64_t( 1 ) << n ); ++z )
    {
      auto const forced = v ? z | ( uint64_t( 1 ) << f ) : z & ~( uint64_t( 1 ) << f );
      CHECK( evaluate_bits( rd, z ) == evaluate_bits( d, forced ) );
    }
  }
}

TEST_CASE( "complement", "[transform]" )
{
  auto const t = test::full3();
  CHECK( write_diagram( complement( complement( t ) ) ) == write_diagram( t ) );
  diagram_builder b( 2 );
  auto const one = b.build( b.leaf( true ) );
  CHECK( complement( one )[0].label == false );

  rng g( 3 );
  for ( int it = 0; it < 200; ++it )
  {
    auto const n = g.between( 1, 9 );
    auto const d = random_free_bdd( n, g.between( 1, 20 ), g );
    auto const y = random_blanking( random_total( n, g ), 1, 2, g );
    CHECK( positive_prob( complement( d ), y ).value() == 1 - positive_prob( d, y ).value() );
  }
}

TEST_CASE( "and_disjoint and or_graft", "[transform]" )
{
  auto const a = single( 2, 0 ), c = single( 2, 1 );
  auto const both = and_disjoint( a, c );
  for ( uint64_t z = 0; z < 4; ++z )
    CHECK( evaluate_bits( both, z ) == ( z == 3 ) );
  CHECK_THROWS_AS( and_disjoint( a, a ), invalid_input );

  auto const either = or_graft( a, c );
  for ( uint64_t z = 0; z < 4; ++z )
    CHECK( evaluate_bits( either, z ) == ( z != 0 ) );

  rng g( 4 );
  for ( int it = 0; it < 1000; ++it )
  {
    auto const n = g.between( 2, 10 );
    auto const cut = g.between( 1, n - 1 );
    auto const t1 = random_tree_on( n, 0, cut, g );
    auto const t2 = random_tree_on( n, cut, n - cut, g );
    auto const conj = and_disjoint( t1, t2 );
    CHECK( conj.is_tree() );
    for ( int s = 0; s < 16; ++s )
    {
      auto const z = g.below( uint32_t( 1 ) << n );
      CHECK( evaluate_bits( conj, z ) == ( evaluate_bits( t1, z ) && evaluate_bits( t2, z ) ) );
    }
  }

  // or_graft with shared features stays free and computes the disjunction
  for ( int it = 0; it < 300; ++it )
  {
    auto const n = g.between( 1, 8 );
    auto const t1 = random_tree( n, g.between( 1, 20 ), g );
    auto const t2 = random_tree( n, g.between( 1, 20 ), g );
    auto const disj = or_graft( t1, t2 );
    CHECK( disj.is_tree() );
    for ( uint64_t z = 0; z < ( uint64_t( 1 ) << n ); ++z )
      CHECK( evaluate_bits( disj, z ) == ( evaluate_bits( t1, z ) || evaluate_bits( t2, z ) ) );
  }
}

TEST_CASE( "cube trees", "[transform]" )
{
  auto const y = partial_instance::parse( "1*0*" );
  auto const t = cube_tree( y );
  for ( uint64_t z = 0; z < 16; ++z )
    CHECK( evaluate_bits( t, z ) == ( ( z & 1 ) == 1 && ( z & 4 ) == 0 ) );
  CHECK( cube_tree( partial_instance::parse( "**" ) ).size() == 1 );
}

TEST_CASE( "split numbers", "[transform]" )
{
  CHECK( split_number( test::chain3() ) == 0 );
  CHECK( split_number( test::full3() ) == 2 );
  diagram_builder b( 3 );
  CHECK( split_number( b.build( b.leaf( true ) ) ) == 0 );

  // brute force over node subtrees on random trees
  rng g( 6 );
  for ( int it = 0; it < 200; ++it )
  {
    auto const n = g.between( 1, 10 );
    auto const t = random_tree( n, g.between( 1, 40 ), g );
    uint32_t expect = 0;
    for ( uint32_t u = 0; u < t.size(); ++u )
    {
      std::vector<bool> inside( t.size(), false );
      std::vector<uint32_t> stack{ u };
      while ( !stack.empty() )
      {
        auto const v = stack.back();
        stack.pop_back();
        inside[v] = true;
        if ( !t[v].is_leaf() )
        {
          stack.push_back( t[v].lo );
          stack.push_back( t[v].hi );
        }
      }
      std::vector<bool> in( n ), out( n );
      for ( uint32_t v = 0; v < t.size(); ++v )
        if ( !t[v].is_leaf() )
          ( inside[v] ? in : out )[t[v].feature] = true;
      uint32_t c = 0;
      for ( uint32_t f = 0; f < n; ++f )
        c += in[f] && out[f];
      expect = std::max( expect, c );
    }
    CHECK( split_number( t ) == expect );
  }
}
