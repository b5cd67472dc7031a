#include <catch_amalgamated.hpp>

#include <dtx/counting.hpp>
#include <dtx/oracle.hpp>
#include <dtx/random.hpp>
#include <dtx/tree_io.hpp>

#include "support/trees.hpp"

using namespace dtx;

namespace
{

dyadic p( const decision_diagram& t, const char* y ) { return positive_prob( t, partial_instance::parse( y ) ); }

rational r( unsigned a, unsigned b ) { return rational( a, b ); }

} // namespace

TEST_CASE( "thresholds parse exactly", "[core]" )
{
  CHECK( parse_threshold( "0.95" ) == threshold( 19, 20 ) );
  CHECK( parse_threshold( "0.75" ) == threshold( 3, 4 ) );
  CHECK( parse_threshold( "3/4" ) == threshold( 3, 4 ) );
  CHECK( parse_threshold( "6/8" ) == threshold( 3, 4 ) );
  CHECK( parse_threshold( "1" ).is_one() );
  CHECK( parse_threshold( "1.0" ).is_one() );
  CHECK( parse_threshold( ".5" ) == threshold( 1, 2 ) );
  for ( auto bad : { "0", "0.0", "1.5", "2/1", "0/3", "abc", "1/0", "", "-0.5", "1/-2", "0.5x" } )
    CHECK_THROWS_AS( parse_threshold( bad ), invalid_input );
}

TEST_CASE( "dyadic comparison and printing", "[core]" )
{
  CHECK( dyadic{ 3, 2 } == dyadic{ 6, 3 } );
  CHECK( dyadic{ 3, 2 } < dyadic{ 7, 3 } );
  CHECK( dyadic{ 1, 0 } > dyadic{ 255, 8 } );
  CHECK( dyadic{ 3, 2 }.fraction() == "3/4" );
  CHECK( dyadic{ 3, 2 }.decimal() == "0.75" );
  CHECK( dyadic{ 5, 3 }.decimal() == "0.625" );
  CHECK( dyadic{ 1, 0 }.decimal() == "1" );
  CHECK( dyadic{ 0, 4 }.decimal() == "0" );
  CHECK( dyadic{ 1, 10 }.decimal() == "0.0009765625" );
  threshold const t( 5, 8 );
  CHECK( t.met_by( { 5, 3 } ) );
  CHECK( t.met_by( { 10, 4 } ) );
  CHECK_FALSE( t.met_by( { 9, 4 } ) );
  CHECK( threshold( 2, 5 ).floor_scaled( 5 ) == 12 );
  CHECK( threshold( 2, 5 ).ceil_scaled( 5 ) == 13 );
  CHECK( threshold( 1, 2 ).ceil_log2_inverse() == 1 );
  CHECK( threshold( 1, 3 ).ceil_log2_inverse() == 2 );
  CHECK( threshold( 1, 1 ).ceil_log2_inverse() == 0 );
}

TEST_CASE( "partial instances", "[core]" )
{
  auto const y = partial_instance::parse( "1*0" );
  CHECK( y.str() == "1*0" );
  CHECK( y.undefined_count() == 1 );
  CHECK( y.defined_positions() == std::vector<uint32_t>{ 0, 2 } );
  CHECK( y.subsumed_by( partial_instance::parse( "110" ) ) );
  CHECK_FALSE( y.subsumed_by( partial_instance::parse( "111" ) ) );
  CHECK( partial_instance::parse( "***" ).subsumed_by( y ) );
  CHECK( y.without( 0 ).str() == "**0" );
  CHECK_THROWS_AS( partial_instance::parse( "1x" ), invalid_input );
}

TEST_CASE( "diagram validation", "[core]" )
{
  CHECK_NOTHROW( test::chain3() );
  CHECK( test::chain3().is_tree() );
  // repeated feature on a path
  CHECK_THROWS_AS( parse_diagram( "dim 2\nnode 0 f 1 lo 1 hi 2\nnode 1 f 1 lo 2 hi 3\nleaf 2 0\nleaf 3 1\nroot 0\n" ),
                   invalid_input );
  // cycle
  CHECK_THROWS_AS( parse_diagram( "dim 2\nnode 0 f 1 lo 1 hi 2\nnode 1 f 2 lo 0 hi 2\nleaf 2 1\nroot 0\n" ),
                   invalid_input );
  // unreachable node
  CHECK_THROWS_AS( parse_diagram( "dim 1\nleaf 0 1\nleaf 1 0\nroot 0\n" ), invalid_input );
  // feature out of range, unknown reference, duplicate id, missing root
  CHECK_THROWS_AS( parse_diagram( "dim 1\nnode 0 f 2 lo 1 hi 2\nleaf 1 0\nleaf 2 1\nroot 0\n" ), invalid_input );
  CHECK_THROWS_AS( parse_diagram( "dim 1\nnode 0 f 1 lo 1 hi 9\nleaf 1 0\nroot 0\n" ), invalid_input );
  CHECK_THROWS_AS( parse_diagram( "dim 1\nleaf 0 0\nleaf 0 1\nroot 0\n" ), invalid_input );
  CHECK_THROWS_AS( parse_diagram( "dim 1\nleaf 0 0\n" ), invalid_input );
  CHECK_THROWS_AS( parse_diagram( "dim 1\nleaf 0 2\nroot 0\n" ), invalid_input );
  // sharing makes a DAG, not a tree
  auto const dag = parse_diagram( "dim 2\nnode 0 f 1 lo 1 hi 1\nnode 1 f 2 lo 2 hi 3\nleaf 2 0\nleaf 3 1\nroot 0\n" );
  CHECK_FALSE( dag.is_tree() );
}

TEST_CASE( "tree text round trip", "[core]" )
{
  auto const t = test::full3();
  auto const text = write_diagram( t );
  auto const again = parse_diagram( text );
  CHECK( write_diagram( again ) == text );
  CHECK( again.size() == t.size() );
  for ( uint64_t z = 0; z < 8; ++z )
    CHECK( evaluate_bits( again, z ) == evaluate_bits( t, z ) );
  // comments and blank lines are ignored
  CHECK_NOTHROW( parse_diagram( "# c\n\ndim 1  # d\nleaf 7 1\nroot 7\n" ) );
}

TEST_CASE( "probabilities on the two small trees", "[core]" )
{
  auto const t1 = test::chain3();
  CHECK( p( t1, "***" ).value() == r( 3, 8 ) );
  CHECK( p( t1, "1**" ).value() == r( 3, 4 ) );
  CHECK( p( t1, "*1*" ).value() == r( 1, 4 ) );
  CHECK( p( t1, "**1" ).value() == r( 1, 2 ) );
  CHECK( p( t1, "11*" ).value() == r( 1, 2 ) );
  CHECK( p( t1, "1*1" ).value() == r( 1, 1 ) );
  CHECK( p( t1, "*11" ).value() == r( 1, 2 ) );
  CHECK( p( t1, "111" ).value() == r( 1, 1 ) );

  auto const t2 = test::full3();
  CHECK( p( t2, "***" ).value() == r( 5, 8 ) );
  for ( auto y : { "1**", "*1*", "**1", "11*", "1*1", "*11" } )
    CHECK( p( t2, y ).value() == r( 1, 2 ) );
  CHECK( p( t2, "111" ).value() == r( 1, 1 ) );

  // the exponent counts undefined features
  CHECK( p( t1, "1**" ).exp == 2 );
  CHECK( p( t1, "1**" ).count == 3 );
  CHECK( p( t1, "110" ).exp == 0 );
}

TEST_CASE( "counting matches enumeration on random trees and shared diagrams", "[core]" )
{
  rng r( 11 );
  for ( int it = 0; it < 300; ++it )
  {
    auto const n = r.between( 1, 9 );
    auto const d = it % 2 ? random_tree( n, r.between( 1, 40 ), r ) : random_free_bdd( n, r.between( 1, 30 ), r );
    auto const y = random_blanking( random_total( n, r ), r.between( 0, 4 ), 4, r );
    CAPTURE( write_diagram( d ), y.str() );
    CHECK( positive_prob( d, y ) == brute_prob( d, y ) );
    auto const c1 = class_prob( d, y, true ), c0 = class_prob( d, y, false );
    CHECK( c1.count + c0.count == pow2( c1.exp ) );
  }
}

TEST_CASE( "sufficient reasons", "[core]" )
{
  auto const t = test::chain3();
  auto const x = partial_instance::parse( "111" );
  CHECK( check_sufficient_reason( t, partial_instance::parse( "1*1" ), x ) );
  CHECK( check_sufficient_reason( t, x, x ) );
  CHECK_FALSE( check_sufficient_reason( t, partial_instance::parse( "11*" ), x ) );
  CHECK_THROWS_AS( check_sufficient_reason( t, partial_instance::parse( "0**" ), x ), invalid_input );
  CHECK_THROWS_AS( check_sufficient_reason( t, partial_instance::parse( "1*" ), x ), invalid_input );

  // agrees with probability 1 on random inputs
  rng g( 5 );
  for ( int it = 0; it < 200; ++it )
  {
    auto const n = g.between( 1, 8 );
    auto const d = random_tree( n, g.between( 1, 30 ), g );
    auto const xx = random_total( n, g );
    auto const y = random_blanking( xx, 1, 2, g );
    bool const sr = check_sufficient_reason( d, y, xx );
    auto const pr = class_prob( d, y, evaluate( d, xx ) );
    CHECK( sr == ( pr.count == pow2( pr.exp ) ) );
  }
}

TEST_CASE( "dimension mismatches are rejected", "[core]" )
{
  auto const t = test::chain3();
  CHECK_THROWS_AS( positive_prob( t, partial_instance::parse( "11" ) ), invalid_input );
  CHECK_THROWS_AS( evaluate( t, partial_instance::parse( "1*1" ) ), invalid_input );
}
