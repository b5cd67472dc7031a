#include <catch_amalgamated.hpp>

#include <dtx/oracle.hpp>
#include <dtx/random.hpp>
#include <dtx/satdriver.hpp>
#include <dtx/tree_io.hpp>

#include "support/trees.hpp"

using namespace dtx;

namespace
{

partial_instance pi( const char* s ) { return partial_instance::parse( s ); }

sat_driver_options builtin()
{
  sat_driver_options o;
  o.solver.command.reset();
  return o;
}

// all assignments of the given variables that extend to a model
std::set<uint64_t> projections( const cnf_formula& f, const std::vector<int>& vars )
{
  std::set<uint64_t> out;
  for ( uint64_t m = 0; m < ( uint64_t( 1 ) << vars.size() ); ++m )
  {
    auto g = f;
    for ( size_t i = 0; i < vars.size(); ++i )
      g.clauses.push_back( { m >> i & 1 ? vars[i] : -vars[i] } );
    if ( dpll_solver( g ).solve().status == sat_status::sat )
      out.insert( m );
  }
  return out;
}

} // namespace

TEST_CASE( "sequential counter", "[satenc]" )
{
  for ( uint32_t n = 1; n <= 6; ++n )
    for ( uint32_t k = 0; k <= n; ++k )
    {
      cnf_builder b;
      std::vector<int> v;
      for ( uint32_t i = 0; i < n; ++i )
        v.push_back( static_cast<int>( b.new_var() ) );
      atmost_k_sequential( b, v, k );
      auto const f = b.take();
      auto const got = projections( f, v );
      for ( uint64_t m = 0; m < ( uint64_t( 1 ) << n ); ++m )
        CHECK( got.count( m ) == ( static_cast<uint32_t>( __builtin_popcountll( m ) ) <= k ) );
      if ( k == 0 )
        CHECK( f.clauses.size() == n );
      if ( k == n )
        CHECK( f.clauses.empty() );
    }
  cnf_builder b;
  std::vector<int> v{ int( b.new_var() ), int( b.new_var() ), int( b.new_var() ) };
  atmost_k_sequential( b, v, 1 );
  CHECK( projections( b.take(), v ).size() == 4 );
}

TEST_CASE( "circuit gadgets", "[satenc]" )
{
  // sum of three 2-bit numbers compared with every threshold
  for ( unsigned theta = 0; theta <= 10; ++theta )
  {
    cnf_builder b;
    circuit c( b );
    std::vector<std::vector<int>> terms;
    std::vector<int> inputs;
    for ( int t = 0; t < 3; ++t )
    {
      std::vector<int> bits{ int( b.new_var() ), int( b.new_var() ) };
      inputs.insert( inputs.end(), bits.begin(), bits.end() );
      terms.push_back( bits );
    }
    c.assert_true( c.at_least( c.sum( terms ), theta ) );
    auto const f = b.take();
    auto const got = projections( f, inputs );
    for ( uint64_t m = 0; m < 64; ++m )
    {
      auto const total = ( m & 3 ) + ( m >> 2 & 3 ) + ( m >> 4 & 3 );
      CHECK( got.count( m ) == ( total >= theta ) );
    }
  }
}

TEST_CASE( "deterministic encoding", "[satenc]" )
{
  auto const t = test::chain3();
  auto const x = pi( "111" );
  auto const o = builtin();
  auto const y = sat_check( t, x, threshold( 1, 1 ), 2, o );
  REQUIRE( y );
  CHECK( y->defined_count() <= 2 );
  CHECK( check_sufficient_reason( t, *y, x ) );
  CHECK_FALSE( sat_check( t, x, threshold( 1, 1 ), 1, o ) );
  CHECK( sat_check( t, x, threshold( 1, 1 ), 3, o ) );
  CHECK( encode_sr( t, x, 2, threshold( 1, 1 ) ).probabilistic == false );
  CHECK_THROWS_AS( encode_deterministic( t, pi( "1*1" ), 1 ), invalid_input );
}

TEST_CASE( "probabilistic encoding", "[satenc]" )
{
  auto const o = builtin();
  auto const x = pi( "111" );
  auto const y = sat_check( test::chain3(), x, threshold( 3, 4 ), 1, o );
  REQUIRE( y );
  CHECK( y->str() == "1**" );
  auto const e = sat_check( test::full3(), x, threshold( 5, 8 ), 0, o );
  REQUIRE( e );
  CHECK( e->str() == "***" );
  CHECK_FALSE( sat_check( test::full3(), x, threshold( 3, 4 ), 2, o ) );
  CHECK( encode_sr( test::chain3(), x, 1, threshold( 3, 4 ) ).probabilistic );
}

TEST_CASE( "encodings agree with the oracle", "[satenc]" )
{
  rng r( 61 );
  auto const o = builtin();
  std::vector<threshold> const deltas{ { 1, 4 }, { 1, 2 }, { 5, 8 }, { 3, 4 }, { 9, 10 }, { 1, 1 } };
  for ( int it = 0; it < 40; ++it )
  {
    auto const n = r.between( 1, 7 );
    auto const t = random_tree( n, r.between( 1, 24 ), r );
    auto const x = random_total( n, r );
    for ( auto const& delta : deltas )
    {
      auto const m = oracle_minimum_sr( t, x, delta ).defined_count();
      for ( uint32_t k = 0; k <= n; ++k )
      {
        CAPTURE( write_diagram( t ), x.str(), delta.str(), k );
        auto const y = sat_check( t, x, delta, k, o );
        CHECK( y.has_value() == ( k >= m ) );
        if ( delta.is_one() )
        {
          auto p = o;
          p.force_probabilistic = true;
          CHECK( sat_check( t, x, delta, k, p ).has_value() == ( k >= m ) );
        }
      }
    }
  }
}

TEST_CASE( "weights sum to the scaled probability", "[satenc]" )
{
  // for every subset F kept, sum over reachable matching leaves of 2^(n - u) is Pr * 2^n
  rng r( 62 );
  for ( int it = 0; it < 60; ++it )
  {
    auto const n = r.between( 1, 7 );
    auto const t = random_tree( n, r.between( 1, 20 ), r );
    auto const x = random_total( n, r );
    bool const cls = evaluate( t, x );
    for ( uint64_t keep = 0; keep < ( uint64_t( 1 ) << n ); ++keep )
    {
      partial_instance y( n );
      for ( uint32_t i = 0; i < n; ++i )
        if ( keep >> i & 1 )
          y.set( i, x[i] );
      natural sum = 0;
      auto walk = [&]( auto&& self, uint32_t u, bool reach, uint32_t undefined_on_path ) -> void {
        auto const& nd = t[u];
        if ( nd.is_leaf() )
        {
          if ( reach && nd.label == cls )
            sum += pow2( n - undefined_on_path );
          return;
        }
        auto const f = static_cast<uint32_t>( nd.feature );
        bool const kept = keep >> f & 1;
        for ( int side = 0; side < 2; ++side )
          self( self, nd.child( side ), reach && ( !kept || x.bit( f ) == bool( side ) ), undefined_on_path + !kept );
      };
      walk( walk, t.root(), true, 0 );
      auto const p = class_prob( t, y, cls );
      CHECK( sum * pow2( p.exp ) == p.count * pow2( n ) );
    }
  }
}

TEST_CASE( "dimacs round trip and decode comments", "[satenc]" )
{
  auto const enc = encode_sr( test::chain3(), pi( "111" ), 1, threshold( 3, 4 ) );
  auto const text = write_dimacs( enc.cnf );
  auto const back = parse_dimacs( text );
  CHECK( back.num_vars == enc.cnf.num_vars );
  CHECK( back.clauses == enc.cnf.clauses );
  CHECK( feature_map_from_comments( back ) == enc.feature_var );
  CHECK( write_dimacs( back ) == text );
  // byte-reproducible
  CHECK( write_dimacs( encode_sr( test::chain3(), pi( "111" ), 1, threshold( 3, 4 ) ).cnf ) == text );

  std::vector<bool> all( enc.cnf.num_vars + 1, true ), none( enc.cnf.num_vars + 1, false );
  CHECK( decode_model( enc.feature_var, pi( "111" ), all ).str() == "111" );
  CHECK( decode_model( enc.feature_var, pi( "111" ), none ).str() == "***" );
}

TEST_CASE( "doubling search", "[satenc]" )
{
  auto const o = builtin();
  auto const x = pi( "111" );
  auto const a = minimum_sr_sat( test::chain3(), x, threshold( 1, 1 ), o );
  CHECK( a.size == 2 );
  CHECK( a.reason.str() == "1*1" );
  auto const b = minimum_sr_sat( test::chain3(), x, threshold( 3, 4 ), o );
  CHECK( b.size == 1 );
  CHECK( b.reason.str() == "1**" );

  rng r( 63 );
  for ( int it = 0; it < 60; ++it )
  {
    auto const n = r.between( 1, 10 );
    auto const t = random_tree( n, r.between( 1, 40 ), r );
    auto const xx = random_total( n, r );
    threshold const d( r.between( 1, 8 ), 8 );
    auto const s = minimum_sr_sat( t, xx, d, o );
    CHECK( s.size == oracle_minimum_sr( t, xx, d ).defined_count() );
    CHECK( s.reason.defined_count() <= s.size );
    CHECK( is_delta_sr( t, s.reason, xx, d ) );
    // probes follow 0, 1, 2, 4, ... until the first satisfiable one
    uint32_t expect = 0;
    for ( auto const& p : s.probes )
    {
      if ( p.satisfiable || expect > n )
        break;
      CHECK( p.k == expect );
      expect = expect == 0 ? 1 : std::min( 2 * expect, n );
    }
  }
}
