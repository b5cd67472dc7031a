#pragma once

#include <climits>
#include <vector>

#include "cnf.hpp"
#include "counting.hpp"
#include "numeric.hpp"

namespace dtx
{

/*! \brief Tseitin gates over a cnf_builder with constant folding.
 *
 * A signal is a DIMACS literal or one of the constants below.
 */
class circuit
{
public:
  static constexpr int one = INT_MAX;
  static constexpr int zero = -INT_MAX;

  explicit circuit( cnf_builder& b ) : b_( b ) {}

  static bool is_const( int s ) { return s == one || s == zero; }

  int and2( int a, int c )
  {
    if ( a == zero || c == zero || a == -c )
      return zero;
    if ( a == one )
      return c;
    if ( c == one || a == c )
      return a;
    int const o = static_cast<int>( b_.new_var() );
    b_.add( { -o, a } );
    b_.add( { -o, c } );
    b_.add( { o, -a, -c } );
    return o;
  }

  int or2( int a, int c ) { return -and2( -a, -c ); }

  int xor2( int a, int c )
  {
    if ( a == zero )
      return c;
    if ( c == zero )
      return a;
    if ( a == one )
      return -c;
    if ( c == one )
      return -a;
    if ( a == c )
      return zero;
    if ( a == -c )
      return one;
    int const o = static_cast<int>( b_.new_var() );
    b_.add( { -o, a, c } );
    b_.add( { -o, -a, -c } );
    b_.add( { o, -a, c } );
    b_.add( { o, a, -c } );
    return o;
  }

  // conjunction of any number of signals
  int and_all( const std::vector<int>& in )
  {
    std::vector<int> lits;
    for ( auto s : in )
    {
      if ( s == zero )
        return zero;
      if ( s != one )
        lits.push_back( s );
    }
    if ( lits.empty() )
      return one;
    if ( lits.size() == 1 )
      return lits[0];
    int const o = static_cast<int>( b_.new_var() );
    clause big{ o };
    for ( auto l : lits )
    {
      b_.add( { -o, l } );
      big.push_back( -l );
    }
    b_.add( big );
    return o;
  }

  // (sum, carry) of a + c + d
  std::pair<int, int> full_add( int a, int c, int d )
  {
    if ( is_const( a ) || is_const( c ) || is_const( d ) )
    {
      auto const ac = xor2( a, c );
      return { xor2( ac, d ), or2( and2( a, c ), and2( d, ac ) ) };
    }
    int const s = static_cast<int>( b_.new_var() );
    int const k = static_cast<int>( b_.new_var() );
    b_.add( { -s, a, c, d } );
    b_.add( { -s, a, -c, -d } );
    b_.add( { -s, -a, c, -d } );
    b_.add( { -s, -a, -c, d } );
    b_.add( { s, -a, -c, -d } );
    b_.add( { s, -a, c, d } );
    b_.add( { s, a, -c, d } );
    b_.add( { s, a, c, -d } );
    b_.add( { -k, a, c } );
    b_.add( { -k, a, d } );
    b_.add( { -k, c, d } );
    b_.add( { k, -a, -c } );
    b_.add( { k, -a, -d } );
    b_.add( { k, -c, -d } );
    return { s, k };
  }

  // little-endian ripple-carry sum
  std::vector<int> add( const std::vector<int>& a, const std::vector<int>& c )
  {
    auto const w = std::max( a.size(), c.size() );
    std::vector<int> out;
    int carry = zero;
    for ( size_t i = 0; i < w; ++i )
    {
      auto const [s, k] = full_add( i < a.size() ? a[i] : zero, i < c.size() ? c[i] : zero, carry );
      out.push_back( s );
      carry = k;
    }
    out.push_back( carry );
    while ( !out.empty() && out.back() == zero )
      out.pop_back();
    return out;
  }

  // balanced tree of adders
  std::vector<int> sum( std::vector<std::vector<int>> terms )
  {
    if ( terms.empty() )
      return {};
    while ( terms.size() > 1 )
    {
      std::vector<std::vector<int>> next;
      for ( size_t i = 0; i + 1 < terms.size(); i += 2 )
        next.push_back( add( terms[i], terms[i + 1] ) );
      if ( terms.size() % 2 )
        next.push_back( std::move( terms.back() ) );
      terms = std::move( next );
    }
    return terms[0];
  }

  // a >= theta for a little-endian vector and a constant
  int at_least( const std::vector<int>& a, const natural& theta )
  {
    size_t const w = std::max<size_t>( a.size(), msb_width( theta ) );
    int ge = one;
    for ( size_t i = 0; i < w; ++i )
    {
      int const ai = i < a.size() ? a[i] : zero;
      ge = boost::multiprecision::bit_test( theta, static_cast<unsigned>( i ) ) ? and2( ai, ge ) : or2( ai, ge );
    }
    return ge;
  }

  /*! \brief Exact unary counter: out[j] is true iff at least j inputs are true, j = 0..m+1. */
  std::vector<int> unary_count( const std::vector<int>& in )
  {
    std::vector<int> c{ one, zero };
    for ( auto x : in )
    {
      std::vector<int> next( c.size() + 1, zero );
      next[0] = one;
      for ( size_t j = 1; j < next.size(); ++j )
        next[j] = or2( j < c.size() ? c[j] : zero, and2( x, c[j - 1] ) );
      c = std::move( next );
    }
    return c;
  }

  void assert_true( int s )
  {
    if ( s == one )
      return;
    if ( s == zero )
    {
      int const v = static_cast<int>( b_.new_var() );
      b_.add( { v } );
      b_.add( { -v } );
      return;
    }
    b_.add( { s } );
  }

private:
  static size_t msb_width( const natural& v ) { return v == 0 ? 0 : boost::multiprecision::msb( v ) + 1; }

  cnf_builder& b_;
};

/*! \brief Sequential-counter registers: reg[i][j-1] is implied by "at least j of x_1..x_i+1". */
struct counter_registers
{
  std::vector<std::vector<int>> reg;
};

/*! \brief At most k of vars true, sequential counter with O(n k) clauses. */
inline counter_registers atmost_k_sequential( cnf_builder& b, const std::vector<int>& vars, uint32_t k )
{
  counter_registers out;
  auto const n = vars.size();
  if ( k >= n )
    return out;
  if ( k == 0 )
  {
    for ( auto v : vars )
      b.add( { -v } );
    return out;
  }
  auto& s = out.reg;
  s.assign( n - 1, std::vector<int>( k ) );
  for ( size_t i = 0; i + 1 < n; ++i )
    for ( uint32_t j = 0; j < k; ++j )
      s[i][j] = static_cast<int>( b.new_var() );
  b.add( { -vars[0], s[0][0] } );
  for ( uint32_t j = 1; j < k; ++j )
    b.add( { -s[0][j] } );
  for ( size_t i = 1; i + 1 < n; ++i )
  {
    b.add( { -vars[i], s[i][0] } );
    b.add( { -s[i - 1][0], s[i][0] } );
    for ( uint32_t j = 1; j < k; ++j )
    {
      b.add( { -vars[i], -s[i - 1][j - 1], s[i][j] } );
      b.add( { -s[i - 1][j], s[i][j] } );
    }
    b.add( { -vars[i], -s[i - 1][k - 1] } );
  }
  b.add( { -vars[n - 1], -s[n - 2][k - 1] } );
  return out;
}

struct leaf_aux
{
  uint32_t leaf = 0;
  uint32_t first_var = 0; // auxiliary variables of this leaf, inclusive range
  uint32_t last_var = 0;
};

/*! \brief A CNF whose models with f-variable set F are the explanations keeping exactly F. */
struct sr_encoding
{
  cnf_formula cnf;
  bool probabilistic = false;
  uint32_t dimension = 0;
  uint32_t k = 0;
  threshold delta;
  bool target_class = true;
  std::vector<uint32_t> feature_var; // 0-based feature -> variable
  std::vector<leaf_aux> leaves;      // probabilistic encoding only
};

namespace detail
{

inline void add_decode_comments( cnf_builder& b, const sr_encoding& e )
{
  b.comment( std::string( "dtx encoding " ) + ( e.probabilistic ? "probabilistic" : "deterministic" ) );
  b.comment( "dtx dim " + std::to_string( e.dimension ) );
  b.comment( "dtx k " + std::to_string( e.k ) );
  b.comment( "dtx delta " + e.delta.str() );
  b.comment( std::string( "dtx class " ) + ( e.target_class ? "1" : "0" ) );
  for ( uint32_t i = 0; i < e.feature_var.size(); ++i )
    b.comment( "dtx f " + std::to_string( i + 1 ) + " " + std::to_string( e.feature_var[i] ) );
}

// one variable per feature; with `only`, features outside it get none (entry 0)
inline std::vector<int> feature_vars( cnf_builder& b, uint32_t n, sr_encoding& e, const std::vector<bool>* only = nullptr )
{
  std::vector<int> f;
  for ( uint32_t i = 0; i < n; ++i )
  {
    f.push_back( !only || ( *only )[i] ? static_cast<int>( b.new_var() ) : 0 );
    e.feature_var.push_back( static_cast<uint32_t>( f.back() ) );
  }
  return f;
}

} // namespace detail

/*! \brief Satisfiable iff some sufficient reason for x keeps at most k features. */
inline sr_encoding encode_deterministic( const decision_diagram& t, const partial_instance& x, uint32_t k )
{
  require_dimension( t, x );
  require( x.is_total(), "x must be total" );
  sr_encoding e;
  e.dimension = t.dimension();
  e.k = k;
  e.target_class = evaluate( t, x );
  cnf_builder b;
  // a feature the tree never tests is never worth keeping
  std::vector<bool> tested( e.dimension, false );
  for ( uint32_t u = 0; u < t.size(); ++u )
    if ( !t[u].is_leaf() )
      tested[t[u].feature] = true;
  auto const f = detail::feature_vars( b, e.dimension, e, &tested );
  detail::add_decode_comments( b, e );
  std::vector<int> r( t.size() );
  for ( uint32_t u = 0; u < t.size(); ++u )
    r[u] = static_cast<int>( b.new_var() );
  b.add( { r[t.root()] } );
  std::vector<int> counted;
  for ( auto v : f )
    if ( v != 0 )
      counted.push_back( v );
  atmost_k_sequential( b, counted, k );
  for ( uint32_t u = 0; u < t.size(); ++u )
  {
    auto const& nd = t[u];
    if ( nd.is_leaf() )
    {
      if ( nd.label != e.target_class )
        b.add( { -r[u] } );
      continue;
    }
    int const fi = f[nd.feature];
    b.add( { -r[u], fi, r[nd.lo] } );
    b.add( { -r[u], fi, r[nd.hi] } );
    b.add( { -r[u], -fi, r[nd.child( x.bit( nd.feature ) )] } );
  }
  e.cnf = b.take();
  return e;
}

/*! \brief Satisfiable iff some delta-SR for x keeps at most k features (t must be a tree). */
inline sr_encoding encode_probabilistic( const decision_diagram& t, const partial_instance& x, uint32_t k,
                                         const threshold& delta )
{
  require_dimension( t, x );
  require( x.is_total(), "x must be total" );
  require( t.is_tree(), "the probabilistic encoding needs a tree" );
  sr_encoding e;
  e.probabilistic = true;
  e.dimension = t.dimension();
  e.k = k;
  e.delta = delta;
  e.target_class = evaluate( t, x );
  auto const n = e.dimension;

  cnf_builder b;
  auto const f = detail::feature_vars( b, n, e );
  detail::add_decode_comments( b, e );
  atmost_k_sequential( b, f, k );
  circuit c( b );

  // parent pointers give each leaf its path
  std::vector<uint32_t> parent( t.size(), diagram_builder::keep );
  for ( uint32_t u = 0; u < t.size(); ++u )
    if ( !t[u].is_leaf() )
      parent[t[u].lo] = parent[t[u].hi] = u;

  std::vector<std::vector<int>> weights;
  for ( uint32_t leaf = 0; leaf < t.size(); ++leaf )
  {
    if ( !t[leaf].is_leaf() || t[leaf].label != e.target_class )
      continue;
    auto const first = b.num_vars() + 1;
    std::vector<int> off_path, agree;
    uint32_t depth = 0;
    for ( uint32_t v = leaf; parent[v] != diagram_builder::keep; v = parent[v] )
    {
      auto const p = parent[v];
      auto const i = static_cast<uint32_t>( t[p].feature );
      bool const dir = t[p].hi == v;
      ++depth;
      if ( dir == x.bit( i ) )
        agree.push_back( f[i] );
      else
        off_path.push_back( -f[i] );
    }
    int const reach = c.and_all( off_path );
    auto const cnt = c.unary_count( agree );
    // weight 2^(n - undefined on path), i.e. bit n - depth + kept
    std::vector<int> w( n + 1, circuit::zero );
    for ( size_t kept = 0; kept <= agree.size(); ++kept )
    {
      int const exact = c.and2( cnt[kept], -cnt[kept + 1] );
      w[n - depth + kept] = c.and2( reach, exact );
    }
    weights.push_back( std::move( w ) );
    e.leaves.push_back( { leaf, first, b.num_vars() } );
  }
  auto const alpha = c.sum( std::move( weights ) );
  c.assert_true( c.at_least( alpha, delta.ceil_scaled( n ) ) );
  e.cnf = b.take();
  return e;
}

// delta = 1 goes to the deterministic encoding unless forced
inline sr_encoding encode_sr( const decision_diagram& t, const partial_instance& x, uint32_t k, const threshold& delta,
                              bool force_probabilistic = false )
{
  if ( delta.is_one() && !force_probabilistic )
    return encode_deterministic( t, x, k );
  return encode_probabilistic( t, x, k, delta );
}

/*! \brief Explanation kept by a model (indexed by variable, entry 0 unused). */
inline partial_instance decode_model( const std::vector<uint32_t>& feature_var, const partial_instance& x,
                                      const std::vector<bool>& model )
{
  require( feature_var.size() == x.size(), "decode: dimension mismatch" );
  partial_instance y( x.size() );
  for ( uint32_t i = 0; i < x.size(); ++i )
  {
    require( feature_var[i] < model.size(), "decode: model too short" );
    if ( feature_var[i] != 0 && model[feature_var[i]] )
      y.set( i, x[i] );
  }
  return y;
}

// feature map from "dtx f <feature> <var>" comments; var 0 marks a feature without a variable
inline std::vector<uint32_t> feature_map_from_comments( const cnf_formula& f )
{
  std::vector<std::pair<uint32_t, uint32_t>> pairs;
  for ( auto const& c : f.comments )
  {
    std::istringstream is( c );
    std::string a, b;
    uint32_t feat, var;
    if ( is >> a >> b >> feat >> var && a == "dtx" && b == "f" )
      pairs.push_back( { feat, var } );
  }
  std::vector<uint32_t> map( pairs.size(), 0 );
  std::vector<bool> seen( pairs.size(), false );
  for ( auto [feat, var] : pairs )
  {
    require( feat >= 1 && feat <= map.size() && !seen[feat - 1] && var <= f.num_vars, "bad feature map in CNF comments" );
    seen[feat - 1] = true;
    map[feat - 1] = var;
  }
  return map;
}

} // namespace dtx
