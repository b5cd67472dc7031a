#pragma once

#include <algorithm>
#include <cstdlib>
#include <istream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "../numeric.hpp"
#include "../partial_instance.hpp"

namespace dtx
{

struct weighted_clause
{
  std::vector<int> lits; // DIMACS literals
  uint64_t mult = 1;
};

/*! \brief CNF whose clauses carry multiplicities. */
struct weighted_cnf
{
  uint32_t num_vars = 0;
  std::vector<weighted_clause> clauses;

  uint64_t mass() const
  {
    uint64_t m = 0;
    for ( auto const& c : clauses )
      m += c.mult;
    return m;
  }
};

/*! \brief Probability that a clause holds on a uniform completion of mu.
 *
 * 1 if a literal is satisfied or the clause is a tautology, otherwise
 * 1 - 2^-eta with eta the number of distinct undefined variables.
 */
inline rational clause_prob( const std::vector<int>& lits, const partial_instance& mu )
{
  std::set<int> seen;
  std::set<uint32_t> undefined;
  for ( auto l : lits )
  {
    if ( seen.count( -l ) )
      return 1;
    seen.insert( l );
    auto const v = static_cast<uint32_t>( std::abs( l ) - 1 );
    require( v < mu.size(), "literal outside the assignment" );
    if ( !mu.defined( v ) )
      undefined.insert( v );
    else if ( mu.bit( v ) == ( l > 0 ) )
      return 1;
  }
  return 1 - rational( 1, pow2( static_cast<uint32_t>( undefined.size() ) ) );
}

inline rational expected_clauses( const weighted_cnf& phi, const partial_instance& mu )
{
  require( mu.size() == phi.num_vars, "assignment dimension mismatch" );
  rational e = 0;
  for ( auto const& c : phi.clauses )
    e += clause_prob( c.lits, mu ) * c.mult;
  return e;
}

namespace detail
{

// E(phi, mu) * 2^width for clauses of at most width distinct variables, in integers
inline natural scaled_expected_clauses( const weighted_cnf& phi, const partial_instance& mu, uint32_t width )
{
  natural e = 0;
  std::vector<int> seen;
  for ( auto const& c : phi.clauses )
  {
    seen.clear();
    bool sat = false;
    uint32_t eta = 0;
    for ( auto l : c.lits )
    {
      if ( std::find( seen.begin(), seen.end(), -l ) != seen.end() )
      {
        sat = true;
        break;
      }
      if ( std::find( seen.begin(), seen.end(), l ) != seen.end() )
        continue;
      seen.push_back( l );
      auto const v = static_cast<uint32_t>( std::abs( l ) - 1 );
      if ( !mu.defined( v ) )
        ++eta;
      else if ( mu.bit( v ) == ( l > 0 ) )
        sat = true;
    }
    natural term = pow2( width );
    if ( !sat )
      term -= pow2( width - eta );
    e += term * c.mult;
  }
  return e;
}

} // namespace detail

/*! \brief Some mu strictly below sigma with E(mu) >= E(sigma), by enumeration. */
inline std::optional<partial_instance> mec_bruteforce( const weighted_cnf& phi, const partial_instance& sigma,
                                                       uint32_t max_defined = 20 )
{
  require( sigma.size() == phi.num_vars, "assignment dimension mismatch" );
  auto const pos = sigma.defined_positions();
  if ( pos.size() > max_defined )
    throw budget_exceeded( "mec_bruteforce: too many defined variables" );
  uint32_t width = 0;
  for ( auto const& c : phi.clauses )
    width = std::max( width, static_cast<uint32_t>( c.lits.size() ) );
  auto const target = detail::scaled_expected_clauses( phi, sigma, width );
  auto const full = ( uint64_t( 1 ) << pos.size() ) - 1;
  for ( uint64_t m = 0; m < full; ++m )
  {
    partial_instance mu( sigma.size() );
    for ( size_t j = 0; j < pos.size(); ++j )
      if ( ( m >> j ) & 1 )
        mu.set( pos[j], sigma[pos[j]] );
    if ( detail::scaled_expected_clauses( phi, mu, width ) >= target )
      return mu;
  }
  return std::nullopt;
}

/*! \brief DIMACS-like text: "p cnf <vars> <clauses>", then "w <mult> <lits> 0" lines. */
inline std::string write_weighted_cnf( const weighted_cnf& phi )
{
  std::ostringstream os;
  os << "p cnf " << phi.num_vars << " " << phi.clauses.size() << "\n";
  for ( auto const& c : phi.clauses )
  {
    os << "w " << c.mult;
    for ( auto l : c.lits )
      os << " " << l;
    os << " 0\n";
  }
  return os.str();
}

inline weighted_cnf parse_weighted_cnf( std::istream& in )
{
  weighted_cnf phi;
  size_t declared = 0;
  bool header = false;
  std::string line;
  while ( std::getline( in, line ) )
  {
    std::istringstream ls( line );
    std::string kw;
    if ( !( ls >> kw ) || kw == "c" )
      continue;
    if ( kw == "p" )
    {
      std::string fmt;
      require( !header && ( ls >> fmt >> phi.num_vars >> declared ) && fmt == "cnf", "bad weighted CNF header" );
      header = true;
      continue;
    }
    require( header && kw == "w", "expected 'w <mult> <literals> 0'" );
    weighted_clause c;
    require( static_cast<bool>( ls >> c.mult ) && c.mult > 0, "bad multiplicity" );
    long long l;
    bool closed = false;
    while ( ls >> l )
    {
      if ( l == 0 )
      {
        closed = true;
        break;
      }
      require( static_cast<unsigned long long>( std::llabs( l ) ) <= phi.num_vars, "literal out of range" );
      c.lits.push_back( static_cast<int>( l ) );
    }
    require( closed, "clause must end with 0" );
    phi.clauses.push_back( std::move( c ) );
  }
  require( header, "missing weighted CNF header" );
  require( phi.clauses.size() == declared, "clause count differs from header" );
  return phi;
}

inline weighted_cnf parse_weighted_cnf( const std::string& text )
{
  std::istringstream in( text );
  return parse_weighted_cnf( in );
}

/*! \brief Simple undirected graph on vertices 0..n-1. */
struct graph
{
  uint32_t n = 0;
  std::vector<std::vector<bool>> adj;

  explicit graph( uint32_t vertices = 0 ) : n( vertices ), adj( vertices, std::vector<bool>( vertices, false ) ) {}

  void add_edge( uint32_t u, uint32_t v )
  {
    require( u < n && v < n && u != v, "bad edge" );
    adj[u][v] = adj[v][u] = true;
  }
  uint32_t degree( uint32_t v ) const
  {
    uint32_t d = 0;
    for ( uint32_t w = 0; w < n; ++w )
      d += adj[v][w];
    return d;
  }
  uint32_t edges() const
  {
    uint32_t e = 0;
    for ( uint32_t v = 0; v < n; ++v )
      e += degree( v );
    return e / 2;
  }
};

// "p <n>" then "e <u> <v>" lines, 1-based
inline graph parse_graph( std::istream& in )
{
  std::optional<graph> g;
  std::string line;
  while ( std::getline( in, line ) )
  {
    std::istringstream ls( line );
    std::string kw;
    if ( !( ls >> kw ) || kw == "c" || kw[0] == '#' )
      continue;
    if ( kw == "p" )
    {
      uint32_t n;
      require( !g && static_cast<bool>( ls >> n ), "bad graph header" );
      g.emplace( n );
    }
    else if ( kw == "e" )
    {
      uint32_t u, v;
      require( g && static_cast<bool>( ls >> u >> v ) && u >= 1 && v >= 1, "bad edge line" );
      g->add_edge( u - 1, v - 1 );
    }
    else
      throw invalid_input( "unknown graph line '" + line + "'" );
  }
  require( g.has_value(), "missing graph header" );
  return *g;
}

inline graph parse_graph( const std::string& text )
{
  std::istringstream in( text );
  return parse_graph( in );
}

} // namespace dtx
