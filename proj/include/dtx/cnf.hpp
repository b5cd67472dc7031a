#pragma once

#include <algorithm>
#include <cstdlib>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "error.hpp"

namespace dtx
{

using clause = std::vector<int>;

/*! \brief CNF with 1-based DIMACS literals. */
struct cnf_formula
{
  uint32_t num_vars = 0;
  std::vector<clause> clauses;
  std::vector<std::string> comments; // without the leading "c "

  bool satisfied_by( const std::vector<bool>& model ) const
  {
    for ( auto const& c : clauses )
    {
      bool sat = false;
      for ( auto l : c )
        if ( model[std::abs( l )] == ( l > 0 ) )
        {
          sat = true;
          break;
        }
      if ( !sat )
        return false;
    }
    return true;
  }
};

class cnf_builder
{
public:
  uint32_t new_var() { return ++f_.num_vars; }
  uint32_t num_vars() const { return f_.num_vars; }
  size_t num_clauses() const { return f_.clauses.size(); }

  // duplicates are dropped; tautologies are skipped
  void add( clause c )
  {
    require( !c.empty(), "empty clause" );
    std::sort( c.begin(), c.end(), []( int a, int b ) { return std::abs( a ) != std::abs( b ) ? std::abs( a ) < std::abs( b ) : a < b; } );
    c.erase( std::unique( c.begin(), c.end() ), c.end() );
    for ( size_t i = 1; i < c.size(); ++i )
      if ( c[i] == -c[i - 1] )
        return;
    for ( auto l : c )
      require( l != 0 && static_cast<uint32_t>( std::abs( l ) ) <= f_.num_vars, "literal out of range" );
    f_.clauses.push_back( std::move( c ) );
  }

  void comment( std::string s ) { f_.comments.push_back( std::move( s ) ); }

  cnf_formula take() { return std::move( f_ ); }
  const cnf_formula& peek() const { return f_; }

private:
  cnf_formula f_;
};

inline std::string write_dimacs( const cnf_formula& f )
{
  std::ostringstream os;
  for ( auto const& c : f.comments )
    os << "c " << c << "\n";
  os << "p cnf " << f.num_vars << " " << f.clauses.size() << "\n";
  for ( auto const& c : f.clauses )
  {
    for ( auto l : c )
      os << l << " ";
    os << "0\n";
  }
  return os.str();
}

inline cnf_formula parse_dimacs( std::istream& in )
{
  cnf_formula f;
  bool header = false;
  size_t declared = 0;
  clause cur;
  std::string line;
  while ( std::getline( in, line ) )
  {
    if ( line.empty() )
      continue;
    if ( line[0] == 'c' )
    {
      f.comments.push_back( line.size() > 2 ? line.substr( 2 ) : "" );
      continue;
    }
    std::istringstream ls( line );
    if ( line[0] == 'p' )
    {
      std::string p, fmt;
      require( !header && ( ls >> p >> fmt >> f.num_vars >> declared ) && fmt == "cnf", "bad DIMACS header" );
      header = true;
      continue;
    }
    if ( line[0] == '%' )
      break;
    require( header, "clause before DIMACS header" );
    long long l;
    while ( ls >> l )
    {
      if ( l == 0 )
      {
        require( !cur.empty(), "empty clause in DIMACS input" );
        f.clauses.push_back( std::move( cur ) );
        cur.clear();
        continue;
      }
      require( static_cast<unsigned long long>( std::llabs( l ) ) <= f.num_vars, "literal out of range" );
      cur.push_back( static_cast<int>( l ) );
    }
    require( ls.eof(), "bad token in DIMACS input" );
  }
  require( header, "missing DIMACS header" );
  require( cur.empty(), "unterminated clause" );
  require( f.clauses.size() == declared, "clause count differs from header" );
  return f;
}

inline cnf_formula parse_dimacs( const std::string& text )
{
  std::istringstream in( text );
  return parse_dimacs( in );
}

} // namespace dtx
