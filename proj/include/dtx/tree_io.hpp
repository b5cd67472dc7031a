#pragma once

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "diagram.hpp"

namespace dtx
{

/*! \brief Reads the line-oriented diagram format.
 *
 *   dim <n>
 *   node <id> f <feature> lo <id> hi <id>
 *   leaf <id> <0|1>
 *   root <id>
 *
 * Features are 1-based in the text.  '#' starts a comment.
 */
inline decision_diagram parse_diagram( std::istream& in )
{
  std::map<uint64_t, uint32_t> ids;
  struct raw
  {
    bool leaf;
    uint64_t feature, lo, hi;
    bool label;
  };
  std::vector<raw> raws;
  std::optional<uint64_t> dim, root;

  std::string line;
  uint32_t lineno = 0;
  while ( std::getline( in, line ) )
  {
    ++lineno;
    auto const where = "line " + std::to_string( lineno ) + ": ";
    if ( auto h = line.find( '#' ); h != std::string::npos )
      line.erase( h );
    std::istringstream ls( line );
    std::string kw;
    if ( !( ls >> kw ) )
      continue;
    auto want = [&]( const char* tok ) {
      std::string t;
      require( ls >> t && t == tok, where + "expected '" + tok + "'" );
    };
    auto number = [&]() {
      std::string t;
      require( static_cast<bool>( ls >> t ) && !t.empty() && t.find_first_not_of( "0123456789" ) == std::string::npos,
               where + "expected a non-negative integer" );
      return std::stoull( t );
    };
    auto fresh_id = [&]( uint64_t id ) {
      require( !ids.count( id ), where + "duplicate node id " + std::to_string( id ) );
      ids[id] = static_cast<uint32_t>( raws.size() );
    };

    if ( kw == "dim" )
    {
      require( !dim, where + "dimension given twice" );
      dim = number();
    }
    else if ( kw == "node" )
    {
      auto const id = number();
      want( "f" );
      auto const f = number();
      want( "lo" );
      auto const lo = number();
      want( "hi" );
      auto const hi = number();
      fresh_id( id );
      raws.push_back( { false, f, lo, hi, false } );
    }
    else if ( kw == "leaf" )
    {
      auto const id = number();
      auto const lab = number();
      require( lab <= 1, where + "leaf label must be 0 or 1" );
      fresh_id( id );
      raws.push_back( { true, 0, 0, 0, lab == 1 } );
    }
    else if ( kw == "root" )
    {
      require( !root, where + "root given twice" );
      root = number();
    }
    else
      throw invalid_input( where + "unknown keyword '" + kw + "'" );
    std::string extra;
    require( !( ls >> extra ), where + "trailing tokens" );
  }
  require( dim.has_value(), "missing 'dim' line" );
  require( root.has_value(), "missing 'root' line" );
  require( ids.count( *root ), "root id is not a node" );

  auto lookup = [&]( uint64_t id ) {
    auto it = ids.find( id );
    require( it != ids.end(), "reference to unknown node id " + std::to_string( id ) );
    return it->second;
  };
  std::vector<dd_node> nodes;
  nodes.reserve( raws.size() );
  for ( auto const& r : raws )
  {
    if ( r.leaf )
      nodes.push_back( { dd_node::leaf_feature, 0, 0, r.label } );
    else
    {
      require( r.feature >= 1 && r.feature <= *dim, "feature " + std::to_string( r.feature ) + " out of range" );
      nodes.push_back( { static_cast<int32_t>( r.feature - 1 ), lookup( r.lo ), lookup( r.hi ), false } );
    }
  }
  return decision_diagram( static_cast<uint32_t>( *dim ), std::move( nodes ), lookup( *root ) );
}

inline decision_diagram parse_diagram( const std::string& text )
{
  std::istringstream in( text );
  return parse_diagram( in );
}

inline decision_diagram load_diagram( const std::string& path )
{
  std::ifstream in( path );
  require( in.good(), "cannot open " + path );
  return parse_diagram( in );
}

// pre-order ids starting at 0 for the root
inline std::string write_diagram( const decision_diagram& d )
{
  std::vector<uint32_t> id( d.size(), diagram_builder::keep );
  std::vector<uint32_t> order;
  std::vector<uint32_t> stack{ d.root() };
  while ( !stack.empty() )
  {
    auto const u = stack.back();
    stack.pop_back();
    if ( id[u] != diagram_builder::keep )
      continue;
    id[u] = static_cast<uint32_t>( order.size() );
    order.push_back( u );
    if ( !d[u].is_leaf() )
    {
      stack.push_back( d[u].hi );
      stack.push_back( d[u].lo );
    }
  }
  std::ostringstream os;
  os << "dim " << d.dimension() << "\n";
  for ( auto u : order )
  {
    auto const& nd = d[u];
    if ( nd.is_leaf() )
      os << "leaf " << id[u] << " " << ( nd.label ? 1 : 0 ) << "\n";
    else
      os << "node " << id[u] << " f " << nd.feature + 1 << " lo " << id[nd.lo] << " hi " << id[nd.hi] << "\n";
  }
  os << "root 0\n";
  return os.str();
}

} // namespace dtx
