#pragma once

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "cnf.hpp"

namespace dtx
{

enum class sat_status
{
  sat,
  unsat,
  unknown
};

struct sat_result
{
  sat_status status = sat_status::unknown;
  std::vector<bool> model; // indexed by variable, entry 0 unused
  uint64_t decisions = 0;
};

/*! \brief Chronological DPLL with two watched literals.
 *
 * Branches on the lowest-indexed unassigned variable, false first.
 */
class dpll_solver
{
public:
  explicit dpll_solver( const cnf_formula& f ) : f_( f ), n_( f.num_vars ) {}

  sat_result solve( std::optional<std::chrono::steady_clock::time_point> deadline = std::nullopt )
  {
    sat_result res;
    val_.assign( n_ + 1, 0 );
    watches_.assign( 2 * ( n_ + 1 ), {} );
    trail_.clear();
    decisions_.clear();
    head_ = 0;

    for ( uint32_t c = 0; c < f_.clauses.size(); ++c )
    {
      auto const& cl = f_.clauses[c];
      if ( cl.size() == 1 )
      {
        if ( value( cl[0] ) < 0 )
        {
          res.status = sat_status::unsat;
          return res;
        }
        if ( value( cl[0] ) == 0 )
          assign( cl[0] );
        continue;
      }
      watches_[index( cl[0] )].push_back( c );
      watches_[index( cl[1] )].push_back( c );
    }
    // clauses keep their watched literals in positions 0 and 1
    lits_.clear();
    for ( auto const& cl : f_.clauses )
      lits_.push_back( cl );

    uint32_t next = 1;
    while ( true )
    {
      if ( !propagate() )
      {
        // undo to the latest unflipped decision and take its true branch
        while ( !decisions_.empty() && decisions_.back().flipped )
        {
          undo( decisions_.back().trail_size );
          decisions_.pop_back();
        }
        if ( decisions_.empty() )
        {
          res.status = sat_status::unsat;
          res.decisions = count_;
          return res;
        }
        auto& d = decisions_.back();
        undo( d.trail_size );
        d.flipped = true;
        assign( static_cast<int>( d.var ) );
        next = d.var; // lower variables were assigned before this decision
        continue;
      }
      while ( next <= n_ && val_[next] != 0 )
        ++next;
      if ( next > n_ )
        break;
      if ( deadline && ( ++count_ & 1023 ) == 0 && std::chrono::steady_clock::now() > *deadline )
      {
        res.status = sat_status::unknown;
        res.decisions = count_;
        return res;
      }
      if ( !deadline )
        ++count_;
      decisions_.push_back( { next, trail_.size(), false } );
      assign( -static_cast<int>( next ) );
    }
    res.status = sat_status::sat;
    res.decisions = count_;
    res.model.assign( n_ + 1, false );
    for ( uint32_t v = 1; v <= n_; ++v )
      res.model[v] = val_[v] > 0;
    if ( !f_.satisfied_by( res.model ) )
      throw std::logic_error( "dpll: model does not satisfy the formula" );
    return res;
  }

private:
  struct decision
  {
    uint32_t var;
    size_t trail_size;
    bool flipped;
  };

  static size_t index( int lit ) { return 2 * static_cast<size_t>( std::abs( lit ) ) + ( lit < 0 ); }
  int value( int lit ) const { return lit > 0 ? val_[lit] : -val_[-lit]; }

  void assign( int lit )
  {
    val_[std::abs( lit )] = lit > 0 ? 1 : -1;
    trail_.push_back( lit );
  }

  void undo( size_t size )
  {
    while ( trail_.size() > size )
    {
      val_[std::abs( trail_.back() )] = 0;
      trail_.pop_back();
    }
    head_ = std::min( head_, trail_.size() );
  }

  bool propagate()
  {
    while ( head_ < trail_.size() )
    {
      int const falsified = -trail_[head_++];
      auto& ws = watches_[index( falsified )];
      size_t keep = 0;
      for ( size_t w = 0; w < ws.size(); ++w )
      {
        auto const c = ws[w];
        auto& cl = lits_[c];
        if ( cl[0] == falsified )
          std::swap( cl[0], cl[1] );
        if ( value( cl[0] ) > 0 )
        {
          ws[keep++] = c;
          continue;
        }
        bool moved = false;
        for ( size_t i = 2; i < cl.size(); ++i )
          if ( value( cl[i] ) >= 0 )
          {
            std::swap( cl[1], cl[i] );
            watches_[index( cl[1] )].push_back( c );
            moved = true;
            break;
          }
        if ( moved )
          continue;
        ws[keep++] = c;
        if ( value( cl[0] ) < 0 )
        {
          for ( ++w; w < ws.size(); ++w )
            ws[keep++] = ws[w];
          ws.resize( keep );
          return false;
        }
        assign( cl[0] );
      }
      ws.resize( keep );
    }
    return true;
  }

  const cnf_formula& f_;
  uint32_t n_;
  std::vector<int8_t> val_;
  std::vector<std::vector<uint32_t>> watches_;
  std::vector<clause> lits_;
  std::vector<int> trail_;
  std::vector<decision> decisions_;
  size_t head_ = 0;
  uint64_t count_ = 0;
};

/*! \brief Reads competition output: an "s" status line and "v" model lines. */
inline sat_result parse_solver_output( const std::string& out, uint32_t num_vars )
{
  sat_result res;
  std::istringstream in( out );
  std::string line;
  std::vector<int> lits;
  bool have_status = false;
  while ( std::getline( in, line ) )
  {
    if ( line.rfind( "s ", 0 ) == 0 )
    {
      auto const s = line.substr( 2 );
      if ( s.rfind( "SATISFIABLE", 0 ) == 0 )
        res.status = sat_status::sat;
      else if ( s.rfind( "UNSATISFIABLE", 0 ) == 0 )
        res.status = sat_status::unsat;
      else
        res.status = sat_status::unknown;
      have_status = true;
    }
    else if ( line.rfind( "v", 0 ) == 0 )
    {
      std::istringstream ls( line.substr( 1 ) );
      long long l;
      while ( ls >> l )
        if ( l != 0 )
          lits.push_back( static_cast<int>( l ) );
    }
  }
  if ( !have_status )
    res.status = sat_status::unknown;
  if ( res.status == sat_status::sat )
  {
    res.model.assign( num_vars + 1, false );
    for ( auto l : lits )
      if ( static_cast<uint32_t>( std::abs( l ) ) <= num_vars )
        res.model[std::abs( l )] = l > 0;
  }
  return res;
}

/*! \brief Which solver to run and for how long. */
struct solver_config
{
  std::optional<std::string> command; // template with {cnf}; DTX_SAT_CMD when unset
  double time_limit_seconds = 0;      // 0 = none, built-in solver only
  bool keep_cnf = false;              // also set by DTX_KEEP_CNF=1

  static solver_config from_environment()
  {
    solver_config c;
    if ( auto const* cmd = std::getenv( "DTX_SAT_CMD" ); cmd && *cmd )
      c.command = cmd;
    if ( auto const* keep = std::getenv( "DTX_KEEP_CNF" ); keep && std::string( keep ) == "1" )
      c.keep_cnf = true;
    return c;
  }
};

inline sat_result run_external_solver( const cnf_formula& f, const std::string& command, bool keep_cnf )
{
  char path[] = "/tmp/dtx-XXXXXX.cnf";
  int const fd = mkstemps( path, 4 );
  if ( fd < 0 )
    throw std::runtime_error( "cannot create temporary CNF file" );
  {
    auto const text = write_dimacs( f );
    auto const written = ::write( fd, text.data(), text.size() );
    ::close( fd );
    if ( written != static_cast<ssize_t>( text.size() ) )
      throw std::runtime_error( "cannot write temporary CNF file" );
  }
  std::string cmd = command;
  for ( size_t pos; ( pos = cmd.find( "{cnf}" ) ) != std::string::npos; )
    cmd.replace( pos, 5, path );
  std::string out;
  if ( FILE* p = popen( ( cmd + " 2>/dev/null" ).c_str(), "r" ) )
  {
    char buf[4096];
    size_t got;
    while ( ( got = fread( buf, 1, sizeof buf, p ) ) > 0 )
      out.append( buf, got );
    pclose( p ); // exit status is not meaningful across solvers
  }
  if ( !keep_cnf )
    std::remove( path );
  auto res = parse_solver_output( out, f.num_vars );
  if ( res.status == sat_status::sat && !f.satisfied_by( res.model ) )
    res.status = sat_status::unknown;
  return res;
}

inline sat_result solve( const cnf_formula& f, const solver_config& config = solver_config::from_environment() )
{
  if ( config.command )
    return run_external_solver( f, *config.command, config.keep_cnf );
  std::optional<std::chrono::steady_clock::time_point> deadline;
  if ( config.time_limit_seconds > 0 )
    deadline = std::chrono::steady_clock::now() +
               std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                   std::chrono::duration<double>( config.time_limit_seconds ) );
  return dpll_solver( f ).solve( deadline );
}

} // namespace dtx
