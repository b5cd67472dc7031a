#pragma once

#include <optional>
#include <vector>

#include "satenc.hpp"
#include "solver.hpp"

namespace dtx
{

struct sat_probe
{
  uint32_t k = 0;
  bool satisfiable = false;
  uint32_t vars = 0;
  size_t clauses = 0;
};

struct sat_explanation
{
  partial_instance reason;
  uint32_t size = 0;
  std::vector<sat_probe> probes;
};

struct sat_driver_options
{
  solver_config solver = solver_config::from_environment();
  bool force_probabilistic = false; // use the probabilistic encoding even for delta = 1
};

/*! \brief One satisfiability query: a delta-SR with at most k features, if any. */
inline std::optional<partial_instance> sat_check( const decision_diagram& t, const partial_instance& x,
                                                  const threshold& delta, uint32_t k,
                                                  const sat_driver_options& opts = {}, sat_probe* probe = nullptr )
{
  auto const enc = encode_sr( t, x, k, delta, opts.force_probabilistic );
  auto const res = solve( enc.cnf, opts.solver );
  if ( probe )
    *probe = { k, res.status == sat_status::sat, enc.cnf.num_vars, enc.cnf.clauses.size() };
  if ( res.status == sat_status::unknown )
    throw solver_unknown( "solver gave no verdict for k = " + std::to_string( k ) );
  if ( res.status == sat_status::unsat )
    return std::nullopt;
  auto y = decode_model( enc.feature_var, x, res.model );
  if ( y.defined_count() > k || !is_delta_sr( t, y, x, delta ) )
    throw std::logic_error( "decoded model is not a delta-SR within the budget" );
  return y;
}

/*! \brief Minimum-size delta-SR: probes k = 0, 1, 2, 4, ... then bisects the last gap. */
inline sat_explanation minimum_sr_sat( const decision_diagram& t, const partial_instance& x, const threshold& delta,
                                       const sat_driver_options& opts = {} )
{
  require_dimension( t, x );
  require( x.is_total(), "x must be total" );
  auto const n = t.dimension();
  sat_explanation out;
  std::optional<partial_instance> best;
  auto ask = [&]( uint32_t k ) {
    sat_probe p;
    auto y = sat_check( t, x, delta, k, opts, &p );
    out.probes.push_back( p );
    if ( y )
      best = std::move( y );
    return p.satisfiable;
  };

  int64_t lo = -1; // largest k known unsatisfiable
  uint32_t hi = 0;
  for ( uint32_t k = 0;; k = k == 0 ? 1 : std::min( 2 * k, n ) )
  {
    if ( ask( k ) )
    {
      hi = k;
      break;
    }
    lo = k;
    if ( k == n )
      throw std::logic_error( "x itself must be a delta-SR" );
  }
  while ( static_cast<int64_t>( hi ) - lo > 1 )
  {
    auto const mid = static_cast<uint32_t>( ( lo + hi ) / 2 );
    if ( ask( mid ) )
      hi = mid;
    else
      lo = mid;
  }
  for ( auto const& a : out.probes )
    for ( auto const& b : out.probes )
      if ( a.satisfiable && !b.satisfiable && b.k >= a.k )
        throw std::logic_error( "satisfiability is not monotone in k" );

  // the last satisfiable probe is the one at hi
  out.reason = *best;
  out.size = hi;
  return out;
}

} // namespace dtx
