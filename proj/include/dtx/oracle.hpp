#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "counting.hpp"
#include "diagram.hpp"
#include "numeric.hpp"
#include "partial_instance.hpp"

namespace dtx
{

/*! \brief Limits for the exhaustive reference procedures. */
struct oracle_budget
{
  uint32_t max_dimension = 20;       // enumeration of completions
  uint64_t max_subsets = 1ull << 22; // subsets examined per query
};

/*! \brief Pr[d = 1 | y] by listing every completion. */
inline dyadic brute_prob( const decision_diagram& d, const partial_instance& y, const oracle_budget& budget = {} )
{
  require_dimension( d, y );
  auto const undef = y.size() - y.defined_count();
  if ( undef > budget.max_dimension )
    throw budget_exceeded( "brute_prob: " + std::to_string( undef ) + " undefined features" );
  std::vector<uint32_t> free;
  for ( uint32_t i = 0; i < y.size(); ++i )
    if ( !y.defined( i ) )
      free.push_back( i );
  auto z = y;
  uint64_t hits = 0;
  for ( uint64_t m = 0; m < ( uint64_t( 1 ) << undef ); ++m )
  {
    for ( uint32_t j = 0; j < undef; ++j )
      z.set( free[j], static_cast<bool>( ( m >> j ) & 1 ) );
    hits += evaluate( d, z );
  }
  return { hits, undef };
}

/*! \brief Positive-completion counts of y restricted to every subset of its defined positions.
 *
 * Masks index the defined positions of the base instance in increasing
 * order.  Small dimensions use one pass over all 2^n instances and a
 * superset-sum; larger ones count each requested subset separately.
 */
class subset_counts
{
public:
  subset_counts( const decision_diagram& d, const partial_instance& base, const oracle_budget& budget )
      : d_( d ), base_( base ), defined_( base.defined_positions() )
  {
    require_dimension( d, base );
    require( defined_.size() < 63, "too many defined positions" );
    auto const n = d.dimension();
    if ( n <= budget.max_dimension && ( uint64_t( 1 ) << defined_.size() ) <= budget.max_subsets )
    {
      table_.assign( size_t( 1 ) << defined_.size(), 0 );
      for ( uint64_t z = 0; z < ( uint64_t( 1 ) << n ); ++z )
      {
        if ( !evaluate_bits( d, z ) )
          continue;
        uint64_t agree = 0;
        for ( size_t j = 0; j < defined_.size(); ++j )
          if ( ( ( z >> defined_[j] ) & 1 ) == static_cast<uint64_t>( base.bit( defined_[j] ) ) )
            agree |= uint64_t( 1 ) << j;
        ++table_[agree];
      }
      for ( size_t j = 0; j < defined_.size(); ++j )
        for ( uint64_t m = 0; m < table_.size(); ++m )
          if ( !( ( m >> j ) & 1 ) )
            table_[m] += table_[m | ( uint64_t( 1 ) << j )];
    }
  }

  const std::vector<uint32_t>& positions() const { return defined_; }
  bool enumerated() const { return !table_.empty(); }

  partial_instance instance( uint64_t mask ) const
  {
    partial_instance y( base_.size() );
    for ( size_t j = 0; j < defined_.size(); ++j )
      if ( ( mask >> j ) & 1 )
        y.set( defined_[j], base_[defined_[j]] );
    return y;
  }

  // Pr[d = cls | base restricted to mask]
  dyadic prob( uint64_t mask, bool cls ) const
  {
    auto const kept = static_cast<uint32_t>( __builtin_popcountll( mask ) );
    dyadic p;
    p.exp = base_.size() - kept;
    if ( enumerated() )
      p.count = table_[mask];
    else
      p.count = count_positive_completions( d_, instance( mask ) );
    if ( !cls )
      p.count = pow2( p.exp ) - p.count;
    return p;
  }

private:
  const decision_diagram& d_;
  partial_instance base_;
  std::vector<uint32_t> defined_;
  std::vector<uint64_t> table_;
};

namespace detail
{

// masks of k-element subsets of {0..n-1} in lexicographic order of their element lists
template<class Fn>
bool for_each_combination( uint32_t n, uint32_t k, Fn&& fn )
{
  std::vector<uint32_t> c( k );
  for ( uint32_t i = 0; i < k; ++i )
    c[i] = i;
  while ( true )
  {
    uint64_t mask = 0;
    for ( auto i : c )
      mask |= uint64_t( 1 ) << i;
    if ( fn( mask ) )
      return true;
    int32_t i = static_cast<int32_t>( k ) - 1;
    while ( i >= 0 && c[i] == n - k + i )
      --i;
    if ( i < 0 )
      return false;
    ++c[i];
    for ( uint32_t j = i + 1; j < k; ++j )
      c[j] = c[j - 1] + 1;
  }
}

inline uint64_t subsets_up_to( uint32_t n, uint32_t k )
{
  uint64_t total = 0, binom = 1;
  for ( uint32_t s = 0; s <= k && s <= n; ++s )
  {
    total += binom;
    binom = binom * ( n - s ) / ( s + 1 );
  }
  return total;
}

} // namespace detail

/*! \brief Smallest delta-SR of x with at most max_size defined features.
 *
 * Sizes are tried in increasing order, and subsets of equal size in
 * lexicographic order of their sorted feature lists.
 */
inline std::optional<partial_instance> oracle_minimum_sr_bounded( const decision_diagram& d, const partial_instance& x,
                                                                  const threshold& delta, uint32_t max_size,
                                                                  const oracle_budget& budget = {} )
{
  require_dimension( d, x );
  require( x.is_total(), "x must be total" );
  auto const n = d.dimension();
  if ( n >= 63 || detail::subsets_up_to( n, max_size ) > budget.max_subsets )
    throw budget_exceeded( "oracle: too many candidate subsets" );
  bool const cls = evaluate( d, x );
  subset_counts counts( d, x, budget );
  std::optional<partial_instance> found;
  for ( uint32_t s = 0; s <= std::min( max_size, n ) && !found; ++s )
    detail::for_each_combination( n, s, [&]( uint64_t mask ) {
      if ( !delta.met_by( counts.prob( mask, cls ) ) )
        return false;
      found = counts.instance( mask );
      return true;
    } );
  return found;
}

inline partial_instance oracle_minimum_sr( const decision_diagram& d, const partial_instance& x, const threshold& delta,
                                           const oracle_budget& budget = {} )
{
  return *oracle_minimum_sr_bounded( d, x, delta, d.dimension(), budget );
}

namespace detail
{

// some proper subset of the defined positions of y satisfies pred
template<class Pred>
bool any_proper_subset( const subset_counts& counts, Pred&& pred )
{
  auto const full = ( uint64_t( 1 ) << counts.positions().size() ) - 1;
  for ( uint64_t m = 0; m < full; ++m )
    if ( pred( m ) )
      return true;
  return false;
}

inline void check_subset_budget( const partial_instance& y, const oracle_budget& budget )
{
  auto const k = y.defined_count();
  if ( k >= 63 || ( uint64_t( 1 ) << k ) > budget.max_subsets )
    throw budget_exceeded( "oracle: too many subsets of the defined features" );
}

} // namespace detail

/*! \brief y is a delta-SR for x and no proper subset of y is. */
inline bool oracle_is_minimal_sr( const decision_diagram& d, const partial_instance& x, const threshold& delta,
                                  const partial_instance& y, const oracle_budget& budget = {} )
{
  require_dimension( d, x );
  require( x.is_total(), "x must be total" );
  require( y.subsumed_by( x ), "y must be subsumed by x" );
  detail::check_subset_budget( y, budget );
  bool const cls = evaluate( d, x );
  subset_counts counts( d, y, budget );
  auto const full = ( uint64_t( 1 ) << counts.positions().size() ) - 1;
  if ( !delta.met_by( counts.prob( full, cls ) ) )
    return false;
  return !detail::any_proper_subset( counts, [&]( uint64_t m ) { return delta.met_by( counts.prob( m, cls ) ); } );
}

/*! \brief Some proper subset y' of y has Pr[d = 1 | y'] >= Pr[d = 1 | y]. */
inline bool oracle_check_sub_sr( const decision_diagram& d, const partial_instance& y, const oracle_budget& budget = {} )
{
  require_dimension( d, y );
  detail::check_subset_budget( y, budget );
  subset_counts counts( d, y, budget );
  auto const full = ( uint64_t( 1 ) << counts.positions().size() ) - 1;
  auto const target = counts.prob( full, true );
  return detail::any_proper_subset( counts, [&]( uint64_t m ) { return counts.prob( m, true ) >= target; } );
}

} // namespace dtx
