#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "counting.hpp"
#include "transform.hpp"

namespace dtx
{

struct splitdp_options
{
  uint32_t max_split = 10; // refuse trees whose split number exceeds this
};

/*! \brief Dynamic program over a tree of bounded split number.
 *
 * Z is the set of features defined in y.  For a node u, Int(u) holds the
 * features of Z occurring both inside and outside the subtree of u, New(u)
 * those of Z occurring only inside, and Sync(u) those of New(u) occurring
 * under both children.  Entry (u, b, J) with J a subset of Int(u) is the
 * largest Pr[T_u = 1] over instances that keep y on J plus at most b
 * features of New(u); probabilities are stored as counts over 2^height(u).
 */
class split_dp
{
public:
  split_dp( const decision_diagram& t, const partial_instance& y, uint32_t k, const splitdp_options& opts = {} )
      : t_( t ), y_( y )
  {
    require_dimension( t, y );
    require( t.is_tree(), "split_dp needs a tree" );
    auto const sn = split_number( t );
    if ( sn > opts.max_split )
      throw budget_exceeded( "split number " + std::to_string( sn ) + " exceeds bound " +
                             std::to_string( opts.max_split ) );
    k_ = std::min( k, y.defined_count() );
    classify();
    fill();
  }

  uint32_t budget() const { return k_; }

  const std::vector<uint32_t>& int_features( uint32_t u ) const { return info_[u].inter; }
  const std::vector<uint32_t>& new_features( uint32_t u ) const { return info_[u].fresh; }
  const std::vector<uint32_t>& sync_features( uint32_t u ) const { return info_[u].sync; }

  // max Pr[T_u = 1] over instances keeping y on J and at most s defined features in total
  std::optional<dyadic> cell( uint32_t u, uint32_t s, const std::vector<uint32_t>& j_features ) const
  {
    auto const& in = info_[u];
    uint64_t mask = 0;
    for ( auto f : j_features )
    {
      auto it = std::find( in.inter.begin(), in.inter.end(), f );
      require( it != in.inter.end(), "feature not in Int(u)" );
      mask |= uint64_t( 1 ) << ( it - in.inter.begin() );
    }
    auto const j = static_cast<uint32_t>( j_features.size() );
    if ( j > s )
      return std::nullopt;
    auto const b = std::min( s - j, k_ );
    return dyadic{ entry( u, b, mask ), height_[u] };
  }

  dyadic best( uint32_t b ) const { return { entry( t_.root(), std::min( b, k_ ), 0 ), height_[t_.root()] }; }
  dyadic best() const { return best( k_ ); }

  // instance attaining best(b)
  partial_instance witness( uint32_t b ) const
  {
    partial_instance out( y_.size() );
    trace( t_.root(), std::min( b, k_ ), 0, out );
    return out;
  }
  partial_instance witness() const { return witness( k_ ); }

private:
  struct node_info
  {
    std::vector<uint32_t> inter, fresh, sync;
    std::vector<int32_t> inter_in_child[2]; // bit of Int(u) -> bit of Int(child), or -1
    std::vector<int32_t> sync_in_child[2];
    enum class label_kind : uint8_t
    {
      free,     // not in Z
      inter,    // in Int(u)
      fresh     // in New(u)
    } label = label_kind::free;
    uint32_t label_bit = 0;
  };

  struct choice
  {
    bool follow = false;
    bool keep_label = false;
    uint32_t sync_mask = 0;
    uint32_t split = 0; // budget of the 0-child when mixing
  };

  size_t slot( uint32_t u, uint32_t b, uint64_t mask ) const { return ( size_t( b ) << info_[u].inter.size() ) | mask; }
  const natural& entry( uint32_t u, uint32_t b, uint64_t mask ) const { return table_[u][slot( u, b, mask )]; }

  static std::vector<uint32_t> members( const feature_set& s )
  {
    std::vector<uint32_t> out;
    for ( auto f = s.find_first(); f != feature_set::npos; f = s.find_next( f ) )
      out.push_back( static_cast<uint32_t>( f ) );
    return out;
  }

  void classify()
  {
    auto const tf = compute_tree_features( t_ );
    feature_set z( t_.dimension() );
    for ( auto f : y_.defined_positions() )
      z.set( f );
    info_.resize( t_.size() );
    height_.assign( t_.size(), 0 );
    for ( auto u : t_.bottom_up() )
    {
      auto& in = info_[u];
      in.inter = members( tf.down[u] & tf.up[u] & z );
      in.fresh = members( ( tf.down[u] - tf.up[u] ) & z );
      require( in.inter.size() < 31, "Int set too large" );
      auto const& nd = t_[u];
      if ( nd.is_leaf() )
        continue;
      height_[u] = 1 + std::max( height_[nd.lo], height_[nd.hi] );
      in.sync = members( ( tf.down[u] - tf.up[u] ) & z & tf.down[nd.lo] & tf.down[nd.hi] );
      for ( int c = 0; c < 2; ++c )
      {
        auto const& child = info_[nd.child( c )].inter;
        auto pos = [&]( uint32_t f ) {
          auto it = std::find( child.begin(), child.end(), f );
          return it == child.end() ? -1 : static_cast<int32_t>( it - child.begin() );
        };
        for ( auto f : in.inter )
          in.inter_in_child[c].push_back( pos( f ) );
        for ( auto f : in.sync )
          in.sync_in_child[c].push_back( pos( f ) );
      }
      auto const f = static_cast<uint32_t>( nd.feature );
      if ( auto it = std::find( in.inter.begin(), in.inter.end(), f ); it != in.inter.end() )
      {
        in.label = node_info::label_kind::inter;
        in.label_bit = static_cast<uint32_t>( it - in.inter.begin() );
      }
      else if ( z.test( f ) )
        in.label = node_info::label_kind::fresh;
    }
  }

  static uint64_t remap( uint64_t mask, const std::vector<int32_t>& to )
  {
    uint64_t out = 0;
    for ( size_t j = 0; j < to.size(); ++j )
      if ( ( mask >> j ) & 1 && to[j] >= 0 )
        out |= uint64_t( 1 ) << to[j];
    return out;
  }

  void fill()
  {
    table_.resize( t_.size() );
    back_.resize( t_.size() );
    for ( auto u : t_.bottom_up() )
    {
      auto const& nd = t_[u];
      auto const& in = info_[u];
      auto const width = size_t( 1 ) << in.inter.size();
      table_[u].assign( ( k_ + 1 ) * width, natural( 0 ) );
      back_[u].assign( ( k_ + 1 ) * width, choice{} );
      if ( nd.is_leaf() )
      {
        for ( uint32_t b = 0; b <= k_; ++b )
          table_[u][slot( u, b, 0 )] = nd.label ? 1 : 0;
        continue;
      }
      auto const h = height_[u];
      uint32_t const c0 = nd.lo, c1 = nd.hi;
      auto const sync_subsets = uint32_t( 1 ) << in.sync.size();
      bool const label_defined_in_y = y_.defined( nd.feature );
      uint32_t const along = label_defined_in_y ? nd.child( y_.bit( nd.feature ) ) : c0;
      int const along_side = along == c1;

      for ( uint64_t j = 0; j < width; ++j )
      {
        uint64_t const base0 = remap( j, in.inter_in_child[0] );
        uint64_t const base1 = remap( j, in.inter_in_child[1] );
        bool const forced = in.label == node_info::label_kind::inter && ( ( j >> in.label_bit ) & 1 );
        for ( uint32_t b = 0; b <= k_; ++b )
        {
          natural best = -1;
          choice pick;
          auto consider = [&]( natural v, const choice& c ) {
            if ( v > best )
            {
              best = std::move( v );
              pick = c;
            }
          };
          for ( uint32_t jp = 0; jp < sync_subsets; ++jp )
          {
            auto const used = static_cast<uint32_t>( __builtin_popcount( jp ) );
            if ( used > b )
              continue;
            uint64_t const m0 = base0 | remap( jp, in.sync_in_child[0] );
            uint64_t const m1 = base1 | remap( jp, in.sync_in_child[1] );
            auto follow = [&]( uint32_t rest, bool keep ) {
              auto const child_mask = along_side ? m1 : m0;
              consider( entry( along, rest, child_mask ) << ( h - height_[along] ), { true, keep, jp, 0 } );
            };
            auto mix = [&]( uint32_t rest ) {
              for ( uint32_t b0 = 0; b0 <= rest; ++b0 )
                consider( ( entry( c0, b0, m0 ) << ( h - 1 - height_[c0] ) ) +
                              ( entry( c1, rest - b0, m1 ) << ( h - 1 - height_[c1] ) ),
                          { false, false, jp, b0 } );
            };
            if ( forced )
              follow( b - used, false );
            else if ( in.label == node_info::label_kind::fresh )
            {
              if ( b - used >= 1 )
                follow( b - used - 1, true );
              mix( b - used );
            }
            else
              mix( b - used );
          }
          table_[u][slot( u, b, j )] = best;
          back_[u][slot( u, b, j )] = pick;
        }
      }
    }
  }

  void trace( uint32_t u, uint32_t b, uint64_t j, partial_instance& out ) const
  {
    auto const& nd = t_[u];
    if ( nd.is_leaf() )
      return;
    auto const& in = info_[u];
    auto const& c = back_[u][slot( u, b, j )];
    for ( size_t s = 0; s < in.sync.size(); ++s )
      if ( ( c.sync_mask >> s ) & 1 )
        out.set( in.sync[s], y_[in.sync[s]] );
    auto const used = static_cast<uint32_t>( __builtin_popcount( c.sync_mask ) );
    uint64_t const m0 = remap( j, in.inter_in_child[0] ) | remap( c.sync_mask, in.sync_in_child[0] );
    uint64_t const m1 = remap( j, in.inter_in_child[1] ) | remap( c.sync_mask, in.sync_in_child[1] );
    if ( c.follow )
    {
      if ( c.keep_label )
        out.set( nd.feature, y_[nd.feature] );
      bool const side = y_.bit( nd.feature );
      trace( nd.child( side ), b - used - c.keep_label, side ? m1 : m0, out );
    }
    else
    {
      trace( nd.lo, c.split, m0, out );
      trace( nd.hi, b - used - c.split, m1, out );
    }
  }

  const decision_diagram& t_;
  partial_instance y_;
  uint32_t k_ = 0;
  std::vector<node_info> info_;
  std::vector<uint32_t> height_;
  std::vector<std::vector<natural>> table_;
  std::vector<std::vector<choice>> back_;
};

struct dp_answer
{
  bool yes = false;
  dyadic best;
  std::optional<partial_instance> witness;
};

/*! \brief Is there y' subsumed by y with at most k defined features and Pr[T = 1 | y'] >= delta? */
inline dp_answer dp_check_minimum( const decision_diagram& t, const partial_instance& y, const threshold& delta,
                                   uint32_t k, const splitdp_options& opts = {} )
{
  split_dp dp( t, y, k, opts );
  dp_answer a;
  a.best = dp.best();
  a.yes = delta.met_by( a.best );
  if ( a.yes )
    a.witness = dp.witness();
  return a;
}

/*! \brief Minimum-size delta-SR for x; the table is built once and scanned from k = 0. */
inline partial_instance dp_minimum_sr( const decision_diagram& t, const partial_instance& x, const threshold& delta,
                                       const splitdp_options& opts = {} )
{
  require_dimension( t, x );
  require( x.is_total(), "x must be total" );
  auto const target = evaluate( t, x ) ? t : complement( t );
  split_dp dp( target, x, x.size(), opts );
  for ( uint32_t k = 0; k <= x.size(); ++k )
    if ( delta.met_by( dp.best( k ) ) )
      return dp.witness( k );
  throw std::logic_error( "dp_minimum_sr: x itself must qualify" );
}

} // namespace dtx
