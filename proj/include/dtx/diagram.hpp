#pragma once

#include <boost/dynamic_bitset.hpp>

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "error.hpp"

namespace dtx
{

using feature_set = boost::dynamic_bitset<>;

struct dd_node
{
  static constexpr int32_t leaf_feature = -1;

  int32_t feature = leaf_feature; // 0-based, or leaf_feature
  uint32_t lo = 0;                // child on feature = 0
  uint32_t hi = 0;                // child on feature = 1
  bool label = false;             // leaves only

  bool is_leaf() const { return feature == leaf_feature; }
  uint32_t child( bool b ) const { return b ? hi : lo; }
};

/*! \brief Free binary decision diagram over features 0..dimension-1.
 *
 * Validated on construction: all nodes reachable from the root, acyclic,
 * and no feature repeated along a root-to-leaf path.  A tree is a diagram
 * in which every non-root node has exactly one parent.
 */
class decision_diagram
{
public:
  decision_diagram() : decision_diagram( 0, { dd_node{} }, 0 ) {}

  decision_diagram( uint32_t dimension, std::vector<dd_node> nodes, uint32_t root )
      : dim_( dimension ), nodes_( std::move( nodes ) ), root_( root )
  {
    validate();
  }

  uint32_t dimension() const { return dim_; }
  uint32_t size() const { return static_cast<uint32_t>( nodes_.size() ); }
  uint32_t root() const { return root_; }
  bool is_tree() const { return is_tree_; }
  const dd_node& operator[]( uint32_t u ) const { return nodes_[u]; }
  const std::vector<dd_node>& nodes() const { return nodes_; }

  // every node after its children
  const std::vector<uint32_t>& bottom_up() const { return order_; }

  std::vector<uint32_t> leaves() const
  {
    std::vector<uint32_t> out;
    for ( auto u : order_ )
      if ( nodes_[u].is_leaf() )
        out.push_back( u );
    return out;
  }
  uint32_t leaf_count() const { return static_cast<uint32_t>( leaves().size() ); }

  // features occurring below each node, the node itself included
  std::vector<feature_set> features_below() const
  {
    std::vector<feature_set> fs( nodes_.size(), feature_set( dim_ ) );
    for ( auto u : order_ )
    {
      auto const& nd = nodes_[u];
      if ( nd.is_leaf() )
        continue;
      fs[u] = fs[nd.lo] | fs[nd.hi];
      fs[u].set( nd.feature );
    }
    return fs;
  }

  feature_set used_features() const { return features_below()[root_]; }

private:
  void validate()
  {
    auto const n = size();
    require( n > 0, "empty diagram" );
    require( root_ < n, "root out of range" );
    for ( auto const& nd : nodes_ )
    {
      if ( nd.is_leaf() )
        continue;
      require( nd.feature >= 0 && static_cast<uint32_t>( nd.feature ) < dim_, "feature out of range" );
      require( nd.lo < n && nd.hi < n, "child out of range" );
    }

    // iterative DFS: reachability, cycle check, post-order
    std::vector<uint8_t> color( n, 0 );
    std::vector<std::pair<uint32_t, uint8_t>> stack{ { root_, 0 } };
    order_.clear();
    order_.reserve( n );
    while ( !stack.empty() )
    {
      auto& [u, step] = stack.back();
      auto const& nd = nodes_[u];
      if ( step == 0 )
      {
        color[u] = 1;
      }
      if ( nd.is_leaf() || step == 2 )
      {
        color[u] = 2;
        order_.push_back( u );
        stack.pop_back();
        continue;
      }
      uint32_t const c = step == 0 ? nd.lo : nd.hi;
      ++step;
      require( color[c] != 1, "diagram has a cycle" );
      if ( color[c] == 0 )
        stack.push_back( { c, 0 } );
    }
    require( order_.size() == n, "diagram has unreachable nodes" );

    std::vector<uint32_t> parents( n, 0 );
    for ( auto const& nd : nodes_ )
      if ( !nd.is_leaf() )
      {
        ++parents[nd.lo];
        ++parents[nd.hi];
      }
    is_tree_ = parents[root_] == 0;
    for ( uint32_t u = 0; u < n && is_tree_; ++u )
      if ( u != root_ && parents[u] != 1 )
        is_tree_ = false;

    // free: no node's feature reappears below it
    std::vector<feature_set> fs( n, feature_set( dim_ ) );
    for ( auto u : order_ )
    {
      auto const& nd = nodes_[u];
      if ( nd.is_leaf() )
        continue;
      fs[u] = fs[nd.lo] | fs[nd.hi];
      require( !fs[u].test( nd.feature ), "feature " + std::to_string( nd.feature + 1 ) + " repeats on a path" );
      fs[u].set( nd.feature );
    }
  }

  uint32_t dim_ = 0;
  std::vector<dd_node> nodes_;
  uint32_t root_ = 0;
  bool is_tree_ = true;
  std::vector<uint32_t> order_;
};

/*! \brief Incremental construction; build() keeps only what the root reaches. */
class diagram_builder
{
public:
  static constexpr uint32_t keep = std::numeric_limits<uint32_t>::max();

  explicit diagram_builder( uint32_t dimension ) : dim_( dimension ) {}

  uint32_t dimension() const { return dim_; }

  uint32_t leaf( bool label )
  {
    nodes_.push_back( dd_node{ dd_node::leaf_feature, 0, 0, label } );
    return static_cast<uint32_t>( nodes_.size() - 1 );
  }

  uint32_t inner( uint32_t feature, uint32_t lo, uint32_t hi )
  {
    require( feature < dim_, "feature out of range" );
    nodes_.push_back( dd_node{ static_cast<int32_t>( feature ), lo, hi, false } );
    return static_cast<uint32_t>( nodes_.size() - 1 );
  }

  // copies d with features shifted by offset; on_leaf may return a builder
  // node to use instead of a copy of the leaf, or keep
  uint32_t import( const decision_diagram& d, uint32_t offset = 0,
                   const std::function<uint32_t( uint32_t, bool )>& on_leaf = {} )
  {
    std::vector<uint32_t> map( d.size() );
    for ( auto u : d.bottom_up() )
    {
      auto const& nd = d[u];
      if ( nd.is_leaf() )
      {
        uint32_t r = on_leaf ? on_leaf( u, nd.label ) : keep;
        map[u] = r == keep ? leaf( nd.label ) : r;
      }
      else
        map[u] = inner( nd.feature + offset, map[nd.lo], map[nd.hi] );
    }
    return map[d.root()];
  }

  // map_out, when given, receives builder index -> diagram index (keep if dropped)
  decision_diagram build( uint32_t root, std::vector<uint32_t>* map_out = nullptr ) const
  {
    require( root < nodes_.size(), "root out of range" );
    // breadth-first renumbering, root at index 0
    std::vector<uint32_t> map( nodes_.size(), keep );
    std::vector<uint32_t> src{ root };
    map[root] = 0;
    for ( size_t head = 0; head < src.size(); ++head )
    {
      auto const& nd = nodes_[src[head]];
      if ( nd.is_leaf() )
        continue;
      for ( auto c : { nd.lo, nd.hi } )
        if ( map[c] == keep )
        {
          map[c] = static_cast<uint32_t>( src.size() );
          src.push_back( c );
        }
    }
    std::vector<dd_node> out;
    out.reserve( src.size() );
    for ( auto s : src )
    {
      auto nd = nodes_[s];
      if ( !nd.is_leaf() )
      {
        nd.lo = map[nd.lo];
        nd.hi = map[nd.hi];
      }
      out.push_back( nd );
    }
    if ( map_out )
      *map_out = std::move( map );
    return decision_diagram( dim_, std::move( out ), 0 );
  }

private:
  uint32_t dim_;
  std::vector<dd_node> nodes_;
};

} // namespace dtx
