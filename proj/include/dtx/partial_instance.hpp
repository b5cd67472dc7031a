#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "error.hpp"

namespace dtx
{

enum class value : uint8_t
{
  zero = 0,
  one = 1,
  undef = 2
};

/*! \brief Vector over {0, 1, undefined}; 0-based positions. */
class partial_instance
{
public:
  partial_instance() = default;
  explicit partial_instance( uint32_t n, value v = value::undef ) : vals_( n, v ) {}

  static partial_instance parse( const std::string& s )
  {
    partial_instance y( static_cast<uint32_t>( s.size() ) );
    for ( uint32_t i = 0; i < s.size(); ++i )
    {
      switch ( s[i] )
      {
      case '0': y.vals_[i] = value::zero; break;
      case '1': y.vals_[i] = value::one; break;
      case '*': y.vals_[i] = value::undef; break;
      default: throw invalid_input( "bad partial instance '" + s + "'" );
      }
    }
    return y;
  }

  // total instance from the low n bits of a mask, bit i is position i
  static partial_instance from_bits( uint64_t bits, uint32_t n )
  {
    partial_instance x( n );
    for ( uint32_t i = 0; i < n; ++i )
      x.vals_[i] = ( bits >> i ) & 1 ? value::one : value::zero;
    return x;
  }

  std::string str() const
  {
    std::string s( vals_.size(), '*' );
    for ( uint32_t i = 0; i < vals_.size(); ++i )
      if ( vals_[i] != value::undef )
        s[i] = vals_[i] == value::one ? '1' : '0';
    return s;
  }

  uint32_t size() const { return static_cast<uint32_t>( vals_.size() ); }
  value operator[]( uint32_t i ) const { return vals_[i]; }
  void set( uint32_t i, value v ) { vals_[i] = v; }
  void set( uint32_t i, bool b ) { vals_[i] = b ? value::one : value::zero; }
  bool defined( uint32_t i ) const { return vals_[i] != value::undef; }
  bool bit( uint32_t i ) const { return vals_[i] == value::one; }

  uint32_t undefined_count() const
  {
    uint32_t c = 0;
    for ( auto v : vals_ )
      c += v == value::undef;
    return c;
  }
  uint32_t defined_count() const { return size() - undefined_count(); }
  bool is_total() const { return undefined_count() == 0; }

  std::vector<uint32_t> defined_positions() const
  {
    std::vector<uint32_t> out;
    for ( uint32_t i = 0; i < vals_.size(); ++i )
      if ( defined( i ) )
        out.push_back( i );
    return out;
  }

  // true iff every defined position of *this agrees with other
  bool subsumed_by( const partial_instance& other ) const
  {
    require( size() == other.size(), "dimension mismatch" );
    for ( uint32_t i = 0; i < vals_.size(); ++i )
      if ( defined( i ) && vals_[i] != other.vals_[i] )
        return false;
    return true;
  }

  partial_instance without( uint32_t i ) const
  {
    auto y = *this;
    y.vals_[i] = value::undef;
    return y;
  }

  // keeps the positions listed in keep, blanks the rest
  template<class Range>
  partial_instance keep_only( const Range& keep ) const
  {
    partial_instance y( size() );
    for ( uint32_t i : keep )
      y.vals_[i] = vals_[i];
    return y;
  }

  friend bool operator==( const partial_instance&, const partial_instance& ) = default;

private:
  std::vector<value> vals_;
};

} // namespace dtx
