#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <string>

#include "error.hpp"

namespace dtx
{

using natural = boost::multiprecision::cpp_int;
using rational = boost::multiprecision::cpp_rational;

inline natural pow2( uint32_t e )
{
  natural r = 1;
  return r << e;
}

/*! \brief Exact probability count / 2^exp.
 *
 * Not reduced: the exponent is the number of undefined features the count
 * ranges over.  Comparisons normalize to a common exponent.
 */
struct dyadic
{
  natural count = 0;
  uint32_t exp = 0;

  static dyadic zero() { return {}; }
  static dyadic one() { return { 1, 0 }; }

  rational value() const { return rational( count, pow2( exp ) ); }

  dyadic rescaled( uint32_t e ) const
  {
    require( e >= exp, "dyadic: cannot lower exponent" );
    return { count << ( e - exp ), e };
  }

  friend std::strong_ordering operator<=>( const dyadic& a, const dyadic& b )
  {
    auto const e = std::max( a.exp, b.exp );
    natural const x = a.count << ( e - a.exp );
    natural const y = b.count << ( e - b.exp );
    if ( x < y )
      return std::strong_ordering::less;
    if ( x > y )
      return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }
  friend bool operator==( const dyadic& a, const dyadic& b ) { return ( a <=> b ) == 0; }

  // "count/2^exp" written with the power expanded
  std::string fraction() const { return count.str() + "/" + pow2( exp ).str(); }

  // exact decimal expansion
  std::string decimal() const
  {
    if ( exp == 0 )
      return count.str();
    natural five = 1;
    for ( uint32_t i = 0; i < exp; ++i )
      five *= 5;
    std::string digits = natural( count * five ).str();
    if ( digits.size() <= exp )
      digits.insert( 0, exp + 1 - digits.size(), '0' );
    auto const point = digits.size() - exp;
    std::string out = digits.substr( 0, point );
    std::string frac = digits.substr( point );
    while ( !frac.empty() && frac.back() == '0' )
      frac.pop_back();
    if ( !frac.empty() )
      out += "." + frac;
    return out;
  }
};

/*! \brief Threshold delta = num / den with 0 < delta <= 1. */
struct threshold
{
  natural num = 1;
  natural den = 1;

  threshold() = default;
  threshold( natural p, natural q ) : num( std::move( p ) ), den( std::move( q ) )
  {
    require( den > 0 && num > 0 && num <= den, "threshold must lie in (0,1]" );
    natural const g = boost::multiprecision::gcd( num, den );
    num /= g;
    den /= g;
  }

  static threshold from( const dyadic& d ) { return { d.count, pow2( d.exp ) }; }

  bool is_one() const { return num == den; }
  rational value() const { return rational( num, den ); }
  std::string str() const { return num.str() + "/" + den.str(); }

  // p >= delta, by cross multiplication
  bool met_by( const dyadic& p ) const { return p.count * den >= num << p.exp; }

  // ceil(delta * 2^n) and floor(delta * 2^n)
  natural ceil_scaled( uint32_t n ) const
  {
    natural const t = num << n;
    return ( t + den - 1 ) / den;
  }
  natural floor_scaled( uint32_t n ) const { return ( num << n ) / den; }

  // smallest L with 2^L >= 1/delta
  uint32_t ceil_log2_inverse() const
  {
    uint32_t l = 0;
    while ( ( num << l ) < den )
      ++l;
    return l;
  }

  friend bool operator==( const threshold& a, const threshold& b ) { return a.num == b.num && a.den == b.den; }
};

/*! \brief Parses "p/q", "1" or a decimal such as "0.95" exactly. */
inline threshold parse_threshold( const std::string& text )
{
  auto const bad = [&]() { return invalid_input( "bad threshold '" + text + "'" ); };
  auto const digits_only = []( const std::string& s ) {
    return !s.empty() && s.find_first_not_of( "0123456789" ) == std::string::npos;
  };
  if ( auto slash = text.find( '/' ); slash != std::string::npos )
  {
    auto const p = text.substr( 0, slash ), q = text.substr( slash + 1 );
    if ( !digits_only( p ) || !digits_only( q ) )
      throw bad();
    natural const pn( p ), qn( q );
    if ( qn == 0 || pn == 0 || pn > qn )
      throw bad();
    return { pn, qn };
  }
  auto const dot = text.find( '.' );
  std::string const whole = text.substr( 0, dot );
  std::string const frac = dot == std::string::npos ? "" : text.substr( dot + 1 );
  if ( ( whole.empty() && frac.empty() ) || ( !whole.empty() && !digits_only( whole ) ) ||
       ( dot != std::string::npos && !digits_only( frac ) ) )
    throw bad();
  natural const scale = boost::multiprecision::pow( natural( 10 ), static_cast<unsigned>( frac.size() ) );
  natural const num = natural( whole.empty() ? "0" : whole ) * scale + natural( frac.empty() ? "0" : frac );
  if ( num == 0 || num > scale )
    throw bad();
  return { num, scale };
}

} // namespace dtx
