#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace immunet {

/// Seeded random source with platform-independent draws.
///
/// std::mt19937_64 output is fixed by the standard, but the standard
/// distributions are not, so every draw is derived from raw engine output.
class Rng
{
public:
    explicit Rng( std::uint64_t seed ) : m_engine( seed ) {}

    std::uint64_t
    next()
    {
        return m_engine();
    }

    /// Uniform in [0, 1).
    double
    uniform()
    {
        return static_cast<double>( m_engine() >> 11 ) * 0x1.0p-53;
    }

    double
    uniform( double lo, double hi )
    {
        return lo + ( hi - lo ) * uniform();
    }

    /// Uniform integer in [0, n). n must be positive.
    std::uint64_t
    below( std::uint64_t n )
    {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t value = m_engine();
        while ( value >= limit ) {
            value = m_engine();
        }
        return value % n;
    }

    bool
    bernoulli( double p )
    {
        return uniform() < p;
    }

    /// Box-Muller; one fresh pair per call so the stream position is predictable.
    double
    normal( double mean, double sigma )
    {
        const double u1 = 1.0 - uniform();  // (0, 1]
        const double u2 = uniform();
        const double radius = std::sqrt( -2.0 * std::log( u1 ) );
        return mean + sigma * radius * std::cos( 2.0 * std::numbers::pi * u2 );
    }

    /// Independent child stream, e.g. one per node or per purpose.
    Rng
    fork( std::uint64_t stream ) const
    {
        return Rng( splitmix( m_seedBase ^ splitmix( stream ) ) );
    }

    static std::uint64_t
    splitmix( std::uint64_t x )
    {
        x += 0x9E3779B97F4A7C15ULL;
        x = ( x ^ ( x >> 30 ) ) * 0xBF58476D1CE4E5B9ULL;
        x = ( x ^ ( x >> 27 ) ) * 0x94D049BB133111EBULL;
        return x ^ ( x >> 31 );
    }

private:
    std::mt19937_64 m_engine;
    std::uint64_t m_seedBase{ m_engine() };
};

}  // namespace immunet
