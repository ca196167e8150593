#include "immunet/tracking.hpp"

#include <cassert>
#include <stdexcept>

namespace immunet {

void
TrackingConfig::validate() const
{
    if ( !( threshold > 0.0 && threshold < 1.0 ) ) {
        throw std::invalid_argument( "tracking threshold must lie in (0, 1)" );
    }
    if ( !( floorWeight > 0.0 && floorWeight <= threshold ) ) {
        throw std::invalid_argument( "tracking floor weight must lie in (0, threshold]" );
    }
    if ( !( noiseFlipProb >= 0.0 && noiseFlipProb < 0.5 ) ) {
        throw std::invalid_argument( "tracking noise flip probability must lie in [0, 0.5)" );
    }
    if ( particleCount == 0 ) {
        throw std::invalid_argument( "tracking particle count must be positive" );
    }
}

BinaryReading
sense( const Node& sensor, Position targetPrev, Position targetCurr, double noiseFlipProb, Rng& rng,
       Tick tick )
{
    const bool closer = distance( sensor.position, targetCurr ) < distance( sensor.position, targetPrev );
    // Always draw so the stream position does not depend on the noise level.
    const bool flip = rng.uniform() < noiseFlipProb;
    const bool reported = closer != flip;
    return { sensor.id, tick, reported ? Sign::Closer : Sign::Farther };
}

double
caseWeight( Position sensorPos, Sign prevSign, Sign currSign, const Particle& particle,
            double threshold, double floorWeight )
{
    if ( prevSign != currSign ) {
        return 1.0;
    }
    const double dPrev = distance( sensorPos, particle.prevPosition );
    const double dCurr = distance( sensorPos, particle.currPosition );
    if ( dPrev == 0.0 || dCurr == 0.0 ) {
        return 1.0;
    }
    const double ratio = currSign == Sign::Closer ? dCurr / dPrev : dPrev / dCurr;
    if ( ratio <= threshold ) {
        return 1.0;
    }
    if ( ratio <= 1.0 ) {
        return ratio;
    }
    return floorWeight;
}

std::vector<Particle>
reweighParticles( std::span<const Node> sensors, std::span<const Sign> readingsPrev,
                  std::span<const Sign> readingsCurr, std::vector<Particle> particles,
                  const TrackingConfig& config )
{
    if ( readingsPrev.size() != sensors.size() || readingsCurr.size() != sensors.size() ) {
        throw std::invalid_argument( "one previous and one current reading required per sensor" );
    }
    if ( particles.empty() ) {
        throw std::invalid_argument( "particle set must not be empty" );
    }

    double total = 0.0;
    for ( auto& particle : particles ) {
        double raw = 1.0;
        for ( std::size_t i = 0; i < sensors.size(); ++i ) {
            raw *= caseWeight( sensors[i].position, readingsPrev[i], readingsCurr[i], particle,
                               config.threshold, config.floorWeight );
        }
        particle.weight = raw;
        total += raw;
    }
    // floorWeight > 0 keeps every raw weight positive.
    assert( total > 0.0 );
    for ( auto& particle : particles ) {
        particle.weight /= total;
    }
    return particles;
}

Position
estimatePosition( std::span<const Particle> particles )
{
    Position mean{ 0.0, 0.0 };
    double mass = 0.0;
    for ( const auto& particle : particles ) {
        mean.x += particle.weight * particle.currPosition.x;
        mean.y += particle.weight * particle.currPosition.y;
        mass += particle.weight;
    }
    if ( mass > 0.0 ) {
        mean.x /= mass;
        mean.y /= mass;
    }
    return mean;
}

std::string_view
toString( Motion motion )
{
    switch ( motion ) {
    case Motion::Approaching: return "Approaching";
    case Motion::Receding:    return "Receding";
    case Motion::Suspicious:  return "Suspicious";
    }
    return "?";
}

Motion
classifyMotion( std::span<const double> window, double tolerance )
{
    if ( window.size() < 3 ) {
        throw std::invalid_argument( "motion window needs at least 3 samples" );
    }
    bool neverRises = true;
    bool neverFalls = true;
    for ( std::size_t i = 1; i < window.size(); ++i ) {
        const double step = window[i] - window[i - 1];
        neverRises = neverRises && step <= tolerance;
        neverFalls = neverFalls && -step <= tolerance;
    }
    const double net = window.back() - window.front();
    if ( neverRises && net < -tolerance ) {
        return Motion::Approaching;
    }
    if ( neverFalls && net > tolerance ) {
        return Motion::Receding;
    }
    return Motion::Suspicious;
}

}  // namespace immunet
