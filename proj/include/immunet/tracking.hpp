#pragma once

#include "immunet/rng.hpp"
#include "immunet/world.hpp"

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

/* Binary-proximity tracking.
 *
 * Every sensor reports one bit per tick about a target: +1 when the target is
 * closer than it was on the previous tick, -1 otherwise. Candidate target
 * trajectories (particles) are weighted by how consistent their last step is
 * with consecutive readings of each sensor:
 *
 *   readings differ                        -> 1
 *   readings equal, ratio <= threshold     -> 1
 *   readings equal, threshold < ratio <= 1 -> ratio
 *   readings equal, ratio > 1              -> floor weight
 *
 * where ratio = d(sensor, curr) / d(sensor, prev) for "closer" readings and
 * its inverse for "farther" readings. */

namespace immunet {

enum class Sign : int
{
    Farther = -1,
    Closer = +1,
};

struct BinaryReading
{
    NodeId sensorId{ 0 };
    Tick tick{ 0 };
    Sign sign{ Sign::Farther };
};

struct Particle
{
    Position prevPosition;
    Position currPosition;
    double weight{ 1.0 };
};

struct TrackingConfig
{
    double threshold{ 0.5 };
    double floorWeight{ 0.01 };
    double noiseFlipProb{ 0.05 };
    std::size_t particleCount{ 500 };

    /// Throws std::invalid_argument on violated bounds.
    void
    validate() const;
};

/// Equal distances report Farther.
BinaryReading
sense( const Node& sensor, Position targetPrev, Position targetCurr, double noiseFlipProb, Rng& rng,
       Tick tick = 0 );

double
caseWeight( Position sensorPos, Sign prevSign, Sign currSign, const Particle& particle,
            double threshold, double floorWeight );

/// Product of per-sensor case weights, normalized over the particle set.
/// Requires one previous and one current reading per sensor and a non-empty set.
std::vector<Particle>
reweighParticles( std::span<const Node> sensors, std::span<const Sign> readingsPrev,
                  std::span<const Sign> readingsCurr, std::vector<Particle> particles,
                  const TrackingConfig& config );

/// Weighted mean of the current positions.
Position
estimatePosition( std::span<const Particle> particles );

enum class Motion
{
    Approaching,
    Receding,
    Suspicious,
};

std::string_view
toString( Motion motion );

/// Distances to the network centroid, oldest first; needs at least 3 samples.
///
/// Approaching: no step rises by more than `tolerance` and the window ends
/// more than `tolerance` below where it started. Receding mirrors that.
/// Anything else (loitering, reversing) is Suspicious.
Motion
classifyMotion( std::span<const double> window, double tolerance );

}  // namespace immunet
