#pragma once

#include "immunet/ais.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

namespace immunet {

/// Peak of the detector-placement landscape, attained at (0.5, 0.5).
inline constexpr double kFitnessOptimum = 0.87890625;

/// (15 x y (1-x) (1-y) sin(9 pi x) sin(9 pi y))^2 over the unit square.
/// Throws std::invalid_argument outside [0, 1]^2.
double
fitness( double x, double y );

struct ContinuousAntibody
{
    double x{ 0.0 };
    double y{ 0.0 };
    double fitness{ 0.0 };

    friend bool operator==( const ContinuousAntibody&, const ContinuousAntibody& ) = default;
};

struct OptimizerReport
{
    ContinuousAntibody best;
    std::size_t generationsUsed{ 0 };
    /// Best memory fitness after each generation.
    std::vector<double> history;

    friend bool operator==( const OptimizerReport&, const OptimizerReport& ) = default;
};

using Landscape = std::function<double( double x, double y )>;

/// Reference parameter set: 50 antibodies, 20 selected, maturity 80,
/// 600 generations.
ClonalParams
defaultOptimizerParams();

/// Clonal selection over continuous genomes with an elitist memory.
OptimizerReport
optimize( const ClonalParams& params, std::uint64_t seed, const Landscape& landscape = fitness );

struct GridOptimum
{
    double x{ 0.0 };
    double y{ 0.0 };
    double fitness{ 0.0 };
};

/// Exhaustive scan of the (resolution+1)^2 lattice; ties keep the
/// lexicographically smallest (x, y). resolution >= 2.
GridOptimum
gridOracle( std::size_t resolution, const Landscape& landscape = fitness );

/// "x,y,fitness" rows of the lattice, header included.
void
writeLattice( std::ostream& out, std::size_t resolution );

void
writeHistory( std::ostream& out, const OptimizerReport& report );

}  // namespace immunet
