#include "immunet/optimizer.hpp"

#include <fmt/format.h>

#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace immunet {

double
fitness( double x, double y )
{
    if ( !( x >= 0.0 && x <= 1.0 && y >= 0.0 && y <= 1.0 ) ) {
        throw std::invalid_argument( fmt::format( "fitness domain is [0,1]^2, got ({}, {})", x, y ) );
    }
    constexpr double kPi = std::numbers::pi;
    const double value = 15.0 * x * y * ( 1.0 - x ) * ( 1.0 - y ) * std::sin( 9.0 * kPi * x )
                         * std::sin( 9.0 * kPi * y );
    return value * value;
}

ClonalParams
defaultOptimizerParams()
{
    ClonalParams params;
    params.populationSize = 50;
    params.selectCount = 20;
    params.cloneBudget = 20;
    params.maturityLevel = 80.0;
    params.replaceWorstN = 5;
    params.maxGenerations = 600;
    params.normalizeAffinity = true;
    return params;
}

OptimizerReport
optimize( const ClonalParams& params, std::uint64_t seed, const Landscape& landscape )
{
    params.validate();
    Rng rng( seed );
    const AffinityFn<UnitPoint> eval = [&]( const UnitPoint& p ) { return landscape( p.x, p.y ); };

    std::vector<Antibody<UnitPoint>> population;
    population.reserve( params.populationSize );
    for ( std::size_t i = 0; i < params.populationSize; ++i ) {
        const UnitPoint point = freshGenome( UnitPoint{}, rng );
        population.push_back( { point, eval( point ) } );
    }

    OptimizerReport report;
    bool haveBest = false;
    for ( std::size_t generation = 0; generation < params.maxGenerations; ++generation ) {
        auto step = clonalStep( std::move( population ), eval, params, rng );
        population = std::move( step.population );
        for ( const auto& memory : step.memoryAdditions ) {
            if ( !haveBest || memory.affinity > report.best.fitness ) {
                report.best = { memory.genome.x, memory.genome.y, memory.affinity };
                haveBest = true;
            }
        }
        report.history.push_back( report.best.fitness );
        report.generationsUsed = generation + 1;
    }
    return report;
}

GridOptimum
gridOracle( std::size_t resolution, const Landscape& landscape )
{
    if ( resolution < 2 ) {
        throw std::invalid_argument( "grid resolution must be at least 2" );
    }
    const auto step = static_cast<double>( resolution );
    GridOptimum best{ 0.0, 0.0, -1.0 };
    for ( std::size_t i = 0; i <= resolution; ++i ) {
        for ( std::size_t j = 0; j <= resolution; ++j ) {
            const double x = static_cast<double>( i ) / step;
            const double y = static_cast<double>( j ) / step;
            const double value = landscape( x, y );
            if ( value > best.fitness ) {
                best = { x, y, value };
            }
        }
    }
    return best;
}

void
writeLattice( std::ostream& out, std::size_t resolution )
{
    out << "x,y,fitness\n";
    const auto step = static_cast<double>( resolution );
    for ( std::size_t i = 0; i <= resolution; ++i ) {
        for ( std::size_t j = 0; j <= resolution; ++j ) {
            const double x = static_cast<double>( i ) / step;
            const double y = static_cast<double>( j ) / step;
            out << fmt::format( "{:.6f},{:.6f},{:.9f}\n", x, y, fitness( x, y ) );
        }
    }
}

void
writeHistory( std::ostream& out, const OptimizerReport& report )
{
    out << "generation,best_fitness\n";
    for ( std::size_t g = 0; g < report.history.size(); ++g ) {
        out << fmt::format( "{},{:.9f}\n", g + 1, report.history[g] );
    }
}

}  // namespace immunet
