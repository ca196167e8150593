#include "immunet/optimizer.hpp"

#include <doctest.h>

#include <algorithm>
#include <sstream>
#include <string>

using namespace immunet;

TEST_CASE( "fitness landscape" )
{
    CHECK( fitness( 0.5, 0.5 ) == doctest::Approx( kFitnessOptimum ).epsilon( 1e-12 ) );
    CHECK( fitness( 7.0 / 18.0, 0.5 ) == doctest::Approx( 0.7942440414951989 ).epsilon( 1e-9 ) );
    for ( int i = 0; i <= 20; ++i ) {
        const double t = i / 20.0;
        CHECK( fitness( t, 0.0 ) == 0.0 );
        CHECK( fitness( 1.0, t ) == 0.0 );
        CHECK( fitness( t, 0.3 ) == doctest::Approx( fitness( 0.3, t ) ) );
        CHECK( fitness( t, 0.7 ) >= 0.0 );
    }
    CHECK_THROWS_AS( fitness( -0.01, 0.5 ), std::invalid_argument );
    CHECK_THROWS_AS( fitness( 0.5, 1.01 ), std::invalid_argument );
}

TEST_CASE( "grid oracle" )
{
    const GridOptimum coarse = gridOracle( 10 );
    CHECK( coarse.x == 0.5 );
    CHECK( coarse.y == 0.5 );
    const GridOptimum tilted = gridOracle( 4, []( double x, double y ) { return x + 2 * y; } );
    CHECK( tilted.x == 1.0 );
    CHECK( tilted.y == 1.0 );
    const GridOptimum flat = gridOracle( 4, []( double, double ) { return 1.0; } );
    CHECK( flat.x == 0.0 );
    CHECK( flat.y == 0.0 );
    CHECK_THROWS_AS( gridOracle( 1 ), std::invalid_argument );
}

TEST_CASE( "default optimizer parameters" )
{
    const ClonalParams params = defaultOptimizerParams();
    CHECK( params.populationSize == 50 );
    CHECK( params.selectCount == 20 );
    CHECK( params.cloneBudget == 20 );
    CHECK( params.maturityLevel == 80.0 );
    CHECK( params.replaceWorstN == 5 );
    CHECK( params.maxGenerations == 600 );
    CHECK( params.normalizeAffinity );
}

TEST_CASE( "optimizer is deterministic and elitist" )
{
    ClonalParams params = defaultOptimizerParams();
    params.maxGenerations = 120;
    const OptimizerReport a = optimize( params, 7 );
    const OptimizerReport b = optimize( params, 7 );
    CHECK( a == b );
    CHECK( a.generationsUsed == 120 );
    REQUIRE( a.history.size() == 120 );
    CHECK( std::is_sorted( a.history.begin(), a.history.end() ) );
    CHECK( a.history.back() == a.best.fitness );
    CHECK( a.best.fitness == doctest::Approx( fitness( a.best.x, a.best.y ) ) );
    CHECK( optimize( params, 8 ).history != a.history );
}

TEST_CASE( "optimizer with reference settings reaches the optimum" )
{
    const OptimizerReport report = optimize( defaultOptimizerParams(), 7 );
    CHECK( report.best.fitness > kFitnessOptimum - 0.01 );
    CHECK( report.best.fitness <= kFitnessOptimum + 1e-12 );
}

TEST_CASE( "optimizer on a custom landscape" )
{
    ClonalParams params = defaultOptimizerParams();
    params.maxGenerations = 150;
    const auto bowl = []( double x, double y ) { return 1.0 - ( ( x - 0.2 ) * ( x - 0.2 ) + ( y - 0.9 ) * ( y - 0.9 ) ); };
    const OptimizerReport report = optimize( params, 3, bowl );
    CHECK( report.best.x == doctest::Approx( 0.2 ).epsilon( 0.05 ) );
    CHECK( report.best.y == doctest::Approx( 0.9 ).epsilon( 0.05 ) );
}

TEST_CASE( "lattice and history dumps" )
{
    std::ostringstream lattice;
    writeLattice( lattice, 2 );
    const std::string text = lattice.str();
    CHECK( text.starts_with( "x,y,fitness\n0.000000,0.000000,0.000000000\n" ) );
    CHECK( std::count( text.begin(), text.end(), '\n' ) == 10 );
    CHECK( text.find( "0.500000,0.500000,0.878906250\n" ) != std::string::npos );

    OptimizerReport report;
    report.history = { 0.5, 0.75 };
    std::ostringstream history;
    writeHistory( history, report );
    CHECK( history.str() == "generation,best_fitness\n1,0.500000000\n2,0.750000000\n" );
}
