#include "immunet/ais.hpp"
#include "immunet/errors.hpp"
#include "immunet/optimizer.hpp"
#include "immunet/scenario.hpp"
#include "immunet/simulation.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace immunet;

namespace {

constexpr int kExitInvalid = 1;
constexpr int kExitRuntime = 2;

std::ofstream
openOutput( const std::string& path )
{
    std::ofstream out( path, std::ios::binary | std::ios::trunc );
    if ( !out ) {
        throw std::runtime_error( "cannot write '" + path + "'" );
    }
    return out;
}

void
printSummary( std::ostream& out, const Summary& summary )
{
    for ( const auto& [key, value] : summaryFields( summary ) ) {
        out << key << '=' << value << '\n';
    }
}

struct SimulateArgs
{
    std::string scenario;
    std::string out;
};

int
simulate( const SimulateArgs& args )
{
    const ScenarioConfig config = loadScenario( args.scenario );
    const RunReport report = runScenario( config );
    if ( args.out.empty() ) {
        writeMetrics( std::cout, report.rows, report.summary );
    } else {
        emitMetrics( report, args.out );
        printSummary( std::cout, report.summary );
    }
    return 0;
}

struct OptimizeArgs
{
    ClonalParams params = defaultOptimizerParams();
    std::uint64_t seed{ 1 };
    std::string lattice;
    std::size_t latticeResolution{ 200 };
    std::string history;
};

int
optimizeCommand( const OptimizeArgs& args )
{
    args.params.validate();
    const OptimizerReport report = optimize( args.params, args.seed );
    fmt::print( "best x={:.6f} y={:.6f} fitness={:.6f}\n", report.best.x, report.best.y, report.best.fitness );
    fmt::print( "generations={} seed={} optimum={:.8f} gap={:.6f}\n", report.generationsUsed, args.seed,
                kFitnessOptimum, kFitnessOptimum - report.best.fitness );
    if ( !args.history.empty() ) {
        auto out = openOutput( args.history );
        writeHistory( out, report );
    }
    if ( !args.lattice.empty() ) {
        auto out = openOutput( args.lattice );
        writeLattice( out, args.latticeResolution );
    }
    return 0;
}

struct NegselArgs
{
    std::size_t length{ 32 };
    std::size_t r{ 8 };
    std::string scheme{ "r_contiguous" };
    double threshold{ 0.8 };
    std::vector<std::string> self;
    std::string selfFile;
    std::size_t count{ 16 };
    bool countGiven{ false };
    std::uint64_t seed{ 1 };
    std::size_t maxAttempts{ 100000 };
    bool exhaustive{ false };
    std::string format{ "detectors" };
};

Bitstring
parseSelf( const std::string& text, std::size_t length, const std::string& where )
{
    const Bitstring value = Bitstring::fromBinary( text );
    if ( value.length() != length ) {
        throw std::invalid_argument( fmt::format( "{}: self string '{}' has length {}, expected {}", where,
                                                  text, value.length(), length ) );
    }
    return value;
}

int
negsel( const NegselArgs& args )
{
    AffinityConfig config;
    config.r = args.r;
    config.recognitionThreshold = args.threshold;
    if ( args.scheme == "hamming" ) {
        config.scheme = AffinityScheme::Hamming;
    } else if ( args.scheme != "r_contiguous" ) {
        throw std::invalid_argument( "unknown scheme '" + args.scheme + "'" );
    }
    config.validate( args.length );

    std::vector<Bitstring> self;
    for ( const auto& text : args.self ) {
        self.push_back( parseSelf( text, args.length, "--self" ) );
    }
    if ( !args.selfFile.empty() ) {
        std::ifstream in( args.selfFile );
        if ( !in ) {
            throw ParseError( "cannot open self file '" + args.selfFile + "'" );
        }
        std::string line;
        for ( std::size_t number = 1; std::getline( in, line ); ++number ) {
            if ( line.empty() || line.starts_with( '#' ) ) {
                continue;
            }
            self.push_back( parseSelf( line, args.length, fmt::format( "{}:{}", args.selfFile, number ) ) );
        }
    }

    std::vector<Detector> detectors;
    if ( args.exhaustive ) {
        const std::size_t all = args.length >= 63 ? SIZE_MAX : std::size_t{ 1 } << args.length;
        detectors = negativeSelection( self, args.countGiven ? args.count : all, config,
                                       std::max( args.maxAttempts, all ), exhaustiveCandidates( args.length ) );
    } else {
        Rng rng( args.seed );
        detectors = negativeSelection( self, args.count, config, args.maxAttempts, rng );
    }

    if ( args.format == "binary" ) {
        for ( const auto& detector : detectors ) {
            std::cout << detector.pattern.toBinary() << '\n';
        }
    } else {
        writeDetectors( std::cout, detectors );
    }
    return 0;
}

int
report( const std::string& path )
{
    std::ifstream in( path, std::ios::binary );
    if ( !in ) {
        throw ParseError( "cannot open metrics file '" + path + "'" );
    }
    const MetricsFile file = readMetrics( in );
    const Summary summary = summarize( file.rows );
    printSummary( std::cout, summary );

    int status = 0;
    for ( const auto& [key, value] : summaryFields( summary ) ) {
        const auto it = file.trailer.find( key );
        if ( it == file.trailer.end() ) {
            std::cerr << "trailer is missing " << key << '\n';
            status = kExitRuntime;
        } else if ( it->second != value ) {
            std::cerr << "trailer " << key << '=' << it->second << " disagrees with rows (" << value << ")\n";
            status = kExitRuntime;
        }
    }
    return status;
}

int
makeScenario( const SynthesisLayout& layout, const std::string& out )
{
    const std::string text = dumpScenario( synthesizeScenario( layout ) );
    if ( out.empty() ) {
        std::cout << text;
    } else {
        openOutput( out ) << text;
    }
    return 0;
}

}  // namespace

int
main( int argc, char** argv )
{
    CLI::App app{ "Immune-inspired sensor network intrusion simulator" };
    app.require_subcommand( 1 );
    app.set_help_all_flag( "--help-all", "Show help for every subcommand" );

    SimulateArgs simulateArgs;
    auto* simulateCmd = app.add_subcommand( "simulate", "Run a scenario and write the metrics CSV" );
    simulateCmd->add_option( "scenario", simulateArgs.scenario, "Scenario JSON file" )->required();
    simulateCmd->add_option( "--out", simulateArgs.out, "CSV output path (default: stdout)" );

    OptimizeArgs optimizeArgs;
    auto* optimizeCmd = app.add_subcommand( "optimize", "Clonal selection on the detector-placement landscape" );
    optimizeCmd->add_option( "--pop", optimizeArgs.params.populationSize, "Population size" )->capture_default_str();
    optimizeCmd->add_option( "--select", optimizeArgs.params.selectCount, "Antibodies selected for cloning" )
        ->capture_default_str();
    optimizeCmd->add_option( "--clone-budget", optimizeArgs.params.cloneBudget, "Clones per generation" )
        ->capture_default_str();
    optimizeCmd->add_option( "--maturity", optimizeArgs.params.maturityLevel, "Hypermutation intensity (percent)" )
        ->capture_default_str();
    optimizeCmd->add_option( "--replace", optimizeArgs.params.replaceWorstN, "Worst antibodies replaced per generation" )
        ->capture_default_str();
    optimizeCmd->add_option( "--gens", optimizeArgs.params.maxGenerations, "Generations" )->capture_default_str();
    optimizeCmd->add_option( "--seed", optimizeArgs.seed, "Random seed" )->envname( "IMMUNET_SEED" )->capture_default_str();
    optimizeCmd->add_option( "--dump-lattice", optimizeArgs.lattice, "Write x,y,fitness rows of the landscape" );
    optimizeCmd->add_option( "--lattice-resolution", optimizeArgs.latticeResolution, "Lattice cells per axis" )
        ->capture_default_str()
        ->check( CLI::Range( std::size_t{ 1 }, std::size_t{ 10000 } ) );
    optimizeCmd->add_option( "--history", optimizeArgs.history, "Write generation,best_fitness rows" );

    NegselArgs negselArgs;
    auto* negselCmd = app.add_subcommand( "negsel", "Generate detectors by negative selection" );
    negselCmd->add_option( "--len", negselArgs.length, "Bitstring length" )->capture_default_str();
    negselCmd->add_option( "--r", negselArgs.r, "Contiguous run needed for a match" )->capture_default_str();
    negselCmd->add_option( "--scheme", negselArgs.scheme, "r_contiguous or hamming" )->capture_default_str();
    negselCmd->add_option( "--threshold", negselArgs.threshold, "Hamming recognition threshold" )
        ->capture_default_str();
    negselCmd->add_option( "--self", negselArgs.self, "Self string in binary (repeatable)" );
    negselCmd->add_option( "--self-file", negselArgs.selfFile, "File with one binary self string per line" );
    auto* countOpt = negselCmd->add_option( "--count", negselArgs.count, "Detectors requested" )->capture_default_str();
    negselCmd->add_option( "--seed", negselArgs.seed, "Random seed" )->envname( "IMMUNET_SEED" )->capture_default_str();
    negselCmd->add_option( "--max-attempts", negselArgs.maxAttempts, "Candidates tried before giving up" )
        ->capture_default_str();
    negselCmd->add_flag( "--exhaustive", negselArgs.exhaustive, "Try every string in ascending order" );
    negselCmd->add_option( "--format", negselArgs.format, "detectors or binary" )
        ->check( CLI::IsMember( { "detectors", "binary" } ) )
        ->capture_default_str();

    std::string reportPath;
    auto* reportCmd = app.add_subcommand( "report", "Recompute the summary of a metrics CSV from its rows" );
    reportCmd->add_option( "csv", reportPath, "Metrics CSV" )->required();

    SynthesisLayout synthesis;
    std::string synthesisOut;
    auto* makeCmd = app.add_subcommand( "make-scenario", "Write the synthetic patrol scenario" );
    makeCmd->add_option( "--seed", synthesis.seed, "Scenario seed" )->envname( "IMMUNET_SEED" )->capture_default_str();
    makeCmd->add_option( "--friends", synthesis.friends, "Friendly sensors" )->capture_default_str();
    makeCmd->add_option( "--databases", synthesis.databases, "Database nodes" )->capture_default_str();
    makeCmd->add_option( "--hostiles", synthesis.hostiles, "Scripted hostile newcomers" )->capture_default_str();
    makeCmd->add_option( "--compliant", synthesis.compliant, "Scripted compliant newcomers" )->capture_default_str();
    makeCmd->add_option( "--ticks", synthesis.maxTicks, "Simulation length" )->capture_default_str();
    makeCmd->add_option( "--particles", synthesis.particleCount, "Particles per tracked node" )->capture_default_str();
    makeCmd->add_option( "--out", synthesisOut, "Output path (default: stdout)" );

    try {
        app.parse( argc, argv );
    } catch ( const CLI::CallForHelp& error ) {
        return app.exit( error );
    } catch ( const CLI::CallForAllHelp& error ) {
        return app.exit( error );
    } catch ( const CLI::ParseError& error ) {
        app.exit( error );
        return kExitInvalid;
    }
    negselArgs.countGiven = countOpt->count() > 0;

    try {
        if ( *simulateCmd ) {
            return simulate( simulateArgs );
        }
        if ( *optimizeCmd ) {
            return optimizeCommand( optimizeArgs );
        }
        if ( *negselCmd ) {
            return negsel( negselArgs );
        }
        if ( *reportCmd ) {
            return report( reportPath );
        }
        if ( *makeCmd ) {
            return makeScenario( synthesis, synthesisOut );
        }
    } catch ( const ValidationError& error ) {
        std::cerr << "invalid scenario:\n";
        for ( const auto& violation : error.violations() ) {
            std::cerr << "  " << violation << '\n';
        }
        return kExitInvalid;
    } catch ( const ParseError& error ) {
        std::cerr << "error: " << error.what() << '\n';
        return kExitInvalid;
    } catch ( const std::invalid_argument& error ) {
        std::cerr << "error: " << error.what() << '\n';
        return kExitInvalid;
    } catch ( const std::exception& error ) {
        std::cerr << "runtime error: " << error.what() << '\n';
        return kExitRuntime;
    }
    return kExitInvalid;
}
