// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include "immunet/ais.hpp"
#include "immunet/optimizer.hpp"
#include "immunet/response.hpp"
#include "immunet/scenario.hpp"
#include "immunet/simulation.hpp"
#include "immunet/tracking.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

using namespace immunet;

namespace {

struct Outcome
{
    bool pass{ true };
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double
secondsSince( Clock::time_point start )
{
    return std::chrono::duration<double>( Clock::now() - start ).count();
}

Outcome
fitnessOptimum()
{
    const auto start = Clock::now();
    std::size_t within = 0;
    double worst = 1.0;
    for ( std::uint64_t seed = 1; seed <= 100; ++seed ) {
        const double best = optimize( defaultOptimizerParams(), seed ).best.fitness;
        within += std::abs( best - kFitnessOptimum ) <= 0.01 ? 1 : 0;
        worst = std::min( worst, best );
    }
    const double elapsed = secondsSince( start );
    return { within >= 90 && elapsed < 5.0,
             fmt::format( "{}/100 seeds within 0.01 of {:.8f} (worst {:.6f}), {:.2f} s", within, kFitnessOptimum,
                          worst, elapsed ) };
}

Outcome
gridOracleCheck()
{
    const GridOptimum best = gridOracle( 1000 );
    bool pass = best.x == 0.5 && best.y == 0.5 && std::abs( best.fitness - kFitnessOptimum ) <= 1e-9;

    Rng rng( 400 );
    std::size_t zeros = 0;
    for ( int i = 0; i < 100; ++i ) {
        const double t = rng.uniform();
        for ( const auto& [x, y] : { std::pair{ 0.0, t }, std::pair{ 1.0, t }, std::pair{ t, 0.0 }, std::pair{ t, 1.0 } } ) {
            zeros += fitness( x, y ) == 0.0 ? 1 : 0;
        }
    }
    pass = pass && zeros == 400;
    return { pass, fmt::format( "grid(1000) -> ({}, {}) fitness {:.10f}; {}/400 edge points exactly 0", best.x,
                                best.y, best.fitness, zeros ) };
}

std::vector<Bitstring>
bruteForceSurvivors( std::span<const Bitstring> self, std::size_t length, const AffinityConfig& config )
{
    std::vector<Bitstring> survivors;
    for ( std::uint64_t v = 0; v < ( std::uint64_t{ 1 } << length ); ++v ) {
        Bitstring candidate = Bitstring::fromValue( v, length );
        if ( std::none_of( self.begin(), self.end(),
                           [&]( const Bitstring& s ) { return matches( candidate, s, config ); } ) ) {
            survivors.push_back( std::move( candidate ) );
        }
    }
    return survivors;
}

Outcome
negativeSelectionOracle()
{
    const auto start = Clock::now();
    Rng rng( 2 );
    std::size_t agree = 0;
    for ( int trial = 0; trial < 100; ++trial ) {
        const std::size_t length = 1 + rng.below( 8 );
        AffinityConfig config;
        if ( rng.bernoulli( 0.5 ) ) {
            config.scheme = AffinityScheme::RContiguous;
            config.r = 1 + rng.below( length );
        } else {
            config.scheme = AffinityScheme::Hamming;
            config.recognitionThreshold = 0.5 + 0.5 * rng.uniform();
        }
        std::vector<Bitstring> self;
        const auto selfCount = 1 + rng.below( 6 );
        for ( std::uint64_t i = 0; i < selfCount; ++i ) {
            self.push_back( Bitstring::random( length, rng ) );
        }
        const std::size_t space = std::size_t{ 1 } << length;
        const auto detectors = negativeSelection( self, space, config, space, exhaustiveCandidates( length ) );
        std::vector<Bitstring> found;
        for ( const auto& d : detectors ) {
            found.push_back( d.pattern );
        }
        agree += found == bruteForceSurvivors( self, length, config ) ? 1 : 0;
    }

    const std::vector<Bitstring> zeros{ Bitstring::fromBinary( "0000" ) };
    const auto survivors =
        negativeSelection( zeros, 16, { .scheme = AffinityScheme::RContiguous, .r = 2 }, 16, exhaustiveCandidates( 4 ) );
    std::vector<std::string> text;
    for ( const auto& d : survivors ) {
        text.push_back( d.pattern.toBinary() );
    }
    const std::vector<std::string> expected{ "0101", "0110", "0111", "1010", "1011", "1101", "1110", "1111" };
    const double elapsed = secondsSince( start );
    return { agree == 100 && text == expected && elapsed < 1.0,
             fmt::format( "{}/100 random cases equal brute force; len 4 r 2 self {{0000}} -> {} survivors{}; {:.3f} s",
                          agree, text.size(), text == expected ? " (exact)" : " (MISMATCH)", elapsed ) };
}

Outcome
formulaOneProperties()
{
    Rng rng( 10000 );
    std::size_t rangeViolations = 0;
    std::size_t flipViolations = 0;
    std::size_t sumViolations = 0;
    std::size_t orderViolations = 0;
    double worstSumError = 0.0;
    for ( int trial = 0; trial < 10000; ++trial ) {
        const double threshold = 0.05 + 0.9 * rng.uniform();
        const double floor = threshold * ( 0.001 + 0.999 * rng.uniform() );
        const TrackingConfig config{ .threshold = threshold, .floorWeight = floor };

        std::vector<Node> sensors( 1 + rng.below( 6 ) );
        std::vector<Sign> prev;
        std::vector<Sign> curr;
        for ( std::size_t s = 0; s < sensors.size(); ++s ) {
            sensors[s].id = static_cast<NodeId>( s + 1 );
            sensors[s].position = { rng.uniform(), rng.uniform() };
            prev.push_back( rng.bernoulli( 0.5 ) ? Sign::Closer : Sign::Farther );
            curr.push_back( rng.bernoulli( 0.5 ) ? Sign::Closer : Sign::Farther );
        }
        std::vector<Particle> particles( 1 + rng.below( 40 ) );
        for ( auto& p : particles ) {
            p.prevPosition = { rng.uniform(), rng.uniform() };
            p.currPosition = { rng.uniform(), rng.uniform() };
            for ( std::size_t s = 0; s < sensors.size(); ++s ) {
                for ( const Sign a : { Sign::Closer, Sign::Farther } ) {
                    for ( const Sign b : { Sign::Closer, Sign::Farther } ) {
                        const double w = caseWeight( sensors[s].position, a, b, p, threshold, floor );
                        rangeViolations += w >= floor && w <= 1.0 ? 0 : 1;
                        if ( a != b ) {
                            flipViolations += w == 1.0 ? 0 : 1;
                        }
                    }
                }
            }
        }
        const auto weighted = reweighParticles( sensors, prev, curr, particles, config );
        double total = 0.0;
        for ( std::size_t i = 0; i < weighted.size(); ++i ) {
            total += weighted[i].weight;
            const bool same = weighted[i].prevPosition == particles[i].prevPosition
                              && weighted[i].currPosition == particles[i].currPosition;
            orderViolations += same ? 0 : 1;
        }
        worstSumError = std::max( worstSumError, std::abs( total - 1.0 ) );
        sumViolations += std::abs( total - 1.0 ) <= 1e-12 ? 0 : 1;
    }
    return { rangeViolations + flipViolations + sumViolations + orderViolations == 0,
             fmt::format( "10000 geometries: {} weights outside [floor, 1], {} flip pairs != 1, {} sums off by > 1e-12 "
                          "(worst {:.1e}), {} reordered particles",
                          rangeViolations, flipViolations, sumViolations, worstSumError, orderViolations ) };
}

Outcome
admissionExactness()
{
    const auto path = std::filesystem::path( IMMUNET_SOURCE_DIR ) / "scenarios" / "patrol200.json";
    const ScenarioConfig config = loadScenario( path );
    const bool matchesGenerator = dumpScenario( config ) == dumpScenario( synthesizeScenario( {} ) );

    std::vector<std::string> outputs;
    Summary summary;
    for ( int run = 0; run < 3; ++run ) {
        const RunReport report = runScenario( config );
        std::ostringstream csv;
        writeMetrics( csv, report.rows, report.summary );
        outputs.push_back( csv.str() );
        summary = report.summary;
    }
    const bool identical = outputs[0] == outputs[1] && outputs[1] == outputs[2];
    const bool pass = config.nodes.size() == 200 && summary.hostiles == 20 && summary.hostilesFlagged == 20
                      && summary.compliant == 30 && summary.compliantFlagged == 0 && identical && matchesGenerator;
    return { pass, fmt::format( "{} nodes: detection {}/{}, false positives {}/{}, 3 runs {} ({} bytes)",
                                config.nodes.size(), summary.hostilesFlagged, summary.hostiles,
                                summary.compliantFlagged, summary.compliant,
                                identical ? "bytewise identical" : "DIFFER", outputs[0].size() ) };
}

Outcome
drainClosedForm()
{
    Rng rng( 1000 );
    std::size_t tickMismatches = 0;
    std::size_t monotoneViolations = 0;
    std::size_t teamMismatches = 0;
    for ( int trial = 0; trial < 1000; ++trial ) {
        const double initial = rng.uniform( 1.0, 500.0 );
        const std::size_t members = 1 + rng.below( 10 );
        const auto rate = static_cast<std::uint32_t>( 1 + rng.below( 5 ) );
        const double cost = rng.uniform( 0.1, 10.0 );

        WorldState state;
        constexpr NodeId kTarget = 1000;
        Node target{ .id = kTarget, .role = Role::Hostile, .position = { 0.5, 0.5 }, .energy = initial };
        state.nodes.emplace( kTarget, target );
        state.log( { .kind = EventKind::Forward, .node = kTarget, .peer = 9999 } );
        DetectorMap detectors;
        const Bitstring signature = signatureOf( { DestinationClass::OffNetwork }, 32 );
        for ( std::size_t m = 0; m < members; ++m ) {
            const double angle = 2.0 * M_PI * static_cast<double>( m ) / static_cast<double>( members );
            const auto id = static_cast<NodeId>( m + 1 );
            state.nodes.emplace( id, Node{ .id = id,
                                           .role = Role::Friend,
                                           .position = { 0.5 + 0.05 * std::cos( angle ), 0.5 + 0.05 * std::sin( angle ) },
                                           .energy = 100.0 } );
            detectors[id] = { .pattern = signature, .state = DetectorState::Mature };
        }
        const ConfrontationConfig config{
            .affinity = {}, .drain = { .drainPerPacket = cost, .packetsPerMemberPerTick = rate, .recallRadius = 0.1 } };
        const auto [after, report] = runConfrontation( std::move( state ), kTarget, detectors, config );

        const auto expected = static_cast<Tick>( std::ceil( initial / ( static_cast<double>( members * rate ) * cost ) ) );
        tickMismatches += report.ticksToNeutralize == expected ? 0 : 1;
        teamMismatches += report.team.members.size() == members ? 0 : 1;
        double last = initial;
        for ( const auto& event : after.eventLog ) {
            if ( event.kind == EventKind::FakePackets ) {
                monotoneViolations += event.value <= last ? 0 : 1;
                last = event.value;
            }
        }
    }
    return { tickMismatches + monotoneViolations + teamMismatches == 0,
             fmt::format( "1000 tuples: {} tick counts differ from ceil(E0/(k r c)), {} energy increases, {} team sizes off",
                          tickMismatches, monotoneViolations, teamMismatches ) };
}

Outcome
modeMachine()
{
    const std::vector<Mode> modes{ Mode::Sensing, Mode::Recognition, Mode::Response };
    const std::vector<ModeEvent> events{ ModeEvent::AnomalyDetected, ModeEvent::PlanDecided,
                                         ModeEvent::TargetNeutralized, ModeEvent::Timeout };
    const auto expected = []( Mode m, ModeEvent e ) {
        if ( m == Mode::Sensing && e == ModeEvent::AnomalyDetected ) {
            return Mode::Recognition;
        }
        if ( m == Mode::Recognition && e == ModeEvent::PlanDecided ) {
            return Mode::Response;
        }
        if ( ( m == Mode::Recognition && e == ModeEvent::Timeout )
             || ( m == Mode::Response && e == ModeEvent::TargetNeutralized ) ) {
            return Mode::Sensing;
        }
        return m;
    };
    std::size_t tableMatches = 0;
    for ( const auto m : modes ) {
        for ( const auto e : events ) {
            tableMatches += transitionMode( m, e ) == expected( m, e ) ? 1 : 0;
        }
    }

    std::size_t sequences = 0;
    std::size_t violations = 0;
    std::function<void( Mode, bool, std::size_t )> explore = [&]( Mode mode, bool recognized, std::size_t depth ) {
        if ( depth == 5 ) {
            return;
        }
        for ( const auto e : events ) {
            const Mode next = transitionMode( mode, e );
            ++sequences;
            if ( next == Mode::Response && mode != Mode::Response && mode != Mode::Recognition ) {
                ++violations;
            }
            if ( next == Mode::Response && !recognized ) {
                ++violations;
            }
            explore( next, recognized || next == Mode::Recognition, depth + 1 );
        }
    };
    explore( Mode::Sensing, false, 0 );
    return { tableMatches == 12 && violations == 0 && sequences == 1364,
             fmt::format( "{}/12 table entries; {} event sequences of length <= 5, {} reach Response without Recognition",
                          tableMatches, sequences, violations ) };
}

template<typename Genome>
void
clonalChain( Rng& rng, const AffinityFn<Genome>& eval, const std::function<Genome()>& fresh, int steps,
             std::size_t& sizeViolations, std::size_t& budgetViolations, std::size_t& orderViolations,
             std::size_t& memoryViolations )
{
    ClonalParams params;
    params.populationSize = 2 + rng.below( 59 );
    params.selectCount = 1 + rng.below( params.populationSize );
    params.cloneBudget = 1 + rng.below( 50 );
    params.maturityLevel = rng.uniform( 0.0, 100.0 );
    params.replaceWorstN = 1 + rng.below( params.populationSize - 1 );
    params.normalizeAffinity = rng.bernoulli( 0.5 );

    std::vector<Antibody<Genome>> population;
    for ( std::size_t i = 0; i < params.populationSize; ++i ) {
        Genome g = fresh();
        const double a = eval( g );
        population.push_back( { std::move( g ), a } );
    }
    double memoryBest = -1.0;
    for ( int s = 0; s < steps; ++s ) {
        auto result = clonalStep( std::move( population ), eval, params, rng );
        sizeViolations += result.population.size() == params.populationSize ? 0 : 1;
        budgetViolations +=
            std::accumulate( result.cloneCounts.begin(), result.cloneCounts.end(), std::size_t{ 0 } ) == params.cloneBudget
                ? 0
                : 1;
        orderViolations +=
            std::is_sorted( result.cloneCounts.begin(), result.cloneCounts.end(), std::greater<>() ) ? 0 : 1;
        for ( const auto& memory : result.memoryAdditions ) {
            memoryViolations += memory.affinity >= memoryBest ? 0 : 1;
            memoryBest = std::max( memoryBest, memory.affinity );
        }
        population = std::move( result.population );
    }
}

Outcome
clonalStepProperties()
{
    Rng rng( 500 );
    std::size_t sizeViolations = 0;
    std::size_t budgetViolations = 0;
    std::size_t orderViolations = 0;
    std::size_t memoryViolations = 0;
    int steps = 0;
    for ( int chain = 0; chain < 50; ++chain ) {
        if ( chain % 2 == 0 ) {
            const std::size_t length = 8 + rng.below( 57 );
            const Bitstring goal = Bitstring::random( length, rng );
            const AffinityConfig config{ .scheme = chain % 4 == 0 ? AffinityScheme::Hamming : AffinityScheme::RContiguous,
                                         .r = 1 };
            clonalChain<Bitstring>(
                rng, [&]( const Bitstring& g ) { return affinity( g, goal, config ); },
                [&] { return Bitstring::random( length, rng ); }, 10, sizeViolations, budgetViolations,
                orderViolations, memoryViolations );
        } else {
            clonalChain<UnitPoint>(
                rng, []( const UnitPoint& p ) { return fitness( p.x, p.y ); },
                [&] { return UnitPoint{ rng.uniform(), rng.uniform() }; }, 10, sizeViolations, budgetViolations,
                orderViolations, memoryViolations );
        }
        steps += 10;
    }
    return { sizeViolations + budgetViolations + orderViolations + memoryViolations == 0,
             fmt::format( "{} steps: {} size changes, {} budget mismatches, {} unordered clone counts, "
                          "{} memory regressions",
                          steps, sizeViolations, budgetViolations, orderViolations, memoryViolations ) };
}

}  // namespace

int
main()
{
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        { "fitness optimum", fitnessOptimum },
        { "grid oracle", gridOracleCheck },
        { "negative-selection oracle", negativeSelectionOracle },
        { "binary-proximity weighting", formulaOneProperties },
        { "admission exactness", admissionExactness },
        { "drain closed form", drainClosedForm },
        { "mode machine", modeMachine },
        { "clonal step", clonalStepProperties },
    };
    int failures = 0;
    for ( std::size_t i = 0; i < criteria.size(); ++i ) {
        Outcome outcome;
        try {
            outcome = criteria[i].second();
        } catch ( const std::exception& error ) {
            outcome = { false, std::string( "exception: " ) + error.what() };
        }
        failures += outcome.pass ? 0 : 1;
        fmt::print( "[{}] {} {}: {}\n", outcome.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, outcome.detail );
    }
    fmt::print( "{} of {} criteria passed\n", criteria.size() - static_cast<std::size_t>( failures ), criteria.size() );
    return failures == 0 ? 0 : 1;
}
