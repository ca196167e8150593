#include "immunet/errors.hpp"
#include "immunet/scenario.hpp"
#include "immunet/simulation.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace immunet;

namespace {

std::string
csv( const RunReport& report )
{
    std::ostringstream out;
    writeMetrics( out, report.rows, report.summary );
    return out.str();
}

std::vector<MetricsRow>
rowsOf( const RunReport& report, std::string_view event, std::optional<NodeId> node = std::nullopt )
{
    std::vector<MetricsRow> found;
    for ( const auto& row : report.rows ) {
        if ( row.event == event && ( !node || row.nodeId == *node ) ) {
            found.push_back( row );
        }
    }
    return found;
}

ScenarioConfig
demo()
{
    return loadScenario( std::filesystem::path( IMMUNET_SOURCE_DIR ) / "scenarios" / "demo.json" );
}

/// One friend guarding a newcomer that sits next to it from tick 0.
ScenarioConfig
duel( const std::string& behavior, const std::string& extra = "" )
{
    return parseScenario( R"({ "seed": 3, "max_ticks": 30, "registry": [10, 20], "external_ids": [900],
        "nodes": [
          { "id": 1, "role": "database", "position": [0.9, 0.9] },
          { "id": 10, "role": "friend", "position": [0.5, 0.5] },
          { "id": 20, "role": "unknown", "position": [0.55, 0.5], "behavior": )"
                          + behavior + R"( } ],
        "admission": { "observation_window": 3 } )"
                          + extra + "}" );
}

}  // namespace

TEST_CASE( "demo scenario end to end" )
{
    const RunReport report = runScenario( demo() );

    CHECK( report.verdicts.at( 100 ).verdict == Verdict::Hostile );
    CHECK( report.verdicts.at( 101 ).verdict == Verdict::Friend );
    CHECK( report.verdicts.at( 102 ).verdict == Verdict::Rejected );
    CHECK( report.finalState.node( 101 ).role == Role::Friend );

    REQUIRE( report.neutralizations.size() == 1 );
    const NeutralizationReport& n = report.neutralizations.front();
    CHECK( n.target == 100 );
    CHECK( n.finalEnergy == 0.0 );
    CHECK( n.ticksToNeutralize
           == static_cast<Tick>( std::ceil( n.initialEnergy / ( 2.0 * static_cast<double>( n.team.members.size() ) ) ) ) );

    const auto decoys = rowsOf( report, "decoy_spawned" );
    REQUIRE( decoys.size() == 1 );
    const Node& decoy = report.finalState.node( decoys.front().nodeId );
    CHECK( decoy.role == Role::Decoy );
    CHECK( decoy.shadowedId == 100 );
    CHECK( rowsOf( report, "ground_truth", decoy.id ).empty() );

    CHECK( report.summary.hostiles == 2 );
    CHECK( report.summary.compliant == 1 );
    CHECK( report.summary.detectionRate == 1.0 );
    CHECK( report.summary.falsePositiveRate == 0.0 );
    CHECK( report.summary.vacuous.empty() );
    CHECK( summarize( report.rows ) == report.summary );

    // Detection happened through a freshly matured detector.
    CHECK( rowsOf( report, "detector_matured" ).size() == 1 );
    CHECK( rowsOf( report, "detection", 100 ).size() == 1 );
}

TEST_CASE( "mode rows follow the machine" )
{
    const RunReport report = runScenario( demo() );
    std::vector<std::string> modes;
    for ( const auto& row : rowsOf( report, "mode" ) ) {
        modes.push_back( row.verdict + ">" + row.mode );
    }
    CHECK( modes == std::vector<std::string>{ "AnomalyDetected>Recognition", "PlanDecided>Response",
                                              "TargetNeutralized>Sensing" } );
    for ( const auto& row : rowsOf( report, "drain" ) ) {
        CHECK( row.mode == "Response" );
    }
}

TEST_CASE( "hostile verdict rows follow a honeypot send" )
{
    for ( const auto& config : { demo(), synthesizeScenario( {} ) } ) {
        const RunReport report = runScenario( config );
        for ( std::size_t i = 0; i < report.rows.size(); ++i ) {
            const MetricsRow& row = report.rows[i];
            if ( row.event != "verdict" || row.verdict != "Hostile" ) {
                continue;
            }
            const bool sent = std::any_of( report.rows.begin(), report.rows.begin() + static_cast<long>( i ),
                                           [&]( const MetricsRow& r ) {
                                               return r.event == "honeypot_sent" && r.nodeId == row.nodeId
                                                      && r.tick <= row.tick;
                                           } );
            CHECK( sent );
        }
    }
}

TEST_CASE( "hostile verdict row format" )
{
    const RunReport report = runScenario( duel( R"({ "kind": "forward", "destination": 900 })" ) );
    const std::string text = csv( report );
    CHECK( text.find( "\n4,20,verdict,Hostile,,,Sensing\n" ) != std::string::npos );
    CHECK( text.find( "\n1,20,honeypot_sent,,,,Sensing\n" ) != std::string::npos );
    CHECK( text.find( " \n" ) == std::string::npos );
    CHECK( text.find( '\r' ) == std::string::npos );
}

TEST_CASE( "sleeper is caught by a re-probe" )
{
    const RunReport report = runScenario( duel( R"({ "kind": "forward", "destination": 900, "active_from": 20 })",
                                                R"(, "max_ticks": 60 )" ) );
    const auto verdicts = rowsOf( report, "verdict", 20 );
    REQUIRE( verdicts.size() >= 2 );
    CHECK( verdicts.front().verdict == "Friend" );
    CHECK( verdicts.back().verdict == "Hostile" );
    CHECK( report.summary.detectionRate == 1.0 );
}

TEST_CASE( "compliant newcomer is admitted and re-probed" )
{
    const RunReport report = runScenario(
        duel( R"({ "kind": "forward", "destination": 1 })", R"(, "max_ticks": 120 )" ) );
    const auto verdicts = rowsOf( report, "verdict", 20 );
    CHECK( verdicts.size() == 3 );  // ticks 4, 57, 110
    for ( const auto& row : verdicts ) {
        CHECK( row.verdict == "Friend" );
    }
    CHECK( report.summary.falsePositiveRate == 0.0 );
    CHECK( report.summary.vacuous == std::vector<std::string>{ "detection_rate", "mean_ticks_to_neutralize" } );
    CHECK( report.summary.confrontations == 0 );
}

TEST_CASE( "scenario without unknown nodes is vacuous" )
{
    const RunReport report = runScenario( parseScenario( R"({ "seed": 1, "max_ticks": 5, "nodes": [
        { "id": 1, "role": "friend", "position": [0.5, 0.5] } ] })" ) );
    CHECK( report.summary.detectionRate == 1.0 );
    CHECK( report.summary.falsePositiveRate == 1.0 );
    CHECK( report.summary.confrontations == 0 );
    CHECK( report.summary.vacuous
           == std::vector<std::string>{ "detection_rate", "false_positive_rate", "mean_ticks_to_neutralize" } );
    CHECK( report.rows.empty() );
    CHECK( csv( report ).find( "# vacuous=detection_rate;false_positive_rate;mean_ticks_to_neutralize\n" )
           != std::string::npos );
}

TEST_CASE( "empty report is header and summary only" )
{
    std::ostringstream out;
    writeMetrics( out, {}, summarize( {} ) );
    CHECK( out.str()
           == "tick,node_id,event,verdict,affinity,energy,mode\n"
              "# summary:\n"
              "# detection_rate=1.000000\n"
              "# false_positive_rate=1.000000\n"
              "# mean_ticks_to_neutralize=0.000000\n"
              "# total_energy_drained=0.000000\n"
              "# hostiles=0\n"
              "# hostiles_flagged=0\n"
              "# compliant=0\n"
              "# compliant_flagged=0\n"
              "# confrontations=0\n"
              "# neutralized=0\n"
              "# vacuous=detection_rate;false_positive_rate;mean_ticks_to_neutralize\n" );
}

TEST_CASE( "runs are deterministic and the csv reads back" )
{
    const ScenarioConfig config = demo();
    const std::string first = csv( runScenario( config ) );
    CHECK( csv( runScenario( config ) ) == first );

    std::istringstream in( first );
    const MetricsFile file = readMetrics( in );
    const Summary summary = summarize( file.rows );
    for ( const auto& [key, value] : summaryFields( summary ) ) {
        CHECK( file.trailer.at( key ) == value );
    }
    std::ostringstream again;
    writeMetrics( again, file.rows, summary );
    CHECK( again.str() == first );
}

TEST_CASE( "metrics file errors" )
{
    const auto failure = []( const std::string& text ) {
        std::istringstream in( text );
        try {
            (void)readMetrics( in );
        } catch ( const ParseError& error ) {
            return std::string( error.what() );
        }
        return std::string( "no error" );
    };
    const std::string header = "tick,node_id,event,verdict,affinity,energy,mode\n";
    CHECK( failure( "tick,node\n" ).starts_with( "line 1" ) );
    CHECK( failure( header + "1,2,verdict\n" ).starts_with( "line 2" ) );
    CHECK( failure( header + "1,2,drain,,,x,Response\n" ).starts_with( "line 2: bad energy" ) );
    CHECK( failure( header + "-1,2,drain,,,,Response\n" ).starts_with( "line 2: bad tick" ) );
    CHECK( failure( header + "# stray\n" ).starts_with( "line 2" ) );
    CHECK( failure( header + "# summary:\n1,2,verdict,Friend,,,Sensing\n" ).starts_with( "line 3" ) );
}

TEST_CASE( "emitting metrics" )
{
    const RunReport report = runScenario( demo() );
    const auto path = std::filesystem::temp_directory_path() / "immunet_emit_test.csv";
    emitMetrics( report, path );
    emitMetrics( report, path );
    std::ifstream in( path, std::ios::binary );
    std::ostringstream bytes;
    bytes << in.rdbuf();
    CHECK( bytes.str() == csv( report ) );
    std::filesystem::remove( path );

    try {
        emitMetrics( report, "/nonexistent-dir/out.csv" );
        FAIL( "expected an I/O error" );
    } catch ( const std::runtime_error& error ) {
        CHECK( std::string( error.what() ).find( "/nonexistent-dir/out.csv" ) != std::string::npos );
    }
}
