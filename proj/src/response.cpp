#include "immunet/response.hpp"

#include "immunet/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace immunet {

std::string_view
toString( Mode mode )
{
    switch ( mode ) {
    case Mode::Sensing:     return "Sensing";
    case Mode::Recognition: return "Recognition";
    case Mode::Response:    return "Response";
    }
    return "?";
}

std::string_view
toString( ModeEvent event )
{
    switch ( event ) {
    case ModeEvent::AnomalyDetected:   return "AnomalyDetected";
    case ModeEvent::PlanDecided:       return "PlanDecided";
    case ModeEvent::TargetNeutralized: return "TargetNeutralized";
    case ModeEvent::Timeout:           return "Timeout";
    }
    return "?";
}

Mode
transitionMode( Mode mode, ModeEvent event )
{
    if ( mode == Mode::Sensing && event == ModeEvent::AnomalyDetected ) {
        return Mode::Recognition;
    }
    if ( mode == Mode::Recognition && event == ModeEvent::PlanDecided ) {
        return Mode::Response;
    }
    if ( mode == Mode::Recognition && event == ModeEvent::Timeout ) {
        return Mode::Sensing;
    }
    if ( mode == Mode::Response && event == ModeEvent::TargetNeutralized ) {
        return Mode::Sensing;
    }
    return mode;
}

std::string_view
toString( AgentRole role )
{
    switch ( role ) {
    case AgentRole::Supervisor: return "Supervisor";
    case AgentRole::Connector:  return "Connector";
    case AgentRole::Decider:    return "Decider";
    case AgentRole::Helper:     return "Helper";
    case AgentRole::Destroyer:  return "Destroyer";
    case AgentRole::Protective: return "Protective";
    }
    return "?";
}

DestinationClass
classifyDestination( const WorldState& state, NodeId destination )
{
    const auto it = state.nodes.find( destination );
    if ( it == state.nodes.end() ) {
        return DestinationClass::OffNetwork;
    }
    switch ( it->second.role ) {
    case Role::DatabaseNode:
        return DestinationClass::Database;
    case Role::Friend:
    case Role::BaseStation:
    case Role::Decoy:
        return DestinationClass::Friendly;
    case Role::Unknown:
    case Role::Hostile:
        return DestinationClass::Foreign;
    }
    return DestinationClass::OffNetwork;
}

Bitstring
signatureOf( const std::set<DestinationClass>& classes, std::size_t length )
{
    Bitstring signature( length );
    for ( std::size_t i = 0; i < length; ++i ) {
        const auto cls = static_cast<DestinationClass>( i % kDestinationClassCount );
        signature.set( i, classes.contains( cls ) );
    }
    return signature;
}

Bitstring
behavioralSignature( const WorldState& state, NodeId node, std::size_t length )
{
    std::set<DestinationClass> seen;
    for ( const auto& event : state.eventLog ) {
        if ( event.kind == EventKind::Forward && event.node == node && event.peer ) {
            seen.insert( classifyDestination( state, *event.peer ) );
        }
    }
    return signatureOf( seen, length );
}

namespace {

bool
rankedBefore( const std::pair<NodeId, double>& a, const std::pair<NodeId, double>& b )
{
    if ( a.second != b.second ) {
        return a.second > b.second;
    }
    return a.first < b.first;
}

}  // namespace

Ranking
localScan( const WorldState& state, NodeId target, const DetectorMap& detectors,
           const AffinityConfig& config )
{
    const Node& hostile = state.node( target );
    if ( hostile.role != Role::Hostile ) {
        throw StateError( "local scan target " + std::to_string( target ) + " is not hostile" );
    }
    if ( detectors.empty() ) {
        return {};
    }
    const Bitstring signature =
        behavioralSignature( state, target, detectors.begin()->second.pattern.length() );

    Ranking ranking;
    for ( const auto& [id, detector] : detectors ) {
        const auto it = state.nodes.find( id );
        if ( it == state.nodes.end() || it->second.role != Role::Friend ) {
            continue;
        }
        ranking.emplace_back( id, affinity( detector.pattern, signature, config ) );
    }
    std::sort( ranking.begin(), ranking.end(), rankedBefore );
    return ranking;
}

void
DrainConfig::validate() const
{
    if ( !( drainPerPacket > 0.0 ) ) {
        throw std::invalid_argument( "drain per packet must be positive" );
    }
    if ( packetsPerMemberPerTick == 0 ) {
        throw std::invalid_argument( "packets per member per tick must be positive" );
    }
    if ( !( recallRadius > 0.0 ) ) {
        throw std::invalid_argument( "recall radius must be positive" );
    }
    if ( !( neutralizedFloor >= 0.0 ) || !( senderCostPerPacket >= 0.0 ) ) {
        throw std::invalid_argument( "neutralized floor and sender cost must be non-negative" );
    }
}

Team
formTeam( const Ranking& ranking, WorldState& state, NodeId target, double recallRadius )
{
    if ( ranking.empty() ) {
        throw NoDetectorError( "no detector ranked against node " + std::to_string( target ) );
    }
    const Position around = state.node( target ).position;

    Team team{ .head = ranking.front().first, .members = {}, .target = target, .formedAt = state.tick };
    team.members.insert( team.head );
    for ( const auto& [id, node] : state.nodes ) {
        if ( id == target || id == team.head || node.role != Role::Friend ) {
            continue;
        }
        if ( distance( node.position, around ) <= recallRadius ) {
            team.members.insert( id );
            state.log( { .tick = state.tick, .kind = EventKind::Recall, .node = team.head, .peer = id } );
        }
    }
    return team;
}

WorldState
drainAttackTick( WorldState state, const Team& team, const DrainConfig& config )
{
    Node& target = state.node( team.target );
    if ( target.energy <= config.neutralizedFloor ) {
        throw StateError( "drain target " + std::to_string( team.target ) + " is already neutralized" );
    }
    const std::uint64_t packets = team.members.size() * std::uint64_t{ config.packetsPerMemberPerTick };
    target = drainEnergy( std::move( target ), static_cast<double>( packets ) * config.drainPerPacket );

    if ( config.senderCostPerPacket > 0.0 ) {
        for ( const auto id : team.members ) {
            Node& member = state.node( id );
            member = drainEnergy( std::move( member ),
                                  config.packetsPerMemberPerTick * config.senderCostPerPacket );
        }
    }
    const double remaining = state.node( team.target ).energy;
    state.log( { .tick = state.tick,
                 .kind = EventKind::FakePackets,
                 .node = team.target,
                 .value = remaining,
                 .detail = std::to_string( packets ) } );
    return state;
}

Tick
closedFormTicks( double initialEnergy, std::size_t members, std::uint32_t rate, double drainPerPacket,
                 double floor )
{
    if ( initialEnergy <= floor ) {
        return 0;
    }
    const double perTick = static_cast<double>( members ) * rate * drainPerPacket;
    return static_cast<Tick>( std::ceil( ( initialEnergy - floor ) / perTick ) );
}

std::pair<WorldState, NeutralizationReport>
runConfrontation( WorldState state, NodeId target, const DetectorMap& detectors,
                  const ConfrontationConfig& config )
{
    config.drain.validate();
    const Ranking ranking = localScan( state, target, detectors, config.affinity );
    Team team = formTeam( ranking, state, target, config.drain.recallRadius );

    NeutralizationReport report{ .target = target, .team = team };
    report.initialEnergy = state.node( target ).energy;
    while ( state.node( target ).energy > config.drain.neutralizedFloor ) {
        state = stepWorld( std::move( state ) );
        state = drainAttackTick( std::move( state ), team, config.drain );
        report.ticksToNeutralize += 1;
        report.packetsSent += team.members.size() * std::uint64_t{ config.drain.packetsPerMemberPerTick };
    }
    report.finalEnergy = state.node( target ).energy;
    state.log( { .tick = state.tick, .kind = EventKind::Neutralized, .node = target,
                 .value = report.finalEnergy } );
    return { std::move( state ), std::move( report ) };
}

WorldState
counterAttack( WorldState state, NodeId neutralized, bool enabled, double decoyEnergy, double floor )
{
    if ( !enabled ) {
        return state;
    }
    const Node& fallen = state.node( neutralized );
    if ( fallen.energy > floor ) {
        throw StateError( "node " + std::to_string( neutralized ) + " is not neutralized" );
    }
    const NodeId decoyId = state.nodes.empty() ? 1 : state.nodes.rbegin()->first + 1;
    Node decoy{ .id = decoyId,
                .role = Role::Decoy,
                .position = fallen.position,
                .energy = decoyEnergy,
                .credential = fallen.credential,
                .trajectory = {},
                .behavior = {},
                .shadowedId = neutralized };
    state.nodes.emplace( decoyId, std::move( decoy ) );
    state.log( { .tick = state.tick, .kind = EventKind::DecoySpawned, .node = decoyId,
                 .peer = neutralized } );
    return state;
}

std::map<NodeId, AgentRole>
assignRoles( const Team& team, const Ranking& ranking, const WorldState& state, double adjacencyRadius )
{
    std::map<NodeId, AgentRole> roles;
    if ( team.members.empty() ) {
        return roles;
    }

    // Rank order: ranked members first, then the rest by id.
    std::vector<NodeId> ordered;
    for ( const auto& [id, score] : ranking ) {
        if ( team.members.contains( id ) ) {
            ordered.push_back( id );
        }
    }
    for ( const auto id : team.members ) {
        if ( std::find( ordered.begin(), ordered.end(), id ) == ordered.end() ) {
            ordered.push_back( id );
        }
    }

    std::vector<Position> databases;
    std::vector<Position> bases;
    for ( const auto& [id, node] : state.nodes ) {
        if ( node.role == Role::DatabaseNode ) {
            databases.push_back( node.position );
        } else if ( node.role == Role::BaseStation ) {
            bases.push_back( node.position );
        }
    }
    const auto nearest = []( Position p, const std::vector<Position>& sites ) {
        double best = std::numeric_limits<double>::infinity();
        for ( const auto& site : sites ) {
            best = std::min( best, distance( p, site ) );
        }
        return best;
    };

    roles[team.head] = AgentRole::Supervisor;
    std::vector<NodeId> rest;
    for ( const auto id : ordered ) {
        if ( id == team.head ) {
            continue;
        }
        if ( nearest( state.node( id ).position, databases ) <= adjacencyRadius ) {
            roles[id] = AgentRole::Protective;
        } else {
            rest.push_back( id );
        }
    }
    if ( rest.empty() ) {
        return roles;
    }
    roles[rest.front()] = AgentRole::Decider;
    rest.erase( rest.begin() );

    if ( rest.size() >= 2 && !bases.empty() ) {
        auto connector = rest.begin();
        double best = nearest( state.node( *connector ).position, bases );
        for ( auto it = rest.begin() + 1; it != rest.end(); ++it ) {
            const double d = nearest( state.node( *it ).position, bases );
            if ( d < best || ( d == best && *it < *connector ) ) {
                best = d;
                connector = it;
            }
        }
        roles[*connector] = AgentRole::Connector;
        rest.erase( connector );
    }
    for ( std::size_t i = 0; i < rest.size(); ++i ) {
        roles[rest[i]] = i % 2 == 0 ? AgentRole::Destroyer : AgentRole::Helper;
    }
    return roles;
}

}  // namespace immunet
