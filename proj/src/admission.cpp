#include "immunet/admission.hpp"

#include "immunet/errors.hpp"

#include <algorithm>
#include <stdexcept>

namespace immunet {

std::string_view
toString( Verdict verdict )
{
    switch ( verdict ) {
    case Verdict::Rejected: return "Rejected";
    case Verdict::Friend:   return "Friend";
    case Verdict::Hostile:  return "Hostile";
    }
    return "?";
}

void
ProbePolicy::validate( const WorldState& state ) const
{
    if ( probePacketCount == 0 ) {
        throw std::invalid_argument( "probe packet count must be positive" );
    }
    if ( observationWindow == 0 ) {
        throw std::invalid_argument( "observation window must be at least one tick" );
    }
    for ( const auto id : databaseNodeIds ) {
        if ( !state.contains( id ) ) {
            throw std::invalid_argument( "database node " + std::to_string( id ) + " does not exist" );
        }
    }
}

std::vector<NodeId>
scanCandidates( const WorldState& state, double radius )
{
    std::vector<NodeId> watchers;
    for ( const auto& [id, node] : state.nodes ) {
        if ( node.role == Role::Friend || node.role == Role::BaseStation ) {
            watchers.push_back( id );
        }
    }

    std::vector<NodeId> found;
    for ( const auto& [id, node] : state.nodes ) {
        if ( node.role != Role::Unknown ) {
            continue;
        }
        for ( const auto watcher : watchers ) {
            if ( distance( node.position, state.node( watcher ).position ) <= radius ) {
                found.push_back( id );
                break;
            }
        }
    }
    return found;  // std::map iteration is already ascending by id
}

bool
checkIdentity( const Node& node, const IdRegistry& registry, bool crcMode )
{
    return verifyCredential( node.credential, crcMode )
           && registry.contains( node.credential.idBits );
}

ProbeSession::ProbeSession( WorldState& state, NodeId target, ProbePolicy policy ) :
    m_target( target ),
    m_policy( std::move( policy ) ),
    m_startTick( state.tick )
{
    const Node& node = state.node( target );
    const PacketBehavior& behavior = node.behavior;

    for ( std::uint32_t i = 0; i < m_policy.probePacketCount; ++i ) {
        const std::uint64_t tag = state.nextTag++;
        Packet packet{ .src = 0, .dst = target, .kind = Packet::Kind::Honeypot, .honeypotTag = tag };
        const Tick forwardAt = std::max( m_startTick + std::max<Tick>( behavior.delay, 1 ),
                                         behavior.activeFrom );
        m_held.push_back( { packet, forwardAt, false } );
        state.log( { .tick = m_startTick, .kind = EventKind::HoneypotSent, .node = target, .tag = tag } );
        m_evidence.push_back( { m_startTick, "honeypot-sent tag=" + std::to_string( tag ) } );
    }
}

void
ProbeSession::observe( WorldState& state )
{
    if ( state.tick > m_startTick + m_policy.observationWindow ) {
        return;
    }
    const PacketBehavior& behavior = state.node( m_target ).behavior;
    if ( behavior.kind != PacketBehavior::Kind::Forward ) {
        return;
    }

    for ( auto& held : m_held ) {
        if ( held.forwarded || held.forwardAt > state.tick ) {
            continue;
        }
        held.forwarded = true;
        const Packet out{ .src = m_target,
                          .dst = behavior.destination,
                          .kind = Packet::Kind::Honeypot,
                          .honeypotTag = held.packet.honeypotTag };
        const std::uint64_t tag = *out.honeypotTag;
        state.log( { .tick = state.tick, .kind = EventKind::Forward, .node = out.src, .peer = out.dst,
                     .tag = tag } );
        m_evidence.push_back( { state.tick, "forward tag=" + std::to_string( tag )
                                                + " dst=" + std::to_string( out.dst ) } );
        if ( !m_policy.databaseNodeIds.contains( out.dst ) ) {
            m_exfiltrated = true;
            m_evidence.push_back( { state.tick, "exfiltration tag=" + std::to_string( tag )
                                                    + " dst=" + std::to_string( out.dst ) } );
        }
    }
}

ProbeOutcome
probeWithHoneypot( WorldState& state, NodeId target, const ProbePolicy& policy )
{
    ProbeSession session( state, target, policy );
    while ( !session.finished( state.tick ) ) {
        state = stepWorld( std::move( state ) );
        session.observe( state );
    }
    return { session.verdict(), session.evidence() };
}

AdmissionVerdict
filterNode( WorldState& state, NodeId target, const ProbePolicy& policy, const IdRegistry& registry,
            bool crcMode )
{
    const Node& node = state.node( target );
    AdmissionVerdict result{ .nodeId = target };

    if ( !checkIdentity( node, registry, crcMode ) ) {
        result.verdict = Verdict::Rejected;
        result.evidence.push_back( { state.tick, "credential-failure" } );
        state.log( { .tick = state.tick, .kind = EventKind::CredentialFailure, .node = target } );
    } else {
        auto outcome = probeWithHoneypot( state, target, policy );
        result.verdict = outcome.verdict;
        result.evidence = std::move( outcome.evidence );
    }
    state.log( { .tick = state.tick,
                 .kind = EventKind::Verdict,
                 .node = target,
                 .detail = std::string( toString( result.verdict ) ) } );
    return result;
}

}  // namespace immunet
