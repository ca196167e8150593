#include "immunet/world.hpp"

#include "immunet/errors.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace immunet {

ValidationError::ValidationError( std::vector<std::string> violations ) :
    std::runtime_error( [&] {
        std::string message = "scenario validation failed:";
        for ( const auto& violation : violations ) {
            message += "\n  " + violation;
        }
        return message;
    }() ),
    m_violations( std::move( violations ) )
{}

double
distance( Position a, Position b )
{
    return std::hypot( a.x - b.x, a.y - b.y );
}

std::uint8_t
crc8Atm( std::span<const std::uint8_t> bytes )
{
    std::uint8_t crc = 0;
    for ( const auto byte : bytes ) {
        crc ^= byte;
        for ( int bit = 0; bit < 8; ++bit ) {
            crc = ( crc & 0x80U ) ? static_cast<std::uint8_t>( ( crc << 1U ) ^ 0x07U )
                                  : static_cast<std::uint8_t>( crc << 1U );
        }
    }
    return crc;
}

std::uint8_t
evenParity( std::uint32_t value )
{
    return static_cast<std::uint8_t>( std::popcount( value ) & 1 );
}

namespace {

std::uint8_t
crcOfId( std::uint32_t idBits )
{
    const std::array<std::uint8_t, 3> packed{
        static_cast<std::uint8_t>( ( idBits >> 16U ) & 0xFFU ),
        static_cast<std::uint8_t>( ( idBits >> 8U ) & 0xFFU ),
        static_cast<std::uint8_t>( idBits & 0xFFU ),
    };
    return crc8Atm( packed );
}

}  // namespace

Credential
makeCredential( std::uint32_t idBits )
{
    if ( idBits >= kCredentialIdLimit ) {
        throw std::out_of_range( "credential id " + std::to_string( idBits )
                                 + " does not fit in 18 bits" );
    }
    return { idBits, evenParity( idBits ), crcOfId( idBits ) };
}

bool
verifyCredential( const Credential& credential, bool crcMode )
{
    if ( credential.idBits >= kCredentialIdLimit || credential.parityBit > 1 ) {
        return false;
    }
    if ( evenParity( credential.idBits ) != credential.parityBit ) {
        return false;
    }
    return !crcMode || crcOfId( credential.idBits ) == credential.crc8;
}

std::string_view
toString( Role role )
{
    switch ( role ) {
    case Role::Friend:       return "friend";
    case Role::Unknown:      return "unknown";
    case Role::Hostile:      return "hostile";
    case Role::Decoy:        return "decoy";
    case Role::BaseStation:  return "base_station";
    case Role::DatabaseNode: return "database";
    }
    return "?";
}

std::optional<Role>
roleFromString( std::string_view text )
{
    for ( const auto role : { Role::Friend, Role::Unknown, Role::Hostile, Role::Decoy,
                              Role::BaseStation, Role::DatabaseNode } ) {
        if ( toString( role ) == text ) {
            return role;
        }
    }
    return std::nullopt;
}

std::string_view
toString( EventKind kind )
{
    switch ( kind ) {
    case EventKind::Step:              return "step";
    case EventKind::CredentialFailure: return "credential_failure";
    case EventKind::HoneypotSent:      return "honeypot_sent";
    case EventKind::Forward:           return "forward";
    case EventKind::Verdict:           return "verdict";
    case EventKind::ModeChange:        return "mode";
    case EventKind::Detection:         return "detection";
    case EventKind::Recall:            return "recall";
    case EventKind::FakePackets:       return "fake_packets";
    case EventKind::Neutralized:       return "neutralized";
    case EventKind::DecoySpawned:      return "decoy_spawned";
    }
    return "?";
}

Node
drainEnergy( Node node, double amount )
{
    if ( !( amount >= 0.0 ) ) {
        throw std::invalid_argument( "drain amount must be non-negative" );
    }
    node.energy = std::max( 0.0, node.energy - amount );
    return node;
}

const Node&
WorldState::node( NodeId id ) const
{
    const auto it = nodes.find( id );
    if ( it == nodes.end() ) {
        throw LookupError( "unknown node id " + std::to_string( id ) );
    }
    return it->second;
}

Node&
WorldState::node( NodeId id )
{
    const auto it = nodes.find( id );
    if ( it == nodes.end() ) {
        throw LookupError( "unknown node id " + std::to_string( id ) );
    }
    return it->second;
}

void
WorldState::log( Event event )
{
    eventLog.push_back( std::move( event ) );
}

WorldState
stepWorld( WorldState state )
{
    state.tick += 1;
    for ( auto& [id, node] : state.nodes ) {
        if ( state.tick < node.trajectory.size() ) {
            node.position = node.trajectory[state.tick];
        }
    }
    state.log( { .tick = state.tick, .kind = EventKind::Step } );
    return state;
}

WorldState
runWorld( WorldState state, Tick ticks )
{
    for ( Tick i = 0; i < ticks; ++i ) {
        state = stepWorld( std::move( state ) );
    }
    return state;
}

}  // namespace immunet
