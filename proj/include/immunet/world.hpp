#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace immunet {

using NodeId = std::uint32_t;
using Tick = std::uint64_t;

struct Position
{
    double x{ 0.0 };
    double y{ 0.0 };

    friend bool operator==( const Position&, const Position& ) = default;
};

double
distance( Position a, Position b );

/// Axis-aligned operational area, inclusive bounds.
struct Area
{
    double minX{ 0.0 };
    double minY{ 0.0 };
    double maxX{ 1.0 };
    double maxY{ 1.0 };

    bool
    contains( Position p ) const
    {
        return p.x >= minX && p.x <= maxX && p.y >= minY && p.y <= maxY;
    }

    friend bool operator==( const Area&, const Area& ) = default;
};

/* Credentials
 *
 * The admission frame is 19 bits wide: an 18-bit identifier followed by one
 * even-parity bit. The CRC-8 is carried next to the frame, not inside it, and
 * is only checked when crc mode is enabled. */

inline constexpr unsigned kCredentialIdBits = 18;
inline constexpr unsigned kCredentialFrameBits = kCredentialIdBits + 1;
inline constexpr std::uint32_t kCredentialIdLimit = 1U << kCredentialIdBits;

struct Credential
{
    std::uint32_t idBits{ 0 };
    std::uint8_t parityBit{ 0 };
    std::uint8_t crc8{ 0 };

    /// id in the high 18 bits, parity in bit 0.
    std::uint32_t
    frame() const
    {
        return ( idBits << 1U ) | ( parityBit & 1U );
    }

    static Credential
    fromFrame( std::uint32_t frame, std::uint8_t crc8 )
    {
        return { ( frame >> 1U ) & ( kCredentialIdLimit - 1 ),
                 static_cast<std::uint8_t>( frame & 1U ), crc8 };
    }

    friend bool operator==( const Credential&, const Credential& ) = default;
};

/// CRC-8/ATM: poly 0x07, init 0x00, no reflection, no final xor.
std::uint8_t
crc8Atm( std::span<const std::uint8_t> bytes );

std::uint8_t
evenParity( std::uint32_t value );

/// Throws std::out_of_range when idBits does not fit in 18 bits.
Credential
makeCredential( std::uint32_t idBits );

bool
verifyCredential( const Credential& credential, bool crcMode );

enum class Role
{
    Friend,
    Unknown,
    Hostile,
    Decoy,
    BaseStation,
    DatabaseNode,
};

std::string_view
toString( Role role );

std::optional<Role>
roleFromString( std::string_view text );

/// What a node does with honeypot packets it receives.
struct PacketBehavior
{
    enum class Kind
    {
        Drop,
        Forward,
    };

    Kind kind{ Kind::Drop };
    /// Forward target; an enemy sink when it is not a database node.
    NodeId destination{ 0 };
    /// Ticks between receiving a packet and forwarding it (>= 1).
    Tick delay{ 1 };
    /// No forwarding happens before this tick.
    Tick activeFrom{ 0 };

    friend bool operator==( const PacketBehavior&, const PacketBehavior& ) = default;
};

struct Node
{
    NodeId id{ 0 };
    Role role{ Role::Friend };
    Position position;
    double energy{ 0.0 };
    Credential credential;
    /// Position at tick t is trajectory[t]; the node holds its last entry.
    std::vector<Position> trajectory;
    PacketBehavior behavior;
    /// Set on decoys: the neutralized node whose identity they carry.
    std::optional<NodeId> shadowedId;

    friend bool operator==( const Node&, const Node& ) = default;
};

/// Throws std::invalid_argument for a negative amount.
Node
drainEnergy( Node node, double amount );

enum class EventKind
{
    Step,
    CredentialFailure,
    HoneypotSent,
    Forward,
    Verdict,
    ModeChange,
    Detection,
    Recall,
    FakePackets,
    Neutralized,
    DecoySpawned,
};

std::string_view
toString( EventKind kind );

struct Event
{
    Tick tick{ 0 };
    EventKind kind{ EventKind::Step };
    NodeId node{ 0 };
    /// Counterpart node (packet destination, recalled member, ...).
    std::optional<NodeId> peer;
    /// Honeypot tag for packet events.
    std::optional<std::uint64_t> tag;
    double value{ 0.0 };
    std::string detail;

    friend bool operator==( const Event&, const Event& ) = default;
};

struct WorldState
{
    Tick tick{ 0 };
    std::map<NodeId, Node> nodes;
    std::uint64_t rngSeed{ 0 };
    std::vector<Event> eventLog;
    /// Next honeypot tag to hand out; tags are unique per world.
    std::uint64_t nextTag{ 1 };

    const Node&
    node( NodeId id ) const;

    Node&
    node( NodeId id );

    bool
    contains( NodeId id ) const
    {
        return nodes.contains( id );
    }

    void
    log( Event event );

    friend bool operator==( const WorldState&, const WorldState& ) = default;
};

/// Advances one tick: mobile nodes take their next trajectory entry.
WorldState
stepWorld( WorldState state );

/// stepWorld applied `ticks` times.
WorldState
runWorld( WorldState state, Tick ticks );

}  // namespace immunet
