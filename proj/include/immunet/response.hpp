#pragma once

#include "immunet/ais.hpp"
#include "immunet/world.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <string_view>
#include <utility>
#include <vector>

namespace immunet {

/* Mode machine
 *
 *   Sensing     + AnomalyDetected   -> Recognition
 *   Recognition + PlanDecided       -> Response
 *   Recognition + Timeout           -> Sensing
 *   Response    + TargetNeutralized -> Sensing
 *
 * Every other (mode, event) pair leaves the mode unchanged. */

enum class Mode
{
    Sensing,
    Recognition,
    Response,
};

enum class ModeEvent
{
    AnomalyDetected,
    PlanDecided,
    TargetNeutralized,
    Timeout,
};

std::string_view
toString( Mode mode );

std::string_view
toString( ModeEvent event );

Mode
transitionMode( Mode mode, ModeEvent event );

enum class AgentRole
{
    Supervisor,
    Connector,
    Decider,
    Helper,
    Destroyer,
    Protective,
};

std::string_view
toString( AgentRole role );

/* Behavioral signatures
 *
 * A node's signature records which classes of destination it forwarded
 * packets to. The classes are interleaved: bit i stands for class i % 4, so
 * signatures of different behaviors disagree all along the string and
 * r-contiguous matching can tell them apart. */

enum class DestinationClass : std::size_t
{
    Database = 0,
    Friendly = 1,  ///< Friend, BaseStation or Decoy
    Foreign = 2,   ///< Unknown or Hostile node
    OffNetwork = 3,
};

inline constexpr std::size_t kDestinationClassCount = 4;

DestinationClass
classifyDestination( const WorldState& state, NodeId destination );

Bitstring
signatureOf( const std::set<DestinationClass>& classes, std::size_t length );

/// Signature from the Forward events of `node` in the event log.
Bitstring
behavioralSignature( const WorldState& state, NodeId node, std::size_t length );

/// Detector hosted by each friendly node.
using DetectorMap = std::map<NodeId, Detector>;

/// (node id, affinity), best first, ties by lowest id.
using Ranking = std::vector<std::pair<NodeId, double>>;

/// Affinity of every detector-hosting Friend node to the target's signature.
/// Throws LookupError for an unknown target and StateError if it is not Hostile.
Ranking
localScan( const WorldState& state, NodeId target, const DetectorMap& detectors,
           const AffinityConfig& config );

struct Team
{
    NodeId head{ 0 };
    std::set<NodeId> members;
    NodeId target{ 0 };
    Tick formedAt{ 0 };

    friend bool operator==( const Team&, const Team& ) = default;
};

struct DrainConfig
{
    double drainPerPacket{ 2.0 };
    std::uint32_t packetsPerMemberPerTick{ 1 };
    double recallRadius{ 0.2 };
    double neutralizedFloor{ 0.0 };
    /// Energy a member spends per fake packet sent; 0 models free senders.
    double senderCostPerPacket{ 0.0 };

    void
    validate() const;
};

/// Head is the top of the ranking; members are the head plus every Friend
/// within recallRadius of the target. Logs one Recall event per recalled
/// member. Throws NoDetectorError on an empty ranking.
Team
formTeam( const Ranking& ranking, WorldState& state, NodeId target, double recallRadius );

/// One tick of fake-packet flooding. Throws StateError if the target is
/// already at or below the neutralized floor.
WorldState
drainAttackTick( WorldState state, const Team& team, const DrainConfig& config );

struct NeutralizationReport
{
    NodeId target{ 0 };
    Team team;
    Tick ticksToNeutralize{ 0 };
    std::uint64_t packetsSent{ 0 };
    double initialEnergy{ 0.0 };
    double finalEnergy{ 0.0 };

    friend bool operator==( const NeutralizationReport&, const NeutralizationReport& ) = default;
};

/// ceil((E0 - floor) / (members * rate * drain)), 0 when E0 <= floor.
Tick
closedFormTicks( double initialEnergy, std::size_t members, std::uint32_t rate, double drainPerPacket,
                 double floor = 0.0 );

struct ConfrontationConfig
{
    AffinityConfig affinity;
    DrainConfig drain;
};

/// Local scan, team formation, then drain ticks (each preceded by a world
/// step) until the target is at or below the floor.
std::pair<WorldState, NeutralizationReport>
runConfrontation( WorldState state, NodeId target, const DetectorMap& detectors,
                  const ConfrontationConfig& config );

/// Spawns a Decoy that carries the neutralized node's identity and position.
/// No-op when disabled. Throws StateError if the node still has energy above
/// `floor`.
WorldState
counterAttack( WorldState state, NodeId neutralized, bool enabled, double decoyEnergy = 100.0,
               double floor = 0.0 );

/// Supervisor for the head, Protective for members within adjacencyRadius of
/// a database node, Decider for the next-ranked member, Connector for the
/// member nearest a base station (only when two or more remain), then
/// Destroyer/Helper alternating by rank.
std::map<NodeId, AgentRole>
assignRoles( const Team& team, const Ranking& ranking, const WorldState& state,
             double adjacencyRadius = 0.1 );

}  // namespace immunet
