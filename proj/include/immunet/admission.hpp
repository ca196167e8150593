#pragma once

#include "immunet/world.hpp"

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace immunet {

struct Packet
{
    enum class Kind
    {
        Real,
        Honeypot,
    };

    NodeId src{ 0 };
    NodeId dst{ 0 };
    Kind kind{ Kind::Real };
    /// Present exactly on honeypot packets.
    std::optional<std::uint64_t> honeypotTag;
    std::uint32_t size{ 64 };
};

struct Observation
{
    Tick tick{ 0 };
    std::string what;

    friend bool operator==( const Observation&, const Observation& ) = default;
};

enum class Verdict
{
    Rejected,
    Friend,
    Hostile,
};

std::string_view
toString( Verdict verdict );

struct AdmissionVerdict
{
    NodeId nodeId{ 0 };
    Verdict verdict{ Verdict::Friend };
    std::vector<Observation> evidence;

    friend bool operator==( const AdmissionVerdict&, const AdmissionVerdict& ) = default;
};

struct ProbePolicy
{
    std::uint32_t probePacketCount{ 3 };
    Tick observationWindow{ 10 };
    /// Legitimate sinks; forwarding anywhere else is exfiltration.
    std::set<NodeId> databaseNodeIds;

    /// Throws std::invalid_argument when a field is out of range or a
    /// database id is not a node of `state`.
    void
    validate( const WorldState& state ) const;
};

/// Set of registered (friendly) 18-bit credential ids.
using IdRegistry = std::set<std::uint32_t>;

/// Unknown nodes within `radius` of any Friend or BaseStation, ascending id.
std::vector<NodeId>
scanCandidates( const WorldState& state, double radius );

/// Credential well-formed and its id registered.
bool
checkIdentity( const Node& node, const IdRegistry& registry, bool crcMode );

/// One honeypot probe in flight.
///
/// Construction injects the probe packets at the current tick; `observe` is
/// then called once per tick after the world has stepped. Several sessions
/// for different targets may be open at the same time.
class ProbeSession
{
public:
    ProbeSession( WorldState& state, NodeId target, ProbePolicy policy );

    void
    observe( WorldState& state );

    /// True once the observation window has elapsed.
    bool
    finished( Tick now ) const
    {
        return now >= m_startTick + m_policy.observationWindow;
    }

    NodeId
    target() const
    {
        return m_target;
    }

    Tick
    startTick() const
    {
        return m_startTick;
    }

    Verdict
    verdict() const
    {
        return m_exfiltrated ? Verdict::Hostile : Verdict::Friend;
    }

    const std::vector<Observation>&
    evidence() const
    {
        return m_evidence;
    }

private:
    struct Held
    {
        Packet packet;
        Tick forwardAt{ 0 };
        bool forwarded{ false };
    };

    NodeId m_target;
    ProbePolicy m_policy;
    Tick m_startTick;
    std::vector<Held> m_held;
    std::vector<Observation> m_evidence;
    bool m_exfiltrated{ false };
};

struct ProbeOutcome
{
    Verdict verdict{ Verdict::Friend };
    std::vector<Observation> evidence;
};

/// Sends the probe packets and runs the world for the observation window.
/// Throws LookupError for an unknown target.
ProbeOutcome
probeWithHoneypot( WorldState& state, NodeId target, const ProbePolicy& policy );

/// Identity check, then a honeypot probe for nodes that pass it.
AdmissionVerdict
filterNode( WorldState& state, NodeId target, const ProbePolicy& policy, const IdRegistry& registry,
            bool crcMode );

}  // namespace immunet
