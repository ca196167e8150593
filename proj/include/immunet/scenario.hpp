#pragma once

#include "immunet/admission.hpp"
#include "immunet/ais.hpp"
#include "immunet/response.hpp"
#include "immunet/tracking.hpp"
#include "immunet/world.hpp"

#include <cstdint>
#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace immunet {

struct TrackingParams
{
    TrackingConfig config;
    /// Sensors farther than this from a target do not report on it.
    double sensingRadius{ 0.25 };
    /// Std-dev of the per-tick particle displacement proposal.
    double motionSigma{ 0.02 };
    std::size_t motionWindow{ 3 };
    double motionTolerance{ 0.0 };

    friend bool operator==( const TrackingParams&, const TrackingParams& ) = default;
};

struct AdmissionParams
{
    std::uint32_t probePacketCount{ 3 };
    Tick observationWindow{ 10 };
    double scanRadius{ 0.15 };
    Tick reprobeInterval{ 50 };
    bool crcMode{ false };

    friend bool operator==( const AdmissionParams&, const AdmissionParams& ) = default;
};

struct AisParams
{
    std::size_t length{ 32 };
    AffinityConfig affinity;
    std::size_t detectorCount{ 64 };
    std::size_t maxAttempts{ 100000 };
    /// Clonal generations spent maturing a detector when none recognizes a
    /// confirmed hostile.
    std::size_t maturationGenerations{ 40 };
    ClonalParams clonal{ .populationSize = 20,
                         .selectCount = 8,
                         .cloneBudget = 20,
                         .maturityLevel = 80.0,
                         .replaceWorstN = 4,
                         .maxGenerations = 40,
                         .normalizeAffinity = false };
};

struct ResponseParams
{
    DrainConfig drain;
    bool counterAttack{ false };
    double decoyEnergy{ 100.0 };
    double adjacencyRadius{ 0.1 };
};

/// Declarative experiment input. Node roles in a scenario are limited to
/// friend, unknown, base_station and database.
struct ScenarioConfig
{
    std::uint64_t seed{ 0 };
    Tick maxTicks{ 200 };
    Area area;
    IdRegistry registry;
    /// Ids that exist outside the network (enemy sinks) and may be used as
    /// forwarding destinations.
    std::set<NodeId> externalIds;
    std::vector<Node> nodes;

    TrackingParams tracking;
    AdmissionParams admission;
    AisParams ais;
    ResponseParams response;
    ClonalParams optimizer;
};

/// Ground truth: an Unknown node without a valid registered credential, or
/// one that forwards to anything other than a database node.
bool
isScriptedHostile( const ScenarioConfig& config, const Node& node );

/// Collects every invariant violation as "<field path>: <problem>".
std::vector<std::string>
validationErrors( const ScenarioConfig& config );

/// Throws ParseError (with line/column) or ValidationError (all violations).
ScenarioConfig
parseScenario( std::string_view text );

/// Throws ParseError if the file cannot be read, otherwise as parseScenario.
ScenarioConfig
loadScenario( const std::filesystem::path& path );

/// JSON text that parseScenario reads back to an equivalent config.
std::string
dumpScenario( const ScenarioConfig& config );

/// Layout for the synthetic patrol scenario: a base station at the centre,
/// database nodes, a jittered grid of friendly sensors and newcomers walking
/// in from the border.
struct SynthesisLayout
{
    std::uint64_t seed{ 1 };
    std::size_t friends{ 147 };
    std::size_t databases{ 2 };
    std::size_t hostiles{ 20 };
    std::size_t compliant{ 30 };
    Tick maxTicks{ 200 };
    std::size_t particleCount{ 200 };
};

ScenarioConfig
synthesizeScenario( const SynthesisLayout& layout );

}  // namespace immunet
