#pragma once

#include "immunet/admission.hpp"
#include "immunet/response.hpp"
#include "immunet/scenario.hpp"
#include "immunet/world.hpp"

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace immunet {

/* Metrics rows
 *
 * One CSV line each: tick,node_id,event,verdict,affinity,energy,mode.
 * Events written by the event loop:
 *
 *   ground_truth        tick 0, verdict = scripted Hostile or Friend
 *   motion              verdict = Approaching/Receding/Suspicious
 *   credential_failure
 *   honeypot_sent
 *   forward             a probe packet forwarded by the node
 *   verdict             verdict = Rejected/Friend/Hostile
 *   mode                verdict = the mode event that fired
 *   detector_matured    node = new host, affinity to the target signature
 *   detection           node = target, affinity of the best detector
 *   detection_failed
 *   team                verdict = agent role of the member
 *   confrontation_start node = target, energy = initial energy
 *   drain               node = target, energy after the tick
 *   neutralized         node = target, energy at the end
 *   decoy_spawned       node = new decoy
 */

struct MetricsRow
{
    Tick tick{ 0 };
    NodeId nodeId{ 0 };
    std::string event;
    std::string verdict;
    std::optional<double> affinity;
    std::optional<double> energy;
    std::string mode;

    friend bool operator==( const MetricsRow&, const MetricsRow& ) = default;
};

struct Summary
{
    double detectionRate{ 1.0 };
    double falsePositiveRate{ 1.0 };
    double meanTicksToNeutralize{ 0.0 };
    double totalEnergyDrained{ 0.0 };
    std::size_t hostiles{ 0 };
    std::size_t hostilesFlagged{ 0 };
    std::size_t compliant{ 0 };
    std::size_t compliantFlagged{ 0 };
    std::size_t confrontations{ 0 };
    std::size_t neutralized{ 0 };
    /// Names of the fields whose denominator was zero.
    std::vector<std::string> vacuous;

    friend bool operator==( const Summary&, const Summary& ) = default;
};

struct RunReport
{
    std::vector<MetricsRow> rows;
    /// Latest verdict per probed node.
    std::map<NodeId, AdmissionVerdict> verdicts;
    std::vector<NeutralizationReport> neutralizations;
    Summary summary;
    WorldState finalState;
};

/// Runs the full sense, track, admit, detect and respond loop for
/// config.maxTicks ticks. Deterministic for a given config.
RunReport
runScenario( const ScenarioConfig& config );

/// Recomputes the summary from rows alone. A node counts as flagged when its
/// last verdict row is Hostile or Rejected; rates with an empty denominator
/// are 1.0 and listed as vacuous.
Summary
summarize( const std::vector<MetricsRow>& rows );

void
writeMetrics( std::ostream& out, const std::vector<MetricsRow>& rows, const Summary& summary );

/// Throws std::runtime_error naming the path when it cannot be written.
void
emitMetrics( const RunReport& report, const std::filesystem::path& path );

struct MetricsFile
{
    std::vector<MetricsRow> rows;
    /// key=value pairs of the summary trailer, verbatim.
    std::map<std::string, std::string> trailer;
};

/// Throws ParseError with the line number on malformed input.
MetricsFile
readMetrics( std::istream& in );

/// key=value lines as they appear in the trailer, without the "# " prefix.
std::vector<std::pair<std::string, std::string>>
summaryFields( const Summary& summary );

}  // namespace immunet
