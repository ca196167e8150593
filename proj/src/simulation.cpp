#include "immunet/simulation.hpp"

#include "immunet/errors.hpp"
#include "immunet/tracking.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <deque>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace immunet {

namespace {

constexpr std::string_view kHeader = "tick,node_id,event,verdict,affinity,energy,mode";

enum : std::uint64_t
{
    kTrackingStream = 1,
    kSelectionStream = 2,
    kMaturationStream = 3,
};

struct Track
{
    std::vector<Particle> particles;
    std::map<NodeId, Sign> lastReadings;
    std::deque<double> window;
    std::optional<Motion> motion;
};

struct Confrontation
{
    Team team;
    Tick startTick{ 0 };
    double initialEnergy{ 0.0 };
    std::uint64_t packets{ 0 };
};

/// Low-variance resampling; keeps the particle count and resets weights.
std::vector<Particle>
resample( const std::vector<Particle>& particles, Rng& rng )
{
    const std::size_t n = particles.size();
    std::vector<Particle> out;
    out.reserve( n );
    const double step = 1.0 / static_cast<double>( n );
    double target = rng.uniform() * step;
    double cumulative = particles.front().weight;
    std::size_t i = 0;
    for ( std::size_t k = 0; k < n; ++k ) {
        while ( target > cumulative && i + 1 < n ) {
            cumulative += particles[++i].weight;
        }
        out.push_back( particles[i] );
        out.back().weight = step;
        target += step;
    }
    return out;
}

class EventLoop
{
public:
    explicit EventLoop( const ScenarioConfig& config ) :
        m_config( config ),
        m_trackRng( Rng( config.seed ).fork( kTrackingStream ) ),
        m_selectRng( Rng( config.seed ).fork( kSelectionStream ) ),
        m_matureRng( Rng( config.seed ).fork( kMaturationStream ) )
    {
        m_world.rngSeed = config.seed;
        for ( const auto& node : config.nodes ) {
            m_world.nodes.emplace( node.id, node );
        }

        m_policy.probePacketCount = config.admission.probePacketCount;
        m_policy.observationWindow = config.admission.observationWindow;
        Position sum;
        std::size_t selfNodes = 0;
        for ( const auto& [id, node] : m_world.nodes ) {
            if ( node.role == Role::DatabaseNode ) {
                m_policy.databaseNodeIds.insert( id );
            }
            if ( node.role == Role::Unknown ) {
                m_truth[id] = isScriptedHostile( config, node );
            } else {
                sum.x += node.position.x;
                sum.y += node.position.y;
                ++selfNodes;
            }
        }
        m_centroid = selfNodes == 0 ? Position{ ( config.area.minX + config.area.maxX ) / 2,
                                                ( config.area.minY + config.area.maxY ) / 2 }
                                    : Position{ sum.x / static_cast<double>( selfNodes ),
                                                sum.y / static_cast<double>( selfNodes ) };

        // Legitimate behavior: silent, or forwarding only to database nodes.
        const std::size_t length = config.ais.length;
        m_self = { signatureOf( {}, length ), signatureOf( { DestinationClass::Database }, length ) };

        std::vector<NodeId> friends;
        for ( const auto& [id, node] : m_world.nodes ) {
            if ( node.role == Role::Friend ) {
                friends.push_back( id );
            }
        }
        const auto detectors =
            negativeSelection( m_self, std::min( config.ais.detectorCount, friends.size() ),
                               config.ais.affinity, config.ais.maxAttempts, m_selectRng );
        for ( std::size_t i = 0; i < detectors.size(); ++i ) {
            m_detectors[friends[i]] = detectors[i];
        }
    }

    RunReport
    run()
    {
        for ( const auto& [id, hostile] : m_truth ) {
            emit( id, "ground_truth", hostile ? "Hostile" : "Friend" );
        }
        for ( Tick t = 0; t < m_config.maxTicks; ++t ) {
            std::map<NodeId, Position> before;
            for ( const auto& [id, node] : m_world.nodes ) {
                before.emplace( id, node.position );
            }
            m_world = stepWorld( std::move( m_world ) );
            observeProbes();
            closeProbes();
            track( before );
            openProbes();
            respond();
            for ( auto& [id, detector] : m_detectors ) {
                ++detector.age;
            }
        }
        m_report.summary = summary();
        m_report.finalState = std::move( m_world );
        return std::move( m_report );
    }

private:
    void
    emit( NodeId node, std::string event, std::string verdict = {}, std::optional<double> affinity = {},
          std::optional<double> energy = {} )
    {
        m_report.rows.push_back( { .tick = m_world.tick,
                                   .nodeId = node,
                                   .event = std::move( event ),
                                   .verdict = std::move( verdict ),
                                   .affinity = affinity,
                                   .energy = energy,
                                   .mode = std::string( toString( m_mode ) ) } );
    }

    void
    observeProbes()
    {
        const std::size_t cursor = m_world.eventLog.size();
        for ( auto& [id, session] : m_sessions ) {
            session.observe( m_world );
        }
        for ( std::size_t i = cursor; i < m_world.eventLog.size(); ++i ) {
            const Event& event = m_world.eventLog[i];
            if ( event.kind == EventKind::Forward ) {
                emit( event.node, "forward" );
            }
        }
    }

    void
    closeProbes()
    {
        for ( auto it = m_sessions.begin(); it != m_sessions.end(); ) {
            const ProbeSession& session = it->second;
            if ( !session.finished( m_world.tick ) ) {
                ++it;
                continue;
            }
            const NodeId id = it->first;
            const Verdict verdict = session.verdict();
            m_report.verdicts[id] = { id, verdict, session.evidence() };
            m_world.log( { .tick = m_world.tick, .kind = EventKind::Verdict, .node = id,
                           .detail = std::string( toString( verdict ) ) } );
            emit( id, "verdict", std::string( toString( verdict ) ) );
            Node& node = m_world.node( id );
            if ( verdict == Verdict::Hostile ) {
                node.role = Role::Hostile;
                m_reprobeAt.erase( id );
                m_queue.push_back( id );
            } else {
                node.role = Role::Friend;
                m_reprobeAt[id] = m_world.tick + m_config.admission.reprobeInterval;
            }
            it = m_sessions.erase( it );
        }
    }

    void
    track( const std::map<NodeId, Position>& before )
    {
        const TrackingParams& params = m_config.tracking;
        const Area& area = m_config.area;
        for ( const auto& [id, node] : m_world.nodes ) {
            if ( node.role != Role::Unknown || m_sessions.contains( id ) || m_report.verdicts.contains( id ) ) {
                continue;
            }
            std::vector<Node> sensors;
            for ( const auto& [sid, sensor] : m_world.nodes ) {
                if ( sensor.role == Role::Friend
                     && distance( sensor.position, node.position ) <= params.sensingRadius ) {
                    sensors.push_back( sensor );
                }
            }
            Track& track = m_tracks[id];
            if ( sensors.empty() ) {
                track.lastReadings.clear();
                continue;
            }

            if ( track.particles.empty() ) {
                Position mid;
                for ( const auto& sensor : sensors ) {
                    mid.x += sensor.position.x / static_cast<double>( sensors.size() );
                    mid.y += sensor.position.y / static_cast<double>( sensors.size() );
                }
                const double spread = params.sensingRadius;
                const double weight = 1.0 / static_cast<double>( params.config.particleCount );
                for ( std::size_t i = 0; i < params.config.particleCount; ++i ) {
                    const Position p{
                        std::clamp( mid.x + m_trackRng.uniform( -spread, spread ), area.minX, area.maxX ),
                        std::clamp( mid.y + m_trackRng.uniform( -spread, spread ), area.minY, area.maxY ) };
                    track.particles.push_back( { p, p, weight } );
                }
            }

            std::map<NodeId, Sign> readings;
            std::vector<Node> usable;
            std::vector<Sign> prevSigns;
            std::vector<Sign> currSigns;
            for ( const auto& sensor : sensors ) {
                const Sign sign = sense( sensor, before.at( id ), node.position, params.config.noiseFlipProb,
                                         m_trackRng, m_world.tick )
                                      .sign;
                readings.emplace( sensor.id, sign );
                const auto previous = track.lastReadings.find( sensor.id );
                if ( previous != track.lastReadings.end() ) {
                    usable.push_back( sensor );
                    prevSigns.push_back( previous->second );
                    currSigns.push_back( sign );
                }
            }
            track.lastReadings = std::move( readings );

            for ( auto& particle : track.particles ) {
                particle.prevPosition = particle.currPosition;
                particle.currPosition = {
                    std::clamp( particle.currPosition.x + m_trackRng.normal( 0.0, params.motionSigma ),
                                area.minX, area.maxX ),
                    std::clamp( particle.currPosition.y + m_trackRng.normal( 0.0, params.motionSigma ),
                                area.minY, area.maxY ) };
            }
            if ( !usable.empty() ) {
                track.particles =
                    reweighParticles( usable, prevSigns, currSigns, std::move( track.particles ), params.config );
            }
            const Position estimate = estimatePosition( track.particles );
            track.particles = resample( track.particles, m_trackRng );

            track.window.push_back( distance( estimate, m_centroid ) );
            if ( track.window.size() > params.motionWindow ) {
                track.window.pop_front();
            }
            if ( track.window.size() == params.motionWindow ) {
                const std::vector<double> window( track.window.begin(), track.window.end() );
                const Motion motion = classifyMotion( window, params.motionTolerance );
                if ( motion != track.motion ) {
                    track.motion = motion;
                    emit( id, "motion", std::string( toString( motion ) ) );
                }
                if ( motion == Motion::Suspicious ) {
                    m_suspicious.insert( id );
                }
            }
        }
    }

    void
    openProbe( NodeId id )
    {
        m_sessions.emplace( id, ProbeSession( m_world, id, m_policy ) );
        emit( id, "honeypot_sent" );
    }

    void
    openProbes()
    {
        const AdmissionParams& params = m_config.admission;
        std::set<NodeId> candidates( m_suspicious.begin(), m_suspicious.end() );
        m_suspicious.clear();
        for ( const auto id : scanCandidates( m_world, params.scanRadius ) ) {
            candidates.insert( id );
        }
        for ( const auto id : candidates ) {
            const Node& node = m_world.node( id );
            if ( node.role != Role::Unknown || m_sessions.contains( id ) || m_report.verdicts.contains( id ) ) {
                continue;
            }
            if ( !checkIdentity( node, m_config.registry, params.crcMode ) ) {
                m_world.log( { .tick = m_world.tick, .kind = EventKind::CredentialFailure, .node = id } );
                m_world.log( { .tick = m_world.tick, .kind = EventKind::Verdict, .node = id,
                               .detail = "Rejected" } );
                m_report.verdicts[id] = { id, Verdict::Rejected, { { m_world.tick, "credential-failure" } } };
                emit( id, "credential_failure" );
                emit( id, "verdict", "Rejected" );
                continue;
            }
            openProbe( id );
        }

        for ( auto it = m_reprobeAt.begin(); it != m_reprobeAt.end(); ) {
            if ( it->second > m_world.tick || m_sessions.contains( it->first ) ) {
                ++it;
                continue;
            }
            openProbe( it->first );
            it = m_reprobeAt.erase( it );
        }
    }

    void
    changeMode( ModeEvent event, NodeId node )
    {
        m_mode = transitionMode( m_mode, event );
        m_world.log( { .tick = m_world.tick, .kind = EventKind::ModeChange, .node = node,
                       .detail = std::string( toString( m_mode ) ) } );
        emit( node, "mode", std::string( toString( event ) ) );
    }

    /// Best detector hosted by a Friend, or nothing.
    std::optional<double>
    runDetect( NodeId target, const Bitstring& signature )
    {
        std::vector<NodeId> hosts;
        std::vector<Detector> detectors;
        for ( const auto& [id, detector] : m_detectors ) {
            if ( m_world.node( id ).role == Role::Friend ) {
                hosts.push_back( id );
                detectors.push_back( detector );
            }
        }
        const auto found = detect( detectors, signature, m_config.ais.affinity );
        if ( !found ) {
            return std::nullopt;
        }
        m_detectors[hosts[found->index]] = detectors[found->index];
        m_world.log( { .tick = m_world.tick, .kind = EventKind::Detection, .node = target,
                       .peer = hosts[found->index], .value = found->affinity } );
        return found->affinity;
    }

    /// Clonal maturation of a detector for `signature` that stays self-tolerant.
    std::optional<Bitstring>
    mature( const Bitstring& signature )
    {
        const AisParams& params = m_config.ais;
        const AffinityFn<Bitstring> eval = [&]( const Bitstring& genome ) {
            for ( const auto& self : m_self ) {
                if ( matches( genome, self, params.affinity ) ) {
                    return 0.0;
                }
            }
            return affinity( genome, signature, params.affinity );
        };
        const auto usable = [&]( const Antibody<Bitstring>& a ) {
            return a.affinity > 0.0 && matches( a.genome, signature, params.affinity );
        };

        std::vector<Antibody<Bitstring>> population;
        for ( std::size_t i = 0; i < params.clonal.populationSize; ++i ) {
            Bitstring genome = Bitstring::random( params.length, m_matureRng );
            const double score = eval( genome );
            population.push_back( { std::move( genome ), score } );
        }
        for ( std::size_t generation = 0;; ++generation ) {
            const auto best = std::max_element(
                population.begin(), population.end(),
                []( const auto& a, const auto& b ) { return a.affinity < b.affinity; } );
            if ( usable( *best ) ) {
                return best->genome;
            }
            if ( generation == params.maturationGenerations ) {
                return std::nullopt;
            }
            population = clonalStep( std::move( population ), eval, params.clonal, m_matureRng ).population;
        }
    }

    /// Friend nearest to the target.
    std::optional<NodeId>
    nearestHost( NodeId target ) const
    {
        const Position at = m_world.node( target ).position;
        std::optional<NodeId> best;
        double bestDistance = 0.0;
        for ( const auto& [id, node] : m_world.nodes ) {
            if ( node.role != Role::Friend ) {
                continue;
            }
            const double d = distance( node.position, at );
            if ( !best || d < bestDistance ) {
                best = id;
                bestDistance = d;
            }
        }
        return best;
    }

    void
    startRecognition( NodeId target )
    {
        changeMode( ModeEvent::AnomalyDetected, target );
        const Bitstring signature = behavioralSignature( m_world, target, m_config.ais.length );

        auto found = runDetect( target, signature );
        if ( !found ) {
            const auto host = nearestHost( target );
            if ( host ) {
                if ( auto pattern = mature( signature ) ) {
                    const double score = affinity( *pattern, signature, m_config.ais.affinity );
                    m_detectors[*host] = { .pattern = std::move( *pattern ), .state = DetectorState::Mature };
                    emit( *host, "detector_matured", {}, score );
                    found = runDetect( target, signature );
                }
            }
        }
        if ( !found ) {
            emit( target, "detection_failed" );
            changeMode( ModeEvent::Timeout, target );
            return;
        }
        emit( target, "detection", {}, *found );
        changeMode( ModeEvent::PlanDecided, target );

        const ResponseParams& params = m_config.response;
        const Ranking ranking = localScan( m_world, target, m_detectors, m_config.ais.affinity );
        Team team = formTeam( ranking, m_world, target, params.drain.recallRadius );
        for ( const auto& [id, role] : assignRoles( team, ranking, m_world, params.adjacencyRadius ) ) {
            emit( id, "team", std::string( toString( role ) ) );
        }
        const double initial = m_world.node( target ).energy;
        emit( target, "confrontation_start", {}, {}, initial );
        m_started.emplace_back( target, initial );
        m_active = Confrontation{ std::move( team ), m_world.tick, initial, 0 };
        if ( initial <= params.drain.neutralizedFloor ) {
            finishConfrontation();
        }
    }

    void
    finishConfrontation()
    {
        const ResponseParams& params = m_config.response;
        const NodeId target = m_active->team.target;
        const double finalEnergy = m_world.node( target ).energy;
        m_report.neutralizations.push_back( { .target = target,
                                              .team = m_active->team,
                                              .ticksToNeutralize = m_world.tick - m_active->startTick,
                                              .packetsSent = m_active->packets,
                                              .initialEnergy = m_active->initialEnergy,
                                              .finalEnergy = finalEnergy } );
        m_world.log( { .tick = m_world.tick, .kind = EventKind::Neutralized, .node = target,
                       .value = finalEnergy } );
        emit( target, "neutralized", {}, {}, finalEnergy );
        changeMode( ModeEvent::TargetNeutralized, target );
        m_active.reset();

        if ( params.counterAttack ) {
            m_world = counterAttack( std::move( m_world ), target, true, params.decoyEnergy,
                                     params.drain.neutralizedFloor );
            emit( m_world.nodes.rbegin()->first, "decoy_spawned", {}, {}, params.decoyEnergy );
        }
    }

    void
    respond()
    {
        const DrainConfig& drain = m_config.response.drain;
        if ( m_active ) {
            m_world = drainAttackTick( std::move( m_world ), m_active->team, drain );
            m_active->packets += m_active->team.members.size() * std::uint64_t{ drain.packetsPerMemberPerTick };
            const NodeId target = m_active->team.target;
            const double energy = m_world.node( target ).energy;
            emit( target, "drain", {}, {}, energy );
            if ( energy <= drain.neutralizedFloor ) {
                finishConfrontation();
            }
        }
        if ( !m_active && m_mode == Mode::Sensing && !m_queue.empty() ) {
            const NodeId next = m_queue.front();
            m_queue.pop_front();
            startRecognition( next );
        }
    }

    Summary
    summary() const
    {
        Summary out;
        for ( const auto& [id, hostile] : m_truth ) {
            const auto it = m_report.verdicts.find( id );
            const bool flagged = it != m_report.verdicts.end() && it->second.verdict != Verdict::Friend;
            if ( hostile ) {
                ++out.hostiles;
                out.hostilesFlagged += flagged ? 1 : 0;
            } else {
                ++out.compliant;
                out.compliantFlagged += flagged ? 1 : 0;
            }
        }
        out.confrontations = m_started.size();
        out.neutralized = m_report.neutralizations.size();
        for ( const auto& [target, initial] : m_started ) {
            out.totalEnergyDrained += initial - m_world.node( target ).energy;
        }

        if ( out.hostiles == 0 ) {
            out.vacuous.emplace_back( "detection_rate" );
        } else {
            out.detectionRate = static_cast<double>( out.hostilesFlagged ) / static_cast<double>( out.hostiles );
        }
        if ( out.compliant == 0 ) {
            out.vacuous.emplace_back( "false_positive_rate" );
        } else {
            out.falsePositiveRate =
                static_cast<double>( out.compliantFlagged ) / static_cast<double>( out.compliant );
        }
        if ( out.neutralized == 0 ) {
            out.vacuous.emplace_back( "mean_ticks_to_neutralize" );
        } else {
            double ticks = 0.0;
            for ( const auto& report : m_report.neutralizations ) {
                ticks += static_cast<double>( report.ticksToNeutralize );
            }
            out.meanTicksToNeutralize = ticks / static_cast<double>( out.neutralized );
        }
        return out;
    }

    const ScenarioConfig& m_config;
    WorldState m_world;
    Rng m_trackRng;
    Rng m_selectRng;
    Rng m_matureRng;
    ProbePolicy m_policy;
    Position m_centroid;
    std::map<NodeId, bool> m_truth;
    std::vector<Bitstring> m_self;
    DetectorMap m_detectors;

    std::map<NodeId, Track> m_tracks;
    std::set<NodeId> m_suspicious;
    std::map<NodeId, ProbeSession> m_sessions;
    std::map<NodeId, Tick> m_reprobeAt;

    Mode m_mode{ Mode::Sensing };
    std::deque<NodeId> m_queue;
    std::optional<Confrontation> m_active;
    std::vector<std::pair<NodeId, double>> m_started;

    RunReport m_report;
};

std::string
number( const std::optional<double>& value )
{
    return value ? fmt::format( "{:.6f}", *value ) : std::string{};
}

std::vector<std::string_view>
splitFields( std::string_view line )
{
    std::vector<std::string_view> fields;
    while ( true ) {
        const auto comma = line.find( ',' );
        fields.push_back( line.substr( 0, comma ) );
        if ( comma == std::string_view::npos ) {
            return fields;
        }
        line.remove_prefix( comma + 1 );
    }
}

template<typename T>
T
parseNumber( std::string_view text, std::size_t lineNumber, std::string_view column )
{
    T value{};
    const auto [end, error] = std::from_chars( text.data(), text.data() + text.size(), value );
    if ( error != std::errc{} || end != text.data() + text.size() ) {
        throw ParseError( fmt::format( "line {}: bad {} '{}'", lineNumber, column, text ) );
    }
    return value;
}

}  // namespace

RunReport
runScenario( const ScenarioConfig& config )
{
    return EventLoop( config ).run();
}

Summary
summarize( const std::vector<MetricsRow>& rows )
{
    std::map<NodeId, bool> truth;
    std::map<NodeId, std::string> lastVerdict;
    std::map<NodeId, const MetricsRow*> started;
    std::map<NodeId, double> latestEnergy;
    Summary out;
    double ticks = 0.0;

    for ( const auto& row : rows ) {
        if ( row.event == "ground_truth" ) {
            truth[row.nodeId] = row.verdict == "Hostile";
        } else if ( row.event == "verdict" ) {
            lastVerdict[row.nodeId] = row.verdict;
        } else if ( row.event == "confrontation_start" ) {
            ++out.confrontations;
            started[row.nodeId] = &row;
            latestEnergy[row.nodeId] = row.energy.value_or( 0.0 );
        } else if ( row.event == "drain" && started.contains( row.nodeId ) ) {
            latestEnergy[row.nodeId] = row.energy.value_or( 0.0 );
        } else if ( row.event == "neutralized" && started.contains( row.nodeId ) ) {
            ++out.neutralized;
            ticks += static_cast<double>( row.tick - started[row.nodeId]->tick );
        }
    }

    for ( const auto& [id, hostile] : truth ) {
        const auto it = lastVerdict.find( id );
        const bool flagged = it != lastVerdict.end() && ( it->second == "Hostile" || it->second == "Rejected" );
        if ( hostile ) {
            ++out.hostiles;
            out.hostilesFlagged += flagged ? 1 : 0;
        } else {
            ++out.compliant;
            out.compliantFlagged += flagged ? 1 : 0;
        }
    }
    for ( const auto& [id, row] : started ) {
        out.totalEnergyDrained += row->energy.value_or( 0.0 ) - latestEnergy[id];
    }

    if ( out.hostiles == 0 ) {
        out.vacuous.emplace_back( "detection_rate" );
    } else {
        out.detectionRate = static_cast<double>( out.hostilesFlagged ) / static_cast<double>( out.hostiles );
    }
    if ( out.compliant == 0 ) {
        out.vacuous.emplace_back( "false_positive_rate" );
    } else {
        out.falsePositiveRate = static_cast<double>( out.compliantFlagged ) / static_cast<double>( out.compliant );
    }
    if ( out.neutralized == 0 ) {
        out.vacuous.emplace_back( "mean_ticks_to_neutralize" );
    } else {
        out.meanTicksToNeutralize = ticks / static_cast<double>( out.neutralized );
    }
    return out;
}

std::vector<std::pair<std::string, std::string>>
summaryFields( const Summary& summary )
{
    std::string vacuous;
    for ( const auto& name : summary.vacuous ) {
        vacuous += ( vacuous.empty() ? "" : ";" ) + name;
    }
    return {
        { "detection_rate", fmt::format( "{:.6f}", summary.detectionRate ) },
        { "false_positive_rate", fmt::format( "{:.6f}", summary.falsePositiveRate ) },
        { "mean_ticks_to_neutralize", fmt::format( "{:.6f}", summary.meanTicksToNeutralize ) },
        { "total_energy_drained", fmt::format( "{:.6f}", summary.totalEnergyDrained ) },
        { "hostiles", std::to_string( summary.hostiles ) },
        { "hostiles_flagged", std::to_string( summary.hostilesFlagged ) },
        { "compliant", std::to_string( summary.compliant ) },
        { "compliant_flagged", std::to_string( summary.compliantFlagged ) },
        { "confrontations", std::to_string( summary.confrontations ) },
        { "neutralized", std::to_string( summary.neutralized ) },
        { "vacuous", vacuous.empty() ? "none" : vacuous },
    };
}

void
writeMetrics( std::ostream& out, const std::vector<MetricsRow>& rows, const Summary& summary )
{
    out << kHeader << '\n';
    for ( const auto& row : rows ) {
        out << row.tick << ',' << row.nodeId << ',' << row.event << ',' << row.verdict << ','
            << number( row.affinity ) << ',' << number( row.energy ) << ',' << row.mode << '\n';
    }
    out << "# summary:\n";
    for ( const auto& [key, value] : summaryFields( summary ) ) {
        out << "# " << key << '=' << value << '\n';
    }
}

void
emitMetrics( const RunReport& report, const std::filesystem::path& path )
{
    std::ofstream out( path, std::ios::binary | std::ios::trunc );
    if ( !out ) {
        throw std::runtime_error( "cannot write metrics to '" + path.string() + "'" );
    }
    writeMetrics( out, report.rows, report.summary );
    out.flush();
    if ( !out ) {
        throw std::runtime_error( "error while writing metrics to '" + path.string() + "'" );
    }
}

MetricsFile
readMetrics( std::istream& in )
{
    MetricsFile file;
    std::string line;
    std::size_t lineNumber = 0;
    if ( !std::getline( in, line ) || line != kHeader ) {
        throw ParseError( "line 1: expected header '" + std::string( kHeader ) + "'" );
    }
    ++lineNumber;
    bool inTrailer = false;
    while ( std::getline( in, line ) ) {
        ++lineNumber;
        if ( line.starts_with( "#" ) ) {
            if ( line == "# summary:" ) {
                inTrailer = true;
                continue;
            }
            const auto eq = line.find( '=' );
            if ( !inTrailer || !line.starts_with( "# " ) || eq == std::string::npos ) {
                throw ParseError( fmt::format( "line {}: unexpected comment '{}'", lineNumber, line ) );
            }
            file.trailer[line.substr( 2, eq - 2 )] = line.substr( eq + 1 );
            continue;
        }
        if ( inTrailer ) {
            throw ParseError( fmt::format( "line {}: data row after the summary trailer", lineNumber ) );
        }
        const auto fields = splitFields( line );
        if ( fields.size() != 7 ) {
            throw ParseError( fmt::format( "line {}: expected 7 fields, got {}", lineNumber, fields.size() ) );
        }
        MetricsRow row;
        row.tick = parseNumber<Tick>( fields[0], lineNumber, "tick" );
        row.nodeId = parseNumber<NodeId>( fields[1], lineNumber, "node_id" );
        row.event = fields[2];
        row.verdict = fields[3];
        if ( !fields[4].empty() ) {
            row.affinity = parseNumber<double>( fields[4], lineNumber, "affinity" );
        }
        if ( !fields[5].empty() ) {
            row.energy = parseNumber<double>( fields[5], lineNumber, "energy" );
        }
        row.mode = fields[6];
        file.rows.push_back( std::move( row ) );
    }
    return file;
}

}  // namespace immunet
