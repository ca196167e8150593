#include "immunet/scenario.hpp"

#include "immunet/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <set>
#include <sstream>

namespace immunet {

using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

namespace {

/// Reads the keys of one JSON object, recording type errors and unknown keys
/// against a dotted field path.
class Fields
{
public:
    Fields( const Json& object, std::string path, std::vector<std::string>& errors ) :
        m_object( object ),
        m_path( std::move( path ) ),
        m_errors( errors )
    {
        if ( !object.is_object() ) {
            fail( m_path, "expected an object" );
        }
    }

    Fields( const Fields& ) = delete;
    Fields& operator=( const Fields& ) = delete;

    ~Fields()
    {
        if ( !m_object.is_object() ) {
            return;
        }
        for ( const auto& [key, value] : m_object.items() ) {
            if ( !m_seen.contains( key ) ) {
                fail( join( key ), "unknown key" );
            }
        }
    }

    /// The member under `key`, or nullptr if absent.
    const Json*
    child( const std::string& key )
    {
        m_seen.insert( key );
        if ( !m_object.is_object() ) {
            return nullptr;
        }
        const auto it = m_object.find( key );
        return it == m_object.end() ? nullptr : &*it;
    }

    std::string
    join( const std::string& key ) const
    {
        return m_path.empty() ? key : m_path + "." + key;
    }

    /// Returns true when the key was present and well-typed.
    template<typename T>
    bool
    read( const std::string& key, T& out )
    {
        const Json* value = child( key );
        if ( value == nullptr ) {
            return false;
        }
        return convert( *value, join( key ), out );
    }

    template<typename T>
    bool
    convert( const Json& value, const std::string& path, T& out )
    {
        if constexpr ( std::is_same_v<T, bool> ) {
            if ( !value.is_boolean() ) {
                return fail( path, "expected true or false" );
            }
            out = value.get<bool>();
        } else if constexpr ( std::is_integral_v<T> ) {
            if ( !value.is_number_unsigned() ) {
                return fail( path, "expected a non-negative integer" );
            }
            const auto raw = value.get<std::uint64_t>();
            if ( raw > std::numeric_limits<T>::max() ) {
                return fail( path, "integer out of range" );
            }
            out = static_cast<T>( raw );
        } else if constexpr ( std::is_floating_point_v<T> ) {
            if ( !value.is_number() ) {
                return fail( path, "expected a number" );
            }
            out = value.get<T>();
        } else {
            if ( !value.is_string() ) {
                return fail( path, "expected a string" );
            }
            out = value.get<std::string>();
        }
        return true;
    }

    bool
    fail( const std::string& path, const std::string& problem )
    {
        m_errors.push_back( ( path.empty() ? "<root>" : path ) + ": " + problem );
        return false;
    }

private:
    const Json& m_object;
    std::string m_path;
    std::vector<std::string>& m_errors;
    std::set<std::string> m_seen;
};

bool
readPosition( const Json& value, const std::string& path, Position& out,
              std::vector<std::string>& errors )
{
    if ( !value.is_array() || value.size() != 2 || !value[0].is_number() || !value[1].is_number() ) {
        errors.push_back( path + ": expected [x, y]" );
        return false;
    }
    out = { value[0].get<double>(), value[1].get<double>() };
    return true;
}

Node
readNode( const Json& value, const std::string& path, std::vector<std::string>& errors )
{
    Fields fields( value, path, errors );
    Node node;
    node.energy = 100.0;
    if ( !fields.read( "id", node.id ) && fields.child( "id" ) == nullptr ) {
        fields.fail( fields.join( "id" ), "required" );
    }

    std::string role;
    if ( fields.read( "role", role ) ) {
        const auto parsed = roleFromString( role );
        const bool allowed = parsed && ( *parsed == Role::Friend || *parsed == Role::Unknown
                                         || *parsed == Role::BaseStation
                                         || *parsed == Role::DatabaseNode );
        if ( !allowed ) {
            fields.fail( fields.join( "role" ),
                         "'" + role + "' is not one of friend, unknown, base_station, database" );
        } else {
            node.role = *parsed;
        }
    } else if ( fields.child( "role" ) == nullptr ) {
        fields.fail( fields.join( "role" ), "required" );
    }

    fields.read( "energy", node.energy );

    if ( const Json* trajectory = fields.child( "trajectory" ) ) {
        if ( !trajectory->is_array() ) {
            fields.fail( fields.join( "trajectory" ), "expected an array of [x, y]" );
        } else {
            for ( std::size_t i = 0; i < trajectory->size(); ++i ) {
                Position p;
                if ( readPosition( ( *trajectory )[i],
                                   fields.join( "trajectory" ) + "[" + std::to_string( i ) + "]", p,
                                   errors ) ) {
                    node.trajectory.push_back( p );
                }
            }
        }
    }
    if ( const Json* position = fields.child( "position" ) ) {
        readPosition( *position, fields.join( "position" ), node.position, errors );
    } else if ( !node.trajectory.empty() ) {
        node.position = node.trajectory.front();
    } else {
        fields.fail( fields.join( "position" ), "required when no trajectory is given" );
    }

    node.credential = makeCredential( node.id % kCredentialIdLimit );
    if ( const Json* credential = fields.child( "credential" ) ) {
        Fields cred( *credential, fields.join( "credential" ), errors );
        std::uint32_t idBits = node.credential.idBits;
        if ( cred.read( "id_bits", idBits ) ) {
            node.credential = makeCredential( idBits % kCredentialIdLimit );
            node.credential.idBits = idBits;
        }
        cred.read( "parity_bit", node.credential.parityBit );
        cred.read( "crc8", node.credential.crc8 );
    }

    if ( const Json* behavior = fields.child( "behavior" ) ) {
        Fields script( *behavior, fields.join( "behavior" ), errors );
        std::string kind = "drop";
        script.read( "kind", kind );
        if ( kind == "drop" ) {
            node.behavior.kind = PacketBehavior::Kind::Drop;
        } else if ( kind == "forward" ) {
            node.behavior.kind = PacketBehavior::Kind::Forward;
            if ( script.child( "destination" ) == nullptr ) {
                script.fail( script.join( "destination" ), "required for kind 'forward'" );
            }
        } else {
            script.fail( script.join( "kind" ), "'" + kind + "' is not one of drop, forward" );
        }
        script.read( "destination", node.behavior.destination );
        script.read( "delay", node.behavior.delay );
        script.read( "active_from", node.behavior.activeFrom );
    }
    return node;
}

void
readTracking( Fields& fields, TrackingParams& out )
{
    fields.read( "threshold", out.config.threshold );
    fields.read( "floor_weight", out.config.floorWeight );
    fields.read( "noise_flip_prob", out.config.noiseFlipProb );
    fields.read( "particle_count", out.config.particleCount );
    fields.read( "sensing_radius", out.sensingRadius );
    fields.read( "motion_sigma", out.motionSigma );
    fields.read( "motion_window", out.motionWindow );
    fields.read( "motion_tolerance", out.motionTolerance );
}

void
readAdmission( Fields& fields, AdmissionParams& out )
{
    fields.read( "probe_packet_count", out.probePacketCount );
    fields.read( "observation_window", out.observationWindow );
    fields.read( "scan_radius", out.scanRadius );
    fields.read( "reprobe_interval", out.reprobeInterval );
    fields.read( "crc_mode", out.crcMode );
}

void
readClonal( Fields& fields, ClonalParams& out )
{
    fields.read( "population", out.populationSize );
    fields.read( "select", out.selectCount );
    fields.read( "clone_budget", out.cloneBudget );
    fields.read( "maturity", out.maturityLevel );
    fields.read( "replace_worst", out.replaceWorstN );
    fields.read( "generations", out.maxGenerations );
}

void
readAis( Fields& fields, AisParams& out, std::vector<std::string>& errors )
{
    fields.read( "length", out.length );
    std::string scheme;
    if ( fields.read( "scheme", scheme ) ) {
        if ( scheme == "r_contiguous" ) {
            out.affinity.scheme = AffinityScheme::RContiguous;
        } else if ( scheme == "hamming" ) {
            out.affinity.scheme = AffinityScheme::Hamming;
        } else {
            fields.fail( fields.join( "scheme" ), "'" + scheme + "' is not one of r_contiguous, hamming" );
        }
    }
    fields.read( "r", out.affinity.r );
    fields.read( "recognition_threshold", out.affinity.recognitionThreshold );
    fields.read( "detector_count", out.detectorCount );
    fields.read( "max_attempts", out.maxAttempts );
    fields.read( "maturation_generations", out.maturationGenerations );
    if ( const Json* clonal = fields.child( "clonal" ) ) {
        Fields block( *clonal, fields.join( "clonal" ), errors );
        readClonal( block, out.clonal );
    }
}

void
readResponse( Fields& fields, ResponseParams& out )
{
    fields.read( "drain_per_packet", out.drain.drainPerPacket );
    fields.read( "packets_per_member_per_tick", out.drain.packetsPerMemberPerTick );
    fields.read( "recall_radius", out.drain.recallRadius );
    fields.read( "neutralized_floor", out.drain.neutralizedFloor );
    fields.read( "sender_cost_per_packet", out.drain.senderCostPerPacket );
    fields.read( "counter_attack", out.counterAttack );
    fields.read( "decoy_energy", out.decoyEnergy );
    fields.read( "adjacency_radius", out.adjacencyRadius );
}

template<typename Check>
void
collect( std::vector<std::string>& errors, const std::string& path, Check&& check )
{
    try {
        check();
    } catch ( const std::invalid_argument& error ) {
        errors.push_back( path + ": " + error.what() );
    }
}

}  // namespace

bool
isScriptedHostile( const ScenarioConfig& config, const Node& node )
{
    if ( node.role != Role::Unknown ) {
        return false;
    }
    if ( !checkIdentity( node, config.registry, config.admission.crcMode ) ) {
        return true;
    }
    if ( node.behavior.kind != PacketBehavior::Kind::Forward ) {
        return false;
    }
    const auto it = std::find_if( config.nodes.begin(), config.nodes.end(),
                                  [&]( const Node& n ) { return n.id == node.behavior.destination; } );
    return it == config.nodes.end() || it->role != Role::DatabaseNode;
}

std::vector<std::string>
validationErrors( const ScenarioConfig& config )
{
    std::vector<std::string> errors;
    const Area& area = config.area;
    if ( !( area.minX < area.maxX && area.minY < area.maxY ) ) {
        errors.push_back( "area: min bounds must be below max bounds" );
    }
    if ( config.maxTicks == 0 ) {
        errors.push_back( "max_ticks: must be positive" );
    }
    for ( const auto id : config.registry ) {
        if ( id >= kCredentialIdLimit ) {
            errors.push_back( "registry: id " + std::to_string( id ) + " does not fit in 18 bits" );
        }
    }

    std::set<NodeId> ids;
    for ( std::size_t i = 0; i < config.nodes.size(); ++i ) {
        if ( !ids.insert( config.nodes[i].id ).second ) {
            errors.push_back( "nodes[" + std::to_string( i ) + "].id: duplicate id "
                              + std::to_string( config.nodes[i].id ) );
        }
    }
    for ( const auto id : config.externalIds ) {
        if ( ids.contains( id ) ) {
            errors.push_back( "external_ids: id " + std::to_string( id ) + " is also a node id" );
        }
    }

    for ( std::size_t i = 0; i < config.nodes.size(); ++i ) {
        const Node& node = config.nodes[i];
        const std::string path = "nodes[" + std::to_string( i ) + "]";
        if ( !area.contains( node.position ) ) {
            errors.push_back( path + ".position: outside the area" );
        }
        for ( std::size_t t = 0; t < node.trajectory.size(); ++t ) {
            if ( !area.contains( node.trajectory[t] ) ) {
                errors.push_back( path + ".trajectory[" + std::to_string( t ) + "]: outside the area" );
            }
        }
        if ( !( node.energy >= 0.0 ) ) {
            errors.push_back( path + ".energy: must be non-negative" );
        }
        if ( node.credential.idBits >= kCredentialIdLimit ) {
            errors.push_back( path + ".credential.id_bits: does not fit in 18 bits" );
        }
        if ( node.credential.parityBit > 1 ) {
            errors.push_back( path + ".credential.parity_bit: must be 0 or 1" );
        }
        if ( node.behavior.kind == PacketBehavior::Kind::Forward ) {
            const NodeId dst = node.behavior.destination;
            if ( !ids.contains( dst ) && !config.externalIds.contains( dst ) ) {
                errors.push_back( path + ".behavior.destination: undefined node id " + std::to_string( dst ) );
            }
        }
        if ( node.behavior.delay == 0 ) {
            errors.push_back( path + ".behavior.delay: must be at least 1" );
        }
    }

    collect( errors, "tracking", [&] { config.tracking.config.validate(); } );
    if ( !( config.tracking.sensingRadius > 0.0 ) || !( config.tracking.motionSigma > 0.0 ) ) {
        errors.push_back( "tracking: sensing_radius and motion_sigma must be positive" );
    }
    if ( config.tracking.motionWindow < 3 ) {
        errors.push_back( "tracking.motion_window: must be at least 3" );
    }
    if ( !( config.tracking.motionTolerance >= 0.0 ) ) {
        errors.push_back( "tracking.motion_tolerance: must be non-negative" );
    }

    const AdmissionParams& admission = config.admission;
    if ( admission.probePacketCount == 0 ) {
        errors.push_back( "admission.probe_packet_count: must be positive" );
    }
    if ( admission.observationWindow == 0 ) {
        errors.push_back( "admission.observation_window: must be at least 1" );
    }
    if ( !( admission.scanRadius > 0.0 ) ) {
        errors.push_back( "admission.scan_radius: must be positive" );
    }
    if ( admission.reprobeInterval == 0 ) {
        errors.push_back( "admission.reprobe_interval: must be positive" );
    }

    if ( config.ais.length == 0 ) {
        errors.push_back( "ais.length: must be positive" );
    } else {
        collect( errors, "ais", [&] { config.ais.affinity.validate( config.ais.length ); } );
    }
    if ( config.ais.detectorCount == 0 || config.ais.maxAttempts == 0 ) {
        errors.push_back( "ais: detector_count and max_attempts must be positive" );
    }
    collect( errors, "ais.clonal", [&] { config.ais.clonal.validate(); } );
    collect( errors, "response", [&] { config.response.drain.validate(); } );
    if ( !( config.response.decoyEnergy >= 0.0 ) || !( config.response.adjacencyRadius >= 0.0 ) ) {
        errors.push_back( "response: decoy_energy and adjacency_radius must be non-negative" );
    }
    collect( errors, "optimizer", [&] { config.optimizer.validate(); } );
    return errors;
}

ScenarioConfig
parseScenario( std::string_view text )
{
    Json document;
    try {
        document = Json::parse( text );
    } catch ( const Json::parse_error& error ) {
        throw ParseError( error.what() );
    }

    std::vector<std::string> errors;
    ScenarioConfig config;
    config.optimizer.normalizeAffinity = true;
    {
        Fields root( document, "", errors );
        if ( !root.read( "seed", config.seed ) && root.child( "seed" ) == nullptr ) {
            errors.push_back( "seed: required" );
        }
        root.read( "max_ticks", config.maxTicks );

        if ( const Json* area = root.child( "area" ) ) {
            Fields block( *area, "area", errors );
            block.read( "min_x", config.area.minX );
            block.read( "min_y", config.area.minY );
            block.read( "max_x", config.area.maxX );
            block.read( "max_y", config.area.maxY );
        }
        if ( const Json* registry = root.child( "registry" ) ) {
            if ( !registry->is_array() ) {
                errors.push_back( "registry: expected an array of ids" );
            } else {
                for ( std::size_t i = 0; i < registry->size(); ++i ) {
                    std::uint32_t id = 0;
                    if ( root.convert( ( *registry )[i], "registry[" + std::to_string( i ) + "]", id ) ) {
                        config.registry.insert( id );
                    }
                }
            }
        }
        if ( const Json* external = root.child( "external_ids" ) ) {
            if ( !external->is_array() ) {
                errors.push_back( "external_ids: expected an array of ids" );
            } else {
                for ( std::size_t i = 0; i < external->size(); ++i ) {
                    NodeId id = 0;
                    if ( root.convert( ( *external )[i], "external_ids[" + std::to_string( i ) + "]", id ) ) {
                        config.externalIds.insert( id );
                    }
                }
            }
        }
        if ( const Json* nodes = root.child( "nodes" ) ) {
            if ( !nodes->is_array() ) {
                errors.push_back( "nodes: expected an array" );
            } else {
                for ( std::size_t i = 0; i < nodes->size(); ++i ) {
                    config.nodes.push_back(
                        readNode( ( *nodes )[i], "nodes[" + std::to_string( i ) + "]", errors ) );
                }
            }
        }
        if ( const Json* block = root.child( "tracking" ) ) {
            Fields fields( *block, "tracking", errors );
            readTracking( fields, config.tracking );
        }
        if ( const Json* block = root.child( "admission" ) ) {
            Fields fields( *block, "admission", errors );
            readAdmission( fields, config.admission );
        }
        if ( const Json* block = root.child( "ais" ) ) {
            Fields fields( *block, "ais", errors );
            readAis( fields, config.ais, errors );
        }
        if ( const Json* block = root.child( "response" ) ) {
            Fields fields( *block, "response", errors );
            readResponse( fields, config.response );
        }
        if ( const Json* block = root.child( "optimizer" ) ) {
            Fields fields( *block, "optimizer", errors );
            readClonal( fields, config.optimizer );
        }
    }

    auto semantic = validationErrors( config );
    errors.insert( errors.end(), semantic.begin(), semantic.end() );
    if ( !errors.empty() ) {
        throw ValidationError( std::move( errors ) );
    }
    return config;
}

ScenarioConfig
loadScenario( const std::filesystem::path& path )
{
    std::ifstream in( path, std::ios::binary );
    if ( !in ) {
        throw ParseError( "cannot open scenario file '" + path.string() + "'" );
    }
    std::ostringstream text;
    text << in.rdbuf();
    try {
        return parseScenario( text.str() );
    } catch ( const ParseError& error ) {
        throw ParseError( path.string() + ": " + error.what() );
    }
}

namespace {

OrderedJson
positionJson( Position p )
{
    return OrderedJson::array( { p.x, p.y } );
}

OrderedJson
clonalJson( const ClonalParams& params )
{
    return { { "population", params.populationSize }, { "select", params.selectCount },
             { "clone_budget", params.cloneBudget },  { "maturity", params.maturityLevel },
             { "replace_worst", params.replaceWorstN }, { "generations", params.maxGenerations } };
}

}  // namespace

std::string
dumpScenario( const ScenarioConfig& config )
{
    OrderedJson doc;
    doc["seed"] = config.seed;
    doc["max_ticks"] = config.maxTicks;
    doc["area"] = { { "min_x", config.area.minX },
                    { "min_y", config.area.minY },
                    { "max_x", config.area.maxX },
                    { "max_y", config.area.maxY } };
    doc["registry"] = config.registry;
    doc["external_ids"] = config.externalIds;

    OrderedJson nodes = OrderedJson::array();
    for ( const auto& node : config.nodes ) {
        OrderedJson entry;
        entry["id"] = node.id;
        entry["role"] = toString( node.role );
        entry["position"] = positionJson( node.position );
        entry["energy"] = node.energy;
        entry["credential"] = { { "id_bits", node.credential.idBits },
                                { "parity_bit", node.credential.parityBit },
                                { "crc8", node.credential.crc8 } };
        if ( !node.trajectory.empty() ) {
            OrderedJson path = OrderedJson::array();
            for ( const auto& p : node.trajectory ) {
                path.push_back( positionJson( p ) );
            }
            entry["trajectory"] = std::move( path );
        }
        OrderedJson behavior;
        behavior["kind"] = node.behavior.kind == PacketBehavior::Kind::Forward ? "forward" : "drop";
        if ( node.behavior.kind == PacketBehavior::Kind::Forward ) {
            behavior["destination"] = node.behavior.destination;
        }
        behavior["delay"] = node.behavior.delay;
        behavior["active_from"] = node.behavior.activeFrom;
        entry["behavior"] = std::move( behavior );
        nodes.push_back( std::move( entry ) );
    }
    doc["nodes"] = std::move( nodes );

    const auto& tracking = config.tracking;
    doc["tracking"] = { { "threshold", tracking.config.threshold },
                        { "floor_weight", tracking.config.floorWeight },
                        { "noise_flip_prob", tracking.config.noiseFlipProb },
                        { "particle_count", tracking.config.particleCount },
                        { "sensing_radius", tracking.sensingRadius },
                        { "motion_sigma", tracking.motionSigma },
                        { "motion_window", tracking.motionWindow },
                        { "motion_tolerance", tracking.motionTolerance } };
    const auto& admission = config.admission;
    doc["admission"] = { { "probe_packet_count", admission.probePacketCount },
                         { "observation_window", admission.observationWindow },
                         { "scan_radius", admission.scanRadius },
                         { "reprobe_interval", admission.reprobeInterval },
                         { "crc_mode", admission.crcMode } };
    const auto& ais = config.ais;
    doc["ais"] = { { "length", ais.length },
                   { "scheme", ais.affinity.scheme == AffinityScheme::Hamming ? "hamming" : "r_contiguous" },
                   { "r", ais.affinity.r },
                   { "recognition_threshold", ais.affinity.recognitionThreshold },
                   { "detector_count", ais.detectorCount },
                   { "max_attempts", ais.maxAttempts },
                   { "maturation_generations", ais.maturationGenerations },
                   { "clonal", clonalJson( ais.clonal ) } };
    const auto& response = config.response;
    doc["response"] = { { "drain_per_packet", response.drain.drainPerPacket },
                        { "packets_per_member_per_tick", response.drain.packetsPerMemberPerTick },
                        { "recall_radius", response.drain.recallRadius },
                        { "neutralized_floor", response.drain.neutralizedFloor },
                        { "sender_cost_per_packet", response.drain.senderCostPerPacket },
                        { "counter_attack", response.counterAttack },
                        { "decoy_energy", response.decoyEnergy },
                        { "adjacency_radius", response.adjacencyRadius } };
    doc["optimizer"] = clonalJson( config.optimizer );
    return doc.dump( 2 ) + "\n";
}

ScenarioConfig
synthesizeScenario( const SynthesisLayout& layout )
{
    Rng rng( layout.seed );
    ScenarioConfig config;
    config.seed = layout.seed;
    config.maxTicks = layout.maxTicks;
    config.optimizer.normalizeAffinity = true;
    config.tracking.config.particleCount = layout.particleCount;

    NodeId nextId = 1;
    const auto addSelf = [&]( Role role, Position at ) {
        Node node{ .id = nextId++, .role = role, .position = at, .energy = 100.0 };
        node.credential = makeCredential( node.id );
        config.registry.insert( node.credential.idBits );
        config.nodes.push_back( node );
        return node.id;
    };

    addSelf( Role::BaseStation, { 0.5, 0.5 } );
    std::vector<NodeId> databases;
    for ( std::size_t i = 0; i < layout.databases; ++i ) {
        const double angle = 2.0 * std::numbers::pi * static_cast<double>( i )
                             / static_cast<double>( std::max<std::size_t>( layout.databases, 1 ) );
        databases.push_back( addSelf( Role::DatabaseNode,
                                      { 0.5 + 0.2 * std::cos( angle ), 0.5 + 0.2 * std::sin( angle ) } ) );
    }

    const auto side = static_cast<std::size_t>(
        std::ceil( std::sqrt( static_cast<double>( std::max<std::size_t>( layout.friends, 1 ) ) ) ) );
    const double cell = 0.6 / static_cast<double>( side );
    for ( std::size_t i = 0; i < layout.friends; ++i ) {
        const double cx = 0.2 + cell * ( static_cast<double>( i % side ) + 0.5 );
        const double cy = 0.2 + cell * ( static_cast<double>( i / side ) + 0.5 );
        addSelf( Role::Friend, { std::clamp( cx + rng.uniform( -0.3, 0.3 ) * cell, 0.0, 1.0 ),
                                 std::clamp( cy + rng.uniform( -0.3, 0.3 ) * cell, 0.0, 1.0 ) } );
    }

    constexpr NodeId kEnemySink = 9000;
    config.externalIds.insert( kEnemySink );

    const std::size_t newcomers = layout.hostiles + layout.compliant;
    std::vector<std::size_t> order( newcomers );
    std::iota( order.begin(), order.end(), 0 );
    for ( std::size_t i = newcomers; i > 1; --i ) {
        std::swap( order[i - 1], order[rng.below( i )] );
    }

    NodeId newcomerId = 1000;
    for ( std::size_t k = 0; k < newcomers; ++k ) {
        const bool hostile = order[k] < layout.hostiles;
        Node node{ .id = newcomerId++, .role = Role::Unknown, .energy = 100.0 };
        node.credential = makeCredential( node.id );
        config.registry.insert( node.credential.idBits );

        // Enter from a random border point and walk towards the interior.
        const double along = rng.uniform();
        Position start;
        switch ( rng.below( 4 ) ) {
        case 0:  start = { along, 0.0 }; break;
        case 1:  start = { 1.0, along }; break;
        case 2:  start = { along, 1.0 }; break;
        default: start = { 0.0, along }; break;
        }
        const Position goal{ rng.uniform( 0.3, 0.7 ), rng.uniform( 0.3, 0.7 ) };
        const double speed = rng.uniform( 0.005, 0.012 );
        const auto departAt = static_cast<std::size_t>( rng.below( 60 ) );
        const double length = distance( start, goal );
        const auto steps = static_cast<std::size_t>( std::ceil( length / speed ) );
        for ( std::size_t t = 0; t <= departAt + steps; ++t ) {
            const double progress =
                t <= departAt ? 0.0
                              : std::min( 1.0, static_cast<double>( t - departAt ) / static_cast<double>( steps ) );
            node.trajectory.push_back( { start.x + ( goal.x - start.x ) * progress,
                                         start.y + ( goal.y - start.y ) * progress } );
        }
        node.position = node.trajectory.front();

        const Tick delay = 1 + rng.below( 5 );
        if ( hostile ) {
            node.behavior = { PacketBehavior::Kind::Forward, kEnemySink, delay, 0 };
        } else if ( k % 2 == 0 && !databases.empty() ) {
            node.behavior = { PacketBehavior::Kind::Forward, databases[rng.below( databases.size() )],
                              delay, 0 };
        } else {
            node.behavior = { PacketBehavior::Kind::Drop, 0, delay, 0 };
        }
        config.nodes.push_back( std::move( node ) );
    }
    return config;
}

}  // namespace immunet
