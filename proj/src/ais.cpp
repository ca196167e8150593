#include "immunet/ais.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace immunet {

Bitstring
Bitstring::fromValue( std::uint64_t value, std::size_t length )
{
    Bitstring bits( length );
    for ( std::size_t i = 0; i < length && i < 64; ++i ) {
        bits.set( length - 1 - i, ( ( value >> i ) & 1U ) != 0 );
    }
    return bits;
}

Bitstring
Bitstring::fromBinary( std::string_view text )
{
    Bitstring bits( text.size() );
    for ( std::size_t i = 0; i < text.size(); ++i ) {
        if ( text[i] != '0' && text[i] != '1' ) {
            throw std::invalid_argument( "bitstring may only contain 0 and 1: " + std::string( text ) );
        }
        bits.set( i, text[i] == '1' );
    }
    return bits;
}

Bitstring
Bitstring::fromHex( std::string_view hex, std::size_t length )
{
    const std::size_t digits = ( length + 3 ) / 4;
    if ( hex.size() != digits ) {
        throw std::invalid_argument( "hex pattern '" + std::string( hex ) + "' needs "
                                     + std::to_string( digits ) + " digits for length "
                                     + std::to_string( length ) );
    }
    Bitstring bits( length );
    // Bit k from the right of the hex number is position length-1-k.
    for ( std::size_t d = 0; d < digits; ++d ) {
        const char c = hex[digits - 1 - d];
        unsigned nibble = 0;
        if ( c >= '0' && c <= '9' ) {
            nibble = static_cast<unsigned>( c - '0' );
        } else if ( c >= 'a' && c <= 'f' ) {
            nibble = static_cast<unsigned>( c - 'a' + 10 );
        } else if ( c >= 'A' && c <= 'F' ) {
            nibble = static_cast<unsigned>( c - 'A' + 10 );
        } else {
            throw std::invalid_argument( "invalid hex digit in '" + std::string( hex ) + "'" );
        }
        for ( unsigned b = 0; b < 4; ++b ) {
            const std::size_t k = d * 4 + b;
            const bool on = ( ( nibble >> b ) & 1U ) != 0;
            if ( k < length ) {
                bits.set( length - 1 - k, on );
            } else if ( on ) {
                throw std::invalid_argument( "hex pattern '" + std::string( hex )
                                             + "' exceeds length " + std::to_string( length ) );
            }
        }
    }
    return bits;
}

Bitstring
Bitstring::random( std::size_t length, Rng& rng )
{
    Bitstring bits( length );
    std::uint64_t word = 0;
    for ( std::size_t i = 0; i < length; ++i ) {
        if ( i % 64 == 0 ) {
            word = rng.next();
        }
        bits.set( i, ( ( word >> ( i % 64 ) ) & 1U ) != 0 );
    }
    return bits;
}

Bitstring
Bitstring::complement() const
{
    Bitstring out = *this;
    for ( auto& bit : out.m_bits ) {
        bit ^= 1U;
    }
    return out;
}

std::size_t
Bitstring::popcount() const
{
    return static_cast<std::size_t>( std::count( m_bits.begin(), m_bits.end(), 1 ) );
}

std::string
Bitstring::toBinary() const
{
    std::string text( m_bits.size(), '0' );
    for ( std::size_t i = 0; i < m_bits.size(); ++i ) {
        if ( m_bits[i] ) {
            text[i] = '1';
        }
    }
    return text;
}

std::string
Bitstring::toHex() const
{
    static constexpr char kDigits[] = "0123456789abcdef";
    const std::size_t length = m_bits.size();
    const std::size_t digits = ( length + 3 ) / 4;
    std::string hex( digits, '0' );
    for ( std::size_t d = 0; d < digits; ++d ) {
        unsigned nibble = 0;
        for ( unsigned b = 0; b < 4; ++b ) {
            const std::size_t k = d * 4 + b;
            if ( k < length && m_bits[length - 1 - k] ) {
                nibble |= 1U << b;
            }
        }
        hex[digits - 1 - d] = kDigits[nibble];
    }
    return hex;
}

void
AffinityConfig::validate( std::size_t length ) const
{
    if ( scheme == AffinityScheme::RContiguous && ( r == 0 || r > length ) ) {
        throw std::invalid_argument( "r must lie in [1, length]" );
    }
    if ( scheme == AffinityScheme::Hamming
         && !( recognitionThreshold > 0.0 && recognitionThreshold <= 1.0 ) ) {
        throw std::invalid_argument( "recognition threshold must lie in (0, 1]" );
    }
}

namespace {

void
requireSameLength( const Bitstring& a, const Bitstring& b )
{
    if ( a.length() != b.length() ) {
        throw std::invalid_argument( "bitstring lengths differ: " + std::to_string( a.length() )
                                     + " vs " + std::to_string( b.length() ) );
    }
}

std::size_t
agreeingPositions( const Bitstring& a, const Bitstring& b )
{
    std::size_t same = 0;
    for ( std::size_t i = 0; i < a.length(); ++i ) {
        same += a[i] == b[i] ? 1 : 0;
    }
    return same;
}

}  // namespace

std::size_t
longestAgreeingRun( const Bitstring& a, const Bitstring& b )
{
    requireSameLength( a, b );
    std::size_t best = 0;
    std::size_t run = 0;
    for ( std::size_t i = 0; i < a.length(); ++i ) {
        run = a[i] == b[i] ? run + 1 : 0;
        best = std::max( best, run );
    }
    return best;
}

double
affinity( const Bitstring& a, const Bitstring& b, const AffinityConfig& config )
{
    requireSameLength( a, b );
    if ( a.length() == 0 ) {
        return 1.0;
    }
    const auto length = static_cast<double>( a.length() );
    switch ( config.scheme ) {
    case AffinityScheme::RContiguous:
        return static_cast<double>( longestAgreeingRun( a, b ) ) / length;
    case AffinityScheme::Hamming:
        return static_cast<double>( agreeingPositions( a, b ) ) / length;
    }
    return 0.0;
}

bool
matches( const Bitstring& pattern, const Bitstring& sample, const AffinityConfig& config )
{
    switch ( config.scheme ) {
    case AffinityScheme::RContiguous:
        return longestAgreeingRun( pattern, sample ) >= config.r;
    case AffinityScheme::Hamming:
        return affinity( pattern, sample, config ) >= config.recognitionThreshold;
    }
    return false;
}

std::string_view
toString( DetectorState state )
{
    switch ( state ) {
    case DetectorState::Immature: return "immature";
    case DetectorState::Mature:   return "mature";
    case DetectorState::Memory:   return "memory";
    }
    return "?";
}

std::optional<DetectorState>
detectorStateFromString( std::string_view text )
{
    for ( const auto state : { DetectorState::Immature, DetectorState::Mature, DetectorState::Memory } ) {
        if ( toString( state ) == text ) {
            return state;
        }
    }
    return std::nullopt;
}

CandidateStream
randomCandidates( std::size_t length, Rng& rng )
{
    return [length, &rng]() -> std::optional<Bitstring> { return Bitstring::random( length, rng ); };
}

CandidateStream
exhaustiveCandidates( std::size_t length )
{
    if ( length > 30 ) {
        throw std::invalid_argument( "exhaustive candidate stream limited to length 30" );
    }
    return [length, next = std::uint64_t{ 0 }]() mutable -> std::optional<Bitstring> {
        if ( next >= ( std::uint64_t{ 1 } << length ) ) {
            return std::nullopt;
        }
        return Bitstring::fromValue( next++, length );
    };
}

std::vector<Detector>
negativeSelection( std::span<const Bitstring> selfSet, std::size_t requested,
                   const AffinityConfig& config, std::size_t maxAttempts,
                   const CandidateStream& candidates )
{
    std::vector<Detector> detectors;
    std::set<Bitstring> seen;
    for ( std::size_t attempt = 0; attempt < maxAttempts && detectors.size() < requested; ++attempt ) {
        auto candidate = candidates();
        if ( !candidate ) {
            break;
        }
        if ( !seen.insert( *candidate ).second ) {
            continue;
        }
        const bool recognizedBySelf = std::any_of(
            selfSet.begin(), selfSet.end(),
            [&]( const Bitstring& self ) { return matches( *candidate, self, config ); } );
        if ( !recognizedBySelf ) {
            detectors.push_back( { std::move( *candidate ), DetectorState::Mature, 0, 0 } );
        }
    }
    return detectors;
}

std::vector<Detector>
negativeSelection( std::span<const Bitstring> selfSet, std::size_t requested,
                   const AffinityConfig& config, std::size_t maxAttempts, Rng& rng )
{
    if ( selfSet.empty() ) {
        throw std::invalid_argument( "random negative selection needs the length from a self element;"
                                     " use a candidate stream for an empty self set" );
    }
    return negativeSelection( selfSet, requested, config, maxAttempts,
                              randomCandidates( selfSet.front().length(), rng ) );
}

void
ClonalParams::validate() const
{
    if ( populationSize == 0 || selectCount == 0 || cloneBudget == 0 || maxGenerations == 0 ) {
        throw std::invalid_argument( "clonal sizes and budgets must be positive" );
    }
    if ( selectCount > populationSize ) {
        throw std::invalid_argument( "select count exceeds population size" );
    }
    if ( replaceWorstN == 0 || replaceWorstN >= populationSize ) {
        throw std::invalid_argument( "replace-worst count must lie in [1, population size)" );
    }
    if ( !( maturityLevel >= 0.0 ) ) {
        throw std::invalid_argument( "maturity level must be non-negative" );
    }
}

std::vector<std::size_t>
allocateClones( std::span<const double> weights, std::size_t budget )
{
    const std::size_t n = weights.size();
    std::vector<std::size_t> counts( n, 0 );
    if ( n == 0 ) {
        return counts;
    }
    double total = 0.0;
    for ( const double w : weights ) {
        total += std::max( 0.0, w );
    }

    std::vector<double> remainders( n, 0.0 );
    std::size_t assigned = 0;
    for ( std::size_t i = 0; i < n; ++i ) {
        const double share = total > 0.0
                                 ? static_cast<double>( budget ) * std::max( 0.0, weights[i] ) / total
                                 : static_cast<double>( budget ) / static_cast<double>( n );
        const double whole = std::floor( share );
        counts[i] = static_cast<std::size_t>( whole );
        remainders[i] = share - whole;
        assigned += counts[i];
    }
    // Rounding in the shares can leave the floors one above budget.
    while ( assigned > budget ) {
        const auto it = std::max_element( counts.rbegin(), counts.rend() );
        --*it;
        --assigned;
    }

    std::vector<std::size_t> order( n );
    std::iota( order.begin(), order.end(), 0 );
    std::stable_sort( order.begin(), order.end(),
                      [&]( std::size_t a, std::size_t b ) { return remainders[a] > remainders[b]; } );
    for ( std::size_t k = 0; assigned < budget; k = ( k + 1 ) % n ) {
        ++counts[order[k]];
        ++assigned;
    }
    return counts;
}

void
hypermutate( Bitstring& genome, double affinity, double maturityLevel, Rng& rng )
{
    if ( genome.length() == 0 ) {
        return;
    }
    const double rate = ( 1.0 - std::clamp( affinity, 0.0, 1.0 ) ) * maturityLevel / 100.0
                        / static_cast<double>( genome.length() );
    for ( std::size_t i = 0; i < genome.length(); ++i ) {
        if ( rng.uniform() < rate ) {
            genome.flip( i );
        }
    }
}

void
hypermutate( UnitPoint& genome, double affinity, double maturityLevel, Rng& rng )
{
    const double sigma = ( 1.0 - std::clamp( affinity, 0.0, 1.0 ) ) * maturityLevel / 100.0 * 0.1;
    genome.x = std::clamp( rng.normal( genome.x, sigma ), 0.0, 1.0 );
    genome.y = std::clamp( rng.normal( genome.y, sigma ), 0.0, 1.0 );
}

Bitstring
freshGenome( const Bitstring& like, Rng& rng )
{
    return Bitstring::random( like.length(), rng );
}

UnitPoint
freshGenome( const UnitPoint&, Rng& rng )
{
    const double x = rng.uniform();
    const double y = rng.uniform();
    return { x, y };
}

template<typename Genome>
ClonalStepResult<Genome>
clonalStep( std::vector<Antibody<Genome>> population, const AffinityFn<Genome>& eval,
            const ClonalParams& params, Rng& rng )
{
    if ( population.size() != params.populationSize ) {
        throw std::invalid_argument( "population has " + std::to_string( population.size() )
                                     + " antibodies, expected "
                                     + std::to_string( params.populationSize ) );
    }
    const std::size_t n = population.size();
    const auto byAffinity = []( const Antibody<Genome>& a, const Antibody<Genome>& b ) {
        return a.affinity > b.affinity;
    };

    std::vector<std::size_t> ranked( n );
    std::iota( ranked.begin(), ranked.end(), 0 );
    std::stable_sort( ranked.begin(), ranked.end(), [&]( std::size_t a, std::size_t b ) {
        return byAffinity( population[a], population[b] );
    } );

    double scale = 1.0;
    if ( params.normalizeAffinity ) {
        const double best = population[ranked.front()].affinity;
        scale = best > 0.0 ? best : 1.0;
    }
    const auto relative = [&]( double a ) { return std::clamp( a / scale, 0.0, 1.0 ); };

    const std::size_t selected = std::min( params.selectCount, n );
    std::vector<double> weights( selected );
    for ( std::size_t k = 0; k < selected; ++k ) {
        weights[k] = relative( population[ranked[k]].affinity );
    }

    ClonalStepResult<Genome> result;
    result.cloneCounts = allocateClones( weights, params.cloneBudget );

    // A clone only displaces its own parent.
    std::vector<Antibody<Genome>> next = population;
    for ( std::size_t k = 0; k < selected; ++k ) {
        const auto& parent = population[ranked[k]];
        Antibody<Genome>& slot = next[ranked[k]];
        for ( std::size_t c = 0; c < result.cloneCounts[k]; ++c ) {
            Genome clone = parent.genome;
            hypermutate( clone, parent.affinity, params.maturityLevel, rng );
            const double score = eval( clone );
            if ( score > slot.affinity ) {
                slot = { std::move( clone ), score };
            }
        }
    }

    std::stable_sort( next.begin(), next.end(), byAffinity );
    result.memoryAdditions.push_back( next.front() );

    for ( std::size_t k = n - params.replaceWorstN; k < n; ++k ) {
        Genome fresh = freshGenome( next[k].genome, rng );
        const double score = eval( fresh );
        next[k] = { std::move( fresh ), score };
    }
    result.population = std::move( next );
    return result;
}

template ClonalStepResult<Bitstring>
clonalStep( std::vector<Antibody<Bitstring>>, const AffinityFn<Bitstring>&, const ClonalParams&,
            Rng& );
template ClonalStepResult<UnitPoint>
clonalStep( std::vector<Antibody<UnitPoint>>, const AffinityFn<UnitPoint>&, const ClonalParams&,
            Rng& );

std::optional<Detection>
detect( std::vector<Detector>& detectors, const Bitstring& sample, const AffinityConfig& config )
{
    std::optional<std::size_t> bestIndex;
    double bestAffinity = -1.0;
    for ( std::size_t i = 0; i < detectors.size(); ++i ) {
        if ( !matches( detectors[i], sample, config ) ) {
            continue;
        }
        const double score = affinity( detectors[i].pattern, sample, config );
        if ( score > bestAffinity ) {
            bestAffinity = score;
            bestIndex = i;
        }
    }
    if ( !bestIndex ) {
        return std::nullopt;
    }
    Detector& hit = detectors[*bestIndex];
    hit.matchCount += 1;
    if ( hit.state == DetectorState::Mature ) {
        hit.state = DetectorState::Memory;
    }
    return Detection{ *bestIndex, hit, bestAffinity };
}

void
writeDetectors( std::ostream& out, std::span<const Detector> detectors )
{
    if ( !detectors.empty() ) {
        out << "# length=" << detectors.front().pattern.length() << '\n';
    }
    for ( const auto& detector : detectors ) {
        out << detector.pattern.toHex() << ' ' << toString( detector.state ) << ' ' << detector.age
            << ' ' << detector.matchCount << '\n';
    }
}

std::vector<Detector>
readDetectors( std::istream& in, std::optional<std::size_t> length )
{
    std::vector<Detector> detectors;
    std::string line;
    std::size_t lineNo = 0;
    const auto fail = [&]( const std::string& why ) {
        throw std::invalid_argument( "detector line " + std::to_string( lineNo ) + ": " + why );
    };
    while ( std::getline( in, line ) ) {
        ++lineNo;
        if ( line.empty() ) {
            continue;
        }
        if ( line.front() == '#' ) {
            constexpr std::string_view kHeader = "# length=";
            if ( line.starts_with( kHeader ) ) {
                std::size_t value = 0;
                const std::string_view digits = std::string_view( line ).substr( kHeader.size() );
                const auto [end, error] = std::from_chars( digits.data(), digits.data() + digits.size(), value );
                if ( error != std::errc{} || end != digits.data() + digits.size() || value == 0 ) {
                    fail( "bad length header" );
                }
                length = value;
            }
            continue;
        }
        if ( !length ) {
            fail( "pattern length unknown (no '# length=' header)" );
        }
        std::istringstream fields( line );
        std::string hex;
        std::string state;
        Detector detector;
        if ( !( fields >> hex >> state >> detector.age >> detector.matchCount ) ) {
            fail( "expected '<hex-pattern> <state> <age> <match_count>'" );
        }
        const auto parsed = detectorStateFromString( state );
        if ( !parsed ) {
            fail( "unknown detector state '" + state + "'" );
        }
        try {
            detector.pattern = Bitstring::fromHex( hex, *length );
        } catch ( const std::invalid_argument& error ) {
            fail( error.what() );
        }
        if ( *parsed == DetectorState::Memory && detector.matchCount == 0 ) {
            fail( "memory detector without a recorded match" );
        }
        detector.state = *parsed;
        detectors.push_back( std::move( detector ) );
    }
    return detectors;
}

}  // namespace immunet
