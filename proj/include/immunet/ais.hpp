#pragma once

#include "immunet/rng.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace immunet {

/// Fixed-length bit sequence. Position 0 is the leftmost character of the
/// binary text form and the most significant bit of the hex form.
class Bitstring
{
public:
    Bitstring() = default;

    explicit Bitstring( std::size_t length ) : m_bits( length, 0 ) {}

    /// Low `length` bits of `value`, most significant first.
    static Bitstring
    fromValue( std::uint64_t value, std::size_t length );

    /// Text of '0'/'1'; throws std::invalid_argument on any other character.
    static Bitstring
    fromBinary( std::string_view text );

    static Bitstring
    fromHex( std::string_view hex, std::size_t length );

    static Bitstring
    random( std::size_t length, Rng& rng );

    std::size_t
    length() const
    {
        return m_bits.size();
    }

    bool
    operator[]( std::size_t i ) const
    {
        return m_bits[i] != 0;
    }

    void
    set( std::size_t i, bool value )
    {
        m_bits[i] = value ? 1 : 0;
    }

    void
    flip( std::size_t i )
    {
        m_bits[i] ^= 1U;
    }

    Bitstring
    complement() const;

    std::size_t
    popcount() const;

    std::string
    toBinary() const;

    /// ceil(length / 4) hex digits, zero-padded on the left.
    std::string
    toHex() const;

    friend bool operator==( const Bitstring&, const Bitstring& ) = default;
    friend auto operator<=>( const Bitstring&, const Bitstring& ) = default;

private:
    std::vector<std::uint8_t> m_bits;
};

enum class AffinityScheme
{
    RContiguous,
    Hamming,
};

struct AffinityConfig
{
    AffinityScheme scheme{ AffinityScheme::RContiguous };
    std::size_t r{ 8 };
    double recognitionThreshold{ 0.8 };

    void
    validate( std::size_t length ) const;
};

/// Longest run of positions where the two strings agree.
std::size_t
longestAgreeingRun( const Bitstring& a, const Bitstring& b );

/// In [0, 1]: longest agreeing run / length (r-contiguous) or matching
/// positions / length (Hamming). Throws std::invalid_argument on length mismatch.
double
affinity( const Bitstring& a, const Bitstring& b, const AffinityConfig& config );

enum class DetectorState
{
    Immature,
    Mature,
    Memory,
};

std::string_view
toString( DetectorState state );

std::optional<DetectorState>
detectorStateFromString( std::string_view text );

struct Detector
{
    Bitstring pattern;
    DetectorState state{ DetectorState::Immature };
    std::uint64_t age{ 0 };
    std::uint64_t matchCount{ 0 };

    friend bool operator==( const Detector&, const Detector& ) = default;
};

bool
matches( const Bitstring& pattern, const Bitstring& sample, const AffinityConfig& config );

inline bool
matches( const Detector& detector, const Bitstring& sample, const AffinityConfig& config )
{
    return matches( detector.pattern, sample, config );
}

/* Negative selection
 *
 * Candidates come from a stream; every candidate recognized by at least one
 * self element is censored, the rest become mature detectors. Duplicate
 * candidates are skipped. Generation stops after `requested` detectors or
 * `maxAttempts` candidates, whichever is first; a short result means the
 * self set covers (almost) the whole space. */

/// Returns the next candidate, or nothing when the stream is exhausted.
using CandidateStream = std::function<std::optional<Bitstring>()>;

CandidateStream
randomCandidates( std::size_t length, Rng& rng );

/// Every string of the given length in ascending numeric order (length <= 30).
CandidateStream
exhaustiveCandidates( std::size_t length );

std::vector<Detector>
negativeSelection( std::span<const Bitstring> selfSet, std::size_t requested,
                   const AffinityConfig& config, std::size_t maxAttempts,
                   const CandidateStream& candidates );

std::vector<Detector>
negativeSelection( std::span<const Bitstring> selfSet, std::size_t requested,
                   const AffinityConfig& config, std::size_t maxAttempts, Rng& rng );

/* Clonal selection */

struct ClonalParams
{
    std::size_t populationSize{ 50 };
    std::size_t selectCount{ 20 };
    std::size_t cloneBudget{ 20 };
    /// Hypermutation intensity in percent.
    double maturityLevel{ 80.0 };
    std::size_t replaceWorstN{ 5 };
    std::size_t maxGenerations{ 600 };
    /// Divide affinities by the population maximum before allocating clones.
    /// Mutation always uses the raw affinity clamped to [0, 1].
    bool normalizeAffinity{ false };

    void
    validate() const;
};

/// Point in the unit square, the continuous genome.
struct UnitPoint
{
    double x{ 0.0 };
    double y{ 0.0 };

    friend bool operator==( const UnitPoint&, const UnitPoint& ) = default;
};

template<typename Genome>
struct Antibody
{
    Genome genome;
    double affinity{ 0.0 };
};

template<typename Genome>
using AffinityFn = std::function<double( const Genome& )>;

template<typename Genome>
struct ClonalStepResult
{
    std::vector<Antibody<Genome>> population;
    std::vector<Antibody<Genome>> memoryAdditions;
    /// Clones granted to each selected antibody, best first.
    std::vector<std::size_t> cloneCounts;
};

/// Largest-remainder split of `budget` proportional to `weights`.
/// Equal shares when all weights are zero; ties go to the earlier entry.
std::vector<std::size_t>
allocateClones( std::span<const double> weights, std::size_t budget );

/// Bit-flip per position with rate (1 - affinity) * maturity / 100 / length.
void
hypermutate( Bitstring& genome, double affinity, double maturityLevel, Rng& rng );

/// Gaussian per coordinate, sigma = (1 - affinity) * maturity / 100 * 0.1,
/// clamped to the unit square.
void
hypermutate( UnitPoint& genome, double affinity, double maturityLevel, Rng& rng );

Bitstring
freshGenome( const Bitstring& like, Rng& rng );

UnitPoint
freshGenome( const UnitPoint& like, Rng& rng );

/// One generation: clone the selectCount best, hypermutate clones inversely
/// to affinity, let each parent be displaced by its best improving clone,
/// record the best antibody as a memory addition and replace the
/// replaceWorstN worst with fresh random genomes.
/// Throws std::invalid_argument on a population size mismatch.
template<typename Genome>
ClonalStepResult<Genome>
clonalStep( std::vector<Antibody<Genome>> population, const AffinityFn<Genome>& eval,
            const ClonalParams& params, Rng& rng );

extern template ClonalStepResult<Bitstring>
clonalStep( std::vector<Antibody<Bitstring>>, const AffinityFn<Bitstring>&, const ClonalParams&,
            Rng& );
extern template ClonalStepResult<UnitPoint>
clonalStep( std::vector<Antibody<UnitPoint>>, const AffinityFn<UnitPoint>&, const ClonalParams&,
            Rng& );

/* Detection */

struct Detection
{
    std::size_t index{ 0 };
    Detector detector;
    double affinity{ 0.0 };
};

/// Highest-affinity matching detector (earliest on ties). Bumps its match
/// count and promotes a Mature detector to Memory.
std::optional<Detection>
detect( std::vector<Detector>& detectors, const Bitstring& sample, const AffinityConfig& config );

/* Detector set text format: an optional "# length=N" header, then one
 * detector per line as "<hex-pattern> <state> <age> <match_count>". */

void
writeDetectors( std::ostream& out, std::span<const Detector> detectors );

/// `length` is used when the text has no length header. Throws
/// std::invalid_argument with the line number on malformed input.
std::vector<Detector>
readDetectors( std::istream& in, std::optional<std::size_t> length = std::nullopt );

}  // namespace immunet
