#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "tbi/bitstring.hpp"
#include "tbi/rng.hpp"

namespace tbi {

using Complex = std::complex<double>;

// Photon count per mode.
using OccupationVector = std::vector<int>;

int total_photons(const OccupationVector& occ);

struct OccupationHash {
    std::size_t operator()(const OccupationVector& v) const noexcept;
};

using AmplitudeMap = std::unordered_map<OccupationVector, Complex, OccupationHash>;

// Probabilities keyed by occupation vector; ordered for stable iteration.
using Distribution = std::map<OccupationVector, double>;

double probability_of(const Distribution& dist, const OccupationVector& occ);

// Sparse superposition over occupation vectors with a single total photon
// count. Evolution operations return new states.
class FockState {
public:
    static FockState basis(OccupationVector occ);

    int mode_count() const { return modes_; }
    const AmplitudeMap& amplitudes() const { return amps_; }
    double norm_sq() const;

    // Drops amplitudes below `threshold` in magnitude, then rescales to unit norm.
    void prune_and_renormalize(double threshold);

    // Tests and the sampler build states directly.
    explicit FockState(int modes) : modes_(modes) {}
    AmplitudeMap& mutable_amplitudes() { return amps_; }

private:
    int modes_ = 0;
    AmplitudeMap amps_;
};

// Default magnitude below which amplitudes are dropped after each event.
inline constexpr double kPruneThreshold = 1e-14;

// Default photon budget for exact output distributions.
inline constexpr int kDefaultPhotonCap = 8;

struct BeamsplitterEvent {
    int mode_a = 0;
    int mode_b = 0;
    double theta = 0.0;
};

// Loop-based time-bin interferometer layout: loop l with delay d couples
// modes (i, i+d) for i ascending, one angle per coupling, loops in order.
struct TBIConfig {
    int n_modes = 0;
    std::vector<int> loop_delays;             // each in [1, n_modes)
    std::vector<std::vector<double>> angles;  // angles[l].size() == n_modes - loop_delays[l]

    void validate() const;  // throws std::invalid_argument
    int total_angle_count() const;
    std::vector<double> flat_angles() const;
    void set_flat_angles(const std::vector<double>& flat);

    std::string to_json() const;
    static TBIConfig from_json(const std::string& text);
};

// Two-mode creation-operator mixing a+ -> cos(t) a+ + sin(t) b+,
// b+ -> -sin(t) a+ + cos(t) b+. Prunes and renormalizes afterwards.
FockState apply_beamsplitter(const FockState& state, int mode_a, int mode_b, double theta);

namespace detail {
// Evolution without pruning; exposed so tests can check norm conservation
// ahead of the cleanup step.
FockState apply_beamsplitter_no_prune(const FockState& state, int mode_a, int mode_b,
                                      double theta);
}  // namespace detail

std::vector<BeamsplitterEvent> build_circuit(const TBIConfig& config);

// Exact output distribution; throws ResourceLimitError above `photon_cap`.
Distribution exact_distribution(const TBIConfig& config, const OccupationVector& input,
                                int photon_cap = kDefaultPhotonCap);

// Draws exact samples by interleaving beamsplitter events with projective
// measurement of modes that no longer take part in later events. Events are
// reordered only across commuting pairs, so each draw is distributed exactly
// per exact_distribution while the live superposition stays bounded by the
// loop contents.
class TbiSampler {
public:
    TbiSampler(TBIConfig config, OccupationVector input);

    // Replaces the beamsplitter angles without rebuilding the schedule.
    void set_flat_angles(const std::vector<double>& flat);

    OccupationVector draw(SplitMix64& rng);

    // High-water mark of simultaneously undetermined modes across all draws.
    int max_live_modes() const { return max_live_modes_; }

private:
    struct Step {
        enum class Kind { ApplyEvent, MeasureMode };
        Kind kind;
        int index;  // event index or mode index
    };

    void build_schedule();

    TBIConfig config_;
    OccupationVector input_;
    std::vector<BeamsplitterEvent> events_;
    std::vector<Step> steps_;
    int max_live_modes_ = 0;
};

// One outcome, distributed exactly per exact_distribution.
OccupationVector sample(const TBIConfig& config, const OccupationVector& input,
                        SplitMix64& rng);

// Dense row-major complex matrix, just big enough for the unitary/permanent work here.
struct ComplexMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<Complex> data;

    ComplexMatrix() = default;
    ComplexMatrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c) {}

    Complex& at(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
    const Complex& at(int r, int c) const {
        return data[static_cast<std::size_t>(r) * cols + c];
    }

    static ComplexMatrix identity(int n);
};

// Mode-basis matrix of the whole interferometer: row j holds the image of
// input mode j over output modes (single beamsplitter gives [[c,s],[-s,c]]).
ComplexMatrix mode_unitary(const TBIConfig& config);

// Exact permanent, Ryser's formula with Gray-code ordering. Dimension cap 20.
Complex permanent(const ComplexMatrix& m);

// Transition amplitude for collision-free input/output occupation vectors,
// computed as a permanent of a mode_unitary submatrix.
Complex amplitude_oracle(const TBIConfig& config, const OccupationVector& input,
                         const OccupationVector& output);

// 1 for every mode with at least one photon detected.
Bitstring threshold_map(const OccupationVector& outcome);

// 1,0,1,0,... of length n: one photon in every other time bin.
OccupationVector alternating_input(int n_modes);

}  // namespace tbi
