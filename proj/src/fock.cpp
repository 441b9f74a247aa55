#include "tbi/fock.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "tbi/errors.hpp"

namespace tbi {

namespace {

// Factorials overflow double past 170!; photon counts here stay tiny, but the
// guard turns a silent inf into a typed error.
constexpr int kMaxFactorial = 170;

const std::array<double, kMaxFactorial + 1>& factorial_table() {
    static const auto table = [] {
        std::array<double, kMaxFactorial + 1> t{};
        t[0] = 1.0;
        for (int i = 1; i <= kMaxFactorial; ++i) t[i] = t[i - 1] * i;
        return t;
    }();
    return table;
}

const std::array<double, kMaxFactorial + 1>& sqrt_factorial_table() {
    static const auto table = [] {
        std::array<double, kMaxFactorial + 1> t{};
        const auto& f = factorial_table();
        for (int i = 0; i <= kMaxFactorial; ++i) t[i] = std::sqrt(f[i]);
        return t;
    }();
    return table;
}

double binomial(int n, int k) {
    const auto& f = factorial_table();
    return f[n] / (f[k] * f[n - k]);
}

void check_photon_budget(int count) {
    if (count > kMaxFactorial)
        throw ResourceLimitError("photon count " + std::to_string(count) +
                                 " exceeds the factorial table");
}

// Two-mode Fock transition amplitude <p,q| BS(theta) |n_a,n_b> with p+q =
// n_a+n_b, from the binomial expansion of the mixed creation operators
// (cos·a+ + sin·b+)^n_a (−sin·a+ + cos·b+)^n_b with factorial normalization.
double bs_coefficient(int p, int q, int n_a, int n_b, double c, double s) {
    const auto& sf = sqrt_factorial_table();
    double sum = 0.0;
    const int j_lo = std::max(0, p - n_b);
    const int j_hi = std::min(n_a, p);
    for (int j = j_lo; j <= j_hi; ++j) {
        double term = binomial(n_a, j) * binomial(n_b, p - j) *
                      std::pow(c, 2 * j + n_b - p) * std::pow(s, n_a + p - 2 * j);
        if ((p - j) % 2 != 0) term = -term;
        sum += term;
    }
    return (sf[p] / sf[n_a]) * (sf[q] / sf[n_b]) * sum;
}

void check_mode_pair(int modes, int mode_a, int mode_b) {
    if (mode_a == mode_b) throw std::invalid_argument("beamsplitter modes must differ");
    if (mode_a < 0 || mode_b < 0 || mode_a >= modes || mode_b >= modes)
        throw std::invalid_argument("beamsplitter mode out of range");
}

}  // namespace

int total_photons(const OccupationVector& occ) {
    int total = 0;
    for (int c : occ) {
        if (c < 0) throw std::invalid_argument("occupation counts must be non-negative");
        total += c;
    }
    return total;
}

std::size_t OccupationHash::operator()(const OccupationVector& v) const noexcept {
    std::uint64_t h = 1469598103934665603ULL;  // FNV-1a offset basis
    for (int x : v) {
        h ^= static_cast<std::uint64_t>(static_cast<std::uint32_t>(x));
        h *= 1099511628211ULL;
    }
    return static_cast<std::size_t>(h);
}

double probability_of(const Distribution& dist, const OccupationVector& occ) {
    auto it = dist.find(occ);
    return it == dist.end() ? 0.0 : it->second;
}

FockState FockState::basis(OccupationVector occ) {
    if (occ.empty()) throw std::invalid_argument("occupation vector must be non-empty");
    total_photons(occ);  // validates non-negativity
    FockState state(static_cast<int>(occ.size()));
    state.amps_.emplace(std::move(occ), Complex(1.0, 0.0));
    return state;
}

double FockState::norm_sq() const {
    double total = 0.0;
    for (const auto& [occ, amp] : amps_) total += std::norm(amp);
    return total;
}

void FockState::prune_and_renormalize(double threshold) {
    for (auto it = amps_.begin(); it != amps_.end();) {
        if (std::abs(it->second) < threshold)
            it = amps_.erase(it);
        else
            ++it;
    }
    const double norm = norm_sq();
    if (amps_.empty() || norm <= 0.0)
        throw InternalError("state vanished during pruning");
    const double scale = 1.0 / std::sqrt(norm);
    for (auto& [occ, amp] : amps_) amp *= scale;
}

namespace detail {

FockState apply_beamsplitter_no_prune(const FockState& state, int mode_a, int mode_b,
                                      double theta) {
    check_mode_pair(state.mode_count(), mode_a, mode_b);
    const double c = std::cos(theta);
    const double s = std::sin(theta);

    FockState out(state.mode_count());
    auto& out_amps = out.mutable_amplitudes();
    for (const auto& [occ, amp] : state.amplitudes()) {
        const int n_a = occ[static_cast<std::size_t>(mode_a)];
        const int n_b = occ[static_cast<std::size_t>(mode_b)];
        const int total = n_a + n_b;
        if (total == 0) {
            out_amps[occ] += amp;
            continue;
        }
        check_photon_budget(total);
        OccupationVector next = occ;
        for (int p = 0; p <= total; ++p) {
            const double coeff = bs_coefficient(p, total - p, n_a, n_b, c, s);
            if (coeff == 0.0) continue;
            next[static_cast<std::size_t>(mode_a)] = p;
            next[static_cast<std::size_t>(mode_b)] = total - p;
            out_amps[next] += coeff * amp;
        }
    }
    return out;
}

}  // namespace detail

FockState apply_beamsplitter(const FockState& state, int mode_a, int mode_b, double theta) {
    FockState out = detail::apply_beamsplitter_no_prune(state, mode_a, mode_b, theta);
    out.prune_and_renormalize(kPruneThreshold);
    return out;
}

void TBIConfig::validate() const {
    if (n_modes < 1) throw std::invalid_argument("n_modes must be at least 1");
    if (angles.size() != loop_delays.size())
        throw std::invalid_argument("need one angle list per loop");
    for (std::size_t l = 0; l < loop_delays.size(); ++l) {
        const int d = loop_delays[l];
        if (d < 1 || d >= n_modes)
            throw std::invalid_argument("loop delay must lie in [1, n_modes)");
        if (static_cast<int>(angles[l].size()) != n_modes - d)
            throw std::invalid_argument("loop with delay " + std::to_string(d) + " needs " +
                                        std::to_string(n_modes - d) + " angles");
        for (double theta : angles[l]) {
            if (!std::isfinite(theta))
                throw std::invalid_argument("angles must be finite");
        }
    }
}

int TBIConfig::total_angle_count() const {
    int total = 0;
    for (int d : loop_delays) total += n_modes - d;
    return total;
}

std::vector<double> TBIConfig::flat_angles() const {
    std::vector<double> flat;
    flat.reserve(static_cast<std::size_t>(total_angle_count()));
    for (const auto& loop : angles) flat.insert(flat.end(), loop.begin(), loop.end());
    return flat;
}

void TBIConfig::set_flat_angles(const std::vector<double>& flat) {
    if (static_cast<int>(flat.size()) != total_angle_count())
        throw std::invalid_argument("expected " + std::to_string(total_angle_count()) +
                                    " angles, got " + std::to_string(flat.size()));
    std::size_t pos = 0;
    for (auto& loop : angles) {
        for (double& theta : loop) theta = flat[pos++];
    }
}

std::string TBIConfig::to_json() const {
    nlohmann::ordered_json j;
    j["n_modes"] = n_modes;
    j["loop_delays"] = loop_delays;
    j["angles"] = angles;
    return j.dump();
}

TBIConfig TBIConfig::from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    TBIConfig config;
    config.n_modes = j.at("n_modes").get<int>();
    config.loop_delays = j.at("loop_delays").get<std::vector<int>>();
    config.angles = j.at("angles").get<std::vector<std::vector<double>>>();
    config.validate();
    return config;
}

std::vector<BeamsplitterEvent> build_circuit(const TBIConfig& config) {
    config.validate();
    std::vector<BeamsplitterEvent> events;
    events.reserve(static_cast<std::size_t>(config.total_angle_count()));
    for (std::size_t l = 0; l < config.loop_delays.size(); ++l) {
        const int d = config.loop_delays[l];
        for (int i = 0; i + d < config.n_modes; ++i)
            events.push_back({i, i + d, config.angles[l][static_cast<std::size_t>(i)]});
    }
    return events;
}

Distribution exact_distribution(const TBIConfig& config, const OccupationVector& input,
                                int photon_cap) {
    config.validate();
    if (static_cast<int>(input.size()) != config.n_modes)
        throw std::invalid_argument("input length must equal n_modes");
    const int photons = total_photons(input);
    if (photons > photon_cap)
        throw ResourceLimitError("input carries " + std::to_string(photons) +
                                 " photons, exact distribution capped at " +
                                 std::to_string(photon_cap));

    FockState state = FockState::basis(input);
    for (const auto& ev : build_circuit(config))
        state = apply_beamsplitter(state, ev.mode_a, ev.mode_b, ev.theta);

    Distribution dist;
    for (const auto& [occ, amp] : state.amplitudes()) dist[occ] = std::norm(amp);
    return dist;
}

TbiSampler::TbiSampler(TBIConfig config, OccupationVector input)
    : config_(std::move(config)), input_(std::move(input)) {
    config_.validate();
    if (static_cast<int>(input_.size()) != config_.n_modes)
        throw std::invalid_argument("input length must equal n_modes");
    total_photons(input_);  // validates non-negativity
    events_ = build_circuit(config_);
    build_schedule();
}

void TbiSampler::set_flat_angles(const std::vector<double>& flat) {
    config_.set_flat_angles(flat);
    events_ = build_circuit(config_);
}

// Events sharing no mode commute, so the final state is unchanged when an
// event is deferred past others it commutes with. For each mode k in index
// order we pull forward exactly the not-yet-applied events in k's dependency
// closure (computed by a backward sweep), apply them in their original
// relative order, and then measure k: every remaining event commutes with
// that measurement. This keeps the undetermined-mode count bounded by the
// loop contents instead of the full mode count.
void TbiSampler::build_schedule() {
    const std::size_t n_events = events_.size();
    std::vector<char> applied(n_events, 0);
    std::vector<char> needed(n_events, 0);
    std::vector<char> reachable(static_cast<std::size_t>(config_.n_modes), 0);

    for (int k = 0; k < config_.n_modes; ++k) {
        std::fill(needed.begin(), needed.end(), 0);
        std::fill(reachable.begin(), reachable.end(), 0);
        reachable[static_cast<std::size_t>(k)] = 1;
        for (std::size_t e = n_events; e-- > 0;) {
            if (applied[e]) continue;
            const auto& ev = events_[e];
            if (reachable[static_cast<std::size_t>(ev.mode_a)] ||
                reachable[static_cast<std::size_t>(ev.mode_b)]) {
                needed[e] = 1;
                reachable[static_cast<std::size_t>(ev.mode_a)] = 1;
                reachable[static_cast<std::size_t>(ev.mode_b)] = 1;
            }
        }
        for (std::size_t e = 0; e < n_events; ++e) {
            if (!needed[e]) continue;
            steps_.push_back({Step::Kind::ApplyEvent, static_cast<int>(e)});
            applied[e] = 1;
        }
        steps_.push_back({Step::Kind::MeasureMode, k});
    }

    // Static post-conditions: no event touches a measured mode, every event
    // runs exactly once, and every mode is measured after its last event.
    std::vector<char> measured(static_cast<std::size_t>(config_.n_modes), 0);
    std::vector<char> seen(n_events, 0);
    for (const auto& step : steps_) {
        if (step.kind == Step::Kind::ApplyEvent) {
            const auto& ev = events_[static_cast<std::size_t>(step.index)];
            if (seen[static_cast<std::size_t>(step.index)] ||
                measured[static_cast<std::size_t>(ev.mode_a)] ||
                measured[static_cast<std::size_t>(ev.mode_b)])
                throw InternalError("sampler schedule is inconsistent");
            seen[static_cast<std::size_t>(step.index)] = 1;
        } else {
            measured[static_cast<std::size_t>(step.index)] = 1;
        }
    }
    for (char s : seen) {
        if (!s) throw InternalError("sampler schedule dropped an event");
    }
}

OccupationVector TbiSampler::draw(SplitMix64& rng) {
    FockState state = FockState::basis(input_);
    OccupationVector outcome = input_;
    std::vector<char> touched(static_cast<std::size_t>(config_.n_modes), 0);
    int live = 0;

    for (const auto& step : steps_) {
        if (step.kind == Step::Kind::ApplyEvent) {
            const auto& ev = events_[static_cast<std::size_t>(step.index)];
            state = apply_beamsplitter(state, ev.mode_a, ev.mode_b, ev.theta);
            for (int m : {ev.mode_a, ev.mode_b}) {
                if (!touched[static_cast<std::size_t>(m)]) {
                    touched[static_cast<std::size_t>(m)] = 1;
                    ++live;
                }
            }
            max_live_modes_ = std::max(max_live_modes_, live);
            continue;
        }

        // Measure mode k: its marginal is final because every unapplied event
        // avoids it. Draw a count, project, renormalize.
        const int k = step.index;
        std::map<int, double> marginal;
        for (const auto& [occ, amp] : state.amplitudes())
            marginal[occ[static_cast<std::size_t>(k)]] += std::norm(amp);
        double total = 0.0;
        for (const auto& [count, prob] : marginal) total += prob;
        if (marginal.empty() || total <= 0.0)
            throw InternalError("empty marginal while measuring a mode");

        const double u = rng.next_double() * total;
        int chosen = marginal.rbegin()->first;
        double cumulative = 0.0;
        for (const auto& [count, prob] : marginal) {
            cumulative += prob;
            if (u < cumulative) {
                chosen = count;
                break;
            }
        }

        FockState projected(config_.n_modes);
        auto& kept = projected.mutable_amplitudes();
        double branch_norm = 0.0;
        for (const auto& [occ, amp] : state.amplitudes()) {
            if (occ[static_cast<std::size_t>(k)] != chosen) continue;
            kept.emplace(occ, amp);
            branch_norm += std::norm(amp);
        }
        if (kept.empty() || branch_norm <= 0.0)
            throw InternalError("projected onto a zero-probability branch");
        const double scale = 1.0 / std::sqrt(branch_norm);
        for (auto& [occ, amp] : kept) amp *= scale;

        state = std::move(projected);
        outcome[static_cast<std::size_t>(k)] = chosen;
        if (touched[static_cast<std::size_t>(k)]) --live;
    }
    return outcome;
}

OccupationVector sample(const TBIConfig& config, const OccupationVector& input,
                        SplitMix64& rng) {
    TbiSampler sampler(config, input);
    return sampler.draw(rng);
}

ComplexMatrix ComplexMatrix::identity(int n) {
    ComplexMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = Complex(1.0, 0.0);
    return m;
}

ComplexMatrix mode_unitary(const TBIConfig& config) {
    ComplexMatrix u = ComplexMatrix::identity(config.n_modes);
    // Row j tracks the image of input mode j, so each successive event
    // right-multiplies the accumulated matrix by its embedded rotation.
    for (const auto& ev : build_circuit(config)) {
        const double c = std::cos(ev.theta);
        const double s = std::sin(ev.theta);
        for (int r = 0; r < u.rows; ++r) {
            const Complex col_a = u.at(r, ev.mode_a);
            const Complex col_b = u.at(r, ev.mode_b);
            u.at(r, ev.mode_a) = c * col_a - s * col_b;
            u.at(r, ev.mode_b) = s * col_a + c * col_b;
        }
    }
    return u;
}

Complex permanent(const ComplexMatrix& m) {
    if (m.rows != m.cols) throw std::invalid_argument("permanent needs a square matrix");
    const int n = m.rows;
    if (n > 20) throw ResourceLimitError("permanent capped at dimension 20");
    if (n == 0) return Complex(1.0, 0.0);

    // Ryser with Gray-code ordering: one column toggled per subset step.
    std::vector<Complex> row_sum(static_cast<std::size_t>(n), Complex(0.0, 0.0));
    Complex total(0.0, 0.0);
    std::uint32_t prev_gray = 0;
    const std::uint64_t subsets = std::uint64_t{1} << n;
    for (std::uint64_t k = 1; k < subsets; ++k) {
        const auto gray = static_cast<std::uint32_t>(k ^ (k >> 1));
        const std::uint32_t diff = gray ^ prev_gray;
        const int j = std::countr_zero(diff);
        const double flip = (gray & diff) ? 1.0 : -1.0;
        for (int i = 0; i < n; ++i)
            row_sum[static_cast<std::size_t>(i)] += flip * m.at(i, j);
        Complex prod(1.0, 0.0);
        for (int i = 0; i < n; ++i) prod *= row_sum[static_cast<std::size_t>(i)];
        const int parity = (n - std::popcount(gray)) & 1;
        total += parity ? -prod : prod;
        prev_gray = gray;
    }
    return total;
}

Complex amplitude_oracle(const TBIConfig& config, const OccupationVector& input,
                         const OccupationVector& output) {
    config.validate();
    if (static_cast<int>(input.size()) != config.n_modes ||
        static_cast<int>(output.size()) != config.n_modes)
        throw std::invalid_argument("occupation length must equal n_modes");

    std::vector<int> in_modes, out_modes;
    for (int m = 0; m < config.n_modes; ++m) {
        const int ci = input[static_cast<std::size_t>(m)];
        const int co = output[static_cast<std::size_t>(m)];
        if (ci < 0 || ci > 1 || co < 0 || co > 1)
            throw std::invalid_argument("oracle restricted to collision-free occupations");
        if (ci) in_modes.push_back(m);
        if (co) out_modes.push_back(m);
    }
    if (in_modes.size() != out_modes.size())
        throw std::invalid_argument("input and output photon counts must match");

    const ComplexMatrix u = mode_unitary(config);
    const int k = static_cast<int>(in_modes.size());
    ComplexMatrix sub(k, k);
    for (int r = 0; r < k; ++r)
        for (int c = 0; c < k; ++c)
            sub.at(r, c) = u.at(in_modes[static_cast<std::size_t>(r)],
                                out_modes[static_cast<std::size_t>(c)]);
    return permanent(sub);
}

Bitstring threshold_map(const OccupationVector& outcome) {
    Bitstring bits(outcome.size());
    for (std::size_t i = 0; i < outcome.size(); ++i) bits[i] = outcome[i] >= 1 ? 1 : 0;
    return bits;
}

OccupationVector alternating_input(int n_modes) {
    if (n_modes < 1) throw std::invalid_argument("n_modes must be at least 1");
    OccupationVector occ(static_cast<std::size_t>(n_modes), 0);
    for (int i = 0; i < n_modes; i += 2) occ[static_cast<std::size_t>(i)] = 1;
    return occ;
}

}  // namespace tbi
