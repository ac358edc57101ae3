#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "polarq/dist.hpp"
#include "polarq/rng.hpp"

namespace polarq {

struct ChannelAtom {
    double weight = 0.0;
    DistQ posterior;
};

/// Channel W = (X;Y) as a finite joint law: atom k stands for the output
/// value y_k with Pr[Y=y_k] = weight and posterior Pr[X=.|Y=y_k], so
/// p(x,y_k) = weight_k * posterior_k(x).
///
/// Atoms with zero weight are dropped on construction, and the value is
/// immutable afterwards. `approximate` marks channels that went through
/// lossy output merging and carries through later transforms.
class JointChannel {
public:
    JointChannel(int q, std::vector<ChannelAtom> atoms, bool approximate = false);

    int q() const { return q_; }
    const std::vector<ChannelAtom>& atoms() const { return atoms_; }
    std::size_t atom_count() const { return atoms_.size(); }
    bool approximate() const { return approximate_; }

private:
    int q_;
    std::vector<ChannelAtom> atoms_;
    bool approximate_;
};

struct ChannelStats {
    double entropy = 0.0;            // H(X|Y), normalized
    double symmetric_entropy = 0.0;  // H(1-H)
    double z_max = 0.0;
    std::vector<double> z_by_d;      // d = 1..q-1
};

/// H(X|Y) normalized by lg q: the weight-average posterior entropy.
double channel_entropy(const JointChannel& w);

/// H(1-H) of the channel entropy.
double symmetric_entropy(const JointChannel& w);

/// Channel of the symbol sum of two independent copies, given both outputs:
/// atoms are output pairs, each with the convolution of the two posteriors.
JointChannel minus_transform(const JointChannel& w);

/// Channel of the second input, given the sum and both outputs: atoms are
/// (pair, sum) with posterior(x1) proportional to p_k(u-x1) * p_l(x1).
JointChannel plus_transform(const JointChannel& w);

/// Pairwise confusability sums Z_d = sum_{x,y} sqrt(p(x,y) p(x+d,y)) for
/// every d != 0, their max, and the entropy statistics.
ChannelStats bhattacharyya(const JointChannel& w);

/// Exact single-use error probability of the ML decision; an atom whose
/// argmax is tied counts as fully erroneous.
double ml_error_prob(const JointChannel& w);

/// Folds together output atoms whose posteriors are within tol in L1
/// (weights added, posterior weight-averaged). tol = 0 folds only bitwise
/// duplicates and is lossless; tol > 0 marks the result approximate.
/// Atoms come back canonically sorted.
JointChannel merge_equivalent_outputs(const JointChannel& w, double tol);

/// q-ary symmetric channel with uniform input: atom k keeps the input with
/// probability 1-flip_prob and spreads flip_prob over the other symbols.
JointChannel make_qsc(int q, double flip_prob);

/// QSC whose entropy is tuned to `target` by bisection on the flip
/// probability (entropy is monotone in it).
JointChannel qsc_with_entropy(int q, double target, double tol = 1e-10);

/// Random channel with 1..max_atoms outputs; posterior spikiness varies
/// across draws so sweeps cover both near-deterministic and near-uniform
/// regimes. Deterministic given the rng state.
JointChannel sample_random_channel(int q, int max_atoms, Rng& rng);

/// Marginal law of X.
DistQ input_marginal(const JointChannel& w);

/// Joint draw (atom index, input symbol).
std::pair<std::size_t, int> sample_pair(const JointChannel& w, Rng& rng);

/// Samples atoms conditioned on a transmitted input symbol; the per-symbol
/// tables are precomputed once.
class ConditionalAtomSampler {
public:
    explicit ConditionalAtomSampler(const JointChannel& w);
    std::size_t sample(int x, Rng& rng) const;

private:
    int q_;
    std::vector<std::vector<double>> cumulative_;  // [x][atom]
};

/// Text form: header "q=<q>;atoms=<k>" then one "w=<weight>;p=<v0>,..."
/// line per atom, 17 significant digits.
std::string format_channel(const JointChannel& w);
JointChannel parse_channel(std::istream& in);
JointChannel parse_channel_text(const std::string& text);

} // namespace polarq
