#pragma once

#include <hedgelab/rational.hpp>

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace hedgelab {

struct NonPositiveProbability : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ProbabilitySumNotOne : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct PartitionNotRefining : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct TimeOutOfRange : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct UnknownAtom : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SpaceMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A partition of {0, ..., n-1} given as cells of atom indices.
using Partition = std::vector<std::vector<int>>;

/// A finite filtered probability space: labelled atoms with exact rational
/// probabilities and a refining sequence of partitions, one per time index.
/// Immutable after construction; the final partition separates all atoms.
class FiniteFilteredSpace {
public:
    FiniteFilteredSpace(std::vector<std::string> atoms, std::vector<Rat> probs,
                        std::vector<Partition> filtration);

    int num_atoms() const { return static_cast<int>(atoms_.size()); }
    int horizon() const { return static_cast<int>(filtration_.size()) - 1; }

    const std::vector<std::string>& atoms() const { return atoms_; }
    const std::string& label(int atom) const { return atoms_.at(atom); }
    const Rat& prob(int atom) const { return probs_.at(atom); }
    const std::vector<Rat>& probs() const { return probs_; }

    const Partition& partition(int t) const;
    // Index of the t-partition cell containing the atom.
    int cell_of(int atom, int t) const;

    int atom_index(const std::string& label) const;

    Rat event_probability(const std::vector<int>& event) const;

private:
    std::vector<std::string> atoms_;
    std::vector<Rat> probs_;
    std::vector<Partition> filtration_;
    // cell_index_[t][atom] -> cell of partition t.
    std::vector<std::vector<int>> cell_index_;
};

using SpacePtr = std::shared_ptr<const FiniteFilteredSpace>;

SpacePtr make_space(std::vector<std::string> atoms, std::vector<Rat> probs,
                    std::vector<Partition> filtration);

/// Exact rational value per atom of a fixed space.
class RandomVariable {
public:
    RandomVariable(SpacePtr space, std::vector<Rat> values);
    static RandomVariable constant(SpacePtr space, const Rat& c);
    static RandomVariable zero(SpacePtr space) { return constant(space, Rat(0)); }

    const SpacePtr& space() const { return space_; }
    const Rat& operator[](int atom) const { return values_.at(atom); }
    const std::vector<Rat>& values() const { return values_; }

    RandomVariable& operator+=(const RandomVariable& o);
    RandomVariable& operator-=(const RandomVariable& o);
    RandomVariable& operator*=(const Rat& c);

    friend RandomVariable operator+(RandomVariable a, const RandomVariable& b) { return a += b; }
    friend RandomVariable operator-(RandomVariable a, const RandomVariable& b) { return a -= b; }
    friend RandomVariable operator*(const Rat& c, RandomVariable a) { return a *= c; }

    bool operator==(const RandomVariable& o) const { return values_ == o.values_; }

    RandomVariable abs() const;
    // Atomwise product (used for E[fu] style pairings).
    RandomVariable hadamard(const RandomVariable& o) const;

private:
    SpacePtr space_;
    std::vector<Rat> values_;
};

/// E[rv | F_t]: constant on every cell of the t-partition, exact.
RandomVariable cond_expectation(const RandomVariable& rv, int t);

/// E[rv], exact.
Rat expectation(const RandomVariable& rv);

/// E[|rv|^p] for integer p >= 1, exact.
Rat moment(const RandomVariable& rv, int p);

// JSON round-trips are bit-exact: probabilities and values as "num/den".
nlohmann::json space_to_json(const FiniteFilteredSpace& space);
SpacePtr space_from_json(const nlohmann::json& j);
nlohmann::json rv_to_json(const RandomVariable& rv);
RandomVariable rv_from_json(const nlohmann::json& j, SpacePtr space);

}  // namespace hedgelab
