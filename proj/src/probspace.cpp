#include <hedgelab/probspace.hpp>

#include <algorithm>
#include <map>

#include <nlohmann/json.hpp>

namespace hedgelab {

namespace {

std::vector<int> index_cells(const Partition& part, int n, const char* what) {
    std::vector<int> idx(n, -1);
    for (int c = 0; c < static_cast<int>(part.size()); ++c) {
        for (int atom : part[c]) {
            if (atom < 0 || atom >= n)
                throw UnknownAtom(std::string(what) + ": atom index out of range");
            if (idx[atom] != -1)
                throw PartitionNotRefining(std::string(what) + ": atom appears in two cells");
            idx[atom] = c;
        }
    }
    for (int a = 0; a < n; ++a)
        if (idx[a] == -1)
            throw PartitionNotRefining(std::string(what) + ": atom missing from partition");
    return idx;
}

}  // namespace

FiniteFilteredSpace::FiniteFilteredSpace(std::vector<std::string> atoms,
                                         std::vector<Rat> probs,
                                         std::vector<Partition> filtration)
    : atoms_(std::move(atoms)), probs_(std::move(probs)), filtration_(std::move(filtration)) {
    const int n = static_cast<int>(atoms_.size());
    if (n == 0) throw std::invalid_argument("space needs at least one atom");
    if (static_cast<int>(probs_.size()) != n)
        throw std::invalid_argument("atom/probability count mismatch");
    if (filtration_.empty()) throw std::invalid_argument("empty filtration");

    Rat total(0);
    for (const Rat& p : probs_) {
        if (p <= 0) throw NonPositiveProbability("atom probability must be > 0, got " + rat_str(p));
        total += p;
    }
    if (total != 1)
        throw ProbabilitySumNotOne("probabilities sum to " + rat_str(total));

    cell_index_.reserve(filtration_.size());
    for (size_t t = 0; t < filtration_.size(); ++t)
        cell_index_.push_back(index_cells(filtration_[t], n, "filtration"));

    // Each partition must refine its predecessor: atoms sharing a cell at t
    // must share a cell at t-1.
    for (size_t t = 1; t < filtration_.size(); ++t) {
        for (const auto& cell : filtration_[t]) {
            for (size_t k = 1; k < cell.size(); ++k) {
                if (cell_index_[t - 1][cell[k]] != cell_index_[t - 1][cell[0]])
                    throw PartitionNotRefining("partition at t=" + std::to_string(t) +
                                               " does not refine t=" + std::to_string(t - 1));
            }
        }
    }
    if (static_cast<int>(filtration_.back().size()) != n)
        throw PartitionNotRefining("final partition must separate all atoms");
}

const Partition& FiniteFilteredSpace::partition(int t) const {
    if (t < 0 || t > horizon()) throw TimeOutOfRange("time index " + std::to_string(t));
    return filtration_[t];
}

int FiniteFilteredSpace::cell_of(int atom, int t) const {
    if (t < 0 || t > horizon()) throw TimeOutOfRange("time index " + std::to_string(t));
    return cell_index_[t].at(atom);
}

int FiniteFilteredSpace::atom_index(const std::string& label) const {
    auto it = std::find(atoms_.begin(), atoms_.end(), label);
    if (it == atoms_.end()) throw UnknownAtom("no atom labelled " + label);
    return static_cast<int>(it - atoms_.begin());
}

Rat FiniteFilteredSpace::event_probability(const std::vector<int>& event) const {
    Rat p(0);
    for (int atom : event) {
        if (atom < 0 || atom >= num_atoms()) throw UnknownAtom("atom index out of range");
        p += probs_[atom];
    }
    return p;
}

SpacePtr make_space(std::vector<std::string> atoms, std::vector<Rat> probs,
                    std::vector<Partition> filtration) {
    return std::make_shared<const FiniteFilteredSpace>(std::move(atoms), std::move(probs),
                                                       std::move(filtration));
}

RandomVariable::RandomVariable(SpacePtr space, std::vector<Rat> values)
    : space_(std::move(space)), values_(std::move(values)) {
    if (!space_) throw std::invalid_argument("null space");
    if (static_cast<int>(values_.size()) != space_->num_atoms())
        throw std::invalid_argument("value count does not match atom count");
}

RandomVariable RandomVariable::constant(SpacePtr space, const Rat& c) {
    std::vector<Rat> v(space->num_atoms(), c);
    return RandomVariable(std::move(space), std::move(v));
}

RandomVariable& RandomVariable::operator+=(const RandomVariable& o) {
    if (space_ != o.space_) throw SpaceMismatch("adding variables on different spaces");
    for (size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
    return *this;
}

RandomVariable& RandomVariable::operator-=(const RandomVariable& o) {
    if (space_ != o.space_) throw SpaceMismatch("subtracting variables on different spaces");
    for (size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
    return *this;
}

RandomVariable& RandomVariable::operator*=(const Rat& c) {
    for (Rat& v : values_) v *= c;
    return *this;
}

RandomVariable RandomVariable::abs() const {
    std::vector<Rat> v(values_.size());
    for (size_t i = 0; i < values_.size(); ++i) v[i] = rat_abs(values_[i]);
    return RandomVariable(space_, std::move(v));
}

RandomVariable RandomVariable::hadamard(const RandomVariable& o) const {
    if (space_ != o.space_) throw SpaceMismatch("multiplying variables on different spaces");
    std::vector<Rat> v(values_.size());
    for (size_t i = 0; i < values_.size(); ++i) v[i] = values_[i] * o.values_[i];
    return RandomVariable(space_, std::move(v));
}

RandomVariable cond_expectation(const RandomVariable& rv, int t) {
    const auto& space = *rv.space();
    const Partition& part = space.partition(t);
    std::vector<Rat> out(space.num_atoms());
    for (const auto& cell : part) {
        Rat mass(0), weighted(0);
        for (int atom : cell) {
            mass += space.prob(atom);
            weighted += space.prob(atom) * rv[atom];
        }
        Rat avg = weighted / mass;
        for (int atom : cell) out[atom] = avg;
    }
    return RandomVariable(rv.space(), std::move(out));
}

Rat expectation(const RandomVariable& rv) {
    const auto& space = *rv.space();
    Rat e(0);
    for (int a = 0; a < space.num_atoms(); ++a) e += space.prob(a) * rv[a];
    return e;
}

Rat moment(const RandomVariable& rv, int p) {
    if (p < 1) throw std::invalid_argument("moment order must be >= 1");
    const auto& space = *rv.space();
    Rat e(0);
    for (int a = 0; a < space.num_atoms(); ++a)
        e += space.prob(a) * rat_pow(rat_abs(rv[a]), static_cast<unsigned>(p));
    return e;
}

nlohmann::json space_to_json(const FiniteFilteredSpace& space) {
    nlohmann::json j;
    j["atoms"] = space.atoms();
    std::vector<std::string> probs;
    for (const Rat& p : space.probs()) probs.push_back(rat_str(p));
    j["probs"] = probs;
    nlohmann::json filt = nlohmann::json::array();
    for (int t = 0; t <= space.horizon(); ++t) {
        nlohmann::json part = nlohmann::json::array();
        for (const auto& cell : space.partition(t)) {
            std::vector<std::string> labels;
            for (int atom : cell) labels.push_back(space.label(atom));
            part.push_back(labels);
        }
        filt.push_back(part);
    }
    j["filtration"] = filt;
    return j;
}

SpacePtr space_from_json(const nlohmann::json& j) {
    std::vector<std::string> atoms = j.at("atoms").get<std::vector<std::string>>();
    std::map<std::string, int> index;
    for (int i = 0; i < static_cast<int>(atoms.size()); ++i) index[atoms[i]] = i;
    std::vector<Rat> probs;
    for (const auto& s : j.at("probs")) probs.push_back(parse_rat(s.get<std::string>()));
    std::vector<Partition> filtration;
    for (const auto& part : j.at("filtration")) {
        Partition p;
        for (const auto& cell : part) {
            std::vector<int> c;
            for (const auto& label : cell) {
                auto it = index.find(label.get<std::string>());
                if (it == index.end()) throw UnknownAtom("filtration references unknown atom");
                c.push_back(it->second);
            }
            p.push_back(std::move(c));
        }
        filtration.push_back(std::move(p));
    }
    return make_space(std::move(atoms), std::move(probs), std::move(filtration));
}

nlohmann::json rv_to_json(const RandomVariable& rv) {
    nlohmann::json j;
    std::vector<std::string> vals;
    for (const Rat& v : rv.values()) vals.push_back(rat_str(v));
    j["values"] = vals;
    return j;
}

RandomVariable rv_from_json(const nlohmann::json& j, SpacePtr space) {
    std::vector<Rat> vals;
    for (const auto& s : j.at("values")) vals.push_back(parse_rat(s.get<std::string>()));
    return RandomVariable(std::move(space), std::move(vals));
}

}  // namespace hedgelab
