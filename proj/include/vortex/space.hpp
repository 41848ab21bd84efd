#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace vortex {

// Coordinates of the extended phase space R x M.  Index 0 is always the time
// coordinate "t"; spatial coordinates occupy indices 1..n.
class SpaceSpec {
public:
    SpaceSpec() = default;

    explicit SpaceSpec(std::vector<std::string> spatial_names)
        : names_(std::move(spatial_names)) {
        if (names_.empty())
            throw std::invalid_argument("SpaceSpec: need at least one spatial coordinate");
        for (std::size_t i = 0; i < names_.size(); ++i) {
            if (names_[i].empty() || names_[i] == "t")
                throw std::invalid_argument("SpaceSpec: coordinate name '" + names_[i] +
                                            "' is reserved or empty");
            for (std::size_t j = i + 1; j < names_.size(); ++j)
                if (names_[i] == names_[j])
                    throw std::invalid_argument("SpaceSpec: duplicate coordinate name '" +
                                                names_[i] + "'");
        }
    }

    // Phase-space dimension n (spatial coordinates only).
    int dim() const { return static_cast<int>(names_.size()); }
    // n + 1 coordinates including t.
    int extended_dim() const { return dim() + 1; }

    // name(0) == "t"; name(i) for i in 1..n is the i-th spatial coordinate.
    const std::string& name(int index) const {
        static const std::string t_name = "t";
        if (index == 0) return t_name;
        return names_.at(static_cast<std::size_t>(index - 1));
    }

    const std::vector<std::string>& spatial_names() const { return names_; }

    std::optional<int> index_of(const std::string& name) const {
        if (name == "t") return 0;
        for (std::size_t i = 0; i < names_.size(); ++i)
            if (names_[i] == name) return static_cast<int>(i + 1);
        return std::nullopt;
    }

    friend bool operator==(const SpaceSpec& a, const SpaceSpec& b) {
        return a.names_ == b.names_;
    }
    friend bool operator!=(const SpaceSpec& a, const SpaceSpec& b) { return !(a == b); }

private:
    std::vector<std::string> names_;
};

}  // namespace vortex
