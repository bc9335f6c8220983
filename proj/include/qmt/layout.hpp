#pragma once

#include <algorithm>
#include <initializer_list>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qmt {

struct Subsystem {
    std::string label;
    long dim = 0;

    friend bool operator==(const Subsystem& a, const Subsystem& b) {
        return a.label == b.label && a.dim == b.dim;
    }
};

/// Ordered list of labeled subsystems. The order *is* the tensor order:
/// an operator tagged with a layout is stored in the product basis
/// |i_1 ... i_n> with the leftmost subsystem most significant.
class SystemLayout {
public:
    SystemLayout() = default;

    explicit SystemLayout(std::vector<Subsystem> parts) : parts_(std::move(parts)) {
        std::set<std::string> seen;
        for (const auto& p : parts_) {
            if (p.dim < 1) {
                throw std::invalid_argument("SystemLayout: subsystem '" + p.label +
                                            "' has non-positive dimension");
            }
            if (!seen.insert(p.label).second) {
                throw std::invalid_argument("SystemLayout: duplicate label '" + p.label + "'");
            }
        }
    }

    SystemLayout(std::initializer_list<std::pair<std::string, long>> parts)
        : SystemLayout(to_parts(parts)) {}

    long size() const { return static_cast<long>(parts_.size()); }

    const Subsystem& part(long i) const { return parts_.at(static_cast<size_t>(i)); }
    const std::vector<Subsystem>& parts() const { return parts_; }

    long total_dim() const {
        long d = 1;
        for (const auto& p : parts_) d *= p.dim;
        return d;
    }

    std::vector<long> dims() const {
        std::vector<long> d;
        d.reserve(parts_.size());
        for (const auto& p : parts_) d.push_back(p.dim);
        return d;
    }

    std::vector<std::string> labels() const {
        std::vector<std::string> l;
        l.reserve(parts_.size());
        for (const auto& p : parts_) l.push_back(p.label);
        return l;
    }

    bool contains(const std::string& label) const {
        return std::any_of(parts_.begin(), parts_.end(),
                           [&](const Subsystem& p) { return p.label == label; });
    }

    long index_of(const std::string& label) const {
        for (size_t i = 0; i < parts_.size(); ++i) {
            if (parts_[i].label == label) return static_cast<long>(i);
        }
        throw std::invalid_argument("SystemLayout: unknown label '" + label + "'");
    }

    long dim_of(const std::string& label) const { return parts_[index_of(label)].dim; }

    /// Sublayout of the given labels, kept in *this layout's* order.
    SystemLayout sublayout(const std::vector<std::string>& labels) const {
        std::set<std::string> want(labels.begin(), labels.end());
        if (want.size() != labels.size()) {
            throw std::invalid_argument("SystemLayout::sublayout: repeated label");
        }
        std::vector<Subsystem> out;
        for (const auto& p : parts_) {
            if (want.count(p.label)) {
                out.push_back(p);
                want.erase(p.label);
            }
        }
        if (!want.empty()) {
            throw std::invalid_argument("SystemLayout::sublayout: unknown label '" + *want.begin() + "'");
        }
        return SystemLayout(out);
    }

    /// Complement of the given labels, in this layout's order.
    SystemLayout complement(const std::vector<std::string>& labels) const {
        std::set<std::string> drop(labels.begin(), labels.end());
        for (const auto& l : labels) {
            if (!contains(l)) {
                throw std::invalid_argument("SystemLayout::complement: unknown label '" + l + "'");
            }
        }
        std::vector<Subsystem> out;
        for (const auto& p : parts_) {
            if (!drop.count(p.label)) out.push_back(p);
        }
        return SystemLayout(out);
    }

    SystemLayout concat(const SystemLayout& other) const {
        std::vector<Subsystem> out = parts_;
        out.insert(out.end(), other.parts_.begin(), other.parts_.end());
        return SystemLayout(out);  // re-validates label disjointness
    }

    friend bool operator==(const SystemLayout& a, const SystemLayout& b) {
        return a.parts_ == b.parts_;
    }
    friend bool operator!=(const SystemLayout& a, const SystemLayout& b) { return !(a == b); }

    std::string to_string() const {
        std::string s = "[";
        for (size_t i = 0; i < parts_.size(); ++i) {
            if (i) s += ", ";
            s += parts_[i].label + ":" + std::to_string(parts_[i].dim);
        }
        return s + "]";
    }

private:
    static std::vector<Subsystem> to_parts(std::initializer_list<std::pair<std::string, long>> in) {
        std::vector<Subsystem> out;
        out.reserve(in.size());
        for (const auto& [l, d] : in) out.push_back({l, d});
        return out;
    }

    std::vector<Subsystem> parts_;
};

}  // namespace qmt
