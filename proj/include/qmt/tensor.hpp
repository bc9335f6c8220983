#pragma once

#include <numeric>
#include <string>
#include <vector>

#include "qmt/layout.hpp"
#include "qmt/matrix.hpp"

namespace qmt {

/// Square operator tagged with the layout its basis refers to.
struct LabeledOperator {
    Matrix mat;
    SystemLayout layout;
};

namespace detail {

/// Strides for a mixed-radix index, leftmost digit most significant.
inline std::vector<long> strides(const std::vector<long>& dims) {
    std::vector<long> s(dims.size(), 1);
    for (long i = static_cast<long>(dims.size()) - 2; i >= 0; --i) {
        s[i] = s[i + 1] * dims[i + 1];
    }
    return s;
}

/// Flat offsets contributed by every value of a subset of tensor slots.
/// `slots` are positions into `dims`; the returned table has one entry per
/// combination of those slots, enumerated with the first slot most
/// significant.
inline std::vector<long> slot_offsets(const std::vector<long>& dims,
                                      const std::vector<long>& slots) {
    const auto str = strides(dims);
    long count = 1;
    for (long s : slots) count *= dims[static_cast<size_t>(s)];
    std::vector<long> out(static_cast<size_t>(count), 0);
    long repeat = count;
    for (long s : slots) {
        const long d = dims[static_cast<size_t>(s)];
        repeat /= d;
        const long stride = str[static_cast<size_t>(s)];
        for (long idx = 0; idx < count; ++idx) {
            out[static_cast<size_t>(idx)] += ((idx / repeat) % d) * stride;
        }
    }
    return out;
}

}  // namespace detail

/// Tensor (Kronecker) product; layouts concatenate. Label collisions throw.
inline LabeledOperator tensor(const LabeledOperator& a, const LabeledOperator& b) {
    return {kron(a.mat, b.mat), a.layout.concat(b.layout)};
}

/// Trace out the listed labels. Unknown labels throw.
inline LabeledOperator partial_trace(const LabeledOperator& op,
                                     const std::vector<std::string>& discard) {
    const auto dims = op.layout.dims();
    const SystemLayout kept_layout = op.layout.complement(discard);
    if (discard.empty()) return op;

    std::vector<long> kept_slots, traced_slots;
    for (long i = 0; i < op.layout.size(); ++i) {
        if (kept_layout.contains(op.layout.part(i).label)) {
            kept_slots.push_back(i);
        } else {
            traced_slots.push_back(i);
        }
    }
    const auto kept_off = detail::slot_offsets(dims, kept_slots);
    const auto traced_off = detail::slot_offsets(dims, traced_slots);

    const long dk = static_cast<long>(kept_off.size());
    Matrix out = Matrix::Zero(dk, dk);
    for (long r = 0; r < dk; ++r) {
        for (long c = 0; c < dk; ++c) {
            Complex acc = 0.0;
            for (long t : traced_off) {
                acc += op.mat(kept_off[static_cast<size_t>(r)] + t,
                              kept_off[static_cast<size_t>(c)] + t);
            }
            out(r, c) = acc;
        }
    }
    return {std::move(out), kept_layout};
}

/// Reorder tensor slots so the result's layout lists labels in `new_order`.
inline LabeledOperator permute_subsystems(const LabeledOperator& op,
                                          const std::vector<std::string>& new_order) {
    if (static_cast<long>(new_order.size()) != op.layout.size()) {
        throw std::invalid_argument("permute_subsystems: order must list every label exactly once");
    }
    std::vector<long> src_slot;  // for each new slot, the originating slot
    std::vector<Subsystem> new_parts;
    src_slot.reserve(new_order.size());
    for (const auto& label : new_order) {
        const long s = op.layout.index_of(label);
        src_slot.push_back(s);
        new_parts.push_back(op.layout.part(s));
    }
    const SystemLayout new_layout = SystemLayout(new_parts);  // throws on repeats

    const auto old_dims = op.layout.dims();
    const auto old_str = detail::strides(old_dims);
    const auto new_dims = new_layout.dims();
    const long total = new_layout.total_dim();

    std::vector<long> to_old(static_cast<size_t>(total));
    for (long idx = 0; idx < total; ++idx) {
        long rem = idx, old_idx = 0;
        for (size_t p = 0; p < new_dims.size(); ++p) {
            const long block = std::accumulate(new_dims.begin() + static_cast<long>(p) + 1,
                                               new_dims.end(), 1L, std::multiplies<long>());
            const long digit = rem / block;
            rem %= block;
            old_idx += digit * old_str[static_cast<size_t>(src_slot[p])];
        }
        to_old[static_cast<size_t>(idx)] = old_idx;
    }

    Matrix out(total, total);
    for (long r = 0; r < total; ++r) {
        for (long c = 0; c < total; ++c) {
            out(r, c) = op.mat(to_old[static_cast<size_t>(r)], to_old[static_cast<size_t>(c)]);
        }
    }
    return {std::move(out), new_layout};
}

/// Pad `op` with identities on the missing subsystems and permute into
/// `global`'s order. All Eq.-style operator products are computed in one
/// global space through this helper.
inline LabeledOperator embed(const LabeledOperator& op, const SystemLayout& global) {
    for (const auto& p : op.layout.parts()) {
        if (!global.contains(p.label) || global.dim_of(p.label) != p.dim) {
            throw std::invalid_argument("embed: subsystem '" + p.label +
                                        "' absent from or mismatched in the global layout");
        }
    }
    const SystemLayout rest = global.complement(op.layout.labels());
    LabeledOperator padded{kron(op.mat, identity(rest.total_dim())), op.layout.concat(rest)};
    return permute_subsystems(padded, global.labels());
}

/// Fuse consecutive subsystems into single labeled slots (basis unchanged).
/// Every group must be contiguous in the layout and the groups must cover it.
inline LabeledOperator merge_consecutive(
    const LabeledOperator& op,
    const std::vector<std::pair<std::string, std::vector<std::string>>>& groups) {
    std::vector<Subsystem> parts;
    long pos = 0;
    for (const auto& [name, members] : groups) {
        long d = 1;
        for (const auto& m : members) {
            if (pos >= op.layout.size() || op.layout.part(pos).label != m) {
                throw std::invalid_argument("merge_consecutive: group '" + name +
                                            "' is not contiguous in the layout");
            }
            d *= op.layout.part(pos).dim;
            ++pos;
        }
        parts.push_back({name, d});
    }
    if (pos != op.layout.size()) {
        throw std::invalid_argument("merge_consecutive: groups must cover the whole layout");
    }
    return {op.mat, SystemLayout(parts)};
}

}  // namespace qmt
