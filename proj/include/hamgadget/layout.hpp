#pragma once

#include <cstdint>
#include <numeric>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "hamgadget/common.hpp"

namespace hamgadget {

/// A named register: `sites` consecutive sites of dimension `site_dim` each.
/// Qubit registers have site_dim == 2; the abstract clock uses a single site
/// of dimension L+1.
struct Register {
    std::string name;
    int sites = 0;
    int site_dim = 2;
};

/// Ordered register layout. Site 0 is the most significant digit of the
/// computational-basis label; global site indices follow concatenation order.
class RegisterLayout {
public:
    RegisterLayout() = default;

    explicit RegisterLayout(std::vector<Register> regs) : regs_(std::move(regs)) {
        std::set<std::string> names;
        for (const auto& r : regs_) {
            require(!r.name.empty(), "register name empty");
            require(names.insert(r.name).second, "duplicate register name: " + r.name);
            require(r.sites >= 0, "negative register size");
            require(r.site_dim >= 2, "register site dimension must be >= 2");
            for (int i = 0; i < r.sites; ++i) dims_.push_back(r.site_dim);
        }
        require(!dims_.empty(), "layout must contain at least one site");
        strides_.assign(dims_.size(), 1);
        dimension_ = 1;
        for (int i = static_cast<int>(dims_.size()) - 1; i >= 0; --i) {
            strides_[i] = dimension_;
            require(dimension_ <= (std::int64_t(1) << 40) / dims_[i], "layout dimension overflow");
            dimension_ *= dims_[i];
        }
    }

    /// Convenience constructor for all-qubit layouts.
    static RegisterLayout qubits(const std::vector<std::pair<std::string, int>>& regs) {
        std::vector<Register> rs;
        for (const auto& [name, n] : regs) rs.push_back({name, n, 2});
        return RegisterLayout(std::move(rs));
    }

    static RegisterLayout single(const std::string& name, int qubits_count) {
        return RegisterLayout({Register{name, qubits_count, 2}});
    }

    const std::vector<Register>& registers() const { return regs_; }
    int total_sites() const { return static_cast<int>(dims_.size()); }

    bool all_qubits() const {
        for (int d : dims_)
            if (d != 2) return false;
        return true;
    }

    /// Total qubit count; only meaningful for all-qubit layouts.
    int total_qubits() const {
        require(all_qubits(), "layout contains non-qubit sites");
        return total_sites();
    }

    std::int64_t dimension() const { return dimension_; }
    int site_dim(int site) const { return dims_.at(static_cast<std::size_t>(site)); }
    std::int64_t stride(int site) const { return strides_.at(static_cast<std::size_t>(site)); }

    bool has_register(const std::string& name) const {
        for (const auto& r : regs_)
            if (r.name == name) return true;
        return false;
    }

    /// Global index of the first site of a register.
    int register_offset(const std::string& name) const {
        int off = 0;
        for (const auto& r : regs_) {
            if (r.name == name) return off;
            off += r.sites;
        }
        throw Error("unknown register: " + name);
    }

    const Register& find_register(const std::string& name) const {
        for (const auto& r : regs_)
            if (r.name == name) return r;
        throw Error("unknown register: " + name);
    }

    /// Global site index of site `k` within register `name`.
    int site(const std::string& name, int k) const {
        const Register& r = find_register(name);
        require(k >= 0 && k < r.sites, "site index out of range in register " + name);
        return register_offset(name) + k;
    }

    std::vector<int> register_sites(const std::string& name) const {
        const Register& r = find_register(name);
        std::vector<int> out(static_cast<std::size_t>(r.sites));
        std::iota(out.begin(), out.end(), register_offset(name));
        return out;
    }

    /// Digit of `basis_index` at `site` (site 0 most significant).
    int digit(std::int64_t basis_index, int site) const {
        return static_cast<int>((basis_index / strides_[static_cast<std::size_t>(site)]) %
                                dims_[static_cast<std::size_t>(site)]);
    }

    bool operator==(const RegisterLayout& o) const {
        if (regs_.size() != o.regs_.size()) return false;
        for (std::size_t i = 0; i < regs_.size(); ++i) {
            if (regs_[i].name != o.regs_[i].name || regs_[i].sites != o.regs_[i].sites ||
                regs_[i].site_dim != o.regs_[i].site_dim)
                return false;
        }
        return true;
    }
    bool operator!=(const RegisterLayout& o) const { return !(*this == o); }

private:
    std::vector<Register> regs_;
    std::vector<int> dims_;
    std::vector<std::int64_t> strides_;
    std::int64_t dimension_ = 0;
};

}  // namespace hamgadget
