#pragma once

#include <set>
#include <string>
#include <vector>

#include "crashlens/csv.hpp"
#include "crashlens/errors.hpp"

namespace crashlens {

struct AssetSpec {
    std::string symbol;
    std::string name;
    std::string sector;

    friend bool operator==(const AssetSpec&, const AssetSpec&) = default;
};

inline constexpr const char* kRegistryCsvHeader = "symbol,name,sector";

class AssetRegistry {
public:
    AssetRegistry() = default;

    explicit AssetRegistry(std::vector<AssetSpec> assets) : assets_(std::move(assets)) {
        std::set<std::string> seen;
        for (const auto& a : assets_) {
            if (a.symbol.empty()) throw ParseError("registry: empty symbol");
            if (!seen.insert(a.symbol).second)
                throw ParseError("registry: duplicate symbol " + a.symbol);
        }
    }

    static AssetRegistry from_csv_file(const std::string& path) {
        const auto rows = csv::read_file(path);
        if (rows.empty() || csv::join_row(rows[0]) != std::string(kRegistryCsvHeader) + "\n")
            throw ParseError("bad registry CSV header in " + path);
        std::vector<AssetSpec> assets;
        for (std::size_t i = 1; i < rows.size(); ++i) {
            if (rows[i].size() != 3) throw ParseError("bad registry CSV row in " + path);
            assets.push_back({rows[i][0], rows[i][1], rows[i][2]});
        }
        return AssetRegistry(std::move(assets));
    }

    std::string to_csv() const {
        std::string out = std::string(kRegistryCsvHeader) + "\n";
        for (const auto& a : assets_) out += csv::join_row({a.symbol, a.name, a.sector});
        return out;
    }

    const std::vector<AssetSpec>& assets() const { return assets_; }
    std::size_t size() const { return assets_.size(); }

    bool contains(const std::string& symbol) const {
        for (const auto& a : assets_)
            if (a.symbol == symbol) return true;
        return false;
    }

    std::vector<std::string> symbols() const {
        std::vector<std::string> out;
        out.reserve(assets_.size());
        for (const auto& a : assets_) out.push_back(a.symbol);
        return out;
    }

    // Closed sector vocabulary as present in the registry file.
    std::set<std::string> sectors() const {
        std::set<std::string> out;
        for (const auto& a : assets_) out.insert(a.sector);
        return out;
    }

    std::vector<std::string> symbols_in_sector(const std::string& sector) const {
        std::vector<std::string> out;
        for (const auto& a : assets_)
            if (a.sector == sector) out.push_back(a.symbol);
        return out;
    }

private:
    std::vector<AssetSpec> assets_;
};

}  // namespace crashlens
