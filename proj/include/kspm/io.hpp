#ifndef KSPM_IO_HPP
#define KSPM_IO_HPP

// Text, JSON and CSV forms of the library's values. CSV output is
// comma-separated with a header row and LF line endings; every field is an
// integer, so nothing is quoted.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "kspm/analysis.hpp"
#include "kspm/avalanche.hpp"
#include "kspm/core.hpp"
#include "kspm/dds.hpp"

namespace kspm::io {

using Json = nlohmann::ordered_json;

template <class Range>
std::string join(const Range& values, char sep = ' ')
{
    std::string out;
    bool first = true;
    for (const auto& v : values) {
        if (!first) {
            out += sep;
        }
        out += std::to_string(v);
        first = false;
    }
    return out;
}

/// "b_0 b_1 ... b_{m-1}", no trailing zeros; the empty configuration is "".
inline std::string to_text(const Configuration& c) { return join(c.diffs()); }

inline Configuration configuration_from_text(std::string_view text, Params params)
{
    std::istringstream in{std::string(text)};
    std::vector<Count> b;
    std::string token;
    while (in >> token) {
        std::size_t used = 0;
        long long v = 0;
        try {
            v = std::stoll(token, &used);
        } catch (const std::exception&) {
            throw Error(Errc::Parse, "not an integer: '" + token + "'");
        }
        if (used != token.size()) {
            throw Error(Errc::Parse, "not an integer: '" + token + "'");
        }
        b.push_back(v);
    }
    try {
        return Configuration(params, std::move(b));
    } catch (const Error& e) {
        throw Error(Errc::Parse, e.what());
    }
}

inline Json to_json(const Configuration& c)
{
    Json j;
    j["p"] = c.p();
    j["diffs"] = std::vector<Count>(c.diffs().begin(), c.diffs().end());
    return j;
}

inline Configuration configuration_from_json(const Json& j)
{
    try {
        return Configuration(Params(j.at("p").get<Count>()), j.at("diffs").get<std::vector<Count>>());
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::Parse, e.what());
    } catch (const Error& e) {
        throw Error(Errc::Parse, e.what());
    }
}

inline Json to_json(const Avalanche& a)
{
    Json j;
    j["k"] = a.k;
    j["fired"] = a.fired;
    return j;
}

inline Avalanche avalanche_from_json(const Json& j)
{
    try {
        return Avalanche{j.at("k").get<std::uint64_t>(), j.at("fired").get<std::vector<std::size_t>>()};
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::Parse, e.what());
    }
}

inline Json to_json(const WaveReport& r)
{
    Json j;
    j["theorem1_index"] = r.theorem1_index ? Json(*r.theorem1_index) : Json(nullptr);
    j["theorem2_index"] = r.theorem2_index ? Json(*r.theorem2_index) : Json(nullptr);
    Json runs = Json::array();
    for (const auto& run : r.decomposition) {
        runs.push_back(Json{{"zeros", run.zeros}, {"waves", run.waves}});
    }
    j["decomposition"] = runs;
    if (r.split) {
        j["split"] = Json{{"x", r.split->x}, {"isolated_zero", r.split->isolated_zero}, {"y", r.split->y}};
    } else {
        j["split"] = nullptr;
    }
    j["nontrivial"] = r.nontrivial;
    return j;
}

inline Json to_json(const SupportReport& r)
{
    Json j;
    j["N"] = r.n;
    j["p"] = r.p;
    j["width"] = r.width;
    j["lower"] = r.lower;
    j["upper"] = r.upper;
    j["holds"] = r.holds();
    return j;
}

// --- CSV ---------------------------------------------------------------

inline constexpr std::string_view kScanHeader = "k,fired_count,max_fired,l_prime,support_width";

/// max_fired is left empty for an empty avalanche.
inline std::string scan_row(const Avalanche& a, const Configuration& after)
{
    const auto d = density_column(a);
    std::string row = std::to_string(a.k) + ',' + std::to_string(a.fired.size()) + ',';
    if (d.max_fired) {
        row += std::to_string(*d.max_fired);
    }
    row += ',' + std::to_string(d.l_prime) + ',' + std::to_string(after.size());
    return row;
}

inline constexpr std::string_view kSweepHeader = "N,p,emergence_index,first_constant_Y_index,width,L_global";

inline std::string sweep_row_csv(const SweepRow& r)
{
    auto opt = [](const std::optional<std::size_t>& v) { return v ? std::to_string(*v) : std::string(); };
    return std::to_string(r.n) + ',' + std::to_string(r.p) + ',' + std::to_string(r.emergence) + ','
           + opt(r.first_constant_y) + ',' + std::to_string(r.width) + ',' + opt(r.l_global);
}

inline std::string trajectory_header(Count p)
{
    std::string h = "n";
    for (Count j = 0; j < p; ++j) {
        h += ",y" + std::to_string(j);
    }
    return h + ",mean_numerator,b_n";
}

/// One trajectory row; `negate` flips the sign of the Y entries and of the
/// mean numerator (plots of a_n - a_{n+1} use that convention).
inline std::string trajectory_row(std::size_t n, const AvgVector& y, Count b_n, bool negate)
{
    const Count sign = negate ? -1 : 1;
    std::string row = std::to_string(n);
    for (Count v : y.entries) {
        row += ',' + std::to_string(sign * v);
    }
    return row + ',' + std::to_string(sign * y.sum()) + ',' + std::to_string(b_n);
}

} // namespace kspm::io

#endif // KSPM_IO_HPP
