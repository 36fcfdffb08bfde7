#pragma once

// JSON interchange format for similarity profiles:
//   { "params": {nu, v_swirl, e0, xi0, branch},
//     "grid": [...], "theta": [...], "theta_prime": [...], "v": [...], "p": [...] }
// Extra top-level members (e.g. "convergence") are ignored on read.

#include "swirl/core.hpp"
#include "swirl/errors.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace swirl {

inline nlohmann::json to_json(const FlowParameters& p) {
    return nlohmann::json{{"nu", p.nu}, {"v_swirl", p.v_swirl}, {"e0", p.e0}, {"xi0", p.xi0}, {"branch", p.branch}};
}

inline FlowParameters params_from_json(const nlohmann::json& j) {
    FlowParameters p;
    p.nu = j.at("nu").get<double>();
    p.v_swirl = j.at("v_swirl").get<double>();
    p.e0 = j.at("e0").get<double>();
    p.xi0 = j.at("xi0").get<double>();
    p.branch = j.at("branch").get<int>();
    p.validate();
    return p;
}

inline nlohmann::json to_json(const SimilarityProfile& prof) {
    auto arr = [](std::span<const double> s) { return std::vector<double>(s.begin(), s.end()); };
    return nlohmann::json{{"params", to_json(prof.params())},
                          {"grid", arr(prof.grid())},
                          {"theta", arr(prof.theta())},
                          {"theta_prime", arr(prof.theta_prime())},
                          {"v", arr(prof.v())},
                          {"p", arr(prof.p())}};
}

inline SimilarityProfile profile_from_json(const nlohmann::json& j) {
    try {
        return SimilarityProfile(j.at("grid").get<std::vector<double>>(), j.at("theta").get<std::vector<double>>(),
                                 j.at("theta_prime").get<std::vector<double>>(), j.at("v").get<std::vector<double>>(),
                                 j.at("p").get<std::vector<double>>(), params_from_json(j.at("params")));
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(std::string("malformed profile document: ") + e.what());
    }
}

/// Writes `text` to `path` through a temporary sibling and a rename, so a
/// failed run never leaves a partial file behind.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& text) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw IoError("cannot open " + tmp.string() + " for writing");
        os << text;
        os.flush();
        if (!os) throw IoError("write failed for " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw IoError("cannot move " + tmp.string() + " to " + path.string());
    }
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

/// Serialises with round-trip precision (nlohmann emits shortest round-trip doubles).
inline std::string dump_profile(const nlohmann::json& doc) { return doc.dump(1) + "\n"; }

inline SimilarityProfile load_profile(const std::filesystem::path& path) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw DomainError(path.string() + ": " + e.what());
    }
    return profile_from_json(j);
}

} // namespace swirl
