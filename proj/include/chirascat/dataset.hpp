#pragma once
// Frozen physical inputs for the D2S2 + He system, their JSON representation,
// and a configuration fingerprint for output provenance. The embedded
// defaults are the reference dataset; a JSON file with the same schema can
// override any field for sensitivity studies.

#include <array>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "chirascat/channels.hpp"
#include "chirascat/dispersion.hpp"
#include "chirascat/numerics.hpp"

namespace chirascat {

struct Dataset {
    std::string name = "d2s2_he";
    // Bond-increment polarizabilities (a.u.), axial/transverse per bond type,
    // scaled so that the isotropic molecule--He C6 comes out at its reference
    // value of 11.7 a.u.
    GeometryParams geometry{};
    BondIncrementTable increments{{24.28554113754451, 9.934994101722754},
                                  {8.831105868198003, 2.207776467049501}};
    DrudeParams drude{};
    HeliumResponse helium{};
    double mstar = 6890.6;        // reduced mass of the He-molecule pair, a.u.
    double tunneling_hz = 176.0;  // ground-doublet tunneling frequency
    double core_radius = 4.0;     // inner wall of the radial integration, bohr
    TruncationParams truncation{};

    SusceptibilitySet susceptibilities() const {
        return SusceptibilitySet{geometry, increments, drude, helium};
    }
    double omega_z_au() const { return units::hz_to_au(tunneling_hz); }
};

inline Dataset default_dataset() { return Dataset{}; }

inline nlohmann::json dataset_to_json(const Dataset& d) {
    nlohmann::json j;
    j["name"] = d.name;
    j["geometry"] = {{"r_ss_angstrom", d.geometry.r_ss_angstrom},
                     {"r_sd_angstrom", d.geometry.r_sd_angstrom},
                     {"angle_dss_deg", d.geometry.angle_dss_deg},
                     {"dihedral_deg", d.geometry.dihedral_deg}};
    j["bond_increments"] = {
        {"ss", {{"axial", d.increments.ss.axial}, {"transverse", d.increments.ss.transverse}}},
        {"sd", {{"axial", d.increments.sd.axial}, {"transverse", d.increments.sd.transverse}}}};
    j["drude"] = {{"omega_s", d.drude.omega_S}, {"omega_d", d.drude.omega_D}};
    j["helium"] = {{"frequencies", d.helium.freqs}, {"weights", d.helium.weights}};
    j["reduced_mass"] = d.mstar;
    j["tunneling_hz"] = d.tunneling_hz;
    j["core_radius_bohr"] = d.core_radius;
    j["truncation"] = {{"j_max", d.truncation.j_max},
                       {"closed_max_kelvin", d.truncation.closed_max_K}};
    return j;
}

inline Dataset dataset_from_json(const nlohmann::json& j) {
    Dataset d;
    d.name = j.value("name", d.name);
    if (j.contains("geometry")) {
        const auto& g = j.at("geometry");
        d.geometry.r_ss_angstrom = g.value("r_ss_angstrom", d.geometry.r_ss_angstrom);
        d.geometry.r_sd_angstrom = g.value("r_sd_angstrom", d.geometry.r_sd_angstrom);
        d.geometry.angle_dss_deg = g.value("angle_dss_deg", d.geometry.angle_dss_deg);
        d.geometry.dihedral_deg = g.value("dihedral_deg", d.geometry.dihedral_deg);
    }
    if (j.contains("bond_increments")) {
        const auto& b = j.at("bond_increments");
        d.increments.ss.axial = b.at("ss").value("axial", d.increments.ss.axial);
        d.increments.ss.transverse = b.at("ss").value("transverse", d.increments.ss.transverse);
        d.increments.sd.axial = b.at("sd").value("axial", d.increments.sd.axial);
        d.increments.sd.transverse = b.at("sd").value("transverse", d.increments.sd.transverse);
    }
    if (j.contains("drude")) {
        d.drude.omega_S = j.at("drude").value("omega_s", d.drude.omega_S);
        d.drude.omega_D = j.at("drude").value("omega_d", d.drude.omega_D);
    }
    if (j.contains("helium")) {
        const auto& h = j.at("helium");
        if (h.contains("frequencies")) {
            auto f = h.at("frequencies").get<std::vector<double>>();
            auto w = h.at("weights").get<std::vector<double>>();
            if (f.size() != d.helium.freqs.size() || w.size() != d.helium.weights.size())
                throw std::invalid_argument("dataset: helium profile needs 4 terms");
            std::copy(f.begin(), f.end(), d.helium.freqs.begin());
            std::copy(w.begin(), w.end(), d.helium.weights.begin());
        }
    }
    d.mstar = j.value("reduced_mass", d.mstar);
    d.tunneling_hz = j.value("tunneling_hz", d.tunneling_hz);
    d.core_radius = j.value("core_radius_bohr", d.core_radius);
    if (j.contains("truncation")) {
        d.truncation.j_max = j.at("truncation").value("j_max", d.truncation.j_max);
        d.truncation.closed_max_K =
            j.at("truncation").value("closed_max_kelvin", d.truncation.closed_max_K);
    }
    return d;
}

inline Dataset load_dataset(const std::string& path) {
    if (path.empty()) return default_dataset();
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_dataset: cannot open " + path);
    nlohmann::json j;
    in >> j;
    return dataset_from_json(j);
}

// Stable fingerprint of the dataset (canonical compact JSON -> FNV-1a 64).
inline std::string dataset_hash(const Dataset& d) {
    const std::string dump = dataset_to_json(d).dump();
    std::ostringstream os;
    os << std::hex << fnv1a64(dump);
    return os.str();
}

}  // namespace chirascat
