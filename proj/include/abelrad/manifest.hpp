#pragma once

#include <map>
#include <string>

#include "abelrad/forward.hpp"
#include "abelrad/phantom.hpp"
#include "abelrad/solvers.hpp"

namespace abelrad {

/// One experiment: phantom, curve family, noise model, solver settings.
/// Serialized as flat key=value text with section prefixes
/// (e.g. "phantom.kind=annulus"); '#' starts a comment line.
struct ExperimentManifest {
    PhantomSpec phantom;
    CurveSpec curve;
    NoiseSpec noise;
    ReconConfig recon;
    std::string method = "cgls";  // cgls | tv | spectral
    std::string output_dir = "out";
    double band_a = 0.0;  // spectral support band; 0 = derive from m
    double band_b = 0.0;

    static ExperimentManifest from_map(const std::map<std::string, std::string>& kv);
    std::map<std::string, std::string> to_map() const;

    static ExperimentManifest load(const std::string& path);
    void save(const std::string& path) const;

    /// Table-1/2 style defaults: m=257, s=2, eps=0.05, gamma=0.01, annulus,
    /// two-sided ellipse data, CGLS.
    static ExperimentManifest table_defaults();
};

std::map<std::string, std::string> parse_key_value_text(const std::string& text);
std::string render_key_value_text(const std::map<std::string, std::string>& kv);

}  // namespace abelrad
