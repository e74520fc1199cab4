#include "abelrad/manifest.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace abelrad {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

class KvReader {
  public:
    explicit KvReader(const std::map<std::string, std::string>& kv) : kv_(kv) {}
    std::string str(const std::string& key, const std::string& dflt) const {
        auto it = kv_.find(key);
        return it == kv_.end() ? dflt : it->second;
    }
    double num(const std::string& key, double dflt) const {
        auto it = kv_.find(key);
        return it == kv_.end() ? dflt : std::stod(it->second);
    }
    long integer(const std::string& key, long dflt) const {
        auto it = kv_.find(key);
        return it == kv_.end() ? dflt : std::stol(it->second);
    }
    bool flag(const std::string& key, bool dflt) const {
        auto it = kv_.find(key);
        if (it == kv_.end()) return dflt;
        const std::string& v = it->second;
        if (v == "true" || v == "1" || v == "yes") return true;
        if (v == "false" || v == "0" || v == "no") return false;
        throw std::invalid_argument("manifest: bad boolean for " + key + ": " + v);
    }

  private:
    const std::map<std::string, std::string>& kv_;
};

}  // namespace

std::map<std::string, std::string> parse_key_value_text(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("manifest: expected key=value, got: " + t);
        kv[trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
    }
    return kv;
}

std::string render_key_value_text(const std::map<std::string, std::string>& kv) {
    std::ostringstream out;
    for (const auto& [k, v] : kv) out << k << "=" << v << "\n";
    return out.str();
}

ExperimentManifest ExperimentManifest::from_map(const std::map<std::string, std::string>& kv) {
    KvReader r(kv);
    ExperimentManifest m;

    const std::string pk = r.str("phantom.kind", "annulus");
    if (pk == "annulus")
        m.phantom.kind = PhantomSpec::Kind::annulus;
    else if (pk == "ellipses")
        m.phantom.kind = PhantomSpec::Kind::ellipses;
    else
        throw std::invalid_argument("manifest: unknown phantom.kind: " + pk);
    m.phantom.m = int(r.integer("phantom.m", 257));
    m.phantom.ellipses.seed = std::uint64_t(r.integer("phantom.seed", 1));
    m.phantom.ellipses.count = int(r.integer("phantom.count", 20));
    m.phantom.annulus.cx = r.num("phantom.annulus.cx", 0.0);
    m.phantom.annulus.cy = r.num("phantom.annulus.cy", 0.0);
    m.phantom.annulus.r_inner = r.num("phantom.annulus.r_inner", -1.0);
    m.phantom.annulus.r_outer = r.num("phantom.annulus.r_outer", 0.0);

    const std::string ck = r.str("curve.kind", "ellipse");
    if (ck == "ellipse") {
        m.curve.kind = CurveSpec::Kind::ellipse;
        m.curve.j = 0;
    } else if (ck == "hyperbola") {
        m.curve.kind = CurveSpec::Kind::hyperbola;
        m.curve.j = 1;
    } else {
        throw std::invalid_argument("manifest: unknown curve.kind: " + ck);
    }
    m.curve.s = r.num("curve.s", 2.0);
    m.curve.truncation = r.num("curve.truncation", 0.0);

    m.noise.gamma = r.num("noise.gamma", 0.01);
    m.noise.epsilon = r.num("noise.epsilon", 0.05);
    m.noise.seed = std::uint64_t(r.integer("noise.seed", 7));

    m.recon.lambda = r.num("recon.lambda", 0.1);
    m.recon.beta_smooth = r.num("recon.beta_smooth", 1e-3);
    m.recon.max_iters = int(r.integer("recon.max_iters", 100));
    m.recon.tol = r.num("recon.tol", 1e-8);
    m.recon.nonneg = r.flag("recon.nonneg", false);
    m.recon.seed = std::uint64_t(r.integer("recon.seed", 0));

    m.method = r.str("method", "cgls");
    if (m.method != "cgls" && m.method != "tv" && m.method != "spectral")
        throw std::invalid_argument("manifest: unknown method: " + m.method);
    m.output_dir = r.str("output_dir", "out");
    m.band_a = r.num("band.a", 0.0);
    m.band_b = r.num("band.b", 0.0);
    return m;
}

std::map<std::string, std::string> ExperimentManifest::to_map() const {
    std::map<std::string, std::string> kv;
    kv["phantom.kind"] = phantom.kind == PhantomSpec::Kind::annulus ? "annulus" : "ellipses";
    kv["phantom.m"] = std::to_string(phantom.m);
    kv["phantom.seed"] = std::to_string(phantom.ellipses.seed);
    kv["phantom.count"] = std::to_string(phantom.ellipses.count);
    kv["phantom.annulus.cx"] = fmt(phantom.annulus.cx);
    kv["phantom.annulus.cy"] = fmt(phantom.annulus.cy);
    kv["phantom.annulus.r_inner"] = fmt(phantom.annulus.r_inner);
    kv["phantom.annulus.r_outer"] = fmt(phantom.annulus.r_outer);
    kv["curve.kind"] = curve.kind == CurveSpec::Kind::hyperbola ? "hyperbola" : "ellipse";
    kv["curve.s"] = fmt(curve.s);
    kv["curve.truncation"] = fmt(curve.truncation);
    kv["noise.gamma"] = fmt(noise.gamma);
    kv["noise.epsilon"] = fmt(noise.epsilon);
    kv["noise.seed"] = std::to_string(noise.seed);
    kv["recon.lambda"] = fmt(recon.lambda);
    kv["recon.beta_smooth"] = fmt(recon.beta_smooth);
    kv["recon.max_iters"] = std::to_string(recon.max_iters);
    kv["recon.tol"] = fmt(recon.tol);
    kv["recon.nonneg"] = recon.nonneg ? "true" : "false";
    kv["recon.seed"] = std::to_string(recon.seed);
    kv["method"] = method;
    kv["output_dir"] = output_dir;
    kv["band.a"] = fmt(band_a);
    kv["band.b"] = fmt(band_b);
    return kv;
}

ExperimentManifest ExperimentManifest::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open manifest: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_map(parse_key_value_text(ss.str()));
}

void ExperimentManifest::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write manifest: " + path);
    out << render_key_value_text(to_map());
}

ExperimentManifest ExperimentManifest::table_defaults() {
    ExperimentManifest m;
    m.phantom.kind = PhantomSpec::Kind::annulus;
    m.phantom.m = 257;
    m.curve.kind = CurveSpec::Kind::ellipse;
    m.curve.j = 0;
    m.curve.s = 2.0;
    m.noise.gamma = 0.01;
    m.noise.epsilon = 0.05;
    m.noise.seed = 7;
    m.recon.lambda = 0.1;
    m.recon.max_iters = 100;
    m.method = "cgls";
    return m;
}

}  // namespace abelrad
