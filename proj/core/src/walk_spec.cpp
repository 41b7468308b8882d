#include "qg/walk_spec.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qg/errors.hpp"

namespace qg {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& source, const std::string& msg) {
    throw io_error("walk spec " + source + ": " + msg);
}

double require_number(const json& j, const std::string& key, const std::string& source) {
    if (!j.at(key).is_number()) bad(source, "key '" + key + "' must be a number");
    return j.at(key).get<double>();
}

}  // namespace

WalkSpec parse_walk_spec(const std::string& json_text, const std::string& source) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        bad(source, e.what());
    }
    if (!doc.is_object()) bad(source, "top level must be an object");
    if (doc.size() != 1 || (!doc.contains("kernel") && !doc.contains("family")))
        bad(source, "expected exactly one of 'kernel' or 'family'");

    WalkSpec spec;
    spec.source = source;

    if (doc.contains("kernel")) {
        const json& k = doc["kernel"];
        if (!k.is_object()) bad(source, "'kernel' must be an object");
        for (auto it = k.begin(); it != k.end(); ++it) {
            bool known = false;
            for (auto [di, dj] : kJumps) {
                std::ostringstream os;
                os << "p_" << di << "_" << dj;
                if (it.key() == os.str()) {
                    spec.kernel.at(di, dj) = require_number(k, it.key(), source);
                    known = true;
                    break;
                }
            }
            if (!known) bad(source, "unknown kernel key '" + it.key() + "'");
        }
    } else {
        const json& f = doc["family"];
        if (!f.is_object()) bad(source, "'family' must be an object");
        for (auto it = f.begin(); it != f.end(); ++it) {
            const std::string& key = it.key();
            if (key != "alpha" && key != "beta" && key != "p11" && key != "p10")
                bad(source, "unknown family key '" + key + "'");
        }
        CubicFamilyParams params;
        params.alpha = require_number(f, "alpha", source);
        params.beta = require_number(f, "beta", source);
        params.p11 = require_number(f, "p11", source);
        params.p10 = require_number(f, "p10", source);
        spec.family = params;
        spec.kernel = kernel_from_cubic_family(params);
    }
    return spec;
}

WalkSpec load_walk_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open walk spec '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_walk_spec(buf.str(), path);
}

}  // namespace qg
