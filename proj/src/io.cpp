#include "wslab/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iterator>

#include "json.hpp"
#include "wslab/errors.hpp"

namespace wslab {

std::string g17(double v) {
    char b[48];
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(b, sizeof b, "%.*g", prec, v);
        double back = std::strtod(b, nullptr);
        if (back == v || (std::isnan(back) && std::isnan(v))) return b;
    }
    return b;
}

uint64_t fnv1a64(const std::string& s) {
    uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hex8(uint64_t h) {
    char b[16];
    std::snprintf(b, sizeof b, "%08x", static_cast<unsigned>(h & 0xffffffffull));
    return b;
}

std::string output_basename(const std::string& scenario, const std::string& echo) {
    return scenario + "_" + hex8(fnv1a64(echo));
}

// ------------------------------------------------------------------

namespace {

std::string json_escape(const std::string& s) {
    std::string o;
    o.reserve(s.size() + 2);
    for (unsigned char c : s) {
        switch (c) {
            case '"': o += "\\\""; break;
            case '\\': o += "\\\\"; break;
            case '\n': o += "\\n"; break;
            case '\r': o += "\\r"; break;
            case '\t': o += "\\t"; break;
            default:
                if (c < 0x20) {
                    char b[8];
                    std::snprintf(b, sizeof b, "\\u%04x", c);
                    o += b;
                } else {
                    o += static_cast<char>(c);
                }
        }
    }
    return o;
}

std::string jstr(const std::string& s) { return "\"" + json_escape(s) + "\""; }

// NaN marks an absent measurement; JSON spells that null
std::string jnum(double v) { return std::isnan(v) ? "null" : g17(v); }

void emit_points(std::string& o, const std::vector<Point2>& pts) {
    o += "[";
    for (size_t i = 0; i < pts.size(); ++i) {
        if (i) o += ",";
        o += "[";
        o += g17(pts[i].x);
        o += ",";
        o += g17(pts[i].y);
        o += "]";
    }
    o += "]";
}

void emit_point_lists(std::string& o, const std::vector<std::vector<Point2>>& lists) {
    o += "[";
    for (size_t i = 0; i < lists.size(); ++i) {
        if (i) o += ",";
        emit_points(o, lists[i]);
    }
    o += "]";
}

const char* verdict_text(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "pass";
        case Verdict::Fail: return "fail";
        default: return "approx";
    }
}

void emit_check_report(std::string& o, const CheckReport& rep) {
    o += "{\"scenario\":";
    o += jstr(rep.scenario);
    o += ",\"overall\":";
    o += jstr(verdict_text(rep.overall()));
    o += ",\"entries\":[";
    for (size_t i = 0; i < rep.entries.size(); ++i) {
        const CheckEntry& e = rep.entries[i];
        if (i) o += ",";
        o += "{\"condition\":";
        o += jstr(e.condition);
        o += ",\"verdict\":";
        o += jstr(verdict_text(e.verdict));
        o += ",\"measured\":[";
        for (size_t k = 0; k < e.measured.size(); ++k) {
            if (k) o += ",";
            o += "[";
            o += jstr(e.measured[k].first);
            o += ",";
            o += jnum(e.measured[k].second);
            o += "]";
        }
        o += "]";
        if (!e.note.empty()) {
            o += ",\"note\":";
            o += jstr(e.note);
        }
        o += "}";
    }
    o += "]}";
}

std::vector<Point2> points_from_json(const nlohmann::json& arr) {
    std::vector<Point2> out;
    out.reserve(arr.size());
    for (const auto& p : arr) {
        if (!p.is_array() || p.size() != 2)
            throw BadFile("domain json: point must be a two-element array");
        out.push_back({p[0].get<double>(), p[1].get<double>()});
    }
    return out;
}

} // namespace

std::string domain_to_json(const PlanarDomain& dom) {
    std::string o = "{\"kind\":\"planar-domain\",\n\"echo\":";
    o += jstr(dom.landmarks.spec_echo);
    o += ",\n\"outer\":";
    emit_point_lists(o, dom.outer);
    o += ",\n\"holes\":";
    emit_point_lists(o, dom.holes);
    o += ",\n\"slits\":";
    emit_point_lists(o, dom.slits);
    o += "}\n";
    return o;
}

PlanarDomain domain_from_json(const std::string& text) {
    try {
        nlohmann::json j = nlohmann::json::parse(text);
        if (!j.is_object() || j.value("kind", "") != "planar-domain")
            throw BadFile("domain json: not a planar-domain document");
        std::vector<Polygon> outer, holes;
        std::vector<Polyline> slits;
        for (const auto& poly : j.at("outer")) outer.push_back(points_from_json(poly));
        if (j.contains("holes"))
            for (const auto& poly : j.at("holes")) holes.push_back(points_from_json(poly));
        if (j.contains("slits"))
            for (const auto& pl : j.at("slits")) slits.push_back(points_from_json(pl));
        PlanarDomain dom =
            make_domain(std::move(outer), std::move(holes), std::move(slits));
        // keep the construction echo so serialize -> parse -> serialize is a
        // fixed point (landmark geometry is not carried by the file format)
        dom.landmarks.spec_echo = j.value("echo", "");
        return dom;
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        throw BadFile(std::string("domain json: ") + e.what());
    }
}

std::string dataset_to_json(const WsliceDataset& ds) {
    std::string o = "{\"kind\":\"wslice-dataset\",\n\"x\":[";
    o += g17(ds.x.x);
    o += ",";
    o += g17(ds.x.y);
    o += "],\"y\":[";
    o += g17(ds.y.x);
    o += ",";
    o += g17(ds.y.y);
    o += "],\"C\":";
    o += g17(ds.C);
    o += ",\"alpha\":";
    o += g17(ds.alpha);
    o += ",\n\"slices\":[";
    for (size_t i = 0; i < ds.slices.size(); ++i) {
        const SliceRegion& s = ds.slices[i];
        if (i) o += ",";
        o += "\n{\"label\":";
        o += jstr(s.label);
        o += ",\"d_S\":";
        o += g17(s.d_S);
        o += ",\"shape\":";
        emit_points(o, s.shape);
        o += "}";
    }
    o += "]}\n";
    return o;
}

WsliceDataset dataset_from_json(const std::string& text) {
    try {
        nlohmann::json j = nlohmann::json::parse(text);
        if (!j.is_object() || j.value("kind", "") != "wslice-dataset")
            throw BadFile("dataset json: not a wslice-dataset document");
        WsliceDataset ds;
        auto pt = [](const nlohmann::json& a) -> Point2 {
            if (!a.is_array() || a.size() != 2)
                throw BadFile("dataset json: point must be a two-element array");
            return {a[0].get<double>(), a[1].get<double>()};
        };
        ds.x = pt(j.at("x"));
        ds.y = pt(j.at("y"));
        ds.C = j.value("C", 10.0);
        ds.alpha = j.value("alpha", 0.0);
        for (const auto& s : j.at("slices")) {
            SliceRegion sr;
            sr.label = s.value("label", "");
            sr.d_S = s.value("d_S", 0.0);
            sr.shape = points_from_json(s.at("shape"));
            ds.slices.push_back(std::move(sr));
        }
        return ds;
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        throw BadFile(std::string("dataset json: ") + e.what());
    }
}

std::string path_to_json(const PathEstimate& pe) {
    std::string o = "{\"kind\":\"path-estimate\",\"alpha\":";
    o += g17(pe.alpha);
    o += ",\"value\":";
    o += g17(pe.value);
    o += ",\"method\":";
    o += jstr(pe.kind);
    o += ",\n\"vertices\":";
    emit_points(o, pe.vertices);
    o += "}\n";
    return o;
}

PathEstimate path_from_json(const std::string& text) {
    try {
        nlohmann::json j = nlohmann::json::parse(text);
        if (!j.is_object() || j.value("kind", "") != "path-estimate")
            throw BadFile("path json: not a path-estimate document");
        PathEstimate pe;
        pe.alpha = j.value("alpha", 0.0);
        pe.value = j.value("value", 0.0);
        pe.kind = j.value("method", "");
        pe.vertices = points_from_json(j.at("vertices"));
        return pe;
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        throw BadFile(std::string("path json: ") + e.what());
    }
}

std::string check_report_to_json(const CheckReport& rep) {
    std::string o;
    emit_check_report(o, rep);
    o += "\n";
    return o;
}

std::string experiment_to_json(const ExperimentReport& rep) {
    std::string o = "{\"kind\":\"experiment\",\n\"scenario\":";
    o += jstr(rep.scenario);
    o += ",\"params\":";
    o += jstr(rep.params_echo);
    o += ",\"seed\":";
    char seedbuf[32];
    std::snprintf(seedbuf, sizeof seedbuf, "%llu",
                  static_cast<unsigned long long>(rep.seed));
    o += seedbuf;
    o += ",\"overall\":";
    o += jstr(verdict_text(rep.overall));
    if (!rep.grid_note.empty()) {
        o += ",\n\"grid_note\":";
        o += jstr(rep.grid_note);
    }
    if (!rep.notes.empty()) {
        o += ",\n\"notes\":";
        o += jstr(rep.notes);
    }
    o += ",\n\"columns\":[";
    for (size_t i = 0; i < rep.columns.size(); ++i) {
        if (i) o += ",";
        o += jstr(rep.columns[i]);
    }
    o += "],\n\"rows\":[";
    for (size_t i = 0; i < rep.rows.size(); ++i) {
        if (i) o += ",";
        o += "\n[";
        for (size_t k = 0; k < rep.rows[i].size(); ++k) {
            if (k) o += ",";
            o += jnum(rep.rows[i][k]);
        }
        o += "]";
    }
    o += "],\n\"checks\":[";
    for (size_t i = 0; i < rep.checks.size(); ++i) {
        if (i) o += ",";
        o += "\n";
        emit_check_report(o, rep.checks[i]);
    }
    o += "]}\n";
    return o;
}

std::string experiment_to_csv(const ExperimentReport& rep) {
    std::string o;
    for (size_t i = 0; i < rep.columns.size(); ++i) {
        if (i) o += ",";
        o += rep.columns[i];
    }
    o += "\n";
    for (const auto& row : rep.rows) {
        for (size_t k = 0; k < row.size(); ++k) {
            if (k) o += ",";
            if (!std::isnan(row[k])) o += g17(row[k]);
        }
        o += "\n";
    }
    return o;
}

void write_text_atomic(const std::string& path, const std::string& text) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw BadFile("cannot open for write: " + tmp);
        f.write(text.data(), static_cast<std::streamsize>(text.size()));
        f.flush();
        if (!f) throw BadFile("write failed: " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw BadFile("rename failed: " + path);
}

std::string read_text(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw BadFile("cannot open: " + path);
    return std::string(std::istreambuf_iterator<char>(f),
                       std::istreambuf_iterator<char>());
}

} // namespace wslab
