#include "vortex/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace vortex {

std::string json_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    // %.17g never emits JSON-invalid text for finite doubles; guard the rest.
    std::string s(buf);
    if (s.find("nan") != std::string::npos || s.find("inf") != std::string::npos) return "null";
    return s;
}

std::string json_string(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    out += '"';
    return out;
}

namespace {

std::string number_array(const std::vector<double>& values) {
    std::string out = "[";
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ", ";
        out += json_double(values[i]);
    }
    out += "]";
    return out;
}

std::string invariant_to_json(const InvariantReport& r, const std::string& indent) {
    std::string out = "{\n";
    const std::string in2 = indent + "  ";
    out += in2 + "\"kind\": " + json_string(r.kind) + ",\n";
    out += in2 + "\"k\": " + std::to_string(r.k) + ",\n";
    out += in2 + "\"t0\": " + json_double(r.t0) + ",\n";
    out += in2 + "\"t1\": " + json_double(r.t1) + ",\n";
    out += in2 + "\"value_t0\": " + json_double(r.value_t0) + ",\n";
    out += in2 + "\"value_t1\": " + json_double(r.value_t1) + ",\n";
    out += in2 + "\"drift_abs\": " + json_double(r.drift_abs) + ",\n";
    out += in2 + "\"drift_rel\": " + json_double(r.drift_rel) + ",\n";
    out += in2 + "\"quadrature_order\": " + std::to_string(r.quadrature_order) + ",\n";
    out += in2 + "\"truncated\": " + (r.truncated ? "true" : "false") + "\n";
    out += indent + "}";
    return out;
}

}  // namespace

std::string report_to_json(const WellPosednessReport& report,
                           const std::vector<InvariantReport>* invariants,
                           const InvariantReport* liouville) {
    std::string out = "{\n";
    out += "  \"verdict\": " + json_string(report.well_posed ? "well-posed" : "ill-posed") + ",\n";
    out += "  \"n\": " + std::to_string(report.n) + ",\n";
    out += "  \"p\": " + std::to_string(report.p) + ",\n";
    out += std::string("  \"degree_ok\": ") + (report.degree_ok ? "true" : "false") + ",\n";
    out += std::string("  \"parity_ok\": ") + (report.parity_ok ? "true" : "false") + ",\n";

    out += "  \"reasons\": [";
    for (std::size_t i = 0; i < report.reasons.size(); ++i) {
        if (i) out += ", ";
        out += json_string(report.reasons[i]);
    }
    out += "],\n";

    out += "  \"rank_samples\": [";
    for (std::size_t i = 0; i < report.rank_samples.size(); ++i) {
        const RankSample& s = report.rank_samples[i];
        out += i ? ",\n    " : "\n    ";
        out += "{\"point\": " + number_array(s.point);
        if (s.rank) out += ", \"rank\": " + std::to_string(*s.rank);
        if (s.error) out += ", \"error\": " + json_string(*s.error);
        out += "}";
    }
    out += report.rank_samples.empty() ? "]" : "\n  ]";

    if (invariants) {
        out += ",\n  \"invariants\": [";
        for (std::size_t i = 0; i < invariants->size(); ++i) {
            out += i ? ",\n    " : "\n    ";
            out += invariant_to_json((*invariants)[i], "    ");
        }
        out += invariants->empty() ? "]" : "\n  ]";
    }

    if (liouville) {
        out += ",\n  \"liouville\": {\n";
        out += "    \"max_abs_det_minus_one\": " + json_double(liouville->max_abs_det_minus_one) +
               ",\n";
        out += "    \"sample_count\": " + std::to_string(liouville->sample_count) + ",\n";
        out += "    \"t0\": " + json_double(liouville->t0) + ",\n";
        out += "    \"t1\": " + json_double(liouville->t1) + ",\n";
        out += "    \"errors\": [";
        for (std::size_t i = 0; i < liouville->sample_errors.size(); ++i) {
            if (i) out += ", ";
            out += json_string(liouville->sample_errors[i]);
        }
        out += "]\n  }";
    }

    out += "\n}\n";
    return out;
}

std::string trajectory_to_csv(const Trajectory& traj, int n) {
    std::string out = "t";
    for (int i = 1; i <= n; ++i) out += ",x" + std::to_string(i);
    out += "\n";
    for (const TrajectorySample& s : traj.samples) {
        out += json_double(s.t);
        for (double v : s.x) out += "," + json_double(v);
        out += "\n";
    }
    return out;
}

std::string trajectory_to_json(const Trajectory& traj, int n) {
    std::string out = "{\n  \"header\": [\"t\"";
    for (int i = 1; i <= n; ++i) out += ", \"x" + std::to_string(i) + "\"";
    out += "],\n  \"rows\": [";
    for (std::size_t i = 0; i < traj.samples.size(); ++i) {
        const TrajectorySample& s = traj.samples[i];
        out += i ? ",\n    [" : "\n    [";
        out += json_double(s.t);
        for (double v : s.x) out += ", " + json_double(v);
        out += "]";
    }
    out += traj.samples.empty() ? "]" : "\n  ]";
    out += ",\n  \"steps_accepted\": " + std::to_string(traj.steps_accepted);
    out += ",\n  \"steps_rejected\": " + std::to_string(traj.steps_rejected);
    out += ",\n  \"ok\": " + std::string(traj.ok ? "true" : "false");
    if (!traj.ok) out += ",\n  \"failure\": " + json_string(traj.failure);
    out += "\n}\n";
    return out;
}

void atomic_write_file(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open for writing: " + tmp);
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw std::runtime_error("write failed: " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw std::runtime_error("atomic rename failed for: " + path);
    }
}

}  // namespace vortex
