#include "routegame/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace routegame {

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    return out;
}

}  // namespace

void write_metrics_csv(const std::string& path, const MetricsTable& table) {
    std::ofstream out = open_out(path);
    for (size_t c = 0; c < table.columns.size(); ++c)
        out << table.columns[c] << (c + 1 < table.columns.size() ? "," : "");
    out << "\n";
    for (const auto& row : table.rows) {
        for (size_t c = 0; c < row.size(); ++c) {
            if (!std::isnan(row[c])) out << fmt_double(row[c]);
            if (c + 1 < row.size()) out << ",";
        }
        out << "\n";
    }
}

void write_trajectory_dump(const std::string& path, const Trajectory& traj) {
    std::ofstream out = open_out(path);
    for (size_t t = 0; t < traj.phi.size(); ++t) {
        nlohmann::json j;
        j["t"] = t;
        j["theta"] = traj.theta[t];
        j["agents"] = traj.agent_count;
        j["slots"] = traj.period;
        j["paths"] = traj.path_count;
        j["x"] = traj.phi[t].data();
        out << j.dump() << "\n";
    }
}

void write_event_log(const std::string& path, const std::vector<EventSpec>& events) {
    std::ofstream out = open_out(path);
    for (const EventSpec& ev : events) {
        nlohmann::json j;
        j["t"] = ev.time;
        j["kind"] = ev.kind == EventKind::Fault ? "fault" : "repair";
        j["group"] = ev.group;
        j["agents"] = ev.agents;
        out << j.dump() << "\n";
    }
}

DumpState read_last_dump_state(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open trajectory dump: " + path);
    std::string line, last;
    while (std::getline(in, line))
        if (!line.empty()) last = line;
    if (last.empty()) throw std::runtime_error("trajectory dump is empty: " + path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(last);
    } catch (const std::exception& e) {
        throw std::runtime_error("malformed trajectory dump: " + std::string(e.what()));
    }
    DumpState st;
    try {
        st.t = j.at("t").get<int>();
        st.theta = j.at("theta").get<int>();
        st.agents = j.at("agents").get<int>();
        st.slots = j.at("slots").get<int>();
        st.paths = j.at("paths").get<int>();
        st.x = j.at("x").get<std::vector<double>>();
    } catch (const std::exception& e) {
        throw std::runtime_error("trajectory dump record incomplete: " + std::string(e.what()));
    }
    if (st.x.size() != static_cast<size_t>(st.agents) * st.slots * st.paths)
        throw std::runtime_error("trajectory dump tensor size mismatch");
    return st;
}

void write_series_svg(const std::string& path, const std::string& title,
                      const std::vector<Series>& series) {
    const int W = 880, H = 420;
    const int ml = 70, mr = 20, mt = 40, mb = 40;
    const double pw = W - ml - mr, ph = H - mt - mb;

    size_t n = 0;
    double lo = 0.0, hi = 1.0;
    bool seen = false;
    for (const Series& s : series) {
        n = std::max(n, s.y.size());
        for (double v : s.y) {
            if (std::isnan(v)) continue;
            if (!seen) { lo = hi = v; seen = true; }
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    if (!seen) { lo = 0.0; hi = 1.0; }
    if (hi - lo < 1e-12) hi = lo + 1.0;

    auto xpos = [&](size_t k) { return ml + pw * (n > 1 ? double(k) / double(n - 1) : 0.5); };
    auto ypos = [&](double v) { return mt + ph * (1.0 - (v - lo) / (hi - lo)); };

    static const char* palette[] = {"#1f6fb4", "#d9541e", "#3c9447", "#8a4fb0", "#b0a31e", "#555555"};

    std::ofstream out = open_out(path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
        << "\" viewBox=\"0 0 " << W << " " << H << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"15\">" << title << "</text>\n"
        << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << mt + ph
        << "\" stroke=\"black\"/>\n"
        << "<line x1=\"" << ml << "\" y1=\"" << mt + ph << "\" x2=\"" << ml + pw << "\" y2=\""
        << mt + ph << "\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double v = lo + (hi - lo) * k / 4.0;
        const double y = ypos(v);
        out << "<line x1=\"" << ml - 4 << "\" y1=\"" << y << "\" x2=\"" << ml << "\" y2=\"" << y
            << "\" stroke=\"black\"/>\n"
            << "<text x=\"" << ml - 8 << "\" y=\"" << y + 4
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
            << fmt_double(v).substr(0, 9) << "</text>\n";
    }
    for (int k = 0; k <= 4 && n > 1; ++k) {
        const size_t idx = (n - 1) * k / 4;
        const double x = xpos(idx);
        out << "<line x1=\"" << x << "\" y1=\"" << mt + ph << "\" x2=\"" << x << "\" y2=\""
            << mt + ph + 4 << "\" stroke=\"black\"/>\n"
            << "<text x=\"" << x << "\" y=\"" << mt + ph + 18
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << idx + 1
            << "</text>\n";
    }
    for (size_t si = 0; si < series.size(); ++si) {
        const char* color = palette[si % 6];
        std::ostringstream pts;
        bool pen_down = false;
        out << "<path fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" d=\"";
        for (size_t k = 0; k < series[si].y.size(); ++k) {
            const double v = series[si].y[k];
            if (std::isnan(v)) { pen_down = false; continue; }
            out << (pen_down ? "L" : "M") << xpos(k) << " " << ypos(v) << " ";
            pen_down = true;
        }
        out << "\"/>\n";
        out << "<text x=\"" << ml + 10 + 150 * static_cast<int>(si) << "\" y=\"" << mt - 6
            << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"" << color << "\">"
            << series[si].label << "</text>\n";
    }
    out << "</svg>\n";
}

std::vector<std::string> write_standard_plots(const std::string& out_dir,
                                              const MetricsTable& table) {
    auto column = [&](const std::string& name) -> std::vector<double> {
        for (size_t c = 0; c < table.columns.size(); ++c)
            if (table.columns[c] == name) {
                std::vector<double> y;
                for (const auto& row : table.rows) y.push_back(row[c]);
                return y;
            }
        return {};
    };
    std::vector<std::string> written;

    std::vector<Series> pot;
    if (auto y = column("V_pred"); !y.empty()) pot.push_back({"V_pred", std::move(y)});
    if (auto y = column("V_impl"); !y.empty()) pot.push_back({"V_impl", std::move(y)});
    if (!pot.empty()) {
        const std::string p = out_dir + "/potential.svg";
        write_series_svg(p, "Potential over time", pot);
        written.push_back(p);
    }

    std::vector<Series> dp;
    for (size_t c = 0; c < table.columns.size(); ++c)
        if (table.columns[c].rfind("delta_phi_", 0) == 0) {
            std::vector<double> y;
            for (const auto& row : table.rows) y.push_back(row[c]);
            dp.push_back({table.columns[c], std::move(y)});
        }
    if (!dp.empty()) {
        const std::string p = out_dir + "/delta_phi.svg";
        write_series_svg(p, "Per-agent strategy variation", dp);
        written.push_back(p);
    }
    return written;
}

}  // namespace routegame
