#include "safebandit/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace safebandit {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

void append_state_prefix(std::ostringstream& os, const Instance& inst, StateSet s) {
    const Partition part = partition(inst, s);
    os << s.mask() << ',' << part.above.count() << ',' << part.below.count();
}

const char* kind_name(ActionChoice::Kind kind) {
    switch (kind) {
    case ActionChoice::Kind::Pair: return "pair";
    case ActionChoice::Kind::Single: return "single";
    case ActionChoice::Kind::Stop: return "stop";
    }
    return "?";
}

} // namespace

std::string value_table_csv(const Instance& inst, const ValueTable& table) {
    std::ostringstream os;
    os << "state_bitmask,above_size,below_size,value\n";
    const std::uint32_t n = std::uint32_t{1} << inst.arm_count();
    for (std::uint32_t idx = 0; idx < n; ++idx) {
        const StateSet s = StateSet::from_index(idx);
        append_state_prefix(os, inst, s);
        os << ',' << format_double(table.at(s)) << '\n';
    }
    return os.str();
}

std::string reach_table_csv(const Instance& inst, const ReachTable& table) {
    return value_table_csv(inst, table);
}

std::string policy_table_csv(const Instance& inst, const PolicyTable& pol) {
    std::ostringstream os;
    os << "state_bitmask,above_size,below_size,action_kind,i,j\n";
    const std::uint32_t n = std::uint32_t{1} << inst.arm_count();
    for (std::uint32_t idx = 0; idx < n; ++idx) {
        const StateSet s = StateSet::from_index(idx);
        const ActionChoice& a = pol.at(s);
        append_state_prefix(os, inst, s);
        os << ',' << kind_name(a.kind) << ',' << a.i << ',' << a.j << '\n';
    }
    return os.str();
}

std::string episode_trace_csv(const std::vector<RoundLog>& rounds) {
    std::ostringstream os;
    os << "t,portfolio,realized_arm,r_t,safety_margin,phase\n";
    for (const RoundLog& r : rounds) {
        os << r.t << ',';
        bool first = true;
        for (const auto& [arm, w] : r.portfolio.entries()) {
            if (!first) os << ';';
            os << arm << ':' << format_double(w);
            first = false;
        }
        os << ',' << r.realized_arm << ',' << format_double(r.reward) << ','
           << format_double(r.safety_margin) << ',' << r.phase << '\n';
    }
    return os.str();
}

std::string mc_summary_csv(const std::vector<McSummaryRow>& rows) {
    std::ostringstream os;
    os << "T,episodes,mean_utility,std_error,mean_exploration_rounds,w_star,floor\n";
    for (const McSummaryRow& row : rows) {
        os << row.T << ',' << row.result.episodes << ','
           << format_double(row.result.mean_utility) << ','
           << format_double(row.result.std_error) << ','
           << format_double(row.result.mean_exploration_rounds) << ','
           << format_double(row.w_star) << ',' << format_double(row.floor) << '\n';
    }
    return os.str();
}

std::string check_reports_csv(const std::vector<CheckReport>& reports) {
    std::ostringstream os;
    os << "check_name,passed,max_deviation,trials,elapsed_ms\n";
    for (const CheckReport& r : reports) {
        os << r.check_name << ',' << (r.passed ? "true" : "false") << ','
           << format_double(r.max_deviation) << ',' << r.trials << ',' << r.elapsed_ms << '\n';
    }
    return os.str();
}

std::vector<CheckReport> parse_check_reports_csv(const std::string& text) {
    std::vector<CheckReport> out;
    std::istringstream is(text);
    std::string line;
    std::getline(is, line); // header
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string name, passed, deviation, trials, elapsed;
        std::getline(row, name, ',');
        std::getline(row, passed, ',');
        std::getline(row, deviation, ',');
        std::getline(row, trials, ',');
        std::getline(row, elapsed, ',');
        CheckReport r;
        r.check_name = name;
        r.passed = passed == "true";
        r.max_deviation = std::stod(deviation);
        r.trials = std::stoll(trials);
        r.elapsed_ms = std::stoll(elapsed);
        out.push_back(std::move(r));
    }
    return out;
}

std::string check_reports_json(const std::string& suite, const std::vector<CheckReport>& reports) {
    nlohmann::json doc;
    doc["suite"] = suite;
    bool all = true;
    doc["checks"] = nlohmann::json::array();
    for (const CheckReport& r : reports) {
        doc["checks"].push_back({{"check_name", r.check_name},
                                 {"passed", r.passed},
                                 {"max_deviation", r.max_deviation},
                                 {"witness", r.witness},
                                 {"trials", r.trials},
                                 {"elapsed_ms", r.elapsed_ms}});
        all = all && r.passed;
    }
    doc["passed"] = all;
    return doc.dump(2) + "\n";
}

std::vector<CheckReport> parse_check_reports_json(const std::string& text) {
    const nlohmann::json doc = nlohmann::json::parse(text);
    std::vector<CheckReport> out;
    for (const auto& c : doc.at("checks")) {
        CheckReport r;
        r.check_name = c.at("check_name").get<std::string>();
        r.passed = c.at("passed").get<bool>();
        r.max_deviation = c.at("max_deviation").get<double>();
        r.witness = c.at("witness").get<std::string>();
        r.trials = c.at("trials").get<std::int64_t>();
        r.elapsed_ms = c.at("elapsed_ms").get<std::int64_t>();
        out.push_back(std::move(r));
    }
    return out;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace safebandit
