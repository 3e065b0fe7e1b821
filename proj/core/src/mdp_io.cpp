#include "passive_rl/mdp_io.hpp"

#include "passive_rl/csv.hpp"
#include "passive_rl/errors.hpp"

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace passive_rl {

namespace {

std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> tokens;
    std::istringstream is(line);
    std::string tok;
    while (is >> tok) tokens.push_back(tok);
    return tokens;
}

double parse_number(const std::string& tok, std::size_t line) {
    try {
        std::size_t used = 0;
        const double v = std::stod(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw ParseError(line, "expected a number, got '" + tok + "'");
    }
}

int parse_index(const std::string& tok, int bound, const char* what, std::size_t line) {
    try {
        std::size_t used = 0;
        const int v = std::stoi(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        if (v < 0 || v >= bound) throw ParseError(line, std::string(what) + " index " + tok + " out of range");
        return v;
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception&) {
        throw ParseError(line, std::string("expected an integer ") + what + " index, got '" + tok + "'");
    }
}

} // namespace

TabularMdp parse_mdp(std::istream& in) {
    std::optional<int> n_states;
    std::optional<int> n_actions;
    std::optional<double> gamma;
    std::optional<std::vector<double>> mu0;
    std::vector<std::optional<std::vector<double>>> trans;
    std::vector<std::optional<RewardLaw>> rewards;

    auto require_header = [&](std::size_t line) {
        if (!n_states || !n_actions) throw ParseError(line, "'states' and 'actions' must precede table lines");
        if (trans.empty()) {
            trans.resize(static_cast<std::size_t>(*n_states) * *n_actions);
            rewards.resize(trans.size());
        }
    };

    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        const auto tok = tokenize(raw);
        if (tok.empty()) continue;
        const std::string& key = tok[0];

        if (key == "states" || key == "actions") {
            if (tok.size() != 2) throw ParseError(line_no, "'" + key + "' takes one value");
            const int v = parse_index(tok[1], 1 << 20, "count", line_no);
            if (v <= 0) throw ParseError(line_no, "'" + key + "' must be positive");
            if (!trans.empty()) throw ParseError(line_no, "'" + key + "' after table lines");
            (key == "states" ? n_states : n_actions) = v;
        } else if (key == "gamma") {
            if (tok.size() != 2) throw ParseError(line_no, "'gamma' takes one value");
            gamma = parse_number(tok[1], line_no);
        } else if (key == "mu0") {
            require_header(line_no);
            if (tok.size() != static_cast<std::size_t>(*n_states) + 1)
                throw ParseError(line_no, "'mu0' needs " + std::to_string(*n_states) + " values");
            std::vector<double> p;
            for (std::size_t i = 1; i < tok.size(); ++i) p.push_back(parse_number(tok[i], line_no));
            mu0 = std::move(p);
        } else if (key == "trans") {
            require_header(line_no);
            if (tok.size() != static_cast<std::size_t>(*n_states) + 3)
                throw ParseError(line_no, "'trans' needs s, a and " + std::to_string(*n_states) + " probabilities");
            const int s = parse_index(tok[1], *n_states, "state", line_no);
            const int a = parse_index(tok[2], *n_actions, "action", line_no);
            auto& slot = trans[static_cast<std::size_t>(s) * *n_actions + a];
            if (slot) throw ParseError(line_no, "duplicate 'trans' line");
            std::vector<double> q;
            for (std::size_t i = 3; i < tok.size(); ++i) q.push_back(parse_number(tok[i], line_no));
            slot = std::move(q);
        } else if (key == "reward") {
            require_header(line_no);
            if (tok.size() != 5) throw ParseError(line_no, "'reward' needs s, a, kind and a value");
            const int s = parse_index(tok[1], *n_states, "state", line_no);
            const int a = parse_index(tok[2], *n_actions, "action", line_no);
            const double v = parse_number(tok[4], line_no);
            auto& slot = rewards[static_cast<std::size_t>(s) * *n_actions + a];
            if (slot) throw ParseError(line_no, "duplicate 'reward' line");
            if (tok[3] == "bernoulli")
                slot = RewardLaw::bernoulli(v);
            else if (tok[3] == "det")
                slot = RewardLaw::deterministic(v);
            else
                throw ParseError(line_no, "reward kind must be 'bernoulli' or 'det'");
        } else {
            throw ParseError(line_no, "unknown keyword '" + key + "'");
        }
    }

    const std::size_t end = line_no + 1;
    if (!n_states || !n_actions) throw ParseError(end, "missing 'states' or 'actions'");
    if (!gamma) throw ParseError(end, "missing 'gamma'");
    if (!mu0) throw ParseError(end, "missing 'mu0'");
    require_header(end);

    std::vector<double> table;
    std::vector<RewardLaw> laws;
    for (int s = 0; s < *n_states; ++s) {
        for (int a = 0; a < *n_actions; ++a) {
            const auto i = static_cast<std::size_t>(s) * *n_actions + a;
            const std::string cell = "(s=" + std::to_string(s) + ",a=" + std::to_string(a) + ")";
            if (!trans[i]) throw ParseError(end, "missing 'trans' line for " + cell);
            if (!rewards[i]) throw ParseError(end, "missing 'reward' line for " + cell);
            table.insert(table.end(), trans[i]->begin(), trans[i]->end());
            laws.push_back(*rewards[i]);
        }
    }
    return {*n_states, *n_actions, std::move(table), std::move(laws), *gamma, std::move(*mu0)};
}

TabularMdp load_mdp(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(0, "cannot open " + path.string());
    return parse_mdp(in);
}

void write_mdp(std::ostream& out, const TabularMdp& mdp) {
    out << "states " << mdp.n_states() << "\n"
        << "actions " << mdp.n_actions() << "\n"
        << "gamma " << format_double(mdp.gamma()) << "\n"
        << "mu0";
    for (double p : mdp.mu0()) out << ' ' << format_double(p);
    out << "\n";
    for (int s = 0; s < mdp.n_states(); ++s) {
        for (int a = 0; a < mdp.n_actions(); ++a) {
            out << "trans " << s << ' ' << a;
            for (double q : mdp.transition_row(s, a)) out << ' ' << format_double(q);
            out << "\n";
        }
    }
    for (int s = 0; s < mdp.n_states(); ++s) {
        for (int a = 0; a < mdp.n_actions(); ++a) {
            const auto& law = mdp.reward(s, a);
            out << "reward " << s << ' ' << a << ' '
                << (law.kind == RewardLaw::Kind::bernoulli ? "bernoulli " : "det ") << format_double(law.param)
                << "\n";
        }
    }
}

} // namespace passive_rl
