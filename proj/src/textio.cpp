#include "crnsign/textio.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <map>
#include <optional>
#include <set>
#include <vector>

namespace crnsign {

const char *const kGrammarHelp =
    "network file grammar:\n"
    "  file     := (line NEWLINE)*\n"
    "  line     := reaction | comment | blank\n"
    "  comment  := '#' any            ('#! species: A B ...' fixes row order)\n"
    "  reaction := complex arrow complex [';' rates]\n"
    "  complex  := '0' | term ('+' term)*\n"
    "  term     := [coeff] IDENT      coeff: integer, decimal or p/q\n"
    "  arrow    := '->' | '<->'\n"
    "  rates    := 'k=' NUM | 'kf=' NUM ',' 'kr=' NUM\n";

const char *to_string(ParseErrorKind kind) {
    switch (kind) {
    case ParseErrorKind::syntax:
        return "syntax";
    case ParseErrorKind::duplicate_rate:
        return "duplicate-rate";
    case ParseErrorKind::bad_coefficient:
        return "bad-coefficient";
    case ParseErrorKind::empty_side_both:
        return "empty-side-both";
    }
    return "syntax";
}

ParseError::ParseError(std::size_t line, std::size_t column, ParseErrorKind kind,
                       const std::string &message)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) +
                         " [" + crnsign::to_string(kind) + "]: " + message),
      line_(line), column_(column), kind_(kind), detail_(message) {}

namespace {

bool is_ident_start(char c) {
    auto u = static_cast<unsigned char>(c);
    return (u >= 'A' && u <= 'Z') || (u >= 'a' && u <= 'z') || u == '_';
}
bool is_ident_char(char c) {
    auto u = static_cast<unsigned char>(c);
    return is_ident_start(c) || (u >= '0' && u <= '9') || u == '\'';
}
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_space(char c) { return c == ' ' || c == '\t' || c == '\v' || c == '\f'; }

using Terms = std::map<std::string, Rational>;

struct ParsedComplex {
    std::vector<std::pair<std::string, Rational>> terms; // in textual order
    bool zero = false;
};

struct ParsedLine {
    ParsedComplex lhs, rhs;
    bool reversible = false;
    std::optional<double> k, kf, kr;
    std::size_t column = 1;
};

/// Cursor over a single line; columns are 1-based.
class LineParser {
  public:
    LineParser(std::string_view line, std::size_t lineno) : s_(line), lineno_(lineno) {}

    ParsedLine reaction() {
        ParsedLine out;
        skip_ws();
        out.column = col();
        out.lhs = complex();
        skip_ws();
        if (peek("<->")) {
            out.reversible = true;
            pos_ += 3;
        } else if (peek("->")) {
            pos_ += 2;
        } else {
            fail(ParseErrorKind::syntax, "expected '->' or '<->'");
        }
        out.rhs = complex();
        if (out.lhs.zero && out.rhs.zero)
            fail_at(out.column, ParseErrorKind::empty_side_both,
                    "both sides are the zero complex");
        skip_ws();
        if (at_end())
            return out;
        if (s_[pos_] != ';')
            fail(ParseErrorKind::syntax, "unexpected character after reaction");
        ++pos_;
        rates(out);
        skip_ws();
        if (!at_end())
            fail(ParseErrorKind::syntax, "unexpected text after rates");
        return out;
    }

  private:
    std::string_view s_;
    std::size_t lineno_;
    std::size_t pos_ = 0;

    std::size_t col() const { return pos_ + 1; }
    bool at_end() const { return pos_ >= s_.size(); }
    bool peek(std::string_view tok) const { return s_.substr(pos_, tok.size()) == tok; }
    void skip_ws() {
        while (!at_end() && is_space(s_[pos_]))
            ++pos_;
    }

    [[noreturn]] void fail(ParseErrorKind kind, const std::string &msg) const {
        throw ParseError(lineno_, std::min(col(), s_.size() + 1), kind, msg);
    }
    [[noreturn]] void fail_at(std::size_t column, ParseErrorKind kind,
                              const std::string &msg) const {
        throw ParseError(lineno_, column, kind, msg);
    }

    ParsedComplex complex() {
        ParsedComplex out;
        skip_ws();
        bool first = true;
        while (true) {
            skip_ws();
            std::size_t term_col = col();
            std::optional<std::string> coeff_text;
            if (!at_end() && is_digit(s_[pos_])) {
                std::size_t start = pos_;
                while (!at_end() && is_digit(s_[pos_]))
                    ++pos_;
                if (!at_end() && (s_[pos_] == '.' || s_[pos_] == '/')) {
                    ++pos_;
                    std::size_t frac = pos_;
                    while (!at_end() && is_digit(s_[pos_]))
                        ++pos_;
                    if (frac == pos_)
                        fail(ParseErrorKind::bad_coefficient, "malformed coefficient");
                }
                coeff_text = std::string(s_.substr(start, pos_ - start));
            }
            skip_ws();
            if (at_end() || !is_ident_start(s_[pos_])) {
                if (first && coeff_text == "0") {
                    out.zero = true;
                    return out;
                }
                fail(ParseErrorKind::syntax, coeff_text ? "expected species name after coefficient"
                                                        : "expected a term or '0'");
            }
            std::size_t name_start = pos_;
            while (!at_end() && is_ident_char(s_[pos_]))
                ++pos_;
            std::string name(s_.substr(name_start, pos_ - name_start));
            Rational coeff(1);
            if (coeff_text) {
                try {
                    coeff = parse_rational(*coeff_text);
                } catch (const std::invalid_argument &) {
                    fail_at(term_col, ParseErrorKind::bad_coefficient,
                            "invalid coefficient '" + *coeff_text + "'");
                }
                if (sgn(coeff) <= 0)
                    fail_at(term_col, ParseErrorKind::bad_coefficient,
                            "coefficient must be positive");
            }
            out.terms.emplace_back(std::move(name), coeff);
            first = false;
            skip_ws();
            if (!at_end() && s_[pos_] == '+') {
                ++pos_;
                continue;
            }
            return out;
        }
    }

    double number() {
        skip_ws();
        std::size_t start = pos_;
        while (!at_end() && (is_digit(s_[pos_]) || s_[pos_] == '.' || s_[pos_] == 'e' ||
                             s_[pos_] == 'E' || s_[pos_] == '+' || s_[pos_] == '-'))
            ++pos_;
        std::string text(s_.substr(start, pos_ - start));
        if (text.empty())
            fail(ParseErrorKind::syntax, "expected a number");
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
        if (ec != std::errc() || ptr != text.data() + text.size())
            fail_at(start + 1, ParseErrorKind::bad_coefficient, "malformed rate '" + text + "'");
        if (!(value > 0.0) || !std::isfinite(value))
            fail_at(start + 1, ParseErrorKind::bad_coefficient,
                    "rate constants must be positive and finite");
        return value;
    }

    void rates(ParsedLine &line) {
        std::set<std::string> seen;
        while (true) {
            skip_ws();
            std::size_t key_col = col();
            std::size_t start = pos_;
            while (!at_end() && is_ident_char(s_[pos_]))
                ++pos_;
            std::string key(s_.substr(start, pos_ - start));
            if (key != "k" && key != "kf" && key != "kr")
                fail_at(key_col, ParseErrorKind::syntax, "expected k=, kf= or kr=");
            skip_ws();
            if (at_end() || s_[pos_] != '=')
                fail(ParseErrorKind::syntax, "expected '='");
            ++pos_;
            if (!seen.insert(key).second)
                fail_at(key_col, ParseErrorKind::duplicate_rate, "rate '" + key + "' given twice");
            double v = number();
            (key == "k" ? line.k : key == "kf" ? line.kf : line.kr) = v;
            skip_ws();
            if (!at_end() && s_[pos_] == ',') {
                ++pos_;
                continue;
            }
            break;
        }
        if (line.reversible) {
            if (line.k || !line.kf || !line.kr)
                fail(ParseErrorKind::syntax, "reversible reactions take 'kf=NUM, kr=NUM'");
        } else if (line.kf || line.kr) {
            fail(ParseErrorKind::syntax, "irreversible reactions take 'k=NUM'");
        }
    }
};

struct PragmaSpecies {
    std::vector<std::string> names;
    std::size_t line = 0;
};

std::optional<PragmaSpecies> species_pragma(std::string_view line, std::size_t lineno) {
    // line starts with "#!"
    std::size_t pos = 2;
    while (pos < line.size() && is_space(line[pos]))
        ++pos;
    constexpr std::string_view key = "species:";
    if (line.substr(pos, key.size()) != key)
        return std::nullopt;
    pos += key.size();
    PragmaSpecies out;
    out.line = lineno;
    while (pos < line.size()) {
        while (pos < line.size() && is_space(line[pos]))
            ++pos;
        std::size_t start = pos;
        while (pos < line.size() && !is_space(line[pos]))
            ++pos;
        if (pos > start) {
            std::string name(line.substr(start, pos - start));
            if (!is_valid_species_name(name))
                throw ParseError(lineno, start + 1, ParseErrorKind::syntax,
                                 "invalid species name '" + name + "' in pragma");
            out.names.push_back(std::move(name));
        }
    }
    return out;
}

} // namespace

Network parse_network(std::string_view text, NetworkOptions options) {
    std::vector<std::string> order;
    std::map<std::string, std::size_t> index;
    auto intern = [&](const std::string &name) {
        auto [it, inserted] = index.emplace(name, order.size());
        if (inserted)
            order.push_back(name);
        return it->second;
    };

    std::vector<Reaction> reactions;
    std::vector<std::size_t> reaction_line;
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    std::optional<PragmaSpecies> pragma;
    std::size_t lineno = 0;
    std::size_t last_line = 1;

    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos)
            eol = text.size();
        std::string_view line = text.substr(pos, eol - pos);
        if (!line.empty() && line.back() == '\r')
            line.remove_suffix(1);
        ++lineno;
        pos = eol + 1;

        std::size_t first = 0;
        while (first < line.size() && is_space(line[first]))
            ++first;
        if (first == line.size())
            continue;
        if (line[first] == '#') {
            if (line.substr(first, 2) == "#!") {
                if (auto p = species_pragma(line.substr(first), lineno)) {
                    if (pragma)
                        throw ParseError(lineno, first + 1, ParseErrorKind::syntax,
                                         "species pragma given twice");
                    pragma = std::move(p);
                }
            }
            continue;
        }

        LineParser lp(line, lineno);
        ParsedLine parsed = lp.reaction();
        last_line = lineno;

        auto build = [&](const ParsedComplex &pc) {
            Complex::Terms terms;
            for (const auto &[name, coeff] : pc.terms)
                terms[intern(name)] += coeff;
            return Complex(std::move(terms));
        };
        Complex lhs = build(parsed.lhs);
        Complex rhs = build(parsed.rhs);
        if (lhs == rhs)
            throw ParseError(lineno, parsed.column, ParseErrorKind::syntax,
                             "reactant and product are identical");
        if (!options.permissive)
            for (const auto &[species, coeff] : lhs.terms())
                if (rhs.contains(species))
                    throw ParseError(lineno, parsed.column, ParseErrorKind::syntax,
                                     "species '" + order[species] +
                                         "' on both sides breaks reaction form");

        if (parsed.reversible) {
            pairs.emplace_back(reactions.size(), reactions.size() + 1);
            reactions.push_back(Reaction{lhs, rhs, parsed.kf, std::nullopt});
            reactions.push_back(Reaction{rhs, lhs, parsed.kr, std::nullopt});
            reaction_line.push_back(lineno);
            reaction_line.push_back(lineno);
        } else {
            reactions.push_back(Reaction{lhs, rhs, parsed.k, std::nullopt});
            reaction_line.push_back(lineno);
        }
    }

    if (reactions.empty())
        throw ParseError(1, 1, ParseErrorKind::syntax, "no reactions in input");

    // Apply the row-order pragma: listed species first, the rest by first appearance.
    std::vector<std::size_t> remap(order.size());
    std::vector<std::string> names;
    if (pragma) {
        std::set<std::string> listed;
        for (const auto &name : pragma->names) {
            if (!listed.insert(name).second)
                throw ParseError(pragma->line, 1, ParseErrorKind::syntax,
                                 "species '" + name + "' listed twice in pragma");
            if (!index.count(name))
                throw ParseError(pragma->line, 1, ParseErrorKind::syntax,
                                 "species '" + name + "' is not used by any reaction");
            names.push_back(name);
        }
        for (const auto &name : order)
            if (!listed.count(name))
                names.push_back(name);
    } else {
        names = order;
    }
    for (std::size_t i = 0; i < names.size(); ++i)
        remap[index.at(names[i])] = i;
    for (auto &r : reactions) {
        for (auto *side : {&r.reactant, &r.product}) {
            Complex::Terms terms;
            for (const auto &[species, coeff] : side->terms())
                terms[remap[species]] = coeff;
            *side = Complex(std::move(terms));
        }
    }

    try {
        return Network(std::move(names), std::move(reactions), std::move(pairs), options);
    } catch (const ModelError &e) {
        throw ParseError(last_line, 1, ParseErrorKind::syntax, e.what());
    }
}

std::string format_double(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
}

namespace {

std::string complex_text(const Network &net, const Complex &c) {
    if (c.is_zero())
        return "0";
    std::string out;
    for (const auto &[i, coeff] : c.terms()) {
        if (!out.empty())
            out += " + ";
        if (coeff != 1)
            out += to_string(coeff);
        out += net.species_name(i);
    }
    return out;
}

} // namespace

std::string serialize_network(const Network &net) {
    std::vector<bool> seen(net.species_count(), false);
    std::vector<std::size_t> appearance;
    for (const auto &r : net.reactions())
        for (const auto *side : {&r.reactant, &r.product})
            for (const auto &[i, coeff] : side->terms())
                if (!seen[i]) {
                    seen[i] = true;
                    appearance.push_back(i);
                }
    bool natural = true;
    for (std::size_t i = 0; i < appearance.size(); ++i)
        natural = natural && appearance[i] == i;

    std::string out;
    if (!natural) {
        out += "#! species:";
        for (const auto &s : net.species())
            out += " " + s.name;
        out += '\n';
    }

    const auto &rs = net.reactions();
    for (std::size_t j = 0; j < rs.size(); ++j) {
        const auto &r = rs[j];
        auto partner = net.reverse_partner(j);
        bool paired = partner && *partner == j + 1 &&
                      r.rate.has_value() == rs[j + 1].rate.has_value();
        out += complex_text(net, r.reactant);
        out += paired ? " <-> " : " -> ";
        out += complex_text(net, r.product);
        if (paired) {
            if (r.rate)
                out += " ; kf=" + format_double(*r.rate) + ", kr=" + format_double(*rs[j + 1].rate);
            ++j;
        } else if (r.rate) {
            out += " ; k=" + format_double(*r.rate);
        }
        out += '\n';
    }
    return out;
}

} // namespace crnsign
