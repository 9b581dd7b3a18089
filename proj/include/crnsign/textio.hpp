#pragma once

#include "crnsign/model.hpp"

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace crnsign {

/// Plain-text network format, one reaction per line:
///
///     # comment
///     #! species: A B C        (optional row-order pragma; still a comment)
///     A + B -> F
///     C + E <-> 2D ; kf=1, kr=2
///     0 -> X ; k=0.5
///
/// `<->` expands to a forward and a reverse reaction, in that order.
/// Coefficients are positive integers, decimals or p/q fractions.
enum class ParseErrorKind { syntax, duplicate_rate, bad_coefficient, empty_side_both };

const char *to_string(ParseErrorKind kind);

class ParseError : public std::runtime_error {
  public:
    ParseError(std::size_t line, std::size_t column, ParseErrorKind kind,
               const std::string &message);

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }
    ParseErrorKind kind() const { return kind_; }
    const std::string &detail() const { return detail_; }

  private:
    std::size_t line_;
    std::size_t column_;
    ParseErrorKind kind_;
    std::string detail_;
};

/// Throws ParseError on the first violation; never anything else.
Network parse_network(std::string_view text, NetworkOptions options = {});

/// Inverse of parse_network up to structural equality. Emits the species
/// pragma only when the species order differs from first appearance.
std::string serialize_network(const Network &net);

/// Shortest decimal text that reads back to the same double.
std::string format_double(double value);

/// Short grammar summary shown in CLI usage errors.
extern const char *const kGrammarHelp;

} // namespace crnsign
