#include "crnsign/matrix.hpp"

#include <cctype>
#include <sstream>

namespace crnsign {

std::string to_string(const Rational &q) { return q.get_str(); }

Rational parse_rational(const std::string &text) {
    if (text.empty())
        throw std::invalid_argument("empty rational literal");
    std::size_t pos = 0;
    bool negative = false;
    if (text[pos] == '-' || text[pos] == '+') {
        negative = text[pos] == '-';
        ++pos;
    }
    auto digits = [&](std::size_t from) {
        std::size_t end = from;
        while (end < text.size() && std::isdigit(static_cast<unsigned char>(text[end])))
            ++end;
        return end;
    };
    std::size_t int_end = digits(pos);
    if (int_end == pos)
        throw std::invalid_argument("malformed rational literal: " + text);
    Rational value(mpz_class(text.substr(pos, int_end - pos)));
    if (int_end == text.size()) {
        // plain integer
    } else if (text[int_end] == '/') {
        std::size_t den_end = digits(int_end + 1);
        if (den_end == int_end + 1 || den_end != text.size())
            throw std::invalid_argument("malformed rational literal: " + text);
        mpz_class den(text.substr(int_end + 1, den_end - int_end - 1));
        if (den == 0)
            throw std::invalid_argument("zero denominator: " + text);
        value /= Rational(den);
    } else if (text[int_end] == '.') {
        std::size_t frac_end = digits(int_end + 1);
        if (frac_end == int_end + 1 || frac_end != text.size())
            throw std::invalid_argument("malformed rational literal: " + text);
        std::string frac = text.substr(int_end + 1, frac_end - int_end - 1);
        mpz_class scale = 1;
        for (std::size_t i = 0; i < frac.size(); ++i)
            scale *= 10;
        value += Rational(mpz_class(frac), scale);
    } else {
        throw std::invalid_argument("malformed rational literal: " + text);
    }
    value.canonicalize();
    return negative ? Rational(-value) : value;
}

RationalMatrix operator*(const RationalMatrix &a, const RationalMatrix &b) {
    if (a.cols() != b.rows())
        throw std::invalid_argument("matrix product: inner dimensions differ");
    RationalMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            if (sgn(a(i, k)) == 0)
                continue;
            for (std::size_t j = 0; j < b.cols(); ++j)
                out(i, j) += a(i, k) * b(k, j);
        }
    return out;
}

RationalVector operator*(const RationalMatrix &a, const RationalVector &v) {
    if (a.cols() != v.size())
        throw std::invalid_argument("matrix-vector product: dimension mismatch");
    RationalVector out(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            out[i] += a(i, j) * v[j];
    return out;
}

RationalMatrix identity_matrix(std::size_t n) {
    RationalMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        m(i, i) = 1;
    return m;
}

RationalMatrix rational_matrix(std::initializer_list<std::initializer_list<long>> rows) {
    std::size_t r = rows.size();
    std::size_t c = r ? rows.begin()->size() : 0;
    RationalMatrix m(r, c);
    std::size_t i = 0;
    for (const auto &row : rows) {
        if (row.size() != c)
            throw std::invalid_argument("ragged matrix initializer");
        std::size_t j = 0;
        for (long x : row)
            m(i, j++) = Rational(x);
        ++i;
    }
    return m;
}

std::string to_string(const RationalMatrix &m) {
    std::ostringstream os;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        os << '[';
        for (std::size_t j = 0; j < m.cols(); ++j)
            os << (j ? " " : "") << to_string(m(i, j));
        os << "]\n";
    }
    return os.str();
}

} // namespace crnsign
