#include "crnsign/signcheck.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>
#include <tuple>

namespace crnsign {

char to_char(Sign s) {
    switch (s) {
    case Sign::plus:
        return '+';
    case Sign::minus:
        return '-';
    default:
        return '0';
    }
}

char to_char(SignStatus s) {
    switch (s) {
    case SignStatus::plus:
        return '+';
    case SignStatus::minus:
        return '-';
    case SignStatus::ambiguous:
        return '?';
    default:
        return '0';
    }
}

SignMatrix sign_pattern(const RationalMatrix &m) {
    SignMatrix out(m.rows(), m.cols(), Sign::zero);
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            out(i, j) = static_cast<Sign>(sgn(m(i, j)));
    return out;
}

namespace {

struct TermSigns {
    bool plus = false;
    bool minus = false;

    void add(int s) {
        if (s > 0)
            plus = true;
        else if (s < 0)
            minus = true;
    }
    SignStatus status() const {
        if (plus && minus)
            return SignStatus::ambiguous;
        if (plus)
            return SignStatus::plus;
        if (minus)
            return SignStatus::minus;
        return SignStatus::zero;
    }
};

} // namespace

StatusMatrix hermitian_square_status(const SignMatrix &a) {
    const std::size_t n = a.rows();
    StatusMatrix out(n, n, SignStatus::zero);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            TermSigns t;
            for (std::size_t k = 0; k < a.cols(); ++k)
                t.add(static_cast<int>(a(i, k)) * static_cast<int>(a(j, k)));
            out(i, j) = t.status();
        }
    return out;
}

std::vector<BadClass> find_bad_submatrices(const RationalMatrix &s) {
    const std::size_t d = s.rows(), dp = s.cols();
    std::vector<BadSubmatrix> all;
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i + 1; j < d; ++j)
            for (std::size_t k = 0; k < dp; ++k)
                for (std::size_t l = k + 1; l < dp; ++l) {
                    const int e[4] = {sgn(s(i, k)), sgn(s(i, l)), sgn(s(j, k)), sgn(s(j, l))};
                    int pos = 0, neg = 0, at = -1;
                    for (int t = 0; t < 4; ++t) {
                        if (e[t] > 0) {
                            ++pos;
                            at = t;
                        } else if (e[t] < 0)
                            ++neg;
                    }
                    if (pos != 1 || neg != 3)
                        continue;
                    BadSubmatrix b;
                    b.rows = {i, j};
                    b.cols = {k, l};
                    b.positive_at = {at < 2 ? i : j, at % 2 == 0 ? k : l};
                    all.push_back(b);
                }

    std::vector<BadClass> classes;
    for (const auto &b : all) {
        auto it = std::find_if(classes.begin(), classes.end(), [&](const BadClass &c) {
            return c.positive_entry == b.positive_at;
        });
        if (it == classes.end()) {
            classes.push_back({b.positive_at, {}});
            it = classes.end() - 1;
        }
        it->members.push_back(b);
    }
    std::sort(classes.begin(), classes.end(), [](const BadClass &a, const BadClass &b) {
        return std::tie(a.positive_entry.col, a.positive_entry.row) <
               std::tie(b.positive_entry.col, b.positive_entry.row);
    });
    return classes;
}

StatusMatrix jacobian_sign_status(const RationalMatrix &s) {
    const std::size_t d = s.rows();
    StatusMatrix out(d, d, SignStatus::zero);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            TermSigns t;
            for (std::size_t k = 0; k < s.cols(); ++k)
                if (sgn(s(j, k)) < 0)
                    t.add(sgn(s(i, k)));
            out(i, j) = t.status();
        }
    return out;
}

StatusMatrix jacobian_sign_status(const Network &net) {
    if (!net.in_reaction_form())
        throw ModelError("network is not in reaction form; Jacobian sign status not applicable");
    return jacobian_sign_status(stoichiometric_matrix(net));
}

std::size_t count_ambiguous(const StatusMatrix &m) {
    std::size_t n = 0;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (m(i, j) == SignStatus::ambiguous)
                ++n;
    return n;
}

ConverseReport sample_jacobian_signs(const RationalMatrix &s, std::size_t samples,
                                     std::uint64_t seed) {
    const std::size_t d = s.rows(), dp = s.cols();
    ConverseReport rep;
    rep.samples = samples;
    rep.seed = seed;
    rep.observed = Matrix<ObservedSigns>(d, d);

    std::mt19937_64 rng(seed);
    // log-uniform magnitudes over four decades
    std::uniform_real_distribution<double> expo(-2.0, 2.0);
    auto magnitude = [&] { return std::pow(10.0, expo(rng)); };

    for (std::size_t n = 0; n < samples; ++n) {
        Eigen::MatrixXd sm(d, dp), dv = Eigen::MatrixXd::Zero(dp, d);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t k = 0; k < dp; ++k) {
                int sg = sgn(s(i, k));
                sm(i, k) = sg == 0 ? 0.0 : sg * magnitude();
                if (sg < 0)
                    dv(k, i) = magnitude();
            }
        Eigen::MatrixXd j = sm * dv;
        for (std::size_t a = 0; a < d; ++a)
            for (std::size_t b = 0; b < d; ++b) {
                if (j(a, b) > 0)
                    rep.observed(a, b).plus = true;
                else if (j(a, b) < 0)
                    rep.observed(a, b).minus = true;
            }
    }

    StatusMatrix status = jacobian_sign_status(s);
    for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < d; ++b) {
            const auto &o = rep.observed(a, b);
            switch (status(a, b)) {
            case SignStatus::ambiguous:
                if (!(o.plus && o.minus))
                    rep.unconfirmed.push_back({a, b});
                break;
            case SignStatus::plus:
                if (o.minus)
                    rep.contradicted.push_back({a, b});
                break;
            case SignStatus::minus:
                if (o.plus)
                    rep.contradicted.push_back({a, b});
                break;
            case SignStatus::zero:
                if (o.plus || o.minus)
                    rep.contradicted.push_back({a, b});
                break;
            }
        }
    return rep;
}

} // namespace crnsign
