#include "crnsign/exactla.hpp"

#include <stdexcept>

namespace crnsign {

namespace {

using IntMatrix = Matrix<mpz_class>;

// Each row multiplied by the lcm of its denominators; rank and row space
// are unchanged.
IntMatrix integer_rows(const RationalMatrix &m) {
    IntMatrix out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        mpz_class l = 1;
        for (std::size_t j = 0; j < m.cols(); ++j)
            mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), m(i, j).get_den_mpz_t());
        for (std::size_t j = 0; j < m.cols(); ++j)
            out(i, j) = m(i, j).get_num() * (l / m(i, j).get_den());
    }
    return out;
}

void swap_rows(IntMatrix &a, std::size_t r1, std::size_t r2) {
    for (std::size_t j = 0; j < a.cols(); ++j)
        std::swap(a(r1, j), a(r2, j));
}

bool is_zero_vector(const RationalVector &v) {
    for (const auto &x : v)
        if (sgn(x) != 0)
            return false;
    return true;
}

} // namespace

std::size_t rank(const RationalMatrix &m) {
    IntMatrix a = integer_rows(m);
    const std::size_t rows = a.rows(), cols = a.cols();
    mpz_class prev = 1;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t p = r;
        while (p < rows && a(p, c) == 0)
            ++p;
        if (p == rows)
            continue;
        if (p != r)
            swap_rows(a, p, r);
        for (std::size_t i = r + 1; i < rows; ++i) {
            for (std::size_t j = c + 1; j < cols; ++j) {
                mpz_class t = a(r, c) * a(i, j) - a(i, c) * a(r, j);
                mpz_divexact(a(i, j).get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
            }
            a(i, c) = 0;
        }
        prev = a(r, c);
        ++r;
    }
    return r;
}

RationalMatrix rref(const RationalMatrix &m, std::vector<std::size_t> *pivots) {
    RationalMatrix a = m;
    const std::size_t rows = a.rows(), cols = a.cols();
    std::vector<std::size_t> piv;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t p = r;
        while (p < rows && sgn(a(p, c)) == 0)
            ++p;
        if (p == rows)
            continue;
        if (p != r)
            for (std::size_t j = 0; j < cols; ++j)
                std::swap(a(p, j), a(r, j));
        Rational inv = 1 / a(r, c);
        for (std::size_t j = c; j < cols; ++j)
            a(r, j) *= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || sgn(a(i, c)) == 0)
                continue;
            Rational f = a(i, c);
            for (std::size_t j = c; j < cols; ++j)
                a(i, j) -= f * a(r, j);
        }
        piv.push_back(c);
        ++r;
    }
    if (pivots)
        *pivots = std::move(piv);
    return a;
}

KernelBasis kernel_basis(const RationalMatrix &m, KernelSide side) {
    const RationalMatrix &src = side == KernelSide::right ? m : m.transpose();
    std::vector<std::size_t> pivots;
    RationalMatrix r = rref(src, &pivots);
    const std::size_t n = src.cols();
    std::vector<bool> is_pivot(n, false);
    for (auto c : pivots)
        is_pivot[c] = true;

    KernelBasis out;
    out.side = side;
    for (std::size_t free = 0; free < n; ++free) {
        if (is_pivot[free])
            continue;
        RationalVector v(n);
        v[free] = 1;
        for (std::size_t k = 0; k < pivots.size(); ++k)
            v[pivots[k]] = -r(k, free);
        out.vectors.push_back(std::move(v));
    }
    return out;
}

std::optional<RationalVector> solve_positive_null(const RationalMatrix &a) {
    // Substitute x = 1 + y with y >= 0: A y = -A 1, then phase 1 with one
    // artificial per row.
    const std::size_t m = a.rows(), n = a.cols();
    const std::size_t width = n + m + 1; // y | artificials | rhs
    RationalMatrix t(m + 1, width);      // last row holds reduced costs
    std::vector<std::size_t> basis(m);
    for (std::size_t i = 0; i < m; ++i) {
        Rational b = 0;
        for (std::size_t j = 0; j < n; ++j)
            b -= a(i, j);
        int flip = sgn(b) < 0 ? -1 : 1;
        for (std::size_t j = 0; j < n; ++j)
            t(i, j) = flip * a(i, j);
        t(i, n + i) = 1;
        t(i, width - 1) = flip * b;
        basis[i] = n + i;
    }
    // reduced costs for min sum(artificials): r_j = -sum_i t(i, j) on y
    for (std::size_t j = 0; j < width; ++j) {
        if (j >= n && j < n + m)
            continue;
        Rational s = 0;
        for (std::size_t i = 0; i < m; ++i)
            s += t(i, j);
        t(m, j) = -s;
    }

    while (true) {
        std::size_t enter = width;
        for (std::size_t j = 0; j + 1 < width; ++j)
            if (sgn(t(m, j)) < 0) {
                enter = j;
                break;
            }
        if (enter == width)
            break;
        std::size_t leave = m;
        Rational best;
        for (std::size_t i = 0; i < m; ++i) {
            if (sgn(t(i, enter)) <= 0)
                continue;
            Rational ratio = t(i, width - 1) / t(i, enter);
            if (leave == m || ratio < best || (ratio == best && basis[i] < basis[leave])) {
                leave = i;
                best = ratio;
            }
        }
        if (leave == m)
            break; // unbounded direction cannot occur in phase 1; objective is >= 0
        Rational piv = t(leave, enter);
        for (std::size_t j = 0; j < width; ++j)
            t(leave, j) /= piv;
        for (std::size_t i = 0; i <= m; ++i) {
            if (i == leave || sgn(t(i, enter)) == 0)
                continue;
            Rational f = t(i, enter);
            for (std::size_t j = 0; j < width; ++j)
                t(i, j) -= f * t(leave, j);
        }
        basis[leave] = enter;
    }

    // objective value = -t(m, rhs)
    if (sgn(t(m, width - 1)) != 0)
        return std::nullopt;
    RationalVector x(n, Rational(1));
    for (std::size_t i = 0; i < m; ++i)
        if (basis[i] < n)
            x[basis[i]] += t(i, width - 1);
    return x;
}

ConservationResult is_conserving(const RationalMatrix &s) {
    ConservationResult out;
    out.witness = solve_positive_null(s.transpose());
    out.conserving = out.witness.has_value();
    return out;
}

ConservationResult positive_right_kernel(const RationalMatrix &s) {
    ConservationResult out;
    out.witness = solve_positive_null(s);
    out.conserving = out.witness.has_value();
    return out;
}

bool same_span(const std::vector<RationalVector> &a, const std::vector<RationalVector> &b,
               std::size_t dim) {
    auto stack = [dim](const std::vector<RationalVector> &vs) {
        RationalMatrix m(vs.size(), dim);
        for (std::size_t i = 0; i < vs.size(); ++i) {
            if (vs[i].size() != dim)
                throw std::invalid_argument("same_span: vector length mismatch");
            for (std::size_t j = 0; j < dim; ++j)
                m(i, j) = vs[i][j];
        }
        return m;
    };
    std::vector<RationalVector> both = a;
    both.insert(both.end(), b.begin(), b.end());
    std::size_t ra = a.empty() ? 0 : rank(stack(a));
    std::size_t rb = b.empty() ? 0 : rank(stack(b));
    std::size_t rab = both.empty() ? 0 : rank(stack(both));
    return ra == rb && rb == rab;
}

bool kernel_correspondence_check(const RationalMatrix &s, const RationalMatrix &s_check,
                                 FixLocation at) {
    const std::size_t d = s.rows(), dp = s.cols();
    if (s_check.rows() != d + 1 || s_check.cols() != dp + 1)
        throw std::invalid_argument("fixed matrix must have exactly one extra row and column");
    if (at.species >= d || at.column >= dp)
        throw std::invalid_argument("fix location outside the original matrix");
    const Rational &moved = s(at.species, at.column);
    if (sgn(moved) <= 0)
        throw std::invalid_argument("fix location does not hold a positive entry");

    // right kernels: v -> (v, v_l)
    KernelBasis k = kernel_basis(s, KernelSide::right);
    KernelBasis kc = kernel_basis(s_check, KernelSide::right);
    if (k.dimension() != kc.dimension())
        return false;
    for (const auto &v : k.vectors) {
        RationalVector padded = v;
        padded.push_back(v[at.column]);
        if (!is_zero_vector(s_check * padded))
            return false;
    }
    for (const auto &vc : kc.vectors) {
        if (vc[dp] != vc[at.column])
            return false;
        RationalVector head(vc.begin(), vc.begin() + static_cast<std::ptrdiff_t>(dp));
        if (!is_zero_vector(s * head))
            return false;
    }

    // left kernels: w -> (w, S_ql w_q)
    RationalMatrix st = s.transpose(), sct = s_check.transpose();
    KernelBasis w = kernel_basis(s, KernelSide::left);
    KernelBasis wc = kernel_basis(s_check, KernelSide::left);
    if (w.dimension() != wc.dimension())
        return false;
    for (const auto &v : w.vectors) {
        RationalVector padded = v;
        padded.push_back(moved * v[at.species]);
        if (!is_zero_vector(sct * padded))
            return false;
    }
    for (const auto &vc : wc.vectors) {
        if (vc[d] != moved * vc[at.species])
            return false;
        RationalVector head(vc.begin(), vc.begin() + static_cast<std::ptrdiff_t>(d));
        if (!is_zero_vector(st * head))
            return false;
    }

    // strict positivity is preserved in both directions
    if (positive_right_kernel(s).conserving != positive_right_kernel(s_check).conserving)
        return false;
    if (is_conserving(s).conserving != is_conserving(s_check).conserving)
        return false;
    return true;
}

} // namespace crnsign
