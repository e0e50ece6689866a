// Finite-field arithmetic over F_2 and F_256, plus dense matrix rank.
#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace rlncoff::gf {

using Element = std::uint8_t;

// F_2 or F_256. For F_256 the representation is F_2[x]/(poly) and all
// products go through log/antilog tables built at construction. The tables
// are immutable afterwards, so a Field can be shared freely across threads.
class Field {
public:
    static constexpr std::uint16_t kDefaultPoly = 0x11B;  // x^8+x^4+x^3+x+1

    explicit Field(unsigned order, std::uint16_t poly = kDefaultPoly)
        : order_(order), poly_(poly) {
        if (order != 2 && order != 256)
            throw std::domain_error("field order must be 2 or 256, got " +
                                    std::to_string(order));
        if (order == 256) {
            if ((poly & 0x100u) == 0 || poly > 0x1FFu)
                throw std::domain_error("reduction polynomial must have degree 8");
            build_tables();
        }
    }

    unsigned order() const { return order_; }
    std::uint16_t reduction_poly() const { return poly_; }

    bool contains(Element v) const { return order_ == 256 || v < 2; }

    void check_element(Element v) const {
        if (!contains(v))
            throw std::domain_error("value " + std::to_string(v) +
                                    " is not an element of F_" + std::to_string(order_));
    }

    // Addition is XOR in characteristic 2; it is its own inverse.
    Element add(Element a, Element b) const {
        check_element(a);
        check_element(b);
        return a ^ b;
    }

    Element mul(Element a, Element b) const {
        check_element(a);
        check_element(b);
        if (order_ == 2) return a & b;
        if (a == 0 || b == 0) return 0;
        return exp_[std::size_t(log_[a]) + log_[b]];
    }

    Element inv(Element a) const {
        check_element(a);
        if (a == 0) throw std::domain_error("zero has no multiplicative inverse");
        if (order_ == 2) return 1;
        return exp_[255 - log_[a]];
    }

    // Carry-less multiply reduced modulo poly. Table-free; used to build the
    // tables and exposed for direct use at alternate polynomials.
    static Element mul_slow(Element a, Element b, std::uint16_t poly) {
        unsigned acc = 0;
        for (unsigned bit = 0; bit < 8; ++bit)
            if (b >> bit & 1u) acc ^= unsigned(a) << bit;
        for (int bit = 14; bit >= 8; --bit)
            if (acc >> bit & 1u) acc ^= unsigned(poly) << (bit - 8);
        return Element(acc);
    }

private:
    void build_tables() {
        // Find a generator of the multiplicative group. If poly is not
        // irreducible no element has order 255 and construction fails.
        for (unsigned g = 2; g < 256; ++g) {
            unsigned order = 0;
            Element e = 1;
            for (unsigned i = 1; i <= 255; ++i) {
                e = mul_slow(e, Element(g), poly_);
                if (e == 1) { order = i; break; }
            }
            if (order == 255) {
                Element x = 1;
                for (unsigned i = 0; i < 255; ++i) {
                    exp_[i] = x;
                    log_[x] = std::uint8_t(i);
                    x = mul_slow(x, Element(g), poly_);
                }
                for (unsigned i = 255; i < 510; ++i) exp_[i] = exp_[i - 255];
                log_[0] = 0;  // never consulted
                return;
            }
        }
        throw std::domain_error("reduction polynomial is not irreducible");
    }

    unsigned order_;
    std::uint16_t poly_;
    std::array<std::uint8_t, 256> log_{};
    std::array<Element, 510> exp_{};
};

// Dense row-major matrix of field elements.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<Element> entries;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), entries(r * c, 0) {}

    Element& at(std::size_t r, std::size_t c) { return entries[r * cols + c]; }
    Element at(std::size_t r, std::size_t c) const { return entries[r * cols + c]; }
};

namespace detail {

inline std::size_t rank_binary(const Matrix& m) {
    const std::size_t words = (m.cols + 63) / 64;
    std::vector<std::uint64_t> rows(m.rows * words, 0);
    for (std::size_t r = 0; r < m.rows; ++r)
        for (std::size_t c = 0; c < m.cols; ++c)
            if (m.at(r, c)) rows[r * words + c / 64] |= std::uint64_t(1) << (c % 64);

    // Incremental elimination: reduce each row by the pivots found so far.
    std::vector<std::size_t> pivot_row(m.cols, SIZE_MAX);
    std::size_t rank = 0;
    std::vector<std::uint64_t> work(words);
    for (std::size_t r = 0; r < m.rows; ++r) {
        std::copy_n(&rows[r * words], words, work.begin());
        for (std::size_t wi = 0; wi < words; ++wi) {
            while (work[wi] != 0) {
                const std::size_t col = wi * 64 + std::size_t(std::countr_zero(work[wi]));
                const std::size_t pr = pivot_row[col];
                if (pr == SIZE_MAX) {
                    std::copy_n(work.begin(), words, &rows[rank * words]);
                    pivot_row[col] = rank;
                    ++rank;
                    goto next_row;
                }
                for (std::size_t k = wi; k < words; ++k) work[k] ^= rows[pr * words + k];
            }
        }
    next_row:;
    }
    return rank;
}

inline std::size_t rank_bytes(const Field& field, const Matrix& m) {
    std::vector<Element> a(m.entries);
    const std::size_t cols = m.cols;
    std::size_t rank = 0;
    for (std::size_t col = 0; col < cols && rank < m.rows; ++col) {
        std::size_t pivot = SIZE_MAX;
        for (std::size_t r = rank; r < m.rows; ++r)
            if (a[r * cols + col] != 0) { pivot = r; break; }
        if (pivot == SIZE_MAX) continue;
        for (std::size_t c = 0; c < cols; ++c)
            std::swap(a[rank * cols + c], a[pivot * cols + c]);
        const Element lead_inv = field.inv(a[rank * cols + col]);
        for (std::size_t r = rank + 1; r < m.rows; ++r) {
            const Element v = a[r * cols + col];
            if (v == 0) continue;
            const Element f = field.mul(v, lead_inv);
            for (std::size_t c = col; c < cols; ++c)
                a[r * cols + c] ^= field.mul(f, a[rank * cols + c]);
        }
        ++rank;
    }
    return rank;
}

}  // namespace detail

// Rank over F_q by Gaussian elimination. The input matrix is not modified.
inline std::size_t rank(const Field& field, const Matrix& m) {
    if (m.entries.size() != m.rows * m.cols)
        throw std::domain_error("matrix entry count does not match its shape");
    for (Element v : m.entries) field.check_element(v);
    if (m.rows == 0 || m.cols == 0) return 0;
    return field.order() == 2 ? detail::rank_binary(m) : detail::rank_bytes(field, m);
}

}  // namespace rlncoff::gf
