#include "qbisect/graph.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>

#include "qbisect/errors.hpp"

namespace qbisect {

std::string to_string(Mode mode) { return mode == Mode::max ? "max" : "min"; }

int Assignment::popcount() const {
    int c = 0;
    for (auto b : bits) c += b;
    return c;
}

Assignment Assignment::complemented() const {
    Assignment out = *this;
    for (auto& b : out.bits) b ^= 1;
    return out;
}

std::uint64_t Assignment::code() const {
    std::uint64_t c = 0;
    for (auto b : bits) c = (c << 1) | b;
    return c;
}

Assignment Assignment::from_code(std::uint64_t code, int n) {
    Assignment a;
    a.bits.resize(n);
    for (int i = 0; i < n; ++i)
        a.bits[i] = static_cast<std::uint8_t>((code >> (n - 1 - i)) & 1u);
    return a;
}

std::uint64_t ConstraintVector::code() const {
    std::uint64_t c = 0;
    for (auto b : bits) c = (c << 1) | b;
    return c;
}

namespace {

bool is_comment_or_blank(const std::string& line) {
    for (char ch : line) {
        if (ch == '#') return true;
        if (!isspace(static_cast<unsigned char>(ch))) return false;
    }
    return true; // blank
}

// Strips a trailing '\r' so CRLF input parses like LF input.
std::string chomp(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

bool parse_two_ints(const std::string& line, long& a, long& b) {
    std::istringstream ss(line);
    std::string extra;
    if (!(ss >> a >> b)) return false;
    if (ss >> extra) return false;
    return true;
}

} // namespace

Graph parse_graph(std::istream& in) {
    Graph g;
    std::string line;
    long n = -1, m = -1;
    int line_no = 0;

    while (std::getline(in, line)) {
        ++line_no;
        line = chomp(line);
        if (is_comment_or_blank(line)) continue;
        if (!parse_two_ints(line, n, m))
            throw parse_error("line " + std::to_string(line_no) +
                              ": malformed header, expected \"n m\"");
        break;
    }
    if (n < 0)
        throw parse_error("empty input: missing \"n m\" header");
    if (n < 2 || n % 2 != 0)
        throw parse_error("vertex count must be a positive even integer, got " +
                          std::to_string(n));
    if (m < 1)
        throw parse_error("edge count must be at least 1, got " + std::to_string(m));
    if (m > n * (n - 1) / 2)
        throw parse_error("edge count " + std::to_string(m) +
                          " exceeds maximum " + std::to_string(n * (n - 1) / 2) +
                          " for a simple graph on " + std::to_string(n) + " vertices");

    g.n = static_cast<int>(n);
    g.edges.reserve(static_cast<size_t>(m));
    std::set<std::pair<int, int>> seen;

    while (std::getline(in, line)) {
        ++line_no;
        line = chomp(line);
        if (is_comment_or_blank(line)) continue;
        if (g.m() == m)
            throw parse_error("line " + std::to_string(line_no) +
                              ": edge count mismatch, more than " +
                              std::to_string(m) + " edge lines");
        long a, b;
        if (!parse_two_ints(line, a, b))
            throw parse_error("line " + std::to_string(line_no) +
                              ": malformed edge line, expected \"a b\"");
        if (a < 0 || a >= n || b < 0 || b >= n)
            throw parse_error("line " + std::to_string(line_no) +
                              ": vertex index out of range [0, " +
                              std::to_string(n - 1) + "]");
        if (a == b)
            throw parse_error("line " + std::to_string(line_no) + ": self-loop at vertex " +
                              std::to_string(a));
        const std::pair<int, int> key =
            std::minmax(static_cast<int>(a), static_cast<int>(b));
        if (!seen.insert(key).second)
            throw parse_error("line " + std::to_string(line_no) + ": duplicate edge (" +
                              std::to_string(a) + ", " + std::to_string(b) + ")");
        g.edges.emplace_back(static_cast<int>(a), static_cast<int>(b));
    }
    if (g.m() != m)
        throw parse_error("edge count mismatch: header says " + std::to_string(m) +
                          ", found " + std::to_string(g.m()) + " edge lines");
    return g;
}

Graph parse_graph(const std::string& text) {
    std::istringstream ss(text);
    return parse_graph(ss);
}

Graph parse_graph_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open graph file: " + path);
    return parse_graph(in);
}

std::string format_graph(const Graph& g) {
    std::ostringstream out;
    out << g.n << ' ' << g.m() << '\n';
    for (auto [a, b] : g.edges) out << a << ' ' << b << '\n';
    return out.str();
}

ConstraintVector evaluate_constraints(const Graph& g, const Assignment& x) {
    if (x.size() != g.n)
        throw feasibility_error("assignment length " + std::to_string(x.size()) +
                                " does not match vertex count " + std::to_string(g.n));
    ConstraintVector z;
    z.bits.resize(g.edges.size());
    for (size_t l = 0; l < g.edges.size(); ++l) {
        z.bits[l] = static_cast<std::uint8_t>(x.bits[g.edges[l].first] ^
                                              x.bits[g.edges[l].second]);
        z.ones += z.bits[l];
    }
    z.zeros = g.m() - z.ones;
    return z;
}

std::uint64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i) {
        r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
    }
    return r;
}

std::vector<Assignment> enumerate_balanced(int n, int cap) {
    if (n < 2 || n % 2 != 0)
        throw feasibility_error("balanced assignments need a positive even vertex count, got " +
                                std::to_string(n));
    if (n > cap)
        throw feasibility_error("vertex count " + std::to_string(n) +
                                " exceeds enumeration cap " + std::to_string(cap));
    std::vector<Assignment> out;
    out.reserve(binomial(n, n / 2));
    // Gosper's hack walks the n/2-subsets in ascending code order.
    const std::uint64_t limit = std::uint64_t{1} << n;
    std::uint64_t v = (std::uint64_t{1} << (n / 2)) - 1;
    while (v < limit) {
        out.push_back(Assignment::from_code(v, n));
        std::uint64_t t = v | (v - 1);
        v = (t + 1) | (((~t & (t + 1)) - 1) >> (std::countr_zero(v) + 1));
    }
    return out;
}

BisectionResult brute_force_bisection(const Graph& g, Mode mode, int cap) {
    if (g.n > cap)
        throw feasibility_error("vertex count " + std::to_string(g.n) +
                                " exceeds enumeration cap " + std::to_string(cap));

    // Edge masks over MSB-first codes; an edge is cut iff the masked bits
    // have odd parity.
    std::vector<std::uint64_t> masks;
    masks.reserve(g.edges.size());
    for (auto [a, b] : g.edges)
        masks.push_back((std::uint64_t{1} << (g.n - 1 - a)) |
                        (std::uint64_t{1} << (g.n - 1 - b)));

    const std::uint64_t limit = std::uint64_t{1} << g.n;
    std::uint64_t v = (std::uint64_t{1} << (g.n / 2)) - 1;
    bool have = false;
    std::uint64_t best_code = 0;
    int best = 0;
    while (v < limit) {
        int cut = 0;
        for (auto mask : masks) cut += std::popcount(v & mask) & 1;
        bool better = !have || (mode == Mode::max ? cut > best : cut < best);
        if (better) {
            have = true;
            best = cut;
            best_code = v;
        }
        std::uint64_t t = v | (v - 1);
        v = (t + 1) | (((~t & (t + 1)) - 1) >> (std::countr_zero(v) + 1));
    }

    BisectionResult res;
    res.assignment = Assignment::from_code(best_code, g.n);
    res.cut = best;
    res.optimal_value = best;
    res.is_optimal = true;
    return res;
}

} // namespace qbisect
