#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace qbisect {

enum class Mode { max, min };

std::string to_string(Mode mode);

// Undirected, unweighted, simple graph. Edge order is meaningful: edge l
// defines constraint bit l, fixed across every backend.
struct Graph {
    int n = 0;                              // vertex count, even, >= 2
    std::vector<std::pair<int, int>> edges; // m pairs (a, b), a != b

    int m() const { return static_cast<int>(edges.size()); }
};

// One side assignment per vertex; bit a is the side of vertex a.
struct Assignment {
    std::vector<std::uint8_t> bits;

    int size() const { return static_cast<int>(bits.size()); }
    int popcount() const;
    bool balanced() const { return popcount() * 2 == size(); }
    Assignment complemented() const;

    // Vertex 0 is the most significant bit, so ascending codes sort
    // assignments the same way the dense backend orders basis states.
    std::uint64_t code() const;
    static Assignment from_code(std::uint64_t code, int n);

    bool operator==(const Assignment&) const = default;
};

// Per-edge XOR of the endpoint bits; popcount is the cut size.
struct ConstraintVector {
    std::vector<std::uint8_t> bits;
    int ones = 0;
    int zeros = 0;

    std::uint64_t code() const;
    bool operator==(const ConstraintVector&) const = default;
};

struct BisectionResult {
    Assignment assignment;
    int cut = 0;
    int optimal_value = 0;
    bool is_optimal = false;
};

inline constexpr int kEnumerationCap = 20; // C(20,10) = 184756 branches

// Reads the text edge-list format: '#' comment lines, a "n m" header, then
// exactly m lines "a b". Throws parse_error with a distinct message per
// defect (malformed line, odd n, index out of range, duplicate edge,
// self-loop, edge count mismatch).
Graph parse_graph(std::istream& in);
Graph parse_graph(const std::string& text);
Graph parse_graph_file(const std::string& path);

// Canonical text form; parse_graph(format_graph(g)) reproduces g exactly.
std::string format_graph(const Graph& g);

ConstraintVector evaluate_constraints(const Graph& g, const Assignment& x);

// All C(n, n/2) balanced assignments in ascending code order.
std::vector<Assignment> enumerate_balanced(int n, int cap = kEnumerationCap);

// Exact optimum by enumeration; ties broken by smallest assignment code.
BisectionResult brute_force_bisection(const Graph& g, Mode mode,
                                      int cap = kEnumerationCap);

std::uint64_t binomial(int n, int k);

} // namespace qbisect
