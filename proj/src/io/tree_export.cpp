#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include "iclh/io.hpp"

namespace iclh {
namespace {

std::string number(double v) {
    std::ostringstream s;
    s << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
    return s.str();
}

std::string leaf_name(const HierarchyPath& path, int id) {
    const char* prefix = path.nodes[static_cast<std::size_t>(id)].side == 0 ? "C" : "D";
    return prefix + std::to_string(id);
}

void newick_node(std::ostream& out, const HierarchyPath& path, int id, double parent_height) {
    const TreeNode& n = path.nodes[static_cast<std::size_t>(id)];
    if (n.is_leaf()) {
        out << leaf_name(path, id);
    } else {
        out << '(';
        newick_node(out, path, n.left, n.height);
        out << ',';
        newick_node(out, path, n.right, n.height);
        out << ")n" << id;
    }
    out << ':' << number(parent_height - n.height);
}

}  // namespace

void write_dot(std::ostream& out, const HierarchyPath& path) {
    out << "digraph hierarchy {\n";
    out << "  node [shape=box];\n";
    for (std::size_t id = 0; id < path.nodes.size(); ++id) {
        const TreeNode& n = path.nodes[id];
        const int i = static_cast<int>(id);
        out << "  n" << id << " [label=\"" << (n.is_leaf() ? leaf_name(path, i) : "n" + std::to_string(id))
            << "\", side=" << n.side << ", neglog_alpha=" << number(n.height) << "];\n";
    }
    for (std::size_t id = 0; id < path.nodes.size(); ++id) {
        const TreeNode& n = path.nodes[id];
        if (n.is_leaf()) continue;
        out << "  n" << id << " -> n" << n.left << ";\n";
        out << "  n" << id << " -> n" << n.right << ";\n";
    }
    out << "}\n";
}

void write_newick(std::ostream& out, const HierarchyPath& path) {
    for (const int root : path.roots) {
        const TreeNode& n = path.nodes[static_cast<std::size_t>(root)];
        if (n.is_leaf()) {
            out << leaf_name(path, root);
        } else {
            out << '(';
            newick_node(out, path, n.left, n.height);
            out << ',';
            newick_node(out, path, n.right, n.height);
            out << ")n" << root;
        }
        out << ";\n";
    }
}

}  // namespace iclh
