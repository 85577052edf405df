#include "misinfo/parse_tree.hpp"

#include "misinfo/error.hpp"

#include <fmt/format.h>

#include <cctype>

namespace misinfo {

namespace {

constexpr std::string_view kArrow = "\xE2\x86\x92";  // U+2192

class BracketParser {
  public:
    explicit BracketParser(std::string_view text) : text_(text) {}

    ParseTree parse() {
        skip_space();
        if (at_end()) {
            throw ValidationError("empty tree string");
        }
        auto node = parse_node(true);
        skip_space();
        if (!at_end()) {
            if (text_[pos_] == ')') {
                throw ValidationError(fmt::format("unbalanced at offset {}", pos_));
            }
            throw ValidationError(fmt::format("trailing characters at offset {}", pos_));
        }
        if (node.label.empty()) {
            if (node.children.size() != 1) {
                throw ValidationError("unlabeled root must wrap exactly one tree");
            }
            ParseTree inner = std::move(node.children.front());
            return inner;
        }
        return node;
    }

  private:
    [[nodiscard]] bool at_end() const { return pos_ >= text_.size(); }

    void skip_space() {
        while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_])) != 0) {
            ++pos_;
        }
    }

    [[nodiscard]] bool is_atom_char(char c) const {
        return c != '(' && c != ')' && std::isspace(static_cast<unsigned char>(c)) == 0;
    }

    std::string read_atom() {
        const auto start = pos_;
        while (!at_end() && is_atom_char(text_[pos_])) {
            ++pos_;
        }
        return std::string(text_.substr(start, pos_ - start));
    }

    [[noreturn]] void unbalanced() const { throw ValidationError(fmt::format("unbalanced at offset {}", pos_)); }

    ParseTree parse_node(bool is_root) {
        const auto open = pos_;
        if (at_end()) {
            unbalanced();
        }
        if (text_[pos_] != '(') {
            throw ValidationError(fmt::format("expected '(' at offset {}", pos_));
        }
        ++pos_;
        skip_space();
        ParseTree node;
        node.label = read_atom();
        if (node.label.empty() && !is_root) {
            throw ValidationError(fmt::format("empty label at offset {}", open));
        }
        skip_space();
        if (at_end()) {
            unbalanced();
        }
        if (text_[pos_] == ')') {
            throw ValidationError(fmt::format("empty node at offset {}", open));
        }
        if (text_[pos_] == '(') {
            while (true) {
                skip_space();
                if (at_end()) {
                    unbalanced();
                }
                if (text_[pos_] == ')') {
                    ++pos_;
                    break;
                }
                if (text_[pos_] != '(') {
                    throw ValidationError(fmt::format("node mixes children and a terminal at offset {}", pos_));
                }
                node.children.push_back(parse_node(false));
            }
            return node;
        }
        node.terminal = read_atom();
        skip_space();
        if (at_end()) {
            unbalanced();
        }
        if (text_[pos_] != ')') {
            throw ValidationError(fmt::format("node mixes a terminal and further content at offset {}", pos_));
        }
        ++pos_;
        return node;
    }

    std::string_view text_;
    std::size_t pos_{0};
};

void serialize_into(const ParseTree &tree, std::string &out) {
    out.push_back('(');
    out += tree.label;
    if (tree.terminal) {
        out.push_back(' ');
        out += *tree.terminal;
    }
    for (const auto &child : tree.children) {
        out.push_back(' ');
        serialize_into(child, out);
    }
    out.push_back(')');
}

std::string escape_component(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (c == '\\' || c == '^' || c == '_') {
            out.push_back('\\');
            out.push_back(c);
        } else if (text.substr(i).starts_with(kArrow)) {
            out.push_back('\\');
            out += kArrow;
            i += kArrow.size() - 1;
        } else {
            out.push_back(c);
        }
    }
    return out;
}

void collect(const ParseTree &node, std::string_view grandparent, std::vector<ProductionFeature> &out) {
    for (const auto &child : node.children) {
        collect(child, node.label, out);
    }
    ProductionFeature feature;
    feature.parent = node.label;
    feature.grandparent = std::string(grandparent);
    if (node.terminal) {
        feature.rhs.push_back(*node.terminal);
        feature.lexical = true;
    } else {
        feature.rhs.reserve(node.children.size());
        for (const auto &child : node.children) {
            feature.rhs.push_back(child.label);
        }
    }
    feature.rendered = render_production(feature.parent, feature.grandparent, feature.rhs);
    out.push_back(std::move(feature));
}

void leaves_into(const ParseTree &node, std::vector<std::pair<std::string, std::string>> &out) {
    if (node.terminal) {
        out.emplace_back(*node.terminal, node.label);
        return;
    }
    for (const auto &child : node.children) {
        leaves_into(child, out);
    }
}

}  // namespace

ParseTree parse_bracketed(std::string_view text) { return BracketParser(text).parse(); }

std::string serialize(const ParseTree &tree) {
    std::string out;
    serialize_into(tree, out);
    return out;
}

std::vector<std::pair<std::string, std::string>> tagged_leaves(const ParseTree &tree) {
    std::vector<std::pair<std::string, std::string>> out;
    leaves_into(tree, out);
    return out;
}

std::string render_production(std::string_view parent, std::string_view grandparent,
                              const std::vector<std::string> &rhs) {
    std::string out = escape_component(parent);
    out.push_back('^');
    out += escape_component(grandparent);
    out += kArrow;
    for (std::size_t i = 0; i < rhs.size(); ++i) {
        if (i > 0) {
            out.push_back('_');
        }
        out += escape_component(rhs[i]);
    }
    return out;
}

std::vector<ProductionFeature> extract_productions(const ParseTree &tree) {
    std::vector<ProductionFeature> out;
    collect(tree, kRootSentinel, out);
    return out;
}

}  // namespace misinfo
