#ifndef MISINFO_PARSE_TREE_HPP
#define MISINFO_PARSE_TREE_HPP

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace misinfo {

/// A constituency tree node. Exactly one of children / terminal is populated.
struct ParseTree {
    std::string label;
    std::vector<ParseTree> children;
    std::optional<std::string> terminal;

    [[nodiscard]] bool is_preterminal() const { return terminal.has_value(); }

    friend bool operator==(const ParseTree &, const ParseTree &) = default;
};

/// Parses "(S (NP (NN tests)) (VB ran))". A nameless single-child wrapper
/// "( (S ...) )" as emitted by Treebank tools is unwrapped. Throws
/// ValidationError with a character offset on malformed input.
[[nodiscard]] ParseTree parse_bracketed(std::string_view text);

[[nodiscard]] std::string serialize(const ParseTree &tree);

/// (word, tag) pairs of the preterminals, left to right.
[[nodiscard]] std::vector<std::pair<std::string, std::string>> tagged_leaves(const ParseTree &tree);

inline constexpr std::string_view kRootSentinel = "ROOT";

struct ProductionFeature {
    std::string parent;
    std::string grandparent;
    std::vector<std::string> rhs;  // child labels, or the single terminal word
    bool lexical{false};           // rhs is a terminal word
    std::string rendered;          // "parent^grandparent→rhs", children joined by '_'
};

/// Renders one production. '\\', '^', '_' and the arrow inside labels and
/// words are backslash-escaped so distinct productions render distinctly.
[[nodiscard]] std::string render_production(std::string_view parent, std::string_view grandparent,
                                            const std::vector<std::string> &rhs);

/// One feature per node that has children or a terminal, in post-order.
[[nodiscard]] std::vector<ProductionFeature> extract_productions(const ParseTree &tree);

}  // namespace misinfo

#endif  // MISINFO_PARSE_TREE_HPP
