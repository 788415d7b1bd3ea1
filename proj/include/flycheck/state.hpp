#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace flycheck {

/// A bounded integer or boolean state variable. Booleans use the range [0..1].
struct VariableDecl {
    std::string name;
    std::int32_t lower = 0;
    std::int32_t upper = 0;
    bool is_bool = false;

    bool operator==(const VariableDecl&) const = default;
};

/// The ordered set of variables every state of a model assigns.
///
/// Declarations are kept sorted by name, so a valuation is always an ordered
/// list of (name, value) entries. The layout also fixes the width of each
/// variable in the canonical key encoding.
class VariableLayout {
public:
    explicit VariableLayout(std::vector<VariableDecl> decls);

    std::span<const VariableDecl> variables() const { return decls_; }
    std::size_t size() const { return decls_.size(); }
    const VariableDecl& operator[](std::size_t i) const { return decls_[i]; }
    std::optional<std::size_t> index_of(std::string_view name) const;

    /// Bytes used by variable `i` in a StateKey.
    std::size_t key_width(std::size_t i) const { return widths_[i]; }
    std::size_t key_size() const { return key_size_; }

    bool operator==(const VariableLayout& other) const { return decls_ == other.decls_; }

private:
    std::vector<VariableDecl> decls_;
    std::vector<std::uint8_t> widths_;
    std::size_t key_size_ = 0;
};

using LayoutPtr = std::shared_ptr<const VariableLayout>;

/// Immutable assignment of a value to every variable of a layout.
class StateValuation {
public:
    /// Throws ModelEvaluationError when a value lies outside its declared bounds.
    StateValuation(LayoutPtr layout, std::vector<std::int32_t> values);

    const VariableLayout& layout() const { return *layout_; }
    const LayoutPtr& layout_ptr() const { return layout_; }
    std::span<const std::int32_t> values() const { return values_; }
    std::int32_t operator[](std::size_t i) const { return values_[i]; }

    /// Value of the named variable; throws std::out_of_range if undeclared.
    std::int32_t value(std::string_view name) const;

    /// (name, value) pairs in name order.
    std::vector<std::pair<std::string, std::int32_t>> entries() const;

    /// Human-readable form, e.g. `(p1=0,x=true)`.
    std::string to_string() const;

    bool operator==(const StateValuation& other) const { return values_ == other.values_; }

private:
    LayoutPtr layout_;
    std::vector<std::int32_t> values_;
};

/// Canonical byte encoding of a valuation; the identity of a state.
class StateKey {
public:
    StateKey() = default;
    explicit StateKey(std::string bytes) : bytes_(std::move(bytes)) {}

    const std::string& bytes() const { return bytes_; }

    auto operator<=>(const StateKey&) const = default;
    bool operator==(const StateKey&) const = default;

private:
    std::string bytes_;
};

StateKey canonical_key(const StateValuation& s);

/// Inverse of canonical_key for keys produced under `layout`.
StateValuation decode_key(const LayoutPtr& layout, const StateKey& key);

enum class Comparison { eq, ne, lt, le, gt, ge };

const char* to_string(Comparison op);
bool compare(std::int64_t lhs, Comparison op, std::int64_t rhs);

/// Inline atom `(variable op value)`, registered by front-ends as a synthetic label.
struct InlinePredicate {
    std::string variable;
    Comparison op = Comparison::eq;
    std::int32_t value = 0;
    bool boolean_literal = false;

    bool operator==(const InlinePredicate&) const = default;
};

/// Atomic proposition. Model labels carry only a name; inline comparisons
/// also carry their predicate and use its printed text as name.
struct AtomId {
    std::string name;
    std::optional<InlinePredicate> predicate;

    static AtomId label(std::string name) { return AtomId{std::move(name), std::nullopt}; }
    static AtomId inline_predicate(InlinePredicate p);

    bool is_inline() const { return predicate.has_value(); }
    bool operator==(const AtomId&) const = default;
};

struct Transition {
    StateValuation target;
    double prob;
};

/// One-step successor distribution, duplicates merged, sorted by target key.
struct TransitionList {
    std::vector<Transition> items;
    /// Set when the model had no enabled behaviour and a self-loop was injected.
    bool deadlock = false;
};

inline constexpr double kDistributionTolerance = 1e-9;

/// Merges duplicate targets, sorts by StateKey and validates positivity and
/// normalisation. Throws ModelEvaluationError on a malformed distribution.
TransitionList make_transition_list(std::vector<Transition> raw, bool deadlock = false);

/// The semantics-parametric interface consumed by the checkers: an initial
/// state, the one-step distribution `next` and the labelling `lab_eval`.
///
/// Implementations are immutable after construction; all methods are pure.
class ModelSemantics {
public:
    virtual ~ModelSemantics() = default;

    virtual const LayoutPtr& layout() const = 0;
    virtual StateValuation initial_state() const = 0;
    virtual TransitionList next(const StateValuation& s) const = 0;

    /// Throws UnknownLabelError for atoms the model cannot evaluate.
    virtual bool lab_eval(const StateValuation& s, const AtomId& a) const = 0;

    virtual bool has_atom(const AtomId& a) const = 0;

    /// Declared (non-inline) labels.
    virtual std::vector<AtomId> atoms() const = 0;
};

}  // namespace flycheck

template <>
struct std::hash<flycheck::StateKey> {
    std::size_t operator()(const flycheck::StateKey& k) const noexcept { return std::hash<std::string>{}(k.bytes()); }
};
