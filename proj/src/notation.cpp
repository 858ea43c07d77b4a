#include "classweave/notation.hpp"

#include <algorithm>
#include <cctype>
#include <tuple>

#include "classweave/errors.hpp"

namespace classweave {

bool operator==(const Relation& a, const Relation& b) {
    return a.op == b.op && a.operands == b.operands;
}

bool operator==(const NotationExpr& a, const NotationExpr& b) {
    return a.value_ == b.value_;
}

// ---------------------------------------------------------------------------
// FacetRegistry

FacetRegistry::FacetRegistry(std::vector<FacetDelimiters> facets) {
    for (auto& f : facets) add(std::move(f));
}

void FacetRegistry::add(FacetDelimiters facet) {
    if (facet.open.size() != 1) {
        throw InvalidArgumentError("facet '" + facet.id + "': open delimiter must be one character");
    }
    if (facet.close.size() > 1) {
        throw InvalidArgumentError("facet '" + facet.id + "': close delimiter must be at most one character");
    }
    const char o = facet.open[0];
    if (std::isdigit(static_cast<unsigned char>(o)) || o == '.' || o == '/' || o == ':' || o == '+') {
        throw InvalidArgumentError("facet '" + facet.id + "': delimiter '" + facet.open + "' is reserved");
    }
    for (const auto& f : facets_) {
        if (f.id == facet.id) throw InvalidArgumentError("duplicate facet id '" + facet.id + "'");
        const bool clash = f.open == facet.open || (!f.close.empty() && f.close == facet.open) ||
                           (!facet.close.empty() && (facet.close == f.open || facet.close == f.close));
        if (clash) throw InvalidArgumentError("facet '" + facet.id + "' reuses a delimiter of '" + f.id + "'");
    }
    facets_.push_back(std::move(facet));
}

const FacetDelimiters* FacetRegistry::by_id(std::string_view id) const {
    for (const auto& f : facets_)
        if (f.id == id) return &f;
    return nullptr;
}

const FacetDelimiters* FacetRegistry::by_open(char c) const {
    for (const auto& f : facets_)
        if (f.open[0] == c) return &f;
    return nullptr;
}

bool FacetRegistry::is_close(char c) const {
    return std::any_of(facets_.begin(), facets_.end(),
                       [c](const FacetDelimiters& f) { return !f.close.empty() && f.close[0] == c; });
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }

class Parser {
public:
    Parser(std::string_view text, const FacetRegistry& facets) : text_(text), facets_(facets) {}

    NotationExpr run() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        end_ = text_.size();
        while (end_ > pos_ && std::isspace(static_cast<unsigned char>(text_[end_ - 1]))) --end_;
        if (pos_ == end_) throw ParseError(0, "empty notation");

        NotationExpr acc = term();
        while (pos_ < end_) {
            const char c = text_[pos_];
            if (c != ':' && c != '+') unexpected();
            const Relator op = static_cast<Relator>(c);
            ++pos_;
            NotationExpr rhs = term();
            if (auto* rel = std::get_if<Relation>(&acc.value()); rel && rel->op == op) {
                rel->operands.push_back(std::move(rhs));
            } else {
                Relation r{op, {}};
                r.operands.push_back(std::move(acc));
                r.operands.push_back(std::move(rhs));
                acc = NotationExpr(std::move(r));
            }
        }
        return acc;
    }

private:
    [[noreturn]] void unexpected() const {
        const char c = text_[pos_];
        if (facets_.is_close(c)) throw ParseError(pos_, "unbalanced delimiter '" + std::string(1, c) + "'");
        if (std::isalpha(static_cast<unsigned char>(c)) || static_cast<unsigned char>(c) >= 0x80 ||
            std::isspace(static_cast<unsigned char>(c))) {
            throw ParseError(pos_, "unexpected character '" + std::string(1, c) + "'");
        }
        if (c == '.') throw ParseError(pos_, "misplaced dot");
        if (c == '/') throw ParseError(pos_, "malformed span");
        throw ParseError(pos_, "unknown facet delimiter '" + std::string(1, c) + "'");
    }

    bool at_relator_or_end() const { return pos_ >= end_ || text_[pos_] == ':' || text_[pos_] == '+'; }

    NotationExpr term() {
        if (at_relator_or_end()) throw ParseError(pos_, "empty operand");
        const char c = text_[pos_];
        if (is_digit(c)) {
            const std::size_t start = pos_;
            std::string left = digit_run(true);
            std::variant<Simple, Span> main = Simple{left};
            if (pos_ < end_ && text_[pos_] == '/') main = span_tail(start, std::move(left));
            std::vector<Auxiliary> auxes;
            while (pos_ < end_ && facets_.by_open(text_[pos_])) {
                const std::size_t at = pos_;
                Auxiliary a = auxiliary();
                for (const auto& prior : auxes) {
                    if (prior.facet == a.facet) throw ParseError(at, "duplicate auxiliary of facet '" + a.facet + "'");
                }
                auxes.push_back(std::move(a));
            }
            if (!at_relator_or_end()) unexpected();
            if (auxes.empty()) {
                return std::visit([](auto&& m) { return NotationExpr(std::move(m)); }, std::move(main));
            }
            return NotationExpr(Compound{std::move(main), std::move(auxes)});
        }
        if (facets_.by_open(c)) {
            Auxiliary a = auxiliary();
            if (pos_ < end_ && facets_.by_open(text_[pos_])) {
                throw ParseError(pos_, "auxiliary chain without a main number");
            }
            if (!at_relator_or_end()) unexpected();
            return NotationExpr(std::move(a));
        }
        unexpected();
    }

    // Digits with presentational dots. With `allow_local`, a dot that falls
    // off the three-digit grid and is followed by '0' opens a local segment.
    std::string digit_run(bool allow_local) {
        if (pos_ >= end_ || !is_digit(text_[pos_])) {
            throw ParseError(pos_, "non-digit payload");
        }
        std::string out;
        std::size_t head = 0;
        bool local = false;
        while (pos_ < end_) {
            const char c = text_[pos_];
            if (is_digit(c)) {
                out.push_back(c);
                if (!local) ++head;
                ++pos_;
            } else if (c == '.') {
                if (pos_ + 1 >= end_ || !is_digit(text_[pos_ + 1])) throw ParseError(pos_, "dangling dot");
                if (allow_local && !local && head % 3 != 0 && text_[pos_ + 1] == '0') {
                    out.push_back('.');
                    local = true;
                }
                ++pos_;
            } else {
                break;
            }
        }
        return out;
    }

    Span span_tail(std::size_t start, std::string left) {
        const std::size_t slash = pos_;
        ++pos_;  // '/'
        if (left.find('.') != std::string::npos) throw ParseError(start, "malformed span: local segment in endpoint");
        if (pos_ < end_ && text_[pos_] == '.') ++pos_;
        if (pos_ >= end_ || !is_digit(text_[pos_])) throw ParseError(slash, "malformed span");
        const std::string suffix = digit_run(false);
        if (suffix.size() > left.size()) throw ParseError(slash, "malformed span: right side longer than left");
        Span s{left, left.substr(0, left.size() - suffix.size()) + suffix};
        if (!(s.left < s.right)) throw ParseError(slash, "malformed span: right side must exceed left");
        return s;
    }

    Auxiliary auxiliary() {
        const std::size_t open_at = pos_;
        const FacetDelimiters* f = facets_.by_open(text_[pos_]);
        ++pos_;
        Auxiliary a{f->id, {}, f->open, f->close};
        if (pos_ >= end_ || !is_digit(text_[pos_])) {
            if (pos_ >= end_ && !f->close.empty()) throw ParseError(open_at, "unbalanced delimiter '" + f->open + "'");
            throw ParseError(pos_, "non-digit payload");
        }
        a.digits = digit_run(false);
        if (!f->close.empty()) {
            if (pos_ >= end_) throw ParseError(open_at, "unbalanced delimiter '" + f->open + "'");
            if (text_[pos_] != f->close[0]) throw ParseError(pos_, "non-digit payload");
            ++pos_;
        }
        return a;
    }

    std::string_view text_;
    const FacetRegistry& facets_;
    std::size_t pos_ = 0;
    std::size_t end_ = 0;
};

std::string collapse_spaces(std::string_view text) {
    std::string out;
    bool space = false;
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            space = !out.empty();
        } else {
            if (space) out.push_back(' ');
            space = false;
            out.push_back(c);
        }
    }
    return out;
}

std::string group3(std::string_view digits) {
    std::string out;
    for (std::size_t i = 0; i < digits.size(); ++i) {
        if (i > 0 && i % 3 == 0) out.push_back('.');
        out.push_back(digits[i]);
    }
    return out;
}

}  // namespace

NotationExpr parse(std::string_view text, const FacetRegistry& facets, ParseOptions options) {
    try {
        return Parser(text, facets).run();
    } catch (const ParseError&) {
        if (!options.allow_opaque) throw;
        std::string key = collapse_spaces(text);
        if (key.empty()) throw;
        return NotationExpr(OpaqueKey{std::move(key)});
    }
}

// ---------------------------------------------------------------------------
// Formatting

std::string format_digits(std::string_view digits) {
    const auto dot = digits.find('.');
    if (dot == std::string_view::npos) return group3(digits);
    return group3(digits.substr(0, dot)) + "." + group3(digits.substr(dot + 1));
}

namespace {

std::string format_span(const Span& s) {
    std::size_t boundary = 0;
    for (std::size_t b = 3; b < s.left.size(); b += 3) {
        if (s.left.compare(0, b, s.right, 0, b) == 0) boundary = b;
    }
    if (boundary == 0) return format_digits(s.left) + "/" + format_digits(s.right);
    return format_digits(s.left) + "/." + group3(std::string_view(s.right).substr(boundary));
}

std::string format_aux(const Auxiliary& a) { return a.open + format_digits(a.digits) + a.close; }

}  // namespace

std::string format(const NotationExpr& expr) {
    struct Visitor {
        std::string operator()(const Simple& s) const { return format_digits(s.digits); }
        std::string operator()(const Span& s) const { return format_span(s); }
        std::string operator()(const Compound& c) const {
            std::string out = std::visit(*this, c.main);
            for (const auto& a : c.auxiliaries) out += format_aux(a);
            return out;
        }
        std::string operator()(const Auxiliary& a) const { return format_aux(a); }
        std::string operator()(const Relation& r) const {
            std::string out;
            for (std::size_t i = 0; i < r.operands.size(); ++i) {
                if (i > 0) out.push_back(static_cast<char>(r.op));
                out += format(r.operands[i]);
            }
            return out;
        }
        std::string operator()(const OpaqueKey& o) const { return o.key; }
    };
    return std::visit(Visitor{}, expr.value());
}

std::string canonicalize(std::string_view text, const FacetRegistry& facets, ParseOptions options) {
    return format(parse(text, facets, options));
}

// ---------------------------------------------------------------------------
// Digit algebra

std::optional<Simple> broaden(const Simple& s) {
    if (s.digits.size() <= 1) return std::nullopt;
    std::string d = s.digits.substr(0, s.digits.size() - 1);
    if (!d.empty() && d.back() == '.') d.pop_back();
    return Simple{std::move(d)};
}

std::optional<Simple> broaden(const NotationExpr& expr) {
    const auto* s = expr.get_if<Simple>();
    if (!s) throw UnsupportedVariantError("broaden applies to simple class numbers only: " + format(expr));
    return broaden(*s);
}

std::optional<NotationExpr> broaden_any(const NotationExpr& expr) {
    struct Visitor {
        std::optional<NotationExpr> operator()(const Simple& s) const {
            auto b = broaden(s);
            if (!b) return std::nullopt;
            return NotationExpr(*b);
        }
        std::optional<NotationExpr> operator()(const Span& s) const {
            std::size_t n = 0;
            while (n < s.left.size() && s.left[n] == s.right[n]) ++n;
            if (n == 0) return std::nullopt;
            return NotationExpr(Simple{s.left.substr(0, n)});
        }
        std::optional<NotationExpr> operator()(const Compound& c) const {
            if (c.auxiliaries.size() > 1) {
                Compound shorter = c;
                shorter.auxiliaries.pop_back();
                return NotationExpr(std::move(shorter));
            }
            return std::visit([](const auto& m) { return NotationExpr(m); }, c.main);
        }
        std::optional<NotationExpr> operator()(const Auxiliary& a) const {
            if (a.digits.size() <= 1) return std::nullopt;
            Auxiliary b = a;
            b.digits.pop_back();
            return NotationExpr(std::move(b));
        }
        std::optional<NotationExpr> operator()(const Relation&) const { return std::nullopt; }
        std::optional<NotationExpr> operator()(const OpaqueKey&) const { return std::nullopt; }
    };
    return std::visit(Visitor{}, expr.value());
}

bool is_descendant(const Simple& ancestor, const Simple& candidate) {
    return ancestor.digits.size() < candidate.digits.size() &&
           candidate.digits.compare(0, ancestor.digits.size(), ancestor.digits) == 0;
}

bool span_covers(const Span& span, const Simple& candidate) {
    const std::size_t n = span.left.size();
    if (candidate.digits.size() < n) return false;
    const std::string_view head = std::string_view(candidate.digits).substr(0, n);
    if (head.find('.') != std::string_view::npos) return false;
    return span.left <= head && head <= span.right;
}

std::vector<Component> decompose(const NotationExpr& expr) {
    std::vector<Component> out;
    struct Visitor {
        std::vector<Component>& out;
        void operator()(const Simple& s) const { out.push_back({"main", s.digits, format_digits(s.digits)}); }
        void operator()(const Span& s) const {
            out.push_back({"main", s.left + "/" + s.right, format_span(s)});
        }
        void operator()(const Compound& c) const {
            std::visit(*this, c.main);
            for (const auto& a : c.auxiliaries) (*this)(a);
        }
        void operator()(const Auxiliary& a) const { out.push_back({a.facet, a.digits, format_aux(a)}); }
        void operator()(const Relation& r) const {
            for (const auto& o : r.operands) std::visit(*this, o.value());
        }
        void operator()(const OpaqueKey& o) const { out.push_back({"main", o.key, o.key}); }
    };
    std::visit(Visitor{out}, expr.value());
    return out;
}

namespace {

using SortKey = std::tuple<int, std::string, std::string, int>;

SortKey sort_key(const NotationExpr& e) {
    struct Visitor {
        SortKey operator()(const Simple& s) const { return {0, "", s.digits, 1}; }
        SortKey operator()(const Span& s) const { return {0, "", s.left, 0}; }
        SortKey operator()(const Compound& c) const {
            SortKey k = std::visit(*this, c.main);
            std::get<3>(k) = 2;
            return k;
        }
        SortKey operator()(const Auxiliary& a) const { return {1, a.facet, a.digits, 1}; }
        SortKey operator()(const Relation& r) const {
            SortKey k = sort_key(r.operands.front());
            std::get<3>(k) = 3;
            return k;
        }
        SortKey operator()(const OpaqueKey& o) const { return {2, "", o.key, 1}; }
    };
    return std::visit(Visitor{}, e.value());
}

}  // namespace

bool notation_less(const NotationExpr& a, const NotationExpr& b) {
    const auto ka = sort_key(a);
    const auto kb = sort_key(b);
    if (ka != kb) return ka < kb;
    return format(a) < format(b);
}

bool is_digit_string(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), is_digit);
}

bool valid_span(const Span& s) {
    return is_digit_string(s.left) && is_digit_string(s.right) && s.left.size() == s.right.size() && s.left < s.right;
}

}  // namespace classweave
