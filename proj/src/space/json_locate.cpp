#include "json_locate.hpp"

#include <algorithm>
#include <string>
#include <vector>

namespace catbench::detail {

std::size_t line_of_offset(std::string_view text, std::size_t offset) {
    offset = std::min(offset, text.size());
    return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

namespace {

struct Found {};

class PointerScanner {
public:
    PointerScanner(std::string_view text, std::vector<std::string> target)
        : text_(text), target_(std::move(target)) {}

    std::size_t run() {
        try {
            skip_ws();
            value(0, true);
        } catch (const Found&) {
        }
        return line_of_offset(text_, best_offset_);
    }

private:
    void value(std::size_t depth, bool on_path) {
        if (on_path) {
            best_offset_ = pos_;
            if (depth == target_.size())
                throw Found{};
        }
        const char c = peek();
        if (c == '{')
            object(depth, on_path);
        else if (c == '[')
            array(depth, on_path);
        else if (c == '"')
            string_token();
        else
            scalar();
    }

    void object(std::size_t depth, bool on_path) {
        ++pos_;
        skip_ws();
        if (peek() == '}') {
            ++pos_;
            return;
        }
        while (true) {
            skip_ws();
            std::string key = decode(string_token());
            skip_ws();
            ++pos_; // ':'
            skip_ws();
            const bool match = on_path && depth < target_.size() && key == target_[depth];
            value(depth + 1, match);
            skip_ws();
            if (peek() == ',') {
                ++pos_;
                continue;
            }
            ++pos_; // '}'
            return;
        }
    }

    void array(std::size_t depth, bool on_path) {
        ++pos_;
        skip_ws();
        if (peek() == ']') {
            ++pos_;
            return;
        }
        for (std::size_t index = 0;; ++index) {
            skip_ws();
            const bool match = on_path && depth < target_.size() && std::to_string(index) == target_[depth];
            value(depth + 1, match);
            skip_ws();
            if (peek() == ',') {
                ++pos_;
                continue;
            }
            ++pos_; // ']'
            return;
        }
    }

    std::string_view string_token() {
        const std::size_t start = pos_;
        ++pos_;
        while (pos_ < text_.size() && text_[pos_] != '"') {
            if (text_[pos_] == '\\')
                ++pos_;
            ++pos_;
        }
        ++pos_;
        return text_.substr(start, pos_ - start);
    }

    std::string decode(std::string_view quoted) const {
        if (quoted.find('\\') == std::string_view::npos)
            return std::string(quoted.substr(1, quoted.size() - 2));
        return nlohmann::json::parse(quoted).get<std::string>();
    }

    void scalar() {
        while (pos_ < text_.size()) {
            const char c = text_[pos_];
            if (c == ',' || c == '}' || c == ']' || c == ' ' || c == '\n' || c == '\r' || c == '\t')
                return;
            ++pos_;
        }
    }

    void skip_ws() {
        while (pos_ < text_.size() &&
               (text_[pos_] == ' ' || text_[pos_] == '\n' || text_[pos_] == '\r' || text_[pos_] == '\t'))
            ++pos_;
    }

    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

    std::string_view text_;
    std::vector<std::string> target_;
    std::size_t pos_ = 0;
    std::size_t best_offset_ = 0;
};

std::vector<std::string> split_pointer(const nlohmann::json::json_pointer& ptr) {
    std::vector<std::string> tokens;
    auto p = ptr;
    while (!p.empty()) {
        tokens.push_back(p.back());
        p.pop_back();
    }
    std::reverse(tokens.begin(), tokens.end());
    return tokens;
}

} // namespace

std::size_t line_of_pointer(std::string_view text, const nlohmann::json::json_pointer& ptr) {
    return PointerScanner(text, split_pointer(ptr)).run();
}

} // namespace catbench::detail
