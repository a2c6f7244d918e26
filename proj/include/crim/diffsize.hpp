#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace crim {

// A text split into whitespace-delimited tokens. Punctuation stays attached
// to its word; no other normalization is applied, so reformatting that only
// moves whitespace yields an identical sequence.
struct WordSequence {
    std::vector<std::string> words;

    bool operator==(const WordSequence&) const = default;
};

// Pre- and post-image of one changed text file. Created or deleted files use
// an empty string for the missing side.
struct FilePair {
    std::string before;
    std::string after;
};

namespace detail {

inline bool is_unicode_space(char32_t cp) {
    switch (cp) {
        case U'\t': case U'\n': case U'\v': case U'\f': case U'\r': case U' ':
        case 0x0085:  // NEL
        case 0x00A0:  // NO-BREAK SPACE
        case 0x1680:
        case 0x2028: case 0x2029:
        case 0x202F: case 0x205F: case 0x3000:
            return true;
        default:
            return cp >= 0x2000 && cp <= 0x200A;
    }
}

// Decodes one UTF-8 code point at `i`, advancing `i`. Malformed bytes are
// consumed one at a time and returned as-is so tokenization stays total.
inline char32_t decode_utf8(std::string_view text, std::size_t& i) {
    const auto byte = [&](std::size_t k) { return static_cast<unsigned char>(text[k]); };
    const unsigned char b0 = byte(i);
    std::size_t len = 0;
    char32_t cp = 0;
    if (b0 < 0x80) {
        ++i;
        return b0;
    } else if ((b0 & 0xE0) == 0xC0) {
        len = 2;
        cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
        len = 3;
        cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
        len = 4;
        cp = b0 & 0x07;
    } else {
        ++i;
        return b0;
    }
    if (i + len > text.size()) {
        ++i;
        return b0;
    }
    for (std::size_t k = 1; k < len; ++k) {
        if ((byte(i + k) & 0xC0) != 0x80) {
            ++i;
            return b0;
        }
        cp = (cp << 6) | (byte(i + k) & 0x3F);
    }
    i += len;
    return cp;
}

}  // namespace detail

// Splits on maximal runs of Unicode whitespace. Total on any byte string;
// the empty string maps to the empty sequence.
inline WordSequence tokenize(std::string_view text) {
    WordSequence seq;
    std::size_t i = 0;
    std::size_t token_start = 0;
    bool in_token = false;
    while (i < text.size()) {
        const std::size_t cp_start = i;
        const char32_t cp = detail::decode_utf8(text, i);
        if (detail::is_unicode_space(cp)) {
            if (in_token) {
                seq.words.emplace_back(text.substr(token_start, cp_start - token_start));
                in_token = false;
            }
        } else if (!in_token) {
            token_start = cp_start;
            in_token = true;
        }
    }
    if (in_token) {
        seq.words.emplace_back(text.substr(token_start));
    }
    return seq;
}

// Minimum number of single-token insertions, deletions, and substitutions
// transforming `a` into `b`. Two-row DP over interned token ids; memory is
// O(min(n, m)) and the result equals the full-matrix computation.
inline std::size_t word_levenshtein(const WordSequence& a, const WordSequence& b) {
    std::span<const std::string> s(a.words);
    std::span<const std::string> t(b.words);

    while (!s.empty() && !t.empty() && s.front() == t.front()) {
        s = s.subspan(1);
        t = t.subspan(1);
    }
    while (!s.empty() && !t.empty() && s.back() == t.back()) {
        s = s.subspan(0, s.size() - 1);
        t = t.subspan(0, t.size() - 1);
    }
    if (s.empty()) return t.size();
    if (t.empty()) return s.size();

    // Intern tokens so the inner loop compares integers, not strings.
    std::unordered_map<std::string_view, std::uint32_t> ids;
    ids.reserve(s.size() + t.size());
    const auto intern = [&](std::span<const std::string> words) {
        std::vector<std::uint32_t> out;
        out.reserve(words.size());
        for (const std::string& w : words) {
            const auto [it, inserted] =
                ids.emplace(w, static_cast<std::uint32_t>(ids.size()));
            out.push_back(it->second);
        }
        return out;
    };
    std::vector<std::uint32_t> u = intern(s);
    std::vector<std::uint32_t> v = intern(t);
    if (u.size() < v.size()) u.swap(v);

    std::vector<std::uint32_t> prev(v.size() + 1);
    std::vector<std::uint32_t> curr(v.size() + 1);
    for (std::size_t j = 0; j <= v.size(); ++j) {
        prev[j] = static_cast<std::uint32_t>(j);
    }
    for (std::size_t i = 1; i <= u.size(); ++i) {
        curr[0] = static_cast<std::uint32_t>(i);
        for (std::size_t j = 1; j <= v.size(); ++j) {
            const std::uint32_t sub = prev[j - 1] + (u[i - 1] == v[j - 1] ? 0 : 1);
            curr[j] = std::min({prev[j] + 1, curr[j - 1] + 1, sub});
        }
        prev.swap(curr);
    }
    return prev[v.size()];
}

// Contribution size of one commit: the word distance summed over its
// changed text files. Binary files must be excluded by the caller.
inline std::size_t commit_size(std::span<const FilePair> file_pairs) {
    std::size_t total = 0;
    for (const FilePair& pair : file_pairs) {
        total += word_levenshtein(tokenize(pair.before), tokenize(pair.after));
    }
    return total;
}

}  // namespace crim
