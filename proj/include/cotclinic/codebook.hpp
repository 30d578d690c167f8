#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "cotclinic/tasks.hpp"

namespace cotclinic {

// Fixed surface-form substitution table. Digits encode through digit_map one
// character at a time (joined with hyphens), everything else through the
// ordered phrase list.
class Codebook {
public:
    Codebook(std::string name,
             std::array<std::string, 10> digit_map,
             std::vector<std::pair<std::string, std::string>> phrases);

    const std::string& name() const { return name_; }
    const std::array<std::string, 10>& digit_map() const { return digit_map_; }
    // Longest-surface-first order, as stored.
    const std::vector<std::pair<std::string, std::string>>& phrases() const {
        return phrases_;
    }

    std::string to_json() const;
    static Codebook from_json(const std::string& json_text);

private:
    std::string name_;
    std::array<std::string, 10> digit_map_;
    std::vector<std::pair<std::string, std::string>> phrases_;
};

const Codebook& builtin_codebook(TaskKind kind);

// Case-insensitive, word-boundary-respecting substitution. Multi-digit
// numerals encode digit-wise, joined with hyphens; a literal hyphen touching
// a digit run doubles so decode can restore it.
std::string encode(const std::string& text, const Codebook& cb);

// Inverts encode on synthesized (digit-only-numeral) traces. Digit code words
// always decode to digit characters; throws AmbiguousToken for code words
// with several non-digit surfaces.
std::string decode(const std::string& text, const Codebook& cb);

}  // namespace cotclinic
