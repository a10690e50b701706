#ifndef RRR_WORKING_MODE_HPP
#define RRR_WORKING_MODE_HPP

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace rrr {

enum class Sign : signed char { Negative = -1, Positive = 1 };

constexpr int to_int(Sign s) { return static_cast<int>(s); }
constexpr Sign flip(Sign s) { return s == Sign::Positive ? Sign::Negative : Sign::Positive; }
constexpr char to_char(Sign s) { return s == Sign::Positive ? 'P' : 'N'; }

template <typename Scalar>
constexpr Sign sign_of(Scalar v) { return v < Scalar(0) ? Sign::Negative : Sign::Positive; }

/// One inverse-kinematic branch, identified by the signs of B_11, B_22, B_33.
///
/// Letters follow the eight-mode table:
///   a=PPP b=PNP c=PPN d=PNN e=NNP f=NPP g=NNN h=NPN
class WorkingMode {
public:
    constexpr WorkingMode() = default;
    constexpr explicit WorkingMode(std::array<Sign, 3> signs) : signs_(signs) {}

    constexpr const std::array<Sign, 3>& signs() const { return signs_; }
    constexpr Sign sign(int leg) const { return signs_[leg]; }

    constexpr char label() const
    {
        for (const auto& [letter, s] : kTable)
            if (s == signs_) return letter;
        return '?';
    }

    // "NNP" style triple.
    std::string sign_string() const
    {
        return {to_char(signs_[0]), to_char(signs_[1]), to_char(signs_[2])};
    }

    // Index 0..7 in letter order a..h.
    constexpr int index() const { return label() - 'a'; }

    constexpr WorkingMode with_flipped(int leg) const
    {
        auto s = signs_;
        s[leg] = flip(s[leg]);
        return WorkingMode(s);
    }

    static constexpr WorkingMode from_label(char letter)
    {
        for (const auto& [l, s] : kTable)
            if (l == letter) return WorkingMode(s);
        return WorkingMode();
    }

    // Accepts a letter "a".."h" or a sign triple such as "NNP" / "--+".
    static std::optional<WorkingMode> parse(std::string_view text)
    {
        if (text.size() == 1 && text[0] >= 'a' && text[0] <= 'h') return from_label(text[0]);
        if (text.size() != 3) return std::nullopt;
        std::array<Sign, 3> s{};
        for (int i = 0; i < 3; ++i) {
            switch (text[i]) {
            case 'P': case 'p': case '+': s[i] = Sign::Positive; break;
            case 'N': case 'n': case '-': s[i] = Sign::Negative; break;
            default: return std::nullopt;
            }
        }
        return WorkingMode(s);
    }

    friend constexpr bool operator==(const WorkingMode&, const WorkingMode&) = default;

private:
    static constexpr Sign P = Sign::Positive;
    static constexpr Sign N = Sign::Negative;
    static constexpr std::array<std::pair<char, std::array<Sign, 3>>, 8> kTable{{
        {'a', {P, P, P}}, {'b', {P, N, P}}, {'c', {P, P, N}}, {'d', {P, N, N}},
        {'e', {N, N, P}}, {'f', {N, P, P}}, {'g', {N, N, N}}, {'h', {N, P, N}},
    }};

    std::array<Sign, 3> signs_{P, P, P};
};

inline constexpr std::array<WorkingMode, 8> all_working_modes()
{
    return {WorkingMode::from_label('a'), WorkingMode::from_label('b'), WorkingMode::from_label('c'),
            WorkingMode::from_label('d'), WorkingMode::from_label('e'), WorkingMode::from_label('f'),
            WorkingMode::from_label('g'), WorkingMode::from_label('h')};
}

} // namespace rrr

#endif // RRR_WORKING_MODE_HPP
