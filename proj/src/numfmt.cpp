#include "firmgrid/numfmt.hpp"

#include "firmgrid/error.hpp"

#include <array>
#include <charconv>

namespace firmgrid {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::MalformedCsv: return "malformed-csv";
        case ErrorKind::EmptyInput: return "empty-input";
        case ErrorKind::NonFinite: return "non-finite";
        case ErrorKind::NegativeDemand: return "negative-demand";
        case ErrorKind::CapacityFactorRange: return "capacity-factor-range";
        case ErrorKind::LengthMismatch: return "length-mismatch";
        case ErrorKind::StepMismatch: return "dt-mismatch";
        case ErrorKind::KindMismatch: return "kind-mismatch";
        case ErrorKind::WindowOutOfRange: return "window-out-of-range";
        case ErrorKind::InvalidArgument: return "invalid-argument";
        case ErrorKind::Config: return "config";
        case ErrorKind::Io: return "io";
        case ErrorKind::Infeasible: return "infeasible";
    }
    return "unknown";
}

std::string format_number(double value) {
    std::array<char, 64> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    if (ec != std::errc{}) {
        return "nan";
    }
    return std::string(buf.data(), end);
}

std::string_view trim(std::string_view text) {
    constexpr std::string_view blanks = " \t\r\n";
    const auto first = text.find_first_not_of(blanks);
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = text.find_last_not_of(blanks);
    return text.substr(first, last - first + 1);
}

std::optional<double> parse_number(std::string_view text) {
    text = trim(text);
    if (text.empty()) {
        return std::nullopt;
    }
    // from_chars rejects a leading '+', which some exporters emit
    if (text.front() == '+') {
        text.remove_prefix(1);
    }
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        return std::nullopt;
    }
    return value;
}

}  // namespace firmgrid
