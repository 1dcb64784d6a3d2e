#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace setprop {

class Error : public std::runtime_error {
public:
	using std::runtime_error::runtime_error;
};

// Misuse of a construction API: ordering violations, arity mismatches,
// invalid model parameters.
class BuildError : public Error {
public:
	using Error::Error;
};

// Hard resource limits (node arena, oracle enumeration budgets).
class ResourceError : public Error {
public:
	using Error::Error;
};

class ParseError : public Error {
public:
	ParseError(const std::string& msg, int line, int col)
			: Error(format(msg, line, col)), line(line), col(col) {}
	int line;
	int col;

private:
	static std::string format(const std::string& msg, int line, int col) {
		return "line " + std::to_string(line) + ":" + std::to_string(col) + ": " + msg;
	}
};

// Two-bit Boolean domains. Bit 0: value 0 allowed, bit 1: value 1 allowed.
using DomainBits = std::uint8_t;
inline constexpr DomainBits dom_none = 0;
inline constexpr DomainBits dom_zero = 1;
inline constexpr DomainBits dom_one = 2;
inline constexpr DomainBits dom_both = 3;

inline constexpr DomainBits dom_of(bool value) { return value ? dom_one : dom_zero; }

}  // namespace setprop
