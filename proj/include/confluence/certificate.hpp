#pragma once

#include "confluence/completion.hpp"

#include <string>
#include <string_view>

namespace confluence {

// Line-oriented text form of a certificate, delimited by BEGIN CERTIFICATE and
// END CERTIFICATE. Steps are written with their source, position and rule;
// targets and matchers are recomputed when reading.
std::string serialize_certificate(const Certificate &c);

// Throws MalformedCertificate on syntax errors or steps that do not apply.
Certificate parse_certificate(std::string_view text);

// Parses the text and runs verify against the input.
bool verify_text(std::string_view text, const Trs &input, std::string *why = nullptr);

} // namespace confluence
