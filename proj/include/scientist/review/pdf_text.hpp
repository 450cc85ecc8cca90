#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "scientist/util/error.hpp"

namespace scientist::review {

class PdfError : public Error {
public:
  enum class Kind { unreadable, not_pdf, encrypted, malformed };
  PdfError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

private:
  Kind kind_;
};

// Page-ordered text of a PDF, pages separated by a blank line. Handles
// FlateDecode content, object streams, inherited resources and ToUnicode
// maps; large negative TJ adjustments become spaces.
std::string extract_pdf_text(const std::filesystem::path& path);
std::string extract_pdf_text_from_bytes(std::string_view bytes);

}  // namespace scientist::review
