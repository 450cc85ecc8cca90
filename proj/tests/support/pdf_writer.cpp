#include "pdf_writer.hpp"

#include <stdexcept>

#include <zlib.h>

namespace scientist::testkit {

std::string deflate(const std::string& data) {
  uLongf size = compressBound(data.size());
  std::string out(size, '\0');
  if (compress(reinterpret_cast<Bytef*>(out.data()), &size, reinterpret_cast<const Bytef*>(data.data()), data.size()) != Z_OK) {
    throw std::runtime_error("deflate failed");
  }
  out.resize(size);
  return out;
}

int PdfBuilder::reserve() {
  objects_.push_back({});
  return static_cast<int>(objects_.size());
}

int PdfBuilder::add(std::string dict) {
  int n = reserve();
  set(n, std::move(dict));
  return n;
}

int PdfBuilder::add_stream(std::string dict, const std::string& data, bool flate) {
  int n = reserve();
  set_stream(n, std::move(dict), data, flate);
  return n;
}

void PdfBuilder::set(int num, std::string dict) { objects_.at(num - 1).body = std::move(dict); }

void PdfBuilder::set_stream(int num, std::string dict, const std::string& data, bool flate) {
  std::string payload = flate ? deflate(data) : data;
  std::string d = "<< " + dict + (flate ? " /Filter /FlateDecode" : "") + " /Length " + std::to_string(payload.size()) + " >>";
  objects_.at(num - 1).body = d + "\nstream\n" + payload + "\nendstream";
}

std::string PdfBuilder::build(int root, const std::string& extra_trailer, const std::set<int>& packed) const {
  std::string out = "%PDF-1.5\n%\xE2\xE3\xCF\xD3\n";
  int count = static_cast<int>(objects_.size());
  for (int n = 1; n <= count; ++n) {
    if (packed.count(n)) continue;
    out += std::to_string(n) + " 0 obj\n" + objects_[n - 1].body + "\nendobj\n";
  }
  int size = count + 1;
  if (!packed.empty()) {
    std::string header, bodies;
    for (int n : packed) {
      header += std::to_string(n) + " " + std::to_string(bodies.size()) + " ";
      bodies += objects_[n - 1].body + "\n";
    }
    std::string data = header + bodies;
    std::string payload = deflate(data);
    int num = size++;
    out += std::to_string(num) + " 0 obj\n<< /Type /ObjStm /N " + std::to_string(packed.size()) + " /First " +
           std::to_string(header.size()) + " /Filter /FlateDecode /Length " + std::to_string(payload.size()) +
           " >>\nstream\n" + payload + "\nendstream\nendobj\n";
  }
  auto xref = out.size();
  out += "trailer\n<< /Size " + std::to_string(size) + " /Root " + std::to_string(root) + " 0 R " + extra_trailer +
         " >>\nstartxref\n" + std::to_string(xref) + "\n%%EOF\n";
  return out;
}

std::string simple_pdf(const std::string& content, bool flate) {
  PdfBuilder b;
  int catalog = b.reserve();
  int pages = b.reserve();
  int font = b.add("<< /Type /Font /Subtype /Type1 /BaseFont /Helvetica >>");
  int stream = b.add_stream("", content, flate);
  int page = b.add("<< /Type /Page /Parent " + std::to_string(pages) + " 0 R /Contents " + std::to_string(stream) +
                   " 0 R /Resources << /Font << /F1 " + std::to_string(font) + " 0 R >> >> >>");
  b.set(pages, "<< /Type /Pages /Kids [" + std::to_string(page) + " 0 R] /Count 1 >>");
  b.set(catalog, "<< /Type /Catalog /Pages " + std::to_string(pages) + " 0 R >>");
  return b.build(catalog);
}

}  // namespace scientist::testkit
