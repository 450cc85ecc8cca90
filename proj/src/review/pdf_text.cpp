#include "scientist/review/pdf_text.hpp"

#include <zlib.h>

#include <cctype>
#include <cmath>
#include <cstring>
#include <map>
#include <memory>
#include <optional>
#include <regex>
#include <set>
#include <vector>

#include "scientist/util/fs.hpp"

namespace scientist::review {

namespace {

struct Obj;
using Array = std::vector<Obj>;
using Dict = std::map<std::string, Obj>;

struct Obj {
  enum class T { null, boolean, number, string, name, array, dict, ref, op };
  T type = T::null;
  double num = 0;
  std::string str;  // string bytes, name, or operator
  std::shared_ptr<Array> arr;
  std::shared_ptr<Dict> dict;
  int ref = 0;
  std::shared_ptr<std::string> stream;  // raw stream bytes for stream objects

  bool is(T t) const { return type == t; }
  const Obj* get(const std::string& key) const {
    if (!dict) return nullptr;
    auto it = dict->find(key);
    return it == dict->end() ? nullptr : &it->second;
  }
};

bool is_ws(char c) { return c == ' ' || c == '\n' || c == '\r' || c == '\t' || c == '\f' || c == '\0'; }
bool is_delim(char c) { return std::strchr("()<>[]{}/%", c) != nullptr; }

class Lexer {
public:
  explicit Lexer(std::string_view s, std::size_t pos = 0) : s_(s), pos_(pos) {}

  std::size_t pos() const { return pos_; }
  void seek(std::size_t p) { pos_ = p; }
  bool eof() {
    skip();
    return pos_ >= s_.size();
  }

  void skip() {
    while (pos_ < s_.size()) {
      if (is_ws(s_[pos_])) {
        ++pos_;
      } else if (s_[pos_] == '%') {
        while (pos_ < s_.size() && s_[pos_] != '\n' && s_[pos_] != '\r') ++pos_;
      } else {
        break;
      }
    }
  }

  Obj parse(int depth = 0) {
    if (depth > 64) throw PdfError(PdfError::Kind::malformed, "objects nested too deeply");
    skip();
    if (pos_ >= s_.size()) throw PdfError(PdfError::Kind::malformed, "unexpected end of data");
    char c = s_[pos_];
    Obj o;
    if (c == '/') {
      ++pos_;
      o.type = Obj::T::name;
      o.str = name_body();
    } else if (c == '(') {
      o.type = Obj::T::string;
      o.str = literal_string();
    } else if (c == '<' && peek(1) == '<') {
      pos_ += 2;
      o.type = Obj::T::dict;
      o.dict = std::make_shared<Dict>();
      while (true) {
        skip();
        if (pos_ >= s_.size()) throw PdfError(PdfError::Kind::malformed, "unterminated dictionary");
        if (s_[pos_] == '>' && peek(1) == '>') {
          pos_ += 2;
          break;
        }
        auto key = parse(depth + 1);
        if (!key.is(Obj::T::name)) throw PdfError(PdfError::Kind::malformed, "dictionary key is not a name");
        (*o.dict)[key.str] = parse(depth + 1);
      }
    } else if (c == '<') {
      o.type = Obj::T::string;
      o.str = hex_string();
    } else if (c == '[') {
      ++pos_;
      o.type = Obj::T::array;
      o.arr = std::make_shared<Array>();
      while (true) {
        skip();
        if (pos_ >= s_.size()) throw PdfError(PdfError::Kind::malformed, "unterminated array");
        if (s_[pos_] == ']') {
          ++pos_;
          break;
        }
        o.arr->push_back(parse(depth + 1));
      }
    } else if (c == ']' || c == '>' || c == ')' || c == '{' || c == '}') {
      ++pos_;
      o.type = Obj::T::op;
      o.str = std::string(1, c);
    } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' || c == '.') {
      o.type = Obj::T::number;
      o.num = number();
      auto save = pos_;
      if (o.num >= 0 && o.num == std::floor(o.num)) {
        skip();
        if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
          number();
          skip();
          if (pos_ < s_.size() && s_[pos_] == 'R' && (pos_ + 1 >= s_.size() || is_ws(s_[pos_ + 1]) || is_delim(s_[pos_ + 1]))) {
            ++pos_;
            o.type = Obj::T::ref;
            o.ref = static_cast<int>(o.num);
            return o;
          }
        }
      }
      pos_ = save;
    } else {
      auto word = regular();
      if (word == "true" || word == "false") {
        o.type = Obj::T::boolean;
        o.num = word == "true";
      } else if (word == "null") {
        o.type = Obj::T::null;
      } else {
        o.type = Obj::T::op;
        o.str = std::move(word);
      }
    }
    return o;
  }

  std::string regular() {
    auto start = pos_;
    while (pos_ < s_.size() && !is_ws(s_[pos_]) && !is_delim(s_[pos_])) ++pos_;
    if (pos_ == start) ++pos_;
    return std::string(s_.substr(start, pos_ - start));
  }

private:
  char peek(std::size_t k) const { return pos_ + k < s_.size() ? s_[pos_ + k] : '\0'; }

  double number() {
    auto start = pos_;
    if (s_[pos_] == '-' || s_[pos_] == '+') ++pos_;
    while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
    std::string tok(s_.substr(start, pos_ - start));
    if (tok == "-" || tok == "+" || tok == ".") return 0;
    try {
      return std::stod(tok);
    } catch (...) {
      return 0;
    }
  }

  std::string name_body() {
    std::string out;
    while (pos_ < s_.size() && !is_ws(s_[pos_]) && !is_delim(s_[pos_])) {
      if (s_[pos_] == '#' && pos_ + 2 < s_.size() && std::isxdigit(static_cast<unsigned char>(s_[pos_ + 1])) &&
          std::isxdigit(static_cast<unsigned char>(s_[pos_ + 2]))) {
        out += static_cast<char>(std::stoi(std::string(s_.substr(pos_ + 1, 2)), nullptr, 16));
        pos_ += 3;
      } else {
        out += s_[pos_++];
      }
    }
    return out;
  }

  std::string literal_string() {
    ++pos_;
    std::string out;
    int depth = 1;
    while (pos_ < s_.size()) {
      char c = s_[pos_++];
      if (c == '\\') {
        if (pos_ >= s_.size()) break;
        char e = s_[pos_++];
        switch (e) {
          case 'n': out += '\n'; break;
          case 'r': out += '\r'; break;
          case 't': out += '\t'; break;
          case 'b': out += '\b'; break;
          case 'f': out += '\f'; break;
          case '\r':
            if (pos_ < s_.size() && s_[pos_] == '\n') ++pos_;
            break;
          case '\n': break;
          default:
            if (e >= '0' && e <= '7') {
              int v = e - '0';
              for (int k = 0; k < 2 && pos_ < s_.size() && s_[pos_] >= '0' && s_[pos_] <= '7'; ++k) {
                v = v * 8 + (s_[pos_++] - '0');
              }
              out += static_cast<char>(v & 0xff);
            } else {
              out += e;
            }
        }
      } else if (c == '(') {
        ++depth;
        out += c;
      } else if (c == ')') {
        if (--depth == 0) return out;
        out += c;
      } else {
        out += c;
      }
    }
    throw PdfError(PdfError::Kind::malformed, "unterminated string");
  }

  std::string hex_string() {
    ++pos_;
    std::string digits;
    while (pos_ < s_.size() && s_[pos_] != '>') {
      if (std::isxdigit(static_cast<unsigned char>(s_[pos_]))) digits += s_[pos_];
      ++pos_;
    }
    if (pos_ >= s_.size()) throw PdfError(PdfError::Kind::malformed, "unterminated hex string");
    ++pos_;
    if (digits.size() % 2) digits += '0';
    std::string out;
    for (std::size_t i = 0; i < digits.size(); i += 2) {
      out += static_cast<char>(std::stoi(digits.substr(i, 2), nullptr, 16));
    }
    return out;
  }

  std::string_view s_;
  std::size_t pos_;
};

std::string inflate(std::string_view data) {
  z_stream zs{};
  if (inflateInit(&zs) != Z_OK) throw PdfError(PdfError::Kind::malformed, "zlib init failed");
  zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(data.data()));
  zs.avail_in = static_cast<uInt>(data.size());
  std::string out;
  char buf[1 << 15];
  int rc = Z_OK;
  while (rc == Z_OK) {
    zs.next_out = reinterpret_cast<Bytef*>(buf);
    zs.avail_out = sizeof buf;
    rc = inflate(&zs, Z_NO_FLUSH);
    out.append(buf, sizeof buf - zs.avail_out);
    if (rc == Z_BUF_ERROR && zs.avail_in == 0) break;
  }
  inflateEnd(&zs);
  // Truncated streams still yield whatever was decoded.
  if (rc != Z_STREAM_END && out.empty()) throw PdfError(PdfError::Kind::malformed, "corrupt compressed stream");
  return out;
}

class Document {
public:
  explicit Document(std::string_view bytes) : bytes_(bytes) {
    auto head = bytes_.substr(0, std::min<std::size_t>(1024, bytes_.size()));
    if (head.find("%PDF-") == std::string_view::npos) throw PdfError(PdfError::Kind::not_pdf, "not a PDF file");
    scan_objects();
    if (objects_.empty()) throw PdfError(PdfError::Kind::malformed, "no objects found");
    check_encryption();
    expand_object_streams();
  }

  const Obj& resolve(const Obj& o, int depth = 0) const {
    static const Obj kNull;
    if (!o.is(Obj::T::ref)) return o;
    if (depth > 32) return kNull;
    auto it = objects_.find(o.ref);
    return it == objects_.end() ? kNull : resolve(it->second, depth + 1);
  }

  const Obj* lookup(const Obj& dict, const std::string& key) const {
    auto* v = resolve(dict).get(key);
    return v ? &resolve(*v) : nullptr;
  }

  std::string decode(const Obj& o) const {
    const auto& s = resolve(o);
    if (!s.stream) return {};
    std::vector<std::string> filters;
    if (auto* f = lookup(s, "Filter")) {
      if (f->is(Obj::T::name)) filters.push_back(f->str);
      if (f->is(Obj::T::array)) {
        for (const auto& x : *f->arr) filters.push_back(resolve(x).str);
      }
    }
    std::string data = *s.stream;
    for (const auto& f : filters) {
      if (f == "FlateDecode" || f == "Fl") {
        data = inflate(data);
      } else {
        return {};
      }
    }
    return data;
  }

  std::vector<const Obj*> pages() const {
    std::vector<const Obj*> out;
    std::set<const Obj*> seen;
    if (const Obj* root = catalog()) {
      if (auto* tree = lookup(*root, "Pages")) walk(*tree, out, seen, 0);
    }
    if (out.empty()) {
      for (const auto& [num, o] : objects_) {
        auto* t = o.get("Type");
        if (t && t->is(Obj::T::name) && t->str == "Page") out.push_back(&o);
      }
    }
    return out;
  }

private:
  void scan_objects() {
    static const std::regex kObj(R"((\d+)\s+(\d+)\s+obj\b)");
    std::string s(bytes_);
    std::size_t resume = 0;
    for (std::sregex_iterator it(s.begin(), s.end(), kObj), end; it != end; ++it) {
      auto start = static_cast<std::size_t>(it->position(0));
      if (start < resume) continue;
      if (start > 0 && !is_ws(s[start - 1]) && !is_delim(s[start - 1])) continue;
      int num = std::stoi((*it)[1].str());
      Lexer lex(bytes_, start + it->length(0));
      try {
        auto obj = lex.parse();
        auto after = lex.pos();
        lex.skip();
        if (obj.is(Obj::T::dict) && bytes_.substr(lex.pos(), 6) == "stream") {
          auto data_start = lex.pos() + 6;
          if (data_start < bytes_.size() && bytes_[data_start] == '\r') ++data_start;
          if (data_start < bytes_.size() && bytes_[data_start] == '\n') ++data_start;
          std::size_t data_end = std::string_view::npos;
          if (auto* len = obj.get("Length"); len && len->is(Obj::T::number)) {
            auto candidate = data_start + static_cast<std::size_t>(len->num);
            if (candidate <= bytes_.size()) {
              Lexer check(bytes_, candidate);
              check.skip();
              if (bytes_.substr(check.pos(), 9) == "endstream") data_end = candidate;
            }
          }
          if (data_end == std::string_view::npos) {
            data_end = bytes_.find("endstream", data_start);
            if (data_end == std::string_view::npos) continue;
            while (data_end > data_start && (bytes_[data_end - 1] == '\n' || bytes_[data_end - 1] == '\r')) --data_end;
          }
          obj.stream = std::make_shared<std::string>(bytes_.substr(data_start, data_end - data_start));
          after = data_end;
        }
        resume = after;
        if (obj.is(Obj::T::dict)) {
          if (auto* t = obj.get("Type"); t && t->str == "XRef") trailers_.push_back(obj);
        }
        objects_[num] = std::move(obj);
      } catch (const PdfError&) {
        continue;
      }
    }
    for (auto pos = bytes_.find("trailer"); pos != std::string_view::npos; pos = bytes_.find("trailer", pos + 7)) {
      try {
        Lexer lex(bytes_, pos + 7);
        auto t = lex.parse();
        if (t.is(Obj::T::dict)) trailers_.push_back(t);
      } catch (const PdfError&) {
      }
    }
  }

  void check_encryption() const {
    for (const auto& t : trailers_) {
      if (t.get("Encrypt")) throw PdfError(PdfError::Kind::encrypted, "PDF is encrypted");
    }
  }

  void expand_object_streams() {
    std::vector<Obj> streams;
    for (const auto& [num, o] : objects_) {
      auto* t = o.get("Type");
      if (o.stream && t && t->is(Obj::T::name) && t->str == "ObjStm") streams.push_back(o);
    }
    for (const auto& os : streams) {
      std::string data;
      try {
        data = decode(os);
      } catch (const PdfError&) {
        continue;
      }
      auto* n = lookup(os, "N");
      auto* first = lookup(os, "First");
      if (!n || !first) continue;
      Lexer header(data);
      std::vector<std::pair<int, std::size_t>> index;
      try {
        for (int i = 0; i < static_cast<int>(n->num); ++i) {
          auto num = header.parse();
          auto off = header.parse();
          index.emplace_back(static_cast<int>(num.num), static_cast<std::size_t>(off.num));
        }
      } catch (const PdfError&) {
        continue;
      }
      for (const auto& [num, off] : index) {
        auto at = static_cast<std::size_t>(first->num) + off;
        if (at >= data.size() || objects_.count(num)) continue;
        try {
          Lexer lex(data, at);
          auto obj = lex.parse();
          objects_[num] = std::move(obj);
        } catch (const PdfError&) {
        }
      }
    }
  }

  const Obj* catalog() const {
    for (auto it = trailers_.rbegin(); it != trailers_.rend(); ++it) {
      if (auto* r = it->get("Root")) {
        const auto& root = resolve(*r);
        if (root.is(Obj::T::dict)) return &root;
      }
    }
    for (const auto& [num, o] : objects_) {
      auto* t = o.get("Type");
      if (t && t->is(Obj::T::name) && t->str == "Catalog") return &o;
    }
    return nullptr;
  }

  void walk(const Obj& node, std::vector<const Obj*>& out, std::set<const Obj*>& seen, int depth) const {
    if (depth > 64 || !seen.insert(&node).second) return;
    auto* t = node.get("Type");
    auto* kids = lookup(node, "Kids");
    if (kids && kids->is(Obj::T::array)) {
      for (const auto& k : *kids->arr) walk(resolve(k), out, seen, depth + 1);
    } else if (!t || t->str == "Page") {
      if (node.is(Obj::T::dict)) out.push_back(&node);
    }
  }

  std::string_view bytes_;
  std::map<int, Obj> objects_;
  std::vector<Obj> trailers_;
};

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

std::string utf16be_to_utf8(const std::string& s) {
  std::string out;
  for (std::size_t i = 0; i + 1 < s.size(); i += 2) {
    std::uint32_t u = (static_cast<unsigned char>(s[i]) << 8) | static_cast<unsigned char>(s[i + 1]);
    if (u >= 0xD800 && u < 0xDC00 && i + 3 < s.size()) {
      std::uint32_t lo = (static_cast<unsigned char>(s[i + 2]) << 8) | static_cast<unsigned char>(s[i + 3]);
      u = 0x10000 + ((u - 0xD800) << 10) + (lo - 0xDC00);
      i += 2;
    }
    append_utf8(out, u);
  }
  return out;
}

std::uint32_t code_of(const std::string& s) {
  std::uint32_t v = 0;
  for (unsigned char c : s) v = (v << 8) | c;
  return v;
}

struct Font {
  std::map<std::uint32_t, std::string> to_unicode;
  int code_bytes = 1;

  std::string decode(const std::string& bytes) const {
    std::string out;
    if (to_unicode.empty()) {
      for (unsigned char c : bytes) {
        switch (c) {
          case 0x0B: out += "ff"; break;
          case 0x0C: out += "fi"; break;
          case 0x0D: out += "fl"; break;
          case 0x0E: out += "ffi"; break;
          case 0x0F: out += "ffl"; break;
          default:
            if (c >= 0x20) append_utf8(out, c);
        }
      }
      return out;
    }
    for (std::size_t i = 0; i + code_bytes <= bytes.size(); i += code_bytes) {
      auto code = code_of(bytes.substr(i, code_bytes));
      auto it = to_unicode.find(code);
      if (it != to_unicode.end()) {
        out += it->second;
      } else if (code_bytes == 1 && code >= 0x20 && code < 0x7f) {
        out += static_cast<char>(code);
      }
    }
    return out;
  }
};

Font parse_cmap(const std::string& cmap) {
  Font font;
  Lexer lex(cmap);
  std::vector<Obj> stack;
  try {
    while (!lex.eof()) {
      auto o = lex.parse();
      if (!o.is(Obj::T::op)) {
        stack.push_back(std::move(o));
        continue;
      }
      if (o.str == "endcodespacerange" && !stack.empty()) {
        font.code_bytes = std::max<int>(1, static_cast<int>(stack.back().str.size()));
      } else if (o.str == "endbfchar") {
        for (std::size_t i = 0; i + 1 < stack.size(); i += 2) {
          font.to_unicode[code_of(stack[i].str)] = utf16be_to_utf8(stack[i + 1].str);
        }
      } else if (o.str == "endbfrange") {
        for (std::size_t i = 0; i + 2 < stack.size(); i += 3) {
          auto lo = code_of(stack[i].str), hi = code_of(stack[i + 1].str);
          if (hi < lo || hi - lo > 0xFFFF) continue;
          const auto& dst = stack[i + 2];
          for (auto c = lo; c <= hi; ++c) {
            if (dst.is(Obj::T::array)) {
              if (c - lo < dst.arr->size()) font.to_unicode[c] = utf16be_to_utf8((*dst.arr)[c - lo].str);
            } else {
              auto d = dst.str;
              if (!d.empty()) d.back() = static_cast<char>(static_cast<unsigned char>(d.back()) + (c - lo));
              font.to_unicode[c] = utf16be_to_utf8(d);
            }
          }
        }
      }
      if (o.str.rfind("end", 0) == 0 || o.str.rfind("begin", 0) == 0) stack.clear();
    }
  } catch (const PdfError&) {
  }
  return font;
}

class PageText {
public:
  PageText(const Document& doc, const Obj& page) : doc_(doc), page_(page) {}

  std::string run() {
    std::string content;
    if (auto* c = doc_.lookup(page_, "Contents")) {
      if (c->is(Obj::T::array)) {
        for (const auto& part : *c->arr) content += doc_.decode(part) + "\n";
      } else {
        content = doc_.decode(*c);
      }
    }
    interpret(content);
    return out_;
  }

private:
  const Obj* resources() const {
    const Obj* node = &page_;
    for (int depth = 0; node && depth < 32; ++depth) {
      if (auto* r = doc_.lookup(*node, "Resources")) return r;
      node = doc_.lookup(*node, "Parent");
    }
    return nullptr;
  }

  const Font& font(const std::string& name) {
    auto it = fonts_.find(name);
    if (it != fonts_.end()) return it->second;
    Font f;
    if (auto* res = resources()) {
      if (auto* dict = doc_.lookup(*res, "Font")) {
        if (auto* fo = doc_.lookup(*dict, name)) {
          if (auto* tu = fo->get("ToUnicode")) {
            try {
              f = parse_cmap(doc_.decode(*tu));
            } catch (const PdfError&) {
            }
          }
        }
      }
    }
    return fonts_[name] = std::move(f);
  }

  void emit(const std::string& bytes) {
    auto s = current_ ? current_->decode(bytes) : Font{}.decode(bytes);
    out_ += s;
  }

  void space() {
    if (!out_.empty() && out_.back() != ' ' && out_.back() != '\n') out_ += ' ';
  }

  void newline() {
    while (!out_.empty() && out_.back() == ' ') out_.pop_back();
    if (!out_.empty() && out_.back() != '\n') out_ += '\n';
  }

  void interpret(const std::string& content) {
    Lexer lex(content);
    std::vector<Obj> operands;
    std::optional<double> last_y;
    while (true) {
      Obj o;
      try {
        if (lex.eof()) break;
        o = lex.parse();
      } catch (const PdfError&) {
        break;
      }
      if (!o.is(Obj::T::op)) {
        operands.push_back(std::move(o));
        continue;
      }
      const auto& op = o.str;
      auto num = [&](std::size_t i) {
        return i < operands.size() && operands[i].is(Obj::T::number) ? operands[i].num : 0.0;
      };
      if (op == "BI") {
        auto at = content.find("EI", lex.pos());
        while (at != std::string::npos && !(at > 0 && is_ws(content[at - 1]) &&
                                            (at + 2 >= content.size() || is_ws(content[at + 2])))) {
          at = content.find("EI", at + 2);
        }
        lex.seek(at == std::string::npos ? content.size() : at + 2);
      } else if (op == "Tf" && !operands.empty() && operands[0].is(Obj::T::name)) {
        current_ = &font(operands[0].str);
      } else if (op == "Tj" && !operands.empty()) {
        emit(operands.back().str);
      } else if ((op == "'" || op == "\"") && !operands.empty()) {
        newline();
        emit(operands.back().str);
      } else if (op == "TJ" && !operands.empty() && operands.back().is(Obj::T::array)) {
        for (const auto& item : *operands.back().arr) {
          if (item.is(Obj::T::string)) {
            emit(item.str);
          } else if (item.is(Obj::T::number) && item.num < -200) {
            space();
          }
        }
      } else if (op == "Td" || op == "TD") {
        if (std::abs(num(1)) > 0.01) {
          newline();
        } else if (num(0) > 0) {
          space();
        }
      } else if (op == "T*") {
        newline();
      } else if (op == "Tm") {
        double y = num(5);
        if (last_y && std::abs(*last_y - y) > 0.01) {
          newline();
        } else if (last_y) {
          space();
        }
        last_y = y;
      } else if (op == "ET") {
        space();
      }
      operands.clear();
    }
  }

  const Document& doc_;
  const Obj& page_;
  std::map<std::string, Font> fonts_;
  const Font* current_ = nullptr;
  std::string out_;
};

}  // namespace

std::string extract_pdf_text_from_bytes(std::string_view bytes) {
  if (bytes.empty()) throw PdfError(PdfError::Kind::not_pdf, "empty file");
  Document doc(bytes);
  auto pages = doc.pages();
  if (pages.empty()) throw PdfError(PdfError::Kind::malformed, "no pages found");
  std::string out;
  for (const auto* page : pages) {
    auto text = PageText(doc, *page).run();
    while (!text.empty() && (text.back() == ' ' || text.back() == '\n')) text.pop_back();
    if (!out.empty()) out += "\n\n";
    out += text;
  }
  return out;
}

std::string extract_pdf_text(const std::filesystem::path& path) {
  std::string bytes;
  try {
    bytes = fsx::read_file(path);
  } catch (const std::exception& e) {
    throw PdfError(PdfError::Kind::unreadable, e.what());
  }
  return extract_pdf_text_from_bytes(bytes);
}

}  // namespace scientist::review
