#include <zlib.h>

#include <cctype>
#include <charconv>
#include <fstream>
#include <iterator>
#include <limits>
#include <ostream>

#include "mms/instance.hpp"

namespace mms {

namespace {

constexpr std::size_t kMaxDenseVariables = 1u << 16;

struct Token {
  std::string_view text;
  std::size_t line;
};

/** Whitespace tokenizer over the whole text; CR counts as whitespace. */
class TokenStream {
 public:
  explicit TokenStream(std::string_view text) : text_(text) {}

  bool next(Token& token) {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      if (text_[pos_] == '\n') ++line_;
      ++pos_;
    }
    if (pos_ >= text_.size()) return false;
    const std::size_t begin = pos_;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    token = {text_.substr(begin, pos_ - begin), line_};
    return true;
  }

  std::size_t line() const { return line_; }

  bool at_end() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      if (text_[pos_] == '\n') ++line_;
      ++pos_;
    }
    return pos_ >= text_.size();
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
};

template <typename Int>
Int read_int(TokenStream& tokens, const char* what) {
  Token token;
  if (!tokens.next(token))
    throw ParseError(tokens.line(), std::string("unexpected end of input, expected ") + what);
  Int value{};
  const char* first = token.text.data();
  const char* last = first + token.text.size();
  if (*first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec == std::errc::result_out_of_range)
    throw ParseError(token.line, std::string(what) + " out of range: '" +
                                     std::string(token.text) + "'");
  if (ec != std::errc() || ptr != last)
    throw ParseError(token.line, std::string("non-numeric ") + what + ": '" +
                                     std::string(token.text) + "'");
  return value;
}

QuboInstance read_block(TokenStream& tokens, std::string name) {
  const auto n = read_int<std::size_t>(tokens, "variable count n");
  const std::size_t header_line = tokens.line();
  const auto m = read_int<std::size_t>(tokens, "triple count m");
  if (n == 0) throw ParseError(header_line, "variable count n must be at least 1");
  if (n > kMaxDenseVariables)
    throw ParseError(header_line, "variable count n exceeds dense storage limit of " +
                                      std::to_string(kMaxDenseVariables));

  std::vector<std::int64_t> q(n * n, 0);
  auto accumulate = [&](std::size_t idx, std::int64_t v, std::size_t line) {
    if (__builtin_add_overflow(q[idx], v, &q[idx]))
      throw ParseError(line, "accumulated coefficient overflows int64");
  };

  for (std::size_t k = 0; k < m; ++k) {
    if (tokens.at_end())
      throw ParseError(tokens.line(), "expected " + std::to_string(m) + " triples, found " +
                                          std::to_string(k));
    const auto i = read_int<std::int64_t>(tokens, "row index");
    const auto j = read_int<std::int64_t>(tokens, "column index");
    const auto v = read_int<std::int64_t>(tokens, "coefficient");
    const std::size_t line = tokens.line();
    const auto in_range = [n](std::int64_t idx) {
      return idx >= 1 && static_cast<std::uint64_t>(idx) <= n;
    };
    if (!in_range(i) || !in_range(j))
      throw ParseError(line, "index (" + std::to_string(i) + "," + std::to_string(j) +
                                 ") outside [1," + std::to_string(n) + "]");
    const auto r = static_cast<std::size_t>(i - 1);
    const auto c = static_cast<std::size_t>(j - 1);
    accumulate(r * n + c, v, line);
    if (r != c) accumulate(c * n + r, v, line);
  }

  try {
    return QuboInstance(n, std::move(q), std::move(name));
  } catch (const std::invalid_argument& e) {
    throw ParseError(header_line, e.what());
  }
}

// Consumes one block without materialising the matrix.
void skip_block(TokenStream& tokens) {
  const auto n = read_int<std::size_t>(tokens, "variable count n");
  const std::size_t header_line = tokens.line();
  const auto m = read_int<std::size_t>(tokens, "triple count m");
  if (n == 0) throw ParseError(header_line, "variable count n must be at least 1");
  for (std::size_t k = 0; k < m; ++k) {
    if (tokens.at_end())
      throw ParseError(tokens.line(), "expected " + std::to_string(m) + " triples, found " +
                                          std::to_string(k));
    const auto i = read_int<std::int64_t>(tokens, "row index");
    const auto j = read_int<std::int64_t>(tokens, "column index");
    read_int<std::int64_t>(tokens, "coefficient");
    if (i < 1 || j < 1 || static_cast<std::uint64_t>(i) > n || static_cast<std::uint64_t>(j) > n)
      throw ParseError(tokens.line(), "index (" + std::to_string(i) + "," + std::to_string(j) +
                                          ") outside [1," + std::to_string(n) + "]");
  }
}

void expect_end(TokenStream& tokens) {
  Token token;
  if (tokens.next(token))
    throw ParseError(token.line, "unexpected trailing token '" + std::string(token.text) + "'");
}

std::string gunzip(const std::string& compressed, const std::filesystem::path& path) {
  z_stream zs{};
  if (inflateInit2(&zs, 16 + MAX_WBITS) != Z_OK)
    throw std::runtime_error("zlib initialisation failed");
  zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(compressed.data()));
  zs.avail_in = static_cast<uInt>(compressed.size());

  std::string out;
  char buffer[1 << 16];
  int status = Z_OK;
  while (true) {
    zs.next_out = reinterpret_cast<Bytef*>(buffer);
    zs.avail_out = sizeof(buffer);
    status = inflate(&zs, Z_NO_FLUSH);
    out.append(buffer, sizeof(buffer) - zs.avail_out);
    if (status == Z_STREAM_END) {
      // Concatenated gzip members.
      if (zs.avail_in == 0) break;
      inflateReset(&zs);
      continue;
    }
    if (status != Z_OK) break;
  }
  inflateEnd(&zs);
  if (status != Z_STREAM_END)
    throw std::runtime_error("corrupt gzip stream in " + path.string());
  return out;
}

}  // namespace

std::vector<QuboInstance> parse_orlib_multi(std::string_view text, std::string_view stem) {
  TokenStream tokens(text);
  const auto count = read_int<std::int64_t>(tokens, "instance count");
  if (count < 1) throw ParseError(tokens.line(), "instance count must be at least 1");

  std::vector<QuboInstance> instances;
  for (std::int64_t k = 1; k <= count; ++k)
    instances.push_back(read_block(tokens, std::string(stem) + "." + std::to_string(k)));
  expect_end(tokens);
  return instances;
}

QuboInstance parse_orlib_instance(std::string_view text, std::string_view stem,
                                  std::size_t index) {
  if (index == 0) throw std::invalid_argument("instance index must be at least 1");
  TokenStream tokens(text);
  const auto count = read_int<std::int64_t>(tokens, "instance count");
  if (count < 1) throw ParseError(tokens.line(), "instance count must be at least 1");
  if (index > static_cast<std::uint64_t>(count))
    throw ParseError(0, "instance index " + std::to_string(index) + " exceeds instance count " +
                            std::to_string(count));

  for (std::size_t k = 1; k < index; ++k) skip_block(tokens);
  QuboInstance instance = read_block(tokens, std::string(stem) + "." + std::to_string(index));
  for (auto k = static_cast<std::int64_t>(index) + 1; k <= count; ++k) skip_block(tokens);
  expect_end(tokens);
  return instance;
}

QuboInstance parse_single(std::string_view text, std::string name) {
  TokenStream tokens(text);
  QuboInstance instance = read_block(tokens, std::move(name));
  expect_end(tokens);
  return instance;
}

void write_single(const QuboInstance& instance, std::ostream& out) {
  const std::size_t n = instance.size();
  std::size_t m = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      if (instance(i, j) != 0) ++m;

  out << n << ' ' << m << '\n';
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      if (instance(i, j) != 0) out << i + 1 << ' ' << j + 1 << ' ' << instance(i, j) << '\n';
}

std::string read_instance_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw std::runtime_error("read error on " + path.string());

  const bool gzipped = bytes.size() >= 2 && static_cast<unsigned char>(bytes[0]) == 0x1f &&
                       static_cast<unsigned char>(bytes[1]) == 0x8b;
  return gzipped ? gunzip(bytes, path) : bytes;
}

namespace {

std::string stem_of(const std::filesystem::path& path) {
  std::filesystem::path p = path.filename();
  if (p.extension() == ".gz") p = p.stem();
  return p.stem().string();
}

}  // namespace

std::vector<QuboInstance> load_orlib_file(const std::filesystem::path& path) {
  return parse_orlib_multi(read_instance_text(path), stem_of(path));
}

QuboInstance load_orlib_instance(const std::filesystem::path& path, std::size_t index) {
  return parse_orlib_instance(read_instance_text(path), stem_of(path), index);
}

QuboInstance load_single_file(const std::filesystem::path& path) {
  return parse_single(read_instance_text(path), stem_of(path));
}

}  // namespace mms
